#pragma once

#include <cstdint>

namespace gibbsrec::highprec {

enum class HpStatus {
  kExact,     // rounding direction certified: the integer cannot be off
  kBoundary,  // value too close to an integer to certify at this precision
  kOverflow,  // exceeds the exact-integer range
};

struct HpInt {
  HpStatus status;
  std::int64_t value;  // meaningful unless kOverflow
};

// 256-bit re-evaluations of the double-precision formulas.  A result is
// kExact when the value sits farther from the nearest integer than the
// worst-case evaluation error by a wide documented margin.

HpInt psi_plus(std::int64_t n, double h, double rho, double eps,
               int bits = 256);
HpInt psi_minus(std::int64_t n, double h, double rho, double eps,
                int bits = 256);

// g(n) = max(1, c * sqrt(log log n)) with guarded logs, or max(1, c).
struct GParams {
  bool constant;
  double c;
};

// ceil(exp(h n - sqrt(2 rho n) g(n)))
HpInt ceil_exp_on_g(std::int64_t n, double h, double rho, GParams g,
                    int bits = 256);
// floor(n^{-2} exp(h n - (5/4) sqrt(2 rho n log log n)))
HpInt floor_exp_off_g(std::int64_t n, double h, double rho, int bits = 256);

// Double-precision logs of the two expressions, for count-only bookkeeping
// beyond the exact-integer range.
double log_a_on_g(std::int64_t n, double h, double rho, GParams g);
double log_a_off_g(std::int64_t n, double h, double rho);

}  // namespace gibbsrec::highprec
