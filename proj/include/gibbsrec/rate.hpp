#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gibbsrec/errors.hpp"

namespace gibbsrec {

enum class RateKind { kClosedFormPlus, kClosedFormMinus, kTable, kConstructed };

// floor( log n / h + ((1 +- eps) / h^{3/2}) sqrt(2 rho log n logloglog n) ),
// every iterated log guarded to 0 at arguments <= 1.
std::int64_t psi_plus_value(std::int64_t n, double h, double rho, double eps);
std::int64_t psi_minus_value(std::int64_t n, double h, double rho, double eps);

class RateFunction {
 public:
  static RateFunction closed_form_plus(double h, double rho, double eps,
                                       bool clamp = false);
  static RateFunction closed_form_minus(double h, double rho, double eps,
                                        bool clamp = false);
  // values[m-1] = psi(m) on the domain [1, values.size()].
  static RateFunction from_table(std::vector<std::int64_t> values,
                                 bool clamp = false);
  // Partial-sum inversion: psi(m) = max{k >= 1 : S_{k-1} <= m-1} for the
  // nondecreasing breakpoints S_1..S_N, so preimages are (S_{n-1}, S_n].
  static RateFunction constructed(std::vector<std::int64_t> breakpoints,
                                  bool clamp = false);

  RateKind kind() const { return kind_; }
  bool clamped() const { return clamp_; }
  bool closed_form() const {
    return kind_ == RateKind::kClosedFormPlus ||
           kind_ == RateKind::kClosedFormMinus;
  }
  // Largest argument the rate is defined for (closed forms: unbounded).
  std::int64_t horizon() const;
  std::int64_t value(std::int64_t n) const;

  double h() const;
  double rho() const;
  double eps() const;
  const std::vector<std::int64_t>& breakpoints() const;

  // Empty table; every evaluation throws until a factory result is assigned.
  RateFunction() = default;

 private:
  RateKind kind_ = RateKind::kTable;
  bool clamp_ = false;
  double h_ = 0.0, rho_ = 0.0, eps_ = 0.0;
  std::vector<std::int64_t> table_;  // table values or breakpoints
};

// Exact counts of m in [1, horizon] with psi(m) = n, by direct scan.
std::map<std::int64_t, std::int64_t> preimage_counts(const RateFunction& psi,
                                                     std::int64_t horizon);

}  // namespace gibbsrec
