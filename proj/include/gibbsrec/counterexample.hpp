#pragma once

#include <cstdint>
#include <vector>

#include "gibbsrec/highprec.hpp"
#include "gibbsrec/rate.hpp"

namespace gibbsrec {

enum class GKind { kSqrtLogLog, kScaledSqrtLogLog, kConst };

// Slowly growing comparison function, clamped below at 1.
class GFunction {
 public:
  static GFunction sqrt_loglog();
  static GFunction scaled_sqrt_loglog(double c);
  static GFunction constant(double c);

  double operator()(double x) const;
  GKind kind() const { return kind_; }
  double scale() const { return c_; }
  bool unbounded() const { return kind_ != GKind::kConst; }
  highprec::GParams hp_params() const { return {kind_ == GKind::kConst, c_}; }

 private:
  GKind kind_ = GKind::kConst;
  double c_ = 1.0;
};

struct CounterexampleEntry {
  std::int64_t n = 0;
  bool on_levels = false;
  // Exponent of the pre-rounding expression for a_n.
  double log_a = 0.0;
  bool exact = false;
  std::int64_t a = 0;  // meaningful when exact
};

struct Counterexample {
  RateFunction psi;  // constructed from the exact partial sums of a_n
  std::vector<std::int64_t> levels;
  std::vector<CounterexampleEntry> entries;  // n = 1..horizon
  std::int64_t exact_horizon = 0;  // last n whose a_n is held exactly
  std::int64_t domain_end = 0;     // S at exact_horizon = psi domain end
};

// Builds the rate whose preimage counts are pinned to the two-regime
// sequence: a ceiling expression on the sparse level set
// n_k = max{n >= 1 : g(n)^2 < k} + 1 and a floor expression elsewhere.
// Values switch to log-only bookkeeping once past the exact-integer range.
Counterexample counterexample_rate(const GFunction& g, double h, double rho,
                                   std::int64_t horizon,
                                   std::int64_t level_cap = 1000000000);

struct TraceEntry {
  std::int64_t k = 0;
  std::int64_t level = 0;
  double term = 0.0;     // a_{n_k} exp(-h n_k + sqrt(2 rho n_k) g(n_k))
  double running = 0.0;  // partial sum through k
};

// Series terms along the level set.  Each term is at least 1 because a_n
// is a ceiling there, so the running sum dominates the level count.
std::vector<TraceEntry> divergence_trace(const Counterexample& cx, double h,
                                         double rho, const GFunction& g);

struct Cond2Report {
  bool passed = false;
  double escape_level = 0.0;
  std::vector<double> trace;
};

// Evaluates #psi^{-1}(n_k) exp(-h n_k + sqrt(2 rho n_k) g(n_k)) along nk
// and reports whether the values escape upward past escape_level.
// Rates must be table-backed or constructed so preimage counts are exact.
Cond2Report cond2_check(const RateFunction& psi,
                        const std::vector<std::int64_t>& nk,
                        const GFunction& g, double h, double rho,
                        double escape_level = 5.0);

}  // namespace gibbsrec
