#include "gibbsrec/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gibbsrec/mathutil.hpp"

namespace gibbsrec {

namespace {

std::int64_t threshold_floor(std::int64_t n, double h, double rho,
                             double coeff) {
  const double x = static_cast<double>(n);
  const double lead = guarded_log(x) / h;
  const double correction = (coeff / std::pow(h, 1.5)) *
                            std::sqrt(2.0 * rho * guarded_log(x) *
                                      guarded_log3(x));
  return static_cast<std::int64_t>(std::floor(lead + correction));
}

void check_params(double h, double rho, double eps, bool minus) {
  if (!(h > 0.0) || !(rho > 0.0))
    throw DomainError("threshold rates need h > 0 and rho > 0");
  if (!(eps > 0.0)) throw DomainError("threshold rates need eps > 0");
  if (minus && !(eps < 1.0))
    throw DomainError("the lower threshold needs eps < 1");
}

}  // namespace

std::int64_t psi_plus_value(std::int64_t n, double h, double rho, double eps) {
  if (n < 1) throw DomainError("rate argument must be >= 1");
  check_params(h, rho, eps, false);
  return threshold_floor(n, h, rho, 1.0 + eps);
}

std::int64_t psi_minus_value(std::int64_t n, double h, double rho,
                             double eps) {
  if (n < 1) throw DomainError("rate argument must be >= 1");
  check_params(h, rho, eps, true);
  return threshold_floor(n, h, rho, 1.0 - eps);
}

RateFunction RateFunction::closed_form_plus(double h, double rho, double eps,
                                            bool clamp) {
  check_params(h, rho, eps, false);
  RateFunction r;
  r.kind_ = RateKind::kClosedFormPlus;
  r.clamp_ = clamp;
  r.h_ = h;
  r.rho_ = rho;
  r.eps_ = eps;
  return r;
}

RateFunction RateFunction::closed_form_minus(double h, double rho, double eps,
                                             bool clamp) {
  check_params(h, rho, eps, true);
  RateFunction r;
  r.kind_ = RateKind::kClosedFormMinus;
  r.clamp_ = clamp;
  r.h_ = h;
  r.rho_ = rho;
  r.eps_ = eps;
  return r;
}

RateFunction RateFunction::from_table(std::vector<std::int64_t> values,
                                      bool clamp) {
  if (values.empty()) throw DomainError("rate table must be nonempty");
  for (auto v : values)
    if (v < 0) throw DomainError("rate values must be nonnegative");
  RateFunction r;
  r.kind_ = RateKind::kTable;
  r.clamp_ = clamp;
  r.table_ = std::move(values);
  return r;
}

RateFunction RateFunction::constructed(std::vector<std::int64_t> breakpoints,
                                       bool clamp) {
  if (breakpoints.empty())
    throw DomainError("constructed rate needs breakpoints");
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (breakpoints[i] < 0 ||
        (i > 0 && breakpoints[i] < breakpoints[i - 1]))
      throw DomainError("breakpoints must be nonnegative and nondecreasing");
  }
  RateFunction r;
  r.kind_ = RateKind::kConstructed;
  r.clamp_ = clamp;
  r.table_ = std::move(breakpoints);
  return r;
}

std::int64_t RateFunction::horizon() const {
  switch (kind_) {
    case RateKind::kClosedFormPlus:
    case RateKind::kClosedFormMinus:
      return std::numeric_limits<std::int64_t>::max();
    case RateKind::kTable:
      return static_cast<std::int64_t>(table_.size());
    case RateKind::kConstructed:
      return table_.back();
  }
  return 0;
}

std::int64_t RateFunction::value(std::int64_t n) const {
  if (n < 1) throw DomainError("rate argument must be >= 1");
  std::int64_t v = 0;
  switch (kind_) {
    case RateKind::kClosedFormPlus:
      v = threshold_floor(n, h_, rho_, 1.0 + eps_);
      break;
    case RateKind::kClosedFormMinus:
      v = threshold_floor(n, h_, rho_, 1.0 - eps_);
      break;
    case RateKind::kTable:
      if (n > static_cast<std::int64_t>(table_.size()))
        throw DomainError("rate argument beyond the table horizon");
      v = table_[static_cast<std::size_t>(n - 1)];
      break;
    case RateKind::kConstructed: {
      if (n > table_.back())
        throw DomainError("rate argument beyond the constructed horizon");
      // First index with S_k >= n gives the block containing n.
      auto it = std::lower_bound(table_.begin(), table_.end(), n);
      v = static_cast<std::int64_t>(it - table_.begin()) + 1;
      break;
    }
  }
  return clamp_ ? std::min(v, n) : v;
}

double RateFunction::h() const {
  if (!closed_form()) throw DomainError("rate has no closed-form parameters");
  return h_;
}

double RateFunction::rho() const {
  if (!closed_form()) throw DomainError("rate has no closed-form parameters");
  return rho_;
}

double RateFunction::eps() const {
  if (!closed_form()) throw DomainError("rate has no closed-form parameters");
  return eps_;
}

const std::vector<std::int64_t>& RateFunction::breakpoints() const {
  if (kind_ != RateKind::kConstructed)
    throw DomainError("only constructed rates expose breakpoints");
  return table_;
}

std::map<std::int64_t, std::int64_t> preimage_counts(const RateFunction& psi,
                                                     std::int64_t horizon) {
  if (horizon < 1) throw DomainError("preimage horizon must be >= 1");
  if (horizon > psi.horizon())
    throw DomainError("preimage horizon beyond the rate's domain");
  std::map<std::int64_t, std::int64_t> counts;
  for (std::int64_t m = 1; m <= horizon; ++m) ++counts[psi.value(m)];
  return counts;
}

}  // namespace gibbsrec
