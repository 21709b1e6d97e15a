#include "gibbsrec/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "gibbsrec/errors.hpp"
#include "gibbsrec/mathutil.hpp"

namespace gibbsrec {

GFunction GFunction::sqrt_loglog() {
  GFunction g;
  g.kind_ = GKind::kSqrtLogLog;
  g.c_ = 1.0;
  return g;
}

GFunction GFunction::scaled_sqrt_loglog(double c) {
  if (!(c > 0.0)) throw DomainError("scale must be positive");
  GFunction g;
  g.kind_ = GKind::kScaledSqrtLogLog;
  g.c_ = c;
  return g;
}

GFunction GFunction::constant(double c) {
  if (!(c > 0.0)) throw DomainError("constant must be positive");
  GFunction g;
  g.kind_ = GKind::kConst;
  g.c_ = c;
  return g;
}

double GFunction::operator()(double x) const {
  if (kind_ == GKind::kConst) return std::max(1.0, c_);
  return std::max(1.0, c_ * std::sqrt(guarded_log2(x)));
}

namespace {

// largest n in [1, cap] with g(n)^2 < k, or 0 when there is none
std::int64_t last_below(const GFunction& g, std::int64_t k, std::int64_t cap) {
  const double kd = static_cast<double>(k);
  auto below = [&](std::int64_t n) {
    const double v = g(n);
    return v * v < kd;
  };
  if (!below(1)) return 0;
  if (below(cap)) return cap;
  std::int64_t lo = 1, hi = cap;  // below(lo), !below(hi)
  while (hi - lo > 1) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    (below(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::map<std::int64_t, std::int64_t> level_counts(const RateFunction& psi) {
  std::map<std::int64_t, std::int64_t> counts;
  if (psi.kind() == RateKind::kConstructed) {
    const auto& s = psi.breakpoints();
    std::int64_t prev = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      counts[static_cast<std::int64_t>(i) + 1] = s[i] - prev;
      prev = s[i];
    }
  } else if (psi.kind() == RateKind::kTable) {
    for (std::int64_t m = 1; m <= psi.horizon(); ++m) ++counts[psi.value(m)];
  } else {
    throw DomainError("preimage counting needs a table-backed rate");
  }
  return counts;
}

}  // namespace

Counterexample counterexample_rate(const GFunction& g, double h, double rho,
                                   std::int64_t horizon,
                                   std::int64_t level_cap) {
  if (!(h > 0.0) || !(rho > 0.0))
    throw DomainError("counterexample needs h > 0 and rho > 0");
  if (horizon < 1 || level_cap < 1)
    throw DomainError("horizon and level cap must be positive");
  if (!g.unbounded())
    throw DomainError("comparison function must grow without bound");
  if (g.scale() > 1.0 + 1e-9)
    throw DomainError("comparison function must stay below sqrt(loglog)");
  // the clamp at 1 must release within the probe range, else the level set
  // degenerates at any reachable scale
  if (!(g(1e15) > g(16.0) + 1e-6))
    throw DomainError("comparison function grows too slowly to probe");

  Counterexample cx;
  for (std::int64_t k = 1;; ++k) {
    const std::int64_t below = last_below(g, k, level_cap);
    if (below >= level_cap) break;  // next level exceeds the cap
    cx.levels.push_back(below + 1);
    if (k > 64) throw ResourceLimitError("level set failed to terminate");
  }

  cx.entries.reserve(static_cast<std::size_t>(horizon));
  std::vector<std::int64_t> breakpoints;
  std::int64_t running = 0;
  bool exact_phase = true;
  const std::int64_t int_max = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t n = 1; n <= horizon; ++n) {
    CounterexampleEntry e;
    e.n = n;
    e.on_levels =
        std::binary_search(cx.levels.begin(), cx.levels.end(), n);
    e.log_a = e.on_levels ? highprec::log_a_on_g(n, h, rho, g.hp_params())
                          : highprec::log_a_off_g(n, h, rho);
    if (exact_phase) {
      const highprec::HpInt hp =
          e.on_levels ? highprec::ceil_exp_on_g(n, h, rho, g.hp_params())
                      : highprec::floor_exp_off_g(n, h, rho);
      if (hp.status == highprec::HpStatus::kExact &&
          running <= int_max - hp.value) {
        e.exact = true;
        e.a = hp.value;
        running += hp.value;
        breakpoints.push_back(running);
        cx.exact_horizon = n;
      } else {
        exact_phase = false;
      }
    }
    cx.entries.push_back(e);
  }
  if (breakpoints.empty())
    throw NumericError("no exactly representable prefix", 0.0);
  cx.psi = RateFunction::constructed(breakpoints);
  cx.domain_end = breakpoints.back();
  return cx;
}

std::vector<TraceEntry> divergence_trace(const Counterexample& cx, double h,
                                         double rho, const GFunction& g) {
  std::vector<TraceEntry> trace;
  trace.reserve(cx.levels.size());
  double running = 0.0;
  for (std::size_t i = 0; i < cx.levels.size(); ++i) {
    const std::int64_t n = cx.levels[i];
    TraceEntry t;
    t.k = static_cast<std::int64_t>(i) + 1;
    t.level = n;
    const double expo =
        -h * static_cast<double>(n) +
        std::sqrt(2.0 * rho * static_cast<double>(n)) * g(n);
    if (n <= cx.exact_horizon) {
      const auto& e = cx.entries[static_cast<std::size_t>(n) - 1];
      t.term = std::exp(std::log(static_cast<double>(e.a)) + expo);
    } else {
      // log a_n is only held as the pre-ceiling exponent; the ceiling makes
      // the true term at least this lower bound
      t.term = std::exp(highprec::log_a_on_g(n, h, rho, g.hp_params()) + expo);
    }
    running += t.term;
    t.running = running;
    trace.push_back(t);
  }
  return trace;
}

Cond2Report cond2_check(const RateFunction& psi,
                        const std::vector<std::int64_t>& nk,
                        const GFunction& g, double h, double rho,
                        double escape_level) {
  if (!(h > 0.0) || !(rho > 0.0))
    throw DomainError("cond2 needs h > 0 and rho > 0");
  if (nk.empty()) throw DomainError("level sequence must be nonempty");
  for (std::size_t i = 0; i < nk.size(); ++i) {
    if (nk[i] < 1) throw DomainError("levels must be at least 1");
    if (i > 0 && nk[i] <= nk[i - 1])
      throw DomainError("levels must be strictly increasing");
  }
  const double ratio = g(1000.0) / g(1001.0);
  if (std::fabs(ratio - 1.0) > 1e-3)
    throw DomainError("comparison function varies too fast between levels");

  const auto counts = level_counts(psi);
  Cond2Report report;
  report.escape_level = escape_level;
  report.trace.reserve(nk.size());
  for (std::int64_t n : nk) {
    const auto it = counts.find(n);
    const std::int64_t c = it == counts.end() ? 0 : it->second;
    if (c <= 0) {
      report.trace.push_back(0.0);
      continue;
    }
    const double expo =
        -h * static_cast<double>(n) +
        std::sqrt(2.0 * rho * static_cast<double>(n)) * g(n);
    report.trace.push_back(std::exp(std::log(static_cast<double>(c)) + expo));
  }

  const std::size_t m = report.trace.size();
  if (m >= 4) {
    const double last = report.trace[m - 1];
    const double half = report.trace[m / 2];
    const double quarter = report.trace[m / 4];
    report.passed =
        last > escape_level && last >= half && half >= quarter;
  }
  return report;
}

}  // namespace gibbsrec
