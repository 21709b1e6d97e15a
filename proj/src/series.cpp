#include "gibbsrec/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gibbsrec/errors.hpp"
#include "gibbsrec/mathutil.hpp"

namespace gibbsrec {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_term(double psi_n, double h, double rho, double eps) {
  return -h * psi_n +
         (1.0 + eps) * std::sqrt(2.0 * rho * psi_n * guarded_log2(psi_n));
}

// Margin of the dominating envelope exp(h - u - m(u)) for the
// upper-threshold term, u = log n.
struct Envelope {
  double h, rho, eps_rate, eps_used;
  double A, B;

  Envelope(double h_, double rho_, double eps_rate_, double eps_used_)
      : h(h_), rho(rho_), eps_rate(eps_rate_), eps_used(eps_used_) {
    A = (1.0 + eps_rate) * std::sqrt(2.0 * rho / h);
    B = (1.0 + eps_used) * std::sqrt(2.0 * rho);
  }

  double psi_tilde(double u) const {
    return u / h + ((1.0 + eps_rate) / (h * std::sqrt(h))) *
                       std::sqrt(2.0 * rho * u * guarded_log2(u));
  }

  double margin(double u) const {
    const double pt = psi_tilde(u);
    return A * std::sqrt(u * guarded_log2(u)) -
           B * std::sqrt(pt * guarded_log2(pt));
  }
};

GeometricCertificate audit_geometric(const std::vector<double>& deltas,
                                     std::int64_t audited_from,
                                     double log_term_at_end) {
  GeometricCertificate cert;
  cert.audited_from = audited_from;
  cert.log_term_at_end = log_term_at_end;
  if (deltas.size() < 16) return cert;
  double max_delta = -kInf;
  bool nonincreasing = true;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    max_delta = std::max(max_delta, deltas[i]);
    if (i > 0 && deltas[i] > deltas[i - 1] + 1e-9) nonincreasing = false;
  }
  const double kRatioCeiling = std::log(0.999);
  if (!nonincreasing || max_delta > kRatioCeiling) return cert;
  cert.valid = true;
  cert.q = std::exp(max_delta);
  cert.tail_bound =
      std::exp(log_term_at_end + max_delta - std::log1p(-cert.q));
  return cert;
}

AnalyticCertificate audit_envelope(double h, double rho, double eps_rate,
                                   double eps_used, std::int64_t N) {
  AnalyticCertificate cert;
  cert.eps_used = eps_used;
  const Envelope env(h, rho, eps_rate, eps_used);
  cert.u0 = std::log(static_cast<double>(N) + 1.0);
  cert.U = std::max(2000.0, 2.0 * cert.u0);
  cert.margin_at_u0 = env.margin(cert.u0);
  cert.margin_at_end = env.margin(cert.U);
  if (!(cert.margin_at_u0 > 0.0)) return cert;

  const int steps = 50000;
  const double du = (cert.U - cert.u0) / steps;
  double integral = 0.0;
  double prev_m = cert.margin_at_u0;
  double prev_sqrt_ratio = cert.margin_at_u0 / std::sqrt(cert.u0);
  bool monotone = true;
  for (int i = 0; i < steps; ++i) {
    const double u = cert.u0 + i * du;
    const double m = i == 0 ? cert.margin_at_u0 : env.margin(u);
    const double sr = m / std::sqrt(u);
    if (m < prev_m - 1e-9 || sr < prev_sqrt_ratio - 1e-9) monotone = false;
    integral += du * std::exp(-m);
    prev_m = m;
    prev_sqrt_ratio = sr;
  }
  // close the grid at U itself
  if (cert.margin_at_end < prev_m - 1e-9 ||
      cert.margin_at_end / std::sqrt(cert.U) < prev_sqrt_ratio - 1e-9)
    monotone = false;
  if (!monotone) return cert;

  const double eh = std::exp(h);
  cert.first_term = eh * std::exp(-cert.u0 - cert.margin_at_u0);
  cert.integral_piece = eh * integral;
  const double c = cert.margin_at_end / std::sqrt(cert.U);
  const double cs = c * std::sqrt(cert.U);
  cert.tail_beyond_audit = eh * (2.0 / (c * c)) * (cs + 1.0) * std::exp(-cs);
  cert.tail_bound =
      cert.first_term + cert.integral_piece + cert.tail_beyond_audit;
  cert.valid = true;
  return cert;
}

GrowthCertificate audit_growth(const std::vector<double>& decade_sums) {
  GrowthCertificate cert;
  if (decade_sums.size() < 4) return cert;
  for (std::size_t i = 1; i < decade_sums.size(); ++i)
    cert.increments.push_back(decade_sums[i] - decade_sums[i - 1]);
  bool growing = cert.increments.back() > 0.0;
  for (std::size_t i = 1; i < cert.increments.size(); ++i)
    if (cert.increments[i] < 1.05 * cert.increments[i - 1]) growing = false;
  cert.valid = growing;
  return cert;
}

}  // namespace

SeriesReport convergence_series(const RateFunction& psi, double h, double rho,
                                double eps, std::int64_t N, double tol) {
  if (!(h > 0.0) || !(rho > 0.0) || !(eps > 0.0) || !(tol > 0.0))
    throw DomainError("series needs h > 0, rho > 0, eps > 0, tol > 0");
  if (N < 2) throw DomainError("series horizon must be at least 2");
  if (psi.horizon() < N)
    throw DomainError("rate does not cover the series horizon");
  if (psi.kind() == RateKind::kTable) {
    std::int64_t prev = psi.value(1);
    for (std::int64_t n = 2; n <= N; ++n) {
      const std::int64_t v = psi.value(n);
      if (v < prev) throw DomainError("series needs a nondecreasing rate");
      prev = v;
    }
  }

  SeriesReport report;
  report.eps_requested = eps;
  report.N = N;
  report.tol = tol;
  report.eps_used = eps;
  if (psi.kind() == RateKind::kClosedFormPlus)
    report.eps_used = std::min(eps, std::cbrt(1.0 + psi.eps() / 2.0) - 1.0);

  // grid marks: powers of two, decades, and N
  std::vector<std::int64_t> marks;
  for (std::int64_t p = 1; p <= N; p *= 2) marks.push_back(p);
  for (std::int64_t d = 1; d <= N; d *= 10) marks.push_back(d);
  marks.push_back(N);
  std::sort(marks.begin(), marks.end());
  marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

  const std::int64_t audit_from = std::max<std::int64_t>(2, N - 1000);
  std::vector<double> deltas;
  deltas.reserve(1001);
  std::vector<double> decade_sums;

  double sum = 0.0;
  double prev_lt = 0.0;
  double lt = 0.0;
  std::size_t next_mark = 0;
  for (std::int64_t n = 1; n <= N; ++n) {
    const double psi_n = static_cast<double>(psi.value(n));
    lt = log_term(psi_n, h, rho, report.eps_used);
    sum += std::exp(lt);
    if (n >= audit_from) deltas.push_back(lt - prev_lt);
    prev_lt = lt;
    if (next_mark < marks.size() && marks[next_mark] == n) {
      report.partial_sums.push_back({n, sum});
      ++next_mark;
      bool decade = n >= 10;
      for (std::int64_t d = n; d > 1; d /= 10)
        if (d % 10 != 0) decade = false;
      if (decade) decade_sums.push_back(sum);
    }
  }
  report.sum_at_N = sum;

  report.geometric = audit_geometric(deltas, audit_from, lt);
  const bool clamp_clear = !psi.clamped() || psi.value(N) < N;
  if (psi.kind() == RateKind::kClosedFormPlus && clamp_clear)
    report.analytic =
        audit_envelope(h, rho, psi.eps(), report.eps_used, N);
  report.growth = audit_growth(decade_sums);

  report.tail_past_N = kInf;
  report.certified_tail = kInf;
  if (report.geometric.valid) {
    report.tail_past_N = report.geometric.tail_bound;
    report.certified_tail = report.geometric.tail_bound;
  }
  if (report.analytic.valid &&
      report.analytic.tail_beyond_audit < report.certified_tail) {
    report.tail_past_N = report.analytic.tail_bound;
    report.certified_tail = report.analytic.tail_beyond_audit;
  }

  if (report.certified_tail < tol) {
    report.verdict = SeriesVerdict::kConverged;
  } else if (report.growth.valid) {
    report.verdict = SeriesVerdict::kDiverging;
  } else {
    report.verdict = SeriesVerdict::kInconclusive;
  }
  return report;
}

}  // namespace gibbsrec
