#pragma once

#include <cstdint>
#include <vector>

#include "gibbsrec/rate.hpp"

namespace gibbsrec {

enum class SeriesVerdict { kConverged, kDiverging, kInconclusive };

struct PartialSum {
  std::int64_t n = 0;
  double value = 0.0;
};

// Tail extrapolation from audited step ratios: every ratio in the audit
// window sits below q < 1 and the ratios are nonincreasing, so the mass past
// N is bounded by t_N q / (1 - q).
struct GeometricCertificate {
  bool valid = false;
  std::int64_t audited_from = 0;
  double q = 1.0;
  double log_term_at_end = 0.0;
  double tail_bound = 0.0;
};

// Upper-threshold route.  In u = log n coordinates the term is dominated by
// exp(h - u - m(u)); the margin m is audited positive and nondecreasing on
// [u0, U], the dominated integral is summed there, and past U the decay
// m(u) >= (m(U)/sqrt(U)) sqrt(u) closes the remainder in closed form.
struct AnalyticCertificate {
  bool valid = false;
  double eps_used = 0.0;
  double u0 = 0.0;
  double U = 0.0;
  double margin_at_u0 = 0.0;
  double margin_at_end = 0.0;
  double first_term = 0.0;
  double integral_piece = 0.0;
  double tail_beyond_audit = 0.0;
  double tail_bound = 0.0;
};

// Divergence signal: partial-sum mass per decade keeps growing.
struct GrowthCertificate {
  bool valid = false;
  std::vector<double> increments;
};

struct SeriesReport {
  SeriesVerdict verdict = SeriesVerdict::kInconclusive;
  double eps_requested = 0.0;
  // The epsilon the sums and certificates actually use; shrunk for the
  // upper-threshold rate so the dominated envelope closes.
  double eps_used = 0.0;
  std::int64_t N = 0;
  double tol = 0.0;
  double sum_at_N = 0.0;
  std::vector<PartialSum> partial_sums;
  GeometricCertificate geometric;
  AnalyticCertificate analytic;
  GrowthCertificate growth;
  // Bound on the mass past N, when a certificate holds.
  double tail_past_N = 0.0;
  // Mass past everything explicitly evaluated or audited; the converged
  // verdict requires this below tol.
  double certified_tail = 0.0;
};

// Diagnoses sum_n exp(-h psi(n) + (1+eps) sqrt(2 rho psi(n) loglog psi(n))).
SeriesReport convergence_series(const RateFunction& psi, double h, double rho,
                                double eps, std::int64_t N, double tol = 1e-3);

}  // namespace gibbsrec
