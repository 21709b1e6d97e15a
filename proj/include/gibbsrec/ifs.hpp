#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gibbsrec/detect.hpp"
#include "gibbsrec/rate.hpp"
#include "gibbsrec/sft.hpp"

namespace gibbsrec {

// Plane point; 1-dimensional systems keep y = 0 throughout.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

double norm(const Vec2& v);
double distance(const Vec2& a, const Vec2& b);

// One similarity x -> r M x + t with M orthogonal; r lives on the system.
struct IfsMap {
  double m00 = 1.0, m01 = 0.0;
  double m10 = 0.0, m11 = 1.0;
  Vec2 t;
};

IfsMap map_1d(int sign, double t);
IfsMap map_2d(double angle, Vec2 t);

// Homogeneous contracting system with certified geometry.  The certification
// fields start empty and are filled by bound_attractor / separation / prop_N;
// after that the struct is treated as immutable.
struct IfsSpec {
  int dimension = 1;
  double r = 0.0;
  std::vector<IfsMap> maps;

  Vec2 center;          // bounding ball around the attractor
  double radius = 0.0;
  double diam_upper = 0.0;
  double diam_lower = 0.0;
  bool diam_capped = false;  // refinement hit the hull cap before tolerance
  double sep_lower = 0.0;    // certified gap between first-level pieces
  int N = 0;                 // symbolic-metric translation constant

  int K() const { return static_cast<int>(maps.size()); }
};

// Validates shape only: K >= 2 maps, r in (0,1), orthogonal parts, and in
// one dimension no off-axis content.
IfsSpec make_ifs(int dimension, double r, std::vector<IfsMap> maps);

// Bounding ball from the averaged-map fixed point, then diameter bounds from
// cylinder hulls (upper) and exact attractor points of the form
// phi_w(fixed point) (lower), refined until the gap drops below tol or the
// hull count would pass hull_cap.
void bound_attractor(IfsSpec& ifs, double tol = 1e-9,
                     std::size_t hull_cap = 4096);

// Certified lower bound on min_{i != j} d(phi_i(X), phi_j(X)) from depth-m
// ball hulls, evaluated by best-first refinement so only the near-minimal
// pairs are expanded.  Throws CannotCertifyError when the bound at the target
// depth is not positive.
double separation(IfsSpec& ifs, int depth);

// Smallest N with r^N <= sep_lower and r^{N-1} diam_upper < 1.
int prop_N(IfsSpec& ifs);

// bound_attractor + separation + prop_N in order.
IfsSpec certify_ifs(int dimension, double r, std::vector<IfsMap> maps,
                    int sep_depth = 20);

struct ProjectedPoint {
  Vec2 point;
  // Distance bound to the coded limit point of any continuation of w|_1^n.
  double error_radius = 0.0;
};

// phi_{w_1} o ... o phi_{w_n} applied to the origin; needs n <= |w|.
ProjectedPoint project(const Word& w, const IfsSpec& ifs, std::int64_t n);

// Recurrence on the attractor bracketed by symbolic recurrence: events at
// rate floor(psi)+N are certified, events at rate max(floor(psi)-N, 0) are
// possible, and the certified satisfied set is contained in the possible one.
struct SandwichResult {
  int N = 0;
  std::vector<RecurrenceEvent> certified;
  std::vector<RecurrenceEvent> possible;
};

SandwichResult tilde_recurrence_sandwich(const Word& w, const RateFunction& psi,
                                         const IfsSpec& ifs, std::int64_t n_lo,
                                         std::int64_t n_hi);
// Real-valued rates are floored.
SandwichResult tilde_recurrence_sandwich(
    const Word& w, const std::function<double(std::int64_t)>& psi_real,
    const IfsSpec& ifs, std::int64_t n_lo, std::int64_t n_hi);

// Display-level corroboration: distance between the projections of w and of
// its shift by n, with the certified slack of both projections.  The symbolic
// sandwich stays the source of truth.
struct NumericGap {
  double dist = 0.0;
  double slack = 0.0;
};

NumericGap numeric_recurrence_gap(const Word& w, const IfsSpec& ifs,
                                  std::int64_t n);

}  // namespace gibbsrec
