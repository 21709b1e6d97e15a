#include "gibbsrec/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "gibbsrec/errors.hpp"

namespace gibbsrec {

double norm(const Vec2& v) { return std::sqrt(v.x * v.x + v.y * v.y); }

double distance(const Vec2& a, const Vec2& b) {
  return norm(Vec2{a.x - b.x, a.y - b.y});
}

IfsMap map_1d(int sign, double t) {
  if (sign != 1 && sign != -1)
    throw DomainError("one-dimensional orthogonal part must be +1 or -1");
  IfsMap m;
  m.m00 = static_cast<double>(sign);
  m.t = Vec2{t, 0.0};
  return m;
}

IfsMap map_2d(double angle, Vec2 t) {
  IfsMap m;
  m.m00 = std::cos(angle);
  m.m01 = -std::sin(angle);
  m.m10 = std::sin(angle);
  m.m11 = std::cos(angle);
  m.t = t;
  return m;
}

namespace {

Vec2 apply(const IfsMap& m, double r, const Vec2& p) {
  return Vec2{r * (m.m00 * p.x + m.m01 * p.y) + m.t.x,
              r * (m.m10 * p.x + m.m11 * p.y) + m.t.y};
}

// Solve (I - r M) x = t; invertible since r < 1 and M is orthogonal.
Vec2 resolvent_solve(double r, double a00, double a01, double a10, double a11,
                     const Vec2& t) {
  const double b00 = 1.0 - r * a00, b01 = -r * a01;
  const double b10 = -r * a10, b11 = 1.0 - r * a11;
  const double det = b00 * b11 - b01 * b10;
  return Vec2{(b11 * t.x - b01 * t.y) / det, (b00 * t.y - b10 * t.x) / det};
}

// Certified quantities are rounded outward so boundary cases (middle thirds
// has r^{N-1} Diam = 1 exactly at N = 1) never flip on double rounding.
constexpr double kCertPad = 1e-13;

double pad_up(double v) { return v + kCertPad * std::max(1.0, v); }
double pad_down(double v) { return std::max(0.0, v - kCertPad * std::max(1.0, v)); }

double max_pair_distance(const std::vector<Vec2>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, distance(pts[i], pts[j]));
  return best;
}

// Any pairwise distance between attractor points lower-bounds the diameter,
// so restricting to directional extremes stays sound and is near-exact.
double lower_pair_distance(const std::vector<Vec2>& pts, int dimension) {
  if (pts.size() < 2) return 0.0;
  if (dimension == 1) {
    double lo = pts[0].x, hi = pts[0].x;
    for (const auto& p : pts) {
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
    return hi - lo;
  }
  constexpr int kDirs = 128;
  std::vector<std::size_t> extreme;
  extreme.reserve(kDirs);
  for (int d = 0; d < kDirs; ++d) {
    const double th = 3.14159265358979323846 * d / kDirs;
    const double cx = std::cos(th), cy = std::sin(th);
    std::size_t lo = 0, hi = 0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const double s = cx * pts[i].x + cy * pts[i].y;
      if (s < cx * pts[lo].x + cy * pts[lo].y) lo = i;
      if (s > cx * pts[hi].x + cy * pts[hi].y) hi = i;
    }
    extreme.push_back(lo);
    extreme.push_back(hi);
  }
  std::sort(extreme.begin(), extreme.end());
  extreme.erase(std::unique(extreme.begin(), extreme.end()), extreme.end());
  double best = 0.0;
  for (std::size_t a = 0; a < extreme.size(); ++a)
    for (std::size_t b = a + 1; b < extreme.size(); ++b)
      best = std::max(best, distance(pts[extreme[a]], pts[extreme[b]]));
  return best;
}

}  // namespace

IfsSpec make_ifs(int dimension, double r, std::vector<IfsMap> maps) {
  if (dimension != 1 && dimension != 2)
    throw DomainError("dimension must be 1 or 2");
  if (!(r > 0.0) || !(r < 1.0))
    throw DomainError("contraction ratio must lie in (0,1)");
  if (maps.size() < 2) throw DomainError("an IFS needs at least two maps");
  for (const auto& m : maps) {
    const double c0 = m.m00 * m.m00 + m.m10 * m.m10;
    const double c1 = m.m01 * m.m01 + m.m11 * m.m11;
    const double dot = m.m00 * m.m01 + m.m10 * m.m11;
    if (std::fabs(c0 - 1.0) > 1e-12 || std::fabs(c1 - 1.0) > 1e-12 ||
        std::fabs(dot) > 1e-12)
      throw DomainError("orthogonal part is not orthogonal");
    if (dimension == 1 &&
        (m.m01 != 0.0 || m.m10 != 0.0 || m.t.y != 0.0))
      throw DomainError("one-dimensional map has off-axis content");
  }
  IfsSpec ifs;
  ifs.dimension = dimension;
  ifs.r = r;
  ifs.maps = std::move(maps);
  return ifs;
}

void bound_attractor(IfsSpec& ifs, double tol, std::size_t hull_cap) {
  const int K = ifs.K();
  if (K < 2) throw DomainError("an IFS needs at least two maps");

  double a00 = 0, a01 = 0, a10 = 0, a11 = 0;
  Vec2 tbar;
  for (const auto& m : ifs.maps) {
    a00 += m.m00;
    a01 += m.m01;
    a10 += m.m10;
    a11 += m.m11;
    tbar.x += m.t.x;
    tbar.y += m.t.y;
  }
  const double invK = 1.0 / K;
  ifs.center = resolvent_solve(ifs.r, a00 * invK, a01 * invK, a10 * invK,
                               a11 * invK, Vec2{tbar.x * invK, tbar.y * invK});
  double worst = 0.0;
  for (const auto& m : ifs.maps)
    worst = std::max(worst, distance(apply(m, ifs.r, ifs.center), ifs.center));
  ifs.radius = pad_up(worst / (1.0 - ifs.r));

  // Lower-bound witnesses are genuine attractor points phi_w(fixed point).
  std::vector<Vec2> reps;
  for (const auto& m : ifs.maps)
    reps.push_back(resolvent_solve(ifs.r, m.m00, m.m01, m.m10, m.m11, m.t));
  std::vector<Vec2> centers{ifs.center};

  double upper = 2.0 * ifs.radius;
  double lower = lower_pair_distance(reps, ifs.dimension);
  double slack = ifs.radius;  // cylinder ball radius r^m R at current depth
  ifs.diam_capped = false;
  while (upper - lower > tol) {
    if (centers.size() * static_cast<std::size_t>(K) > hull_cap) {
      ifs.diam_capped = true;
      break;
    }
    std::vector<Vec2> next_centers, next_reps;
    next_centers.reserve(centers.size() * K);
    next_reps.reserve(reps.size() * K);
    for (const auto& m : ifs.maps) {
      for (const auto& p : centers) next_centers.push_back(apply(m, ifs.r, p));
      for (const auto& p : reps) next_reps.push_back(apply(m, ifs.r, p));
    }
    centers = std::move(next_centers);
    reps = std::move(next_reps);
    slack *= ifs.r;
    upper = std::min(upper, max_pair_distance(centers) + 2.0 * slack);
    lower = std::max(lower, lower_pair_distance(reps, ifs.dimension));
  }
  ifs.diam_upper = pad_up(upper);
  ifs.diam_lower = pad_down(lower);
}

namespace {

// Affine composition phi_{w_1} o ... o phi_{w_d} together with the cylinder
// ball center it maps the attractor hull into.
struct HullNode {
  double s;  // r^d
  double m00, m01, m10, m11;
  Vec2 b;
  int d;
  Vec2 center;
};

HullNode root_node(const IfsSpec& ifs, int i) {
  const IfsMap& m = ifs.maps[static_cast<std::size_t>(i)];
  HullNode n{ifs.r, m.m00, m.m01, m.m10, m.m11, m.t, 1, Vec2{}};
  n.center = apply(m, ifs.r, ifs.center);
  return n;
}

HullNode child_node(const IfsSpec& ifs, const HullNode& u, int i) {
  const IfsMap& m = ifs.maps[static_cast<std::size_t>(i)];
  HullNode n;
  n.s = u.s * ifs.r;
  n.m00 = u.m00 * m.m00 + u.m01 * m.m10;
  n.m01 = u.m00 * m.m01 + u.m01 * m.m11;
  n.m10 = u.m10 * m.m00 + u.m11 * m.m10;
  n.m11 = u.m10 * m.m01 + u.m11 * m.m11;
  n.b = Vec2{u.s * (u.m00 * m.t.x + u.m01 * m.t.y) + u.b.x,
             u.s * (u.m10 * m.t.x + u.m11 * m.t.y) + u.b.y};
  n.d = u.d + 1;
  n.center = Vec2{n.s * (n.m00 * ifs.center.x + n.m01 * ifs.center.y) + n.b.x,
                  n.s * (n.m10 * ifs.center.x + n.m11 * ifs.center.y) + n.b.y};
  return n;
}

struct HullPair {
  double lb;
  HullNode u, v;
};

struct PairOrder {
  bool operator()(const HullPair& a, const HullPair& b) const {
    return a.lb > b.lb;
  }
};

double pair_lb(const IfsSpec& ifs, const HullNode& u, const HullNode& v) {
  return distance(u.center, v.center) - (u.s + v.s) * ifs.radius;
}

}  // namespace

double separation(IfsSpec& ifs, int depth) {
  if (depth < 1) throw DomainError("separation depth must be >= 1");
  if (!(ifs.radius > 0.0))
    throw DomainError("separation needs bound_attractor first");
  const int K = ifs.K();

  // Best-first over cylinder-hull pairs.  Child bounds never drop below the
  // parent bound (the center moves by at most r^d (1-r) R while the slack
  // shrinks by the same amount), so the first fully refined pair popped
  // carries the exact depth-m hull minimum.
  std::priority_queue<HullPair, std::vector<HullPair>, PairOrder> pq;
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      HullPair hp{0.0, root_node(ifs, i), root_node(ifs, j)};
      hp.lb = pair_lb(ifs, hp.u, hp.v);
      pq.push(hp);
    }

  constexpr std::size_t kPopCap = 200000;
  std::size_t pops = 0;
  while (!pq.empty()) {
    HullPair hp = pq.top();
    pq.pop();
    // Geometries whose pieces face each other along a whole edge spawn
    // exponentially many near-minimal pairs; the popped key is a valid
    // certified bound at any moment, so the budget degrades tolerance only.
    const bool refined = hp.u.d >= depth && hp.v.d >= depth;
    if (refined || ++pops > kPopCap) {
      const double bound = pad_down(hp.lb);
      if (!(bound > 0.0))
        throw CannotCertifyError(
            "separation bound not positive within the refinement budget");
      ifs.sep_lower = bound;
      return bound;
    }
    const bool expand_u = hp.u.d <= hp.v.d;
    for (int i = 0; i < K; ++i) {
      HullPair child = hp;
      if (expand_u)
        child.u = child_node(ifs, hp.u, i);
      else
        child.v = child_node(ifs, hp.v, i);
      child.lb = pair_lb(ifs, child.u, child.v);
      pq.push(child);
    }
  }
  throw CannotCertifyError("separation frontier exhausted");  // unreachable
}

int prop_N(IfsSpec& ifs) {
  if (!(ifs.sep_lower > 0.0)) throw DomainError("prop_N needs separation first");
  for (int N = 1; N <= 4096; ++N) {
    if (std::pow(ifs.r, N) <= ifs.sep_lower &&
        std::pow(ifs.r, N - 1) * ifs.diam_upper < 1.0) {
      ifs.N = N;
      return N;
    }
  }
  throw NumericError("no admissible sandwich constant below 4096", 0.0);
}

IfsSpec certify_ifs(int dimension, double r, std::vector<IfsMap> maps,
                    int sep_depth) {
  IfsSpec ifs = make_ifs(dimension, r, std::move(maps));
  bound_attractor(ifs);
  separation(ifs, sep_depth);
  prop_N(ifs);
  return ifs;
}

ProjectedPoint project(const Word& w, const IfsSpec& ifs, std::int64_t n) {
  if (n < 0 || n > static_cast<std::int64_t>(w.size()))
    throw DomainError("projection depth must satisfy 0 <= n <= |w|");
  if (!(ifs.radius > 0.0))
    throw DomainError("project needs bound_attractor first");
  Vec2 p;
  for (std::int64_t k = n; k >= 1; --k) {
    const std::int32_t sym = w.at(static_cast<std::size_t>(k));
    if (sym < 1 || sym > ifs.K())
      throw DomainError("word symbol outside the map alphabet");
    p = apply(ifs.maps[static_cast<std::size_t>(sym - 1)], ifs.r, p);
  }
  ProjectedPoint out;
  out.point = p;
  out.error_radius = std::pow(ifs.r, static_cast<double>(n)) *
                     (norm(ifs.center) + ifs.radius);
  return out;
}

namespace {

SandwichResult sandwich_from_values(const Word& w,
                                    const std::vector<std::int64_t>& floors,
                                    const IfsSpec& ifs, std::int64_t n_lo,
                                    std::int64_t n_hi) {
  std::vector<std::int64_t> plus(floors.size()), minus(floors.size());
  for (std::size_t i = 0; i < floors.size(); ++i) {
    plus[i] = std::max<std::int64_t>(floors[i] + ifs.N, 0);
    minus[i] = std::max<std::int64_t>(floors[i] - ifs.N, 0);
  }
  SandwichResult out;
  out.N = ifs.N;
  out.certified =
      detect_events(w, RateFunction::from_table(std::move(plus)), n_lo, n_hi);
  out.possible =
      detect_events(w, RateFunction::from_table(std::move(minus)), n_lo, n_hi);
  return out;
}

}  // namespace

SandwichResult tilde_recurrence_sandwich(const Word& w, const RateFunction& psi,
                                         const IfsSpec& ifs, std::int64_t n_lo,
                                         std::int64_t n_hi) {
  if (ifs.N < 1) throw DomainError("sandwich needs prop_N first");
  if (n_lo < 1 || n_hi < n_lo)
    throw DomainError("sandwich needs 1 <= n_lo <= n_hi");
  std::vector<std::int64_t> floors(static_cast<std::size_t>(n_hi));
  for (std::int64_t n = 1; n <= n_hi; ++n)
    floors[static_cast<std::size_t>(n - 1)] = psi.value(n);
  return sandwich_from_values(w, floors, ifs, n_lo, n_hi);
}

SandwichResult tilde_recurrence_sandwich(
    const Word& w, const std::function<double(std::int64_t)>& psi_real,
    const IfsSpec& ifs, std::int64_t n_lo, std::int64_t n_hi) {
  if (ifs.N < 1) throw DomainError("sandwich needs prop_N first");
  if (n_lo < 1 || n_hi < n_lo)
    throw DomainError("sandwich needs 1 <= n_lo <= n_hi");
  std::vector<std::int64_t> floors(static_cast<std::size_t>(n_hi));
  for (std::int64_t n = 1; n <= n_hi; ++n)
    floors[static_cast<std::size_t>(n - 1)] =
        static_cast<std::int64_t>(std::floor(psi_real(n)));
  return sandwich_from_values(w, floors, ifs, n_lo, n_hi);
}

NumericGap numeric_recurrence_gap(const Word& w, const IfsSpec& ifs,
                                  std::int64_t n) {
  const auto L = static_cast<std::int64_t>(w.size());
  if (n < 1 || n >= L)
    throw DomainError("numeric gap needs 1 <= n < |w|");
  const ProjectedPoint full = project(w, ifs, L);
  std::vector<std::int32_t> tail(w.symbols().begin() + n, w.symbols().end());
  const Word shifted(std::move(tail), SftSpec::full_shift(ifs.K()));
  const ProjectedPoint moved = project(shifted, ifs, L - n);
  return NumericGap{distance(full.point, moved.point),
                    full.error_radius + moved.error_radius};
}

}  // namespace gibbsrec
