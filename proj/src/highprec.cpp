#include "gibbsrec/highprec.hpp"

#include <cstdint>
#define MPFR_USE_INTMAX_T
#include <mpfr.h>

#include <cmath>

#include "gibbsrec/mathutil.hpp"

namespace gibbsrec::highprec {

namespace {

// Composite expressions here have ~10 rounding steps at `bits` precision on
// values below 2^62, so the absolute evaluation error is far below 1e-50.
// Anything closer to an integer than this margin is reported as kBoundary.
constexpr double kIntegerMargin = 1e-30;

struct Hp {
  mpfr_t x;
  explicit Hp(int bits) { mpfr_init2(x, bits); }
  ~Hp() { mpfr_clear(x); }
  Hp(const Hp&) = delete;
  Hp& operator=(const Hp&) = delete;
};

// Guarded log: 0 for arguments <= 1.
void hp_guarded_log(mpfr_t out, const mpfr_t in) {
  if (mpfr_cmp_ui(in, 1) <= 0) {
    mpfr_set_zero(out, 1);
  } else {
    mpfr_log(out, in, MPFR_RNDN);
  }
}

HpInt round_directed(const mpfr_t v, bool take_ceil) {
  // An exact zero only arises from the guard convention zeroing every term,
  // so it is certified.  Other exactly-representable integers cannot be told
  // apart from rounding coincidences and stay flagged, but floor and ceil
  // agree on them.
  if (mpfr_integer_p(v)) {
    Hp r(static_cast<int>(mpfr_get_prec(v)));
    mpfr_set(r.x, v, MPFR_RNDN);
    const std::int64_t iv = mpfr_get_sj(r.x, MPFR_RNDN);
    return {mpfr_zero_p(v) ? HpStatus::kExact : HpStatus::kBoundary, iv};
  }
  const int prec = static_cast<int>(mpfr_get_prec(v));
  Hp fl(prec), frac(prec);
  mpfr_floor(fl.x, v);
  mpfr_sub(frac.x, v, fl.x, MPFR_RNDN);
  const double f = mpfr_get_d(frac.x, MPFR_RNDN);
  const std::int64_t base = mpfr_get_sj(fl.x, MPFR_RNDN);
  if (f < kIntegerMargin || f > 1.0 - kIntegerMargin)
    return {HpStatus::kBoundary, take_ceil ? base + 1 : base};
  return {HpStatus::kExact, take_ceil ? base + 1 : base};
}

HpInt psi_threshold(std::int64_t n, double h, double rho, double coeff,
                    int bits) {
  Hp ln(bits), l3(bits), tmp(bits), acc(bits);
  mpfr_set_sj(tmp.x, n, MPFR_RNDN);
  hp_guarded_log(ln.x, tmp.x);          // log n
  hp_guarded_log(l3.x, ln.x);           // log log n
  hp_guarded_log(l3.x, l3.x);           // log log log n
  // acc = log n / h
  mpfr_set_d(tmp.x, h, MPFR_RNDN);
  mpfr_div(acc.x, ln.x, tmp.x, MPFR_RNDN);
  // tmp = coeff / h^{3/2} * sqrt(2 rho log n logloglog n)
  mpfr_mul(l3.x, l3.x, ln.x, MPFR_RNDN);
  mpfr_mul_d(l3.x, l3.x, 2.0 * rho, MPFR_RNDN);
  mpfr_sqrt(l3.x, l3.x, MPFR_RNDN);
  mpfr_set_d(tmp.x, h, MPFR_RNDN);
  mpfr_sqrt(tmp.x, tmp.x, MPFR_RNDN);
  mpfr_pow_ui(tmp.x, tmp.x, 3, MPFR_RNDN);
  mpfr_div(l3.x, l3.x, tmp.x, MPFR_RNDN);
  mpfr_mul_d(l3.x, l3.x, coeff, MPFR_RNDN);
  mpfr_add(acc.x, acc.x, l3.x, MPFR_RNDN);
  return round_directed(acc.x, false);
}

// exponent = h n - scale * sqrt(2 rho n * inner), with inner either g(n)^2
// shape or log log n, assembled by the callers below.
void hp_g_value(mpfr_t out, std::int64_t n, GParams g, int bits) {
  Hp tmp(bits);
  if (g.constant) {
    mpfr_set_d(out, g.c, MPFR_RNDN);
  } else {
    mpfr_set_sj(tmp.x, n, MPFR_RNDN);
    hp_guarded_log(out, tmp.x);
    hp_guarded_log(out, out);  // log log n, guarded
    mpfr_sqrt(out, out, MPFR_RNDN);
    mpfr_mul_d(out, out, g.c, MPFR_RNDN);
  }
  if (mpfr_cmp_ui(out, 1) < 0) mpfr_set_ui(out, 1, MPFR_RNDN);
}

}  // namespace

HpInt psi_plus(std::int64_t n, double h, double rho, double eps, int bits) {
  return psi_threshold(n, h, rho, 1.0 + eps, bits);
}

HpInt psi_minus(std::int64_t n, double h, double rho, double eps, int bits) {
  return psi_threshold(n, h, rho, 1.0 - eps, bits);
}

HpInt ceil_exp_on_g(std::int64_t n, double h, double rho, GParams g,
                    int bits) {
  Hp expo(bits), term(bits), gv(bits), nn(bits);
  mpfr_set_sj(nn.x, n, MPFR_RNDN);
  hp_g_value(gv.x, n, g, bits);
  mpfr_set_d(term.x, 2.0 * rho, MPFR_RNDN);
  mpfr_mul(term.x, term.x, nn.x, MPFR_RNDN);
  mpfr_sqrt(term.x, term.x, MPFR_RNDN);
  mpfr_mul(term.x, term.x, gv.x, MPFR_RNDN);
  mpfr_set_d(expo.x, h, MPFR_RNDN);
  mpfr_mul(expo.x, expo.x, nn.x, MPFR_RNDN);
  mpfr_sub(expo.x, expo.x, term.x, MPFR_RNDN);
  if (mpfr_get_d(expo.x, MPFR_RNDN) > 42.5)  // e^x beyond the exact range
    return {HpStatus::kOverflow, 0};
  mpfr_exp(expo.x, expo.x, MPFR_RNDN);
  return round_directed(expo.x, true);
}

HpInt floor_exp_off_g(std::int64_t n, double h, double rho, int bits) {
  Hp expo(bits), term(bits), ln(bits), nn(bits);
  mpfr_set_sj(nn.x, n, MPFR_RNDN);
  hp_guarded_log(ln.x, nn.x);
  Hp llog(bits);
  hp_guarded_log(llog.x, ln.x);
  mpfr_set_d(term.x, 2.0 * rho, MPFR_RNDN);
  mpfr_mul(term.x, term.x, nn.x, MPFR_RNDN);
  mpfr_mul(term.x, term.x, llog.x, MPFR_RNDN);
  mpfr_sqrt(term.x, term.x, MPFR_RNDN);
  mpfr_mul_d(term.x, term.x, 1.25, MPFR_RNDN);
  mpfr_set_d(expo.x, h, MPFR_RNDN);
  mpfr_mul(expo.x, expo.x, nn.x, MPFR_RNDN);
  mpfr_sub(expo.x, expo.x, term.x, MPFR_RNDN);
  mpfr_mul_d(ln.x, ln.x, 2.0, MPFR_RNDN);
  mpfr_sub(expo.x, expo.x, ln.x, MPFR_RNDN);  // minus 2 log n
  if (mpfr_get_d(expo.x, MPFR_RNDN) > 42.5)
    return {HpStatus::kOverflow, 0};
  mpfr_exp(expo.x, expo.x, MPFR_RNDN);
  return round_directed(expo.x, false);
}

double log_a_on_g(std::int64_t n, double h, double rho, GParams g) {
  const double x = static_cast<double>(n);
  const double gv =
      g.constant ? std::max(1.0, g.c)
                 : std::max(1.0, g.c * std::sqrt(guarded_log2(x)));
  return h * x - std::sqrt(2.0 * rho * x) * gv;
}

double log_a_off_g(std::int64_t n, double h, double rho) {
  const double x = static_cast<double>(n);
  return h * x - 1.25 * std::sqrt(2.0 * rho * x * guarded_log2(x)) -
         2.0 * guarded_log(x);
}

}  // namespace gibbsrec::highprec
