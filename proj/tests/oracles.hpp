#pragma once

// Reference implementations used only by tests.  Everything here is the most
// literal transcription of a definition, with no sharing of code paths with
// the library proper, so agreement between the two is meaningful evidence.

#include <cmath>
#include <cstdint>
#include <vector>

#include "gibbsrec/sft.hpp"
#include "gibbsrec/thermo.hpp"

namespace oracle {

// z-array by direct symbol comparison, quadratic time.
inline std::vector<std::int32_t> prefix_match_quadratic(
    const std::vector<std::int32_t>& s) {
  const std::size_t n = s.size();
  std::vector<std::int32_t> z(n, 0);
  if (n == 0) return z;
  z[0] = static_cast<std::int32_t>(n);
  for (std::size_t p = 1; p < n; ++p) {
    std::size_t m = 0;
    while (p + m < n && s[m] == s[p + m]) ++m;
    z[p] = static_cast<std::int32_t>(m);
  }
  return z;
}

// Admissible word count by testing every tuple in {1..K}^n.
inline std::uint64_t count_words_exhaustive(const gibbsrec::SftSpec& sft,
                                            int n) {
  if (n == 0) return 1;
  std::vector<std::int32_t> tuple(n, 1);
  std::uint64_t count = 0;
  while (true) {
    bool ok = true;
    for (int l = 0; l + 1 < n && ok; ++l)
      ok = sft.allowed(tuple[l], tuple[l + 1]);
    if (ok) ++count;
    int pos = n - 1;
    while (pos >= 0 && tuple[pos] == sft.K()) tuple[pos--] = 1;
    if (pos < 0) break;
    ++tuple[pos];
  }
  return count;
}

enum class EventStatus { kUnsatisfied, kSatisfied, kUndecidable };

// Recurrence event at time n for rate value psi_n, decided by literally
// comparing the symbol blocks w_{n+1..n+psi} and w_{1..psi}.
inline EventStatus recurrence_event_literal(const std::vector<std::int32_t>& w,
                                            std::int64_t n,
                                            std::int64_t psi_n) {
  if (psi_n <= 0) return EventStatus::kSatisfied;
  if (n + psi_n > static_cast<std::int64_t>(w.size()))
    return EventStatus::kUndecidable;
  for (std::int64_t k = 1; k <= psi_n; ++k)
    if (w[static_cast<std::size_t>(n + k - 1)] !=
        w[static_cast<std::size_t>(k - 1)])
      return EventStatus::kUnsatisfied;
  return EventStatus::kSatisfied;
}

// Closed forms for a depth-1 Bernoulli measure.
inline double bernoulli_entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) h -= x * std::log(x);
  return h;
}

inline double bernoulli_variance(const std::vector<double>& p) {
  double m1 = 0.0, m2 = 0.0;
  for (double x : p) {
    m1 += x * std::log(x);
    m2 += x * std::log(x) * std::log(x);
  }
  return m2 - m1 * m1;
}

// Eigenvalues of a real 2x2 matrix, largest-modulus first.
inline std::pair<double, double> eigenvalues_2x2(double a, double b, double c,
                                                 double d) {
  const double tr = a + d, det = a * d - b * c;
  const double disc = tr * tr - 4.0 * det;
  // Fixtures in the tests only use matrices with real spectrum.
  const double root = std::sqrt(std::max(disc, 0.0));
  double l1 = (tr + root) / 2.0, l2 = (tr - root) / 2.0;
  if (std::fabs(l2) > std::fabs(l1)) std::swap(l1, l2);
  return {l1, l2};
}

// Exact mean and variance of the n-term Birkhoff sum of the pair observable
// under the model's Markov law, by dynamic programming over moment
// accumulators.  Var(S_n) - Var(S_{n/2}) over n/2 recovers the asymptotic
// variance up to an exponentially small remainder.
inline std::pair<double, double> birkhoff_moments(const gibbsrec::GibbsModel& m,
                                                  int n) {
  const int K = m.K();
  std::vector<double> mass(K), s1(K, 0.0), s2(K, 0.0);
  for (int i = 1; i <= K; ++i) mass[i - 1] = m.stationary(i);
  for (int t = 0; t < n; ++t) {
    std::vector<double> nm(K, 0.0), n1(K, 0.0), n2(K, 0.0);
    for (int i = 1; i <= K; ++i)
      for (int j = 1; j <= K; ++j) {
        const double pij = m.p(i, j);
        if (pij == 0.0) continue;
        const double f = m.potential.pair_value(i, j);
        nm[j - 1] += mass[i - 1] * pij;
        n1[j - 1] += (s1[i - 1] + mass[i - 1] * f) * pij;
        n2[j - 1] += (s2[i - 1] + 2.0 * s1[i - 1] * f +
                      mass[i - 1] * f * f) * pij;
      }
    mass.swap(nm);
    s1.swap(n1);
    s2.swap(n2);
  }
  double e1 = 0.0, e2 = 0.0;
  for (int j = 0; j < K; ++j) {
    e1 += s1[j];
    e2 += s2[j];
  }
  return {e1, e2 - e1 * e1};
}

// mu([u] cap sigma^{-n}[v]) by summing cylinder measures over every
// admissible filler between the two blocks.
inline double correlation_by_enumeration(const gibbsrec::GibbsModel& m,
                                         const gibbsrec::Word& u,
                                         const gibbsrec::Word& v,
                                         int n) {
  const int gap = n - static_cast<int>(u.size());
  double total = 0.0;
  for (const auto& mid : gibbsrec::enumerate_words(m.sft, gap)) {
    std::vector<std::int32_t> s = u.symbols();
    s.insert(s.end(), mid.symbols().begin(), mid.symbols().end());
    s.insert(s.end(), v.symbols().begin(), v.symbols().end());
    if (!gibbsrec::is_admissible(s, m.sft)) continue;
    total += gibbsrec::cylinder_measure(m, gibbsrec::Word(s, m.sft));
  }
  return total;
}

}  // namespace oracle
