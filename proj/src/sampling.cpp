#include "gibbsrec/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "gibbsrec/parallel.hpp"

namespace gibbsrec {

namespace {

struct SamplerTables {
  int K;
  std::vector<double> pi_cum;              // cumulative stationary mass
  std::vector<double> row_cum;             // per-row cumulative transition mass
  explicit SamplerTables(const GibbsModel& m) : K(m.K()) {
    pi_cum.resize(K);
    double acc = 0.0;
    for (int i = 1; i <= K; ++i) {
      acc += m.stationary(i);
      pi_cum[i - 1] = acc;
    }
    pi_cum[K - 1] = 1.0;  // guard against rounding at the top
    row_cum.resize(static_cast<std::size_t>(K) * K);
    for (int i = 1; i <= K; ++i) {
      acc = 0.0;
      for (int j = 1; j <= K; ++j) {
        acc += m.p(i, j);
        row_cum[static_cast<std::size_t>(i - 1) * K + (j - 1)] = acc;
      }
      row_cum[static_cast<std::size_t>(i - 1) * K + (K - 1)] = 1.0;
    }
  }
  int draw_first(double u) const {
    return 1 + static_cast<int>(std::lower_bound(pi_cum.begin(), pi_cum.end(),
                                                 u) -
                                pi_cum.begin());
  }
  int draw_next(int i, double u) const {
    const auto begin = row_cum.begin() + static_cast<std::size_t>(i - 1) * K;
    return 1 + static_cast<int>(std::lower_bound(begin, begin + K, u) - begin);
  }
};

double checked_denominator(const GibbsModel& m) {
  if (m.cohomologous_to_constant())
    throw DegenerateModelError(
        "statistic undefined: potential is cohomologous to a constant");
  return m.rho_mu;
}

}  // namespace

Word sample_sequence(const GibbsModel& m, std::int64_t length,
                     std::uint64_t seed) {
  if (length < 1) throw DomainError("sample length must be >= 1");
  SamplerTables tables(m);
  TrialRng rng(seed);
  std::vector<std::int32_t> symbols;
  symbols.reserve(length);
  symbols.push_back(tables.draw_first(rng.next_u01()));
  for (std::int64_t t = 1; t < length; ++t)
    symbols.push_back(tables.draw_next(symbols.back(), rng.next_u01()));
  return Word(std::move(symbols), m.sft);
}

std::vector<double> log_prefix_measure_stream(const GibbsModel& m,
                                              const Word& w) {
  if (!is_admissible(w.symbols(), m.sft))
    throw DomainError("word is inadmissible for this model");
  const auto& s = w.symbols();
  std::vector<double> out(s.size());
  if (s.empty()) return out;
  // Cached logs keep the pass cheap for million-symbol words.
  const int K = m.K();
  std::vector<double> log_p(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 1; i <= K; ++i)
    for (int j = 1; j <= K; ++j)
      if (m.p(i, j) > 0.0)
        log_p[static_cast<std::size_t>(i - 1) * K + (j - 1)] =
            std::log(m.p(i, j));
  double acc = std::log(m.stationary(s[0]));
  out[0] = acc;
  for (std::size_t t = 1; t < s.size(); ++t) {
    acc += log_p[static_cast<std::size_t>(s[t - 1] - 1) * K + (s[t] - 1)];
    out[t] = acc;
  }
  return out;
}

namespace {

double normalized_deviation(const GibbsModel& m, double log_mu,
                            std::int64_t n, double denom) {
  return (log_mu + m.h_mu * static_cast<double>(n)) / denom;
}

}  // namespace

double clt_statistic(const GibbsModel& m, const Word& w, std::int64_t n) {
  if (n < 1 || n > static_cast<std::int64_t>(w.size()))
    throw DomainError("clt statistic needs 1 <= n <= |w|");
  const double rho = checked_denominator(m);
  Word prefix(std::vector<std::int32_t>(w.symbols().begin(),
                                        w.symbols().begin() + n),
              m.sft);
  return normalized_deviation(m, log_cylinder_measure(m, prefix), n,
                              std::sqrt(rho * static_cast<double>(n)));
}

double lil_statistic(const GibbsModel& m, const Word& w, std::int64_t n) {
  if (n < 1 || n > static_cast<std::int64_t>(w.size()))
    throw DomainError("lil statistic needs 1 <= n <= |w|");
  const double rho = checked_denominator(m);
  const double llog = guarded_log2(static_cast<double>(n));
  if (llog <= 0.0)
    throw DomainError("lil statistic undefined: log log n is not positive");
  Word prefix(std::vector<std::int32_t>(w.symbols().begin(),
                                        w.symbols().begin() + n),
              m.sft);
  return normalized_deviation(
      m, log_cylinder_measure(m, prefix), n,
      std::sqrt(2.0 * rho * static_cast<double>(n) * llog));
}

std::vector<std::int64_t> geometric_checkpoints(std::int64_t L) {
  if (L < 1) throw DomainError("checkpoint horizon must be >= 1");
  std::vector<std::int64_t> out;
  for (std::int64_t n = 16; n < L; n *= 2) out.push_back(n);
  if (out.empty() || out.back() != L) out.push_back(L);
  return out;
}

std::vector<StatSeries> run_stat_series(const GibbsModel& m,
                                        const SamplePlan& plan, int workers) {
  if (plan.length < 16)
    throw DomainError("stat series need length >= 16");
  checked_denominator(m);
  const auto checkpoints = geometric_checkpoints(plan.length);
  std::vector<StatSeries> out(plan.trials);
  parallel_for_trials(plan.trials, workers, [&](std::int64_t trial) {
    Word w = sample_sequence(m, plan.length,
                             derive_trial_seed(plan.master_seed, trial));
    const auto stream = log_prefix_measure_stream(m, w);
    StatSeries series;
    series.trial = trial;
    series.checkpoints = checkpoints;
    for (std::int64_t n : checkpoints) {
      const double log_mu = stream[static_cast<std::size_t>(n - 1)];
      const double dev = log_mu + m.h_mu * static_cast<double>(n);
      series.log_measure.push_back(log_mu);
      series.clt.push_back(dev /
                           std::sqrt(m.rho_mu * static_cast<double>(n)));
      series.lil.push_back(
          dev / std::sqrt(2.0 * m.rho_mu * static_cast<double>(n) *
                          guarded_log2(static_cast<double>(n))));
    }
    out[static_cast<std::size_t>(trial)] = std::move(series);
  });
  return out;
}

}  // namespace gibbsrec
