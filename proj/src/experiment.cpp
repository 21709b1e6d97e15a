#include "gibbsrec/experiment.hpp"

#include <cstddef>
#include <utility>

#include "gibbsrec/errors.hpp"
#include "gibbsrec/parallel.hpp"

namespace gibbsrec {

namespace {

using Mat = std::vector<double>;

Mat mat_mul(int K, const Mat& a, const Mat& b) {
  Mat c(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k) {
      const double aik = a[static_cast<std::size_t>(i) * K + k];
      if (aik == 0.0) continue;
      for (int j = 0; j < K; ++j)
        c[static_cast<std::size_t>(i) * K + j] +=
            aik * b[static_cast<std::size_t>(k) * K + j];
    }
  return c;
}

Mat mat_pow(int K, Mat base, std::int64_t e) {
  Mat r(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i) r[static_cast<std::size_t>(i) * K + i] = 1.0;
  while (e > 0) {
    if (e & 1) r = mat_mul(K, r, base);
    e >>= 1;
    if (e > 0) base = mat_mul(K, base, base);
  }
  return r;
}

}  // namespace

ExperimentSummary run_experiment(const GibbsModel& m, const RateFunction& psi,
                                 const SamplePlan& plan,
                                 const std::vector<CountWindow>& windows,
                                 int workers) {
  if (m.cohomologous_to_constant())
    throw DegenerateModelError(
        "experiment undefined: potential is cohomologous to a constant");
  const std::int64_t L = plan.length;
  for (const auto& w : windows)
    if (w.lo < 1 || w.hi < w.lo || w.hi > L)
      throw DomainError("count window must satisfy 1 <= lo <= hi <= length");

  std::vector<std::int64_t> req(static_cast<std::size_t>(L) + 1, 0);
  std::int64_t max_req = 0;
  for (std::int64_t n = 1; n <= L; ++n) {
    req[static_cast<std::size_t>(n)] = psi.value(n);
    if (req[static_cast<std::size_t>(n)] > max_req)
      max_req = req[static_cast<std::size_t>(n)];
  }
  // Every event window fits: n + psi(n) <= L + max_req for n <= L.
  const std::int64_t word_length = L + max_req;

  const std::size_t W = windows.size();
  const std::size_t T = static_cast<std::size_t>(plan.trials);
  std::vector<TrialOutcome> per_trial(T);
  std::vector<std::int64_t> win_events(T * W, 0);
  std::vector<std::uint8_t> win_hit(T * W, 0);  // not vector<bool>: slot writes race

  parallel_for_trials(plan.trials, workers, [&](std::int64_t trial) {
    const Word w = sample_sequence(
        m, word_length, derive_trial_seed(plan.master_seed, trial));
    const PrefixMatchArray z = prefix_match_array(w);
    TrialOutcome out;
    std::int64_t* ev = W ? &win_events[static_cast<std::size_t>(trial) * W]
                         : nullptr;
    std::uint8_t* hit = W ? &win_hit[static_cast<std::size_t>(trial) * W]
                          : nullptr;
    for (std::int64_t n = 1; n <= L; ++n) {
      const std::int64_t r = req[static_cast<std::size_t>(n)];
      // r <= 0 short-circuits before z; otherwise n < word_length holds.
      const bool sat =
          r <= 0 || z.at(static_cast<std::size_t>(n)) >= r;
      if (!sat) continue;
      ++out.events;
      out.last_event = n;
      for (std::size_t i = 0; i < W; ++i)
        if (windows[i].lo <= n && n <= windows[i].hi) {
          ++ev[i];
          hit[i] = 1;
        }
    }
    per_trial[static_cast<std::size_t>(trial)] = out;
  });

  ExperimentSummary s;
  s.trials = plan.trials;
  s.horizon = L;
  s.word_length = word_length;
  s.master_seed = plan.master_seed;
  s.per_trial = std::move(per_trial);

  std::int64_t total = 0, max_count = 0;
  for (const auto& t : s.per_trial) {
    total += t.events;
    if (t.events > max_count) max_count = t.events;
  }
  s.histogram.assign(static_cast<std::size_t>(max_count) + 1, 0);
  for (const auto& t : s.per_trial)
    ++s.histogram[static_cast<std::size_t>(t.events)];
  s.mean_events = static_cast<double>(total) / static_cast<double>(plan.trials);

  s.windows.resize(W);
  for (std::size_t i = 0; i < W; ++i) {
    WindowStats& ws = s.windows[i];
    ws.window = windows[i];
    for (std::size_t t = 0; t < T; ++t) {
      ws.total_events += win_events[t * W + i];
      ws.trials_hit += win_hit[t * W + i];
    }
    ws.mean_events =
        static_cast<double>(ws.total_events) / static_cast<double>(plan.trials);
    ws.hit_fraction =
        static_cast<double>(ws.trials_hit) / static_cast<double>(plan.trials);
  }
  return s;
}

double expected_event_count(const GibbsModel& m, const RateFunction& psi,
                            std::int64_t lo, std::int64_t hi) {
  if (lo < 1 || hi < lo)
    throw DomainError("expected_event_count needs 1 <= lo <= hi");
  const int K = m.K();
  const std::size_t KK = static_cast<std::size_t>(K) * K;
  Mat P(KK), T2(KK), diag_pi(KK, 0.0);
  for (int i = 1; i <= K; ++i) {
    for (int j = 1; j <= K; ++j) {
      const double pij = m.p(i, j);
      P[static_cast<std::size_t>(i - 1) * K + (j - 1)] = pij;
      T2[static_cast<std::size_t>(i - 1) * K + (j - 1)] = pij * pij;
    }
    diag_pi[static_cast<std::size_t>(i - 1) * K + (i - 1)] = m.stationary(i);
  }

  // Past this gap the bridge row equals pi to below double resolution, so the
  // per-position term is constant on each block-length level.
  std::int64_t star_gap = 1;
  for (double bound = m.D; bound >= 1e-18 && star_gap < (std::int64_t{1} << 20);
       ++star_gap)
    bound *= m.gamma;

  std::int64_t cur_psi = -1, cur_gap = -1;
  Mat Q, Pg;
  double stationary_term = 0.0;
  double total = 0.0;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const std::int64_t pn = psi.value(n);
    if (pn <= 0) {
      total += 1.0;
      continue;
    }
    if (pn > n)
      throw DomainError("expected_event_count needs psi(n) <= n");
    if (pn != cur_psi) {
      if (cur_psi >= 1 && pn > cur_psi)
        Q = mat_mul(K, Q, mat_pow(K, T2, pn - cur_psi));
      else
        Q = mat_mul(K, diag_pi, mat_pow(K, T2, pn - 1));
      cur_psi = pn;
      cur_gap = -1;
      stationary_term = 0.0;
      for (int a = 0; a < K; ++a) {
        double row = 0.0;
        for (int b = 0; b < K; ++b)
          row += Q[static_cast<std::size_t>(a) * K + b];
        stationary_term += row * m.stationary(a + 1);
      }
    }
    const std::int64_t gap = n + 1 - pn;
    if (gap >= star_gap) {
      total += stationary_term;
      continue;
    }
    if (cur_gap >= 1 && gap == cur_gap + 1)
      Pg = mat_mul(K, Pg, P);
    else
      Pg = mat_pow(K, P, gap);
    cur_gap = gap;
    double term = 0.0;
    for (int a = 0; a < K; ++a)
      for (int b = 0; b < K; ++b)
        term += Q[static_cast<std::size_t>(a) * K + b] *
                Pg[static_cast<std::size_t>(b) * K + a];
    total += term;
  }
  return total;
}

}  // namespace gibbsrec
