#pragma once

#include <cstdint>
#include <vector>

#include "gibbsrec/mathutil.hpp"
#include "gibbsrec/thermo.hpp"

namespace gibbsrec {

struct SamplePlan {
  std::int64_t length;
  std::int64_t trials;
  std::uint64_t master_seed;

  SamplePlan(std::int64_t L, std::int64_t M, std::uint64_t seed)
      : length(L), trials(M), master_seed(seed) {
    if (L < 1 || M < 1)
      throw DomainError("sample plan needs length >= 1 and trials >= 1");
  }
};

// Counter-based draws: value at (seed, step) is a pure function, so any trial
// can be replayed or parallelized without shared generator state.
inline std::uint64_t draw_bits(std::uint64_t seed, std::uint64_t step) {
  return mix64(seed + (step + 1) * kGoldenGamma);
}

inline std::uint64_t derive_trial_seed(std::uint64_t master_seed,
                                       std::int64_t trial) {
  return mix64(master_seed ^
               mix64((static_cast<std::uint64_t>(trial) + 1) * kGoldenGamma));
}

class TrialRng {
 public:
  explicit TrialRng(std::uint64_t seed) : seed_(seed) {}
  double next_u01() { return u01_from_bits(draw_bits(seed_, step_++)); }

 private:
  std::uint64_t seed_;
  std::uint64_t step_ = 0;
};

// First symbol from pi, later symbols from the transition rows.
Word sample_sequence(const GibbsModel& m, std::int64_t length,
                     std::uint64_t seed);

// Running log mu([w|_1^n]) for n = 1..|w| in one pass.
std::vector<double> log_prefix_measure_stream(const GibbsModel& m,
                                              const Word& w);

// (log mu([w|_1^n]) + h n) / sqrt(rho n).
double clt_statistic(const GibbsModel& m, const Word& w, std::int64_t n);

// (log mu([w|_1^n]) + h n) / sqrt(2 rho n log log n); needs the guarded
// double log positive, i.e. n >= 3.
double lil_statistic(const GibbsModel& m, const Word& w, std::int64_t n);

// {16, 32, 64, ...} up to L, always ending with L itself.
std::vector<std::int64_t> geometric_checkpoints(std::int64_t L);

struct StatSeries {
  std::int64_t trial;
  std::vector<std::int64_t> checkpoints;
  std::vector<double> clt;
  std::vector<double> lil;
  std::vector<double> log_measure;
};

// One StatSeries per trial, indexed by trial; identical output for any worker
// count.  Requires plan.length >= 16 so every checkpoint supports both
// statistics, and a model with positive variance.
std::vector<StatSeries> run_stat_series(const GibbsModel& m,
                                        const SamplePlan& plan, int workers);

}  // namespace gibbsrec
