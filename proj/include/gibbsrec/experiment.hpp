#pragma once

#include <cstdint>
#include <vector>

#include "gibbsrec/rate.hpp"
#include "gibbsrec/sampling.hpp"
#include "gibbsrec/thermo.hpp"

namespace gibbsrec {

// Inclusive range of event positions.
struct CountWindow {
  std::int64_t lo = 1;
  std::int64_t hi = 1;
};

struct WindowStats {
  CountWindow window;
  std::int64_t total_events = 0;  // pooled over trials
  std::int64_t trials_hit = 0;    // trials with at least one event inside
  double mean_events = 0.0;
  double hit_fraction = 0.0;
};

struct TrialOutcome {
  std::int64_t events = 0;      // satisfied positions in [1, horizon]
  std::int64_t last_event = 0;  // largest satisfied position, 0 when none
};

struct ExperimentSummary {
  std::int64_t trials = 0;
  std::int64_t horizon = 0;      // events evaluated on [1, horizon]
  std::int64_t word_length = 0;  // horizon plus the largest required block
  std::uint64_t master_seed = 0;
  std::vector<WindowStats> windows;
  std::vector<TrialOutcome> per_trial;  // indexed by trial
  // histogram[c] = number of trials with exactly c events; mass = trials.
  std::vector<std::int64_t> histogram;
  double mean_events = 0.0;
};

// Samples plan.trials words and evaluates block recurrence at every position
// in [1, plan.length].  Words carry max(psi) extra symbols so no event in
// range is undecidable.  Output is identical for any worker count.  Refuses
// models with zero asymptotic variance.
ExperimentSummary run_experiment(const GibbsModel& m, const RateFunction& psi,
                                 const SamplePlan& plan,
                                 const std::vector<CountWindow>& windows,
                                 int workers = 1);

// Exact stationary probability that the opening block of length psi(n)
// reappears at position n, summed over n in [lo, hi].  Positions with
// psi(n) <= 0 contribute 1.  Needs psi(n) <= n so the two block copies
// cannot overlap.
double expected_event_count(const GibbsModel& m, const RateFunction& psi,
                            std::int64_t lo, std::int64_t hi);

}  // namespace gibbsrec
