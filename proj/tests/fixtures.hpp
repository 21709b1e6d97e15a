#pragma once

// Shared model fixtures for the test suite.

#include "gibbsrec/sft.hpp"
#include "gibbsrec/thermo.hpp"

namespace fixtures {

inline gibbsrec::SftSpec full_2() { return gibbsrec::SftSpec::full_shift(2); }

// Symbol 2 may not follow itself.
inline gibbsrec::SftSpec golden_mean() {
  return gibbsrec::SftSpec(2, {{1, 1}, {1, 0}});
}

// Not mixing: powers alternate between the two off-diagonal patterns.
inline gibbsrec::SftSpec period_two() {
  return gibbsrec::SftSpec(2, {{0, 1}, {1, 0}});
}

inline gibbsrec::BernoulliSpec bern82() {
  return gibbsrec::BernoulliSpec({0.8, 0.2});
}

inline gibbsrec::GibbsModel model_bern82() {
  return gibbsrec::build_gibbs(bern82());
}

inline gibbsrec::GibbsModel model_golden_maxent() {
  auto sft = golden_mean();
  return gibbsrec::build_gibbs(sft,
                               gibbsrec::Potential::constant(sft, 1, 0.0));
}

inline gibbsrec::GibbsModel model_golden_weighted() {
  auto sft = golden_mean();
  gibbsrec::Potential pot(sft, 2,
                          {{{1, 1}, 0.3}, {{1, 2}, -0.1}, {{2, 1}, 0.2}});
  return gibbsrec::build_gibbs(sft, pot);
}

}  // namespace fixtures
