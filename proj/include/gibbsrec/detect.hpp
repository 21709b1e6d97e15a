#pragma once

#include <cstdint>
#include <vector>

#include "gibbsrec/rate.hpp"
#include "gibbsrec/sft.hpp"

namespace gibbsrec {

enum class EventStatus { kUnsatisfied, kSatisfied, kUndecidable };

// Recurrence event at time n: the word repeats its own prefix of length
// required starting at position n+1.  achieved is the self-overlap z[n]
// (0 when n reaches past the word).  Events whose required block extends
// beyond the word are undecidable, never satisfied.
struct RecurrenceEvent {
  std::int64_t n = 0;
  std::int64_t required = 0;
  std::int64_t achieved = 0;
  EventStatus status = EventStatus::kUnsatisfied;

  bool satisfied() const { return status == EventStatus::kSatisfied; }
  bool decidable() const { return status != EventStatus::kUndecidable; }
};

// One event per n in [n_lo, n_hi] with required = psi(n), after a single
// z-array pass over w.
std::vector<RecurrenceEvent> detect_events(const Word& w,
                                           const RateFunction& psi,
                                           std::int64_t n_lo,
                                           std::int64_t n_hi);

// Level-indexed scan: the event at level nk[k] is satisfied when some
// p with psi(p) = nk[k] fits the window (p + nk[k] <= |w|) and z[p] covers
// the level.  witnesses[k] is the smallest such p, 0 when none.
struct SubsequenceScan {
  std::vector<RecurrenceEvent> events;
  std::vector<std::int64_t> witnesses;
  // Set when no level in nk has any preimage inside the word at all; the
  // scan then says nothing and downstream reporting should surface it.
  bool empty_preimages_warning = false;
};

SubsequenceScan detect_subsequence_events(const Word& w,
                                          const RateFunction& psi,
                                          const std::vector<std::int64_t>& nk);

}  // namespace gibbsrec
