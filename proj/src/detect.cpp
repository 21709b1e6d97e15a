#include "gibbsrec/detect.hpp"

#include <algorithm>
#include <unordered_set>

#include "gibbsrec/errors.hpp"

namespace gibbsrec {

namespace {

EventStatus classify(std::int64_t n, std::int64_t required,
                     std::int64_t achieved, std::int64_t length) {
  if (required <= 0) return EventStatus::kSatisfied;
  if (n + required > length) return EventStatus::kUndecidable;
  return achieved >= required ? EventStatus::kSatisfied
                              : EventStatus::kUnsatisfied;
}

}  // namespace

std::vector<RecurrenceEvent> detect_events(const Word& w,
                                           const RateFunction& psi,
                                           std::int64_t n_lo,
                                           std::int64_t n_hi) {
  if (w.size() == 0) throw DomainError("detect_events needs a nonempty word");
  if (n_lo < 1 || n_lo > n_hi)
    throw DomainError("detect_events needs 1 <= n_lo <= n_hi");
  const auto length = static_cast<std::int64_t>(w.size());
  const PrefixMatchArray z = prefix_match_array(w);
  std::vector<RecurrenceEvent> out;
  out.reserve(static_cast<std::size_t>(n_hi - n_lo + 1));
  for (std::int64_t n = n_lo; n <= n_hi; ++n) {
    RecurrenceEvent e;
    e.n = n;
    e.required = psi.value(n);
    e.achieved = n < length ? z.at(static_cast<std::size_t>(n)) : 0;
    e.status = classify(n, e.required, e.achieved, length);
    out.push_back(e);
  }
  return out;
}

SubsequenceScan detect_subsequence_events(const Word& w,
                                          const RateFunction& psi,
                                          const std::vector<std::int64_t>& nk) {
  if (w.size() == 0)
    throw DomainError("detect_subsequence_events needs a nonempty word");
  if (nk.empty()) throw DomainError("level sequence must be nonempty");
  for (std::size_t k = 0; k < nk.size(); ++k) {
    if (nk[k] < 0) throw DomainError("levels must be nonnegative");
    if (k > 0 && nk[k] <= nk[k - 1])
      throw DomainError("levels must be strictly increasing");
  }

  const auto length = static_cast<std::int64_t>(w.size());
  const PrefixMatchArray z = prefix_match_array(w);

  // psi over the observable positions, once.
  const std::int64_t scan_end = std::min(length, psi.horizon());
  std::vector<std::int64_t> values(static_cast<std::size_t>(scan_end) + 1, -1);
  for (std::int64_t p = 1; p <= scan_end; ++p)
    values[static_cast<std::size_t>(p)] = psi.value(p);

  // Levels that may have preimages past the word keep an unsatisfied level
  // undecidable.  Closed-form and constructed rates are nondecreasing, so
  // past the word only levels >= psi at the last observable position can
  // appear; explicit tables are scanned outright.
  std::unordered_set<std::int64_t> beyond;
  const bool monotone = psi.kind() != RateKind::kTable;
  const bool has_beyond = length < psi.horizon();
  std::int64_t beyond_floor = 0;
  if (monotone) {
    if (has_beyond) beyond_floor = psi.value(length);
  } else {
    for (std::int64_t p = length + 1; p <= psi.horizon(); ++p)
      beyond.insert(psi.value(p));
  }

  SubsequenceScan scan;
  scan.events.reserve(nk.size());
  scan.witnesses.reserve(nk.size());
  bool any_preimage = false;
  for (std::int64_t level : nk) {
    RecurrenceEvent e;
    e.n = level;
    e.required = level;
    std::int64_t witness = 0;
    bool preimage_past_window = false;
    for (std::int64_t p = 1; p <= scan_end; ++p) {
      if (values[static_cast<std::size_t>(p)] != level) continue;
      any_preimage = true;
      if (p + level > length) {
        preimage_past_window = true;
        continue;
      }
      const std::int64_t zp =
          p < length ? z.at(static_cast<std::size_t>(p)) : 0;
      e.achieved = std::max(e.achieved, zp);
      if (level <= 0 || zp >= level) {
        witness = p;
        break;
      }
    }
    if (witness > 0) {
      e.status = EventStatus::kSatisfied;
    } else if (preimage_past_window || beyond.count(level) > 0 ||
               (monotone && has_beyond && beyond_floor <= level)) {
      e.status = EventStatus::kUndecidable;
    } else {
      e.status = EventStatus::kUnsatisfied;
    }
    scan.events.push_back(e);
    scan.witnesses.push_back(witness);
  }
  scan.empty_preimages_warning = !any_preimage;
  return scan;
}

}  // namespace gibbsrec
