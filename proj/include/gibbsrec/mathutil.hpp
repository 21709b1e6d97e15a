#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace gibbsrec {

// Guarded natural log: log x = 0 whenever x <= 1.  Every iterated-log
// expression in the library goes through this one primitive, so the small-n
// convention is applied uniformly.
inline double guarded_log(double x) { return x > 1.0 ? std::log(x) : 0.0; }

// guarded log log x
inline double guarded_log2(double x) { return guarded_log(guarded_log(x)); }

// guarded log log log x
inline double guarded_log3(double x) { return guarded_log(guarded_log2(x)); }

// SplitMix64 finalizer.  Statistically strong 64-bit avalanche; used as the
// core of the counter-based generator (value = mix of a per-stream key plus a
// step counter), so any (seed, trial, step) triple is O(1) addressable.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

// Uniform double in [0, 1) from 64 random bits (53-bit mantissa).
inline double u01_from_bits(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Standard normal CDF.
double normal_cdf(double x);

// Two-sided Kolmogorov-Smirnov distance between the empirical distribution of
// `samples` and the standard normal.  Takes a copy; sorts internally.
double ks_distance_to_standard_normal(std::vector<double> samples);

}  // namespace gibbsrec
