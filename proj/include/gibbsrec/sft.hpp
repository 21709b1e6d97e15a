#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gibbsrec/errors.hpp"

namespace gibbsrec {

// Alphabet {1..K} with a 0/1 adjacency matrix.  Symbols are 1-based at every
// public boundary; matrix storage is 0-based row-major.
class SftSpec {
 public:
  // rows[i][j] != 0 means symbol i+1 may be followed by symbol j+1.
  SftSpec(int K, const std::vector<std::vector<int>>& rows,
          int mixing_cap = 64);

  static SftSpec full_shift(int K);

  int K() const { return K_; }
  bool allowed(int a, int b) const {  // 1-based symbols
    return adj_[static_cast<std::size_t>(a - 1) * K_ + (b - 1)] != 0;
  }

  // Smallest M with A^M entrywise positive, if one exists below the cap.
  std::optional<int> mixing_exponent() const { return mixing_; }
  int require_mixing() const;

  bool operator==(const SftSpec& o) const {
    return K_ == o.K_ && adj_ == o.adj_;
  }

 private:
  int K_;
  std::vector<std::uint8_t> adj_;
  std::optional<int> mixing_;
};

// Admissible finite word.  Empty words are allowed (whole-space cylinder).
class Word {
 public:
  Word() : K_(0) {}
  Word(std::vector<std::int32_t> symbols, const SftSpec& sft);

  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }
  std::int32_t at(std::size_t k) const { return symbols_[k - 1]; }  // 1-based
  const std::vector<std::int32_t>& symbols() const { return symbols_; }
  int alphabet_size() const { return K_; }

 private:
  std::vector<std::int32_t> symbols_;
  int K_;
};

bool is_admissible(const std::vector<std::int32_t>& symbols,
                   const SftSpec& sft);

// |a ^ b| truncated at min(|a|, |b|).
std::size_t common_prefix_length(const Word& a, const Word& b);

// K^{-|a^b|}; zero only when the caller asserts both words name the same
// infinite sequence.
double metric(const Word& a, const Word& b, bool same_infinite = false);

// z[p] = longest common prefix of w and the suffix of w starting after p
// symbols, for 1 <= p <= |w|-1.
class PrefixMatchArray {
 public:
  explicit PrefixMatchArray(std::vector<std::int32_t> z, std::size_t length)
      : z_(std::move(z)), length_(length) {}

  std::int32_t at(std::size_t p) const;  // p in [1, length-1]
  std::size_t word_length() const { return length_; }

 private:
  std::vector<std::int32_t> z_;
  std::size_t length_;
};

// Linear-time Z-algorithm.
PrefixMatchArray prefix_match_array(const Word& w);

inline constexpr std::size_t kEnumerationCap = std::size_t{1} << 22;

// All admissible words of length n in lexicographic order.
std::vector<Word> enumerate_words(const SftSpec& sft, int n,
                                  std::size_t cap = kEnumerationCap);

// Transfer count 1^T A^{n-1} 1 (number of admissible n-words).
std::uint64_t count_words(const SftSpec& sft, int n);

}  // namespace gibbsrec
