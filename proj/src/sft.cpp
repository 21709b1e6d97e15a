#include "gibbsrec/sft.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gibbsrec {

namespace {

// Boolean matrix product over the reachability semiring.
std::vector<std::uint8_t> bool_product(const std::vector<std::uint8_t>& a,
                                       const std::vector<std::uint8_t>& b,
                                       int K) {
  std::vector<std::uint8_t> c(static_cast<std::size_t>(K) * K, 0);
  for (int i = 0; i < K; ++i)
    for (int k = 0; k < K; ++k) {
      if (!a[static_cast<std::size_t>(i) * K + k]) continue;
      for (int j = 0; j < K; ++j)
        if (b[static_cast<std::size_t>(k) * K + j])
          c[static_cast<std::size_t>(i) * K + j] = 1;
    }
  return c;
}

bool all_positive(const std::vector<std::uint8_t>& m) {
  return std::all_of(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; });
}

}  // namespace

SftSpec::SftSpec(int K, const std::vector<std::vector<int>>& rows,
                 int mixing_cap) {
  if (K < 2) throw DomainError("alphabet size must be at least 2");
  if (rows.size() != static_cast<std::size_t>(K))
    throw DomainError("adjacency matrix must have K rows");
  K_ = K;
  adj_.assign(static_cast<std::size_t>(K) * K, 0);
  for (int i = 0; i < K; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(K))
      throw DomainError("adjacency row " + std::to_string(i + 1) +
                        " must have K entries");
    for (int j = 0; j < K; ++j) {
      const int v = rows[i][j];
      if (v != 0 && v != 1)
        throw DomainError("adjacency entries must be 0 or 1");
      adj_[static_cast<std::size_t>(i) * K + j] = static_cast<std::uint8_t>(v);
    }
  }
  // No dead symbols: every row and column must contain a 1.
  for (int i = 0; i < K; ++i) {
    bool row = false, col = false;
    for (int j = 0; j < K; ++j) {
      row = row || adj_[static_cast<std::size_t>(i) * K + j];
      col = col || adj_[static_cast<std::size_t>(j) * K + i];
    }
    if (!row || !col)
      throw DomainError("symbol " + std::to_string(i + 1) +
                        " has no admissible continuation or predecessor");
  }
  std::vector<std::uint8_t> power = adj_;
  for (int m = 1; m <= mixing_cap; ++m) {
    if (all_positive(power)) {
      mixing_ = m;
      break;
    }
    power = bool_product(power, adj_, K);
  }
}

SftSpec SftSpec::full_shift(int K) {
  std::vector<std::vector<int>> rows(K, std::vector<int>(K, 1));
  return SftSpec(K, rows);
}

int SftSpec::require_mixing() const {
  if (!mixing_)
    throw NotMixingError("no power of the adjacency matrix is entrywise positive");
  return *mixing_;
}

bool is_admissible(const std::vector<std::int32_t>& symbols,
                   const SftSpec& sft) {
  for (std::int32_t s : symbols)
    if (s < 1 || s > sft.K())
      throw DomainError("symbol " + std::to_string(s) + " outside [1, K]");
  for (std::size_t l = 0; l + 1 < symbols.size(); ++l)
    if (!sft.allowed(symbols[l], symbols[l + 1])) return false;
  return true;
}

Word::Word(std::vector<std::int32_t> symbols, const SftSpec& sft) {
  if (!is_admissible(symbols, sft))
    throw DomainError("word is not admissible for this shift");
  symbols_ = std::move(symbols);
  K_ = sft.K();
}

std::size_t common_prefix_length(const Word& a, const Word& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t m = 0;
  while (m < n && a.symbols()[m] == b.symbols()[m]) ++m;
  return m;
}

double metric(const Word& a, const Word& b, bool same_infinite) {
  if (same_infinite && a.symbols() == b.symbols()) return 0.0;
  const int K = a.alphabet_size() ? a.alphabet_size() : b.alphabet_size();
  return std::pow(static_cast<double>(K),
                  -static_cast<double>(common_prefix_length(a, b)));
}

std::int32_t PrefixMatchArray::at(std::size_t p) const {
  if (p < 1 || p >= length_)
    throw DomainError("prefix-match position outside [1, length-1]");
  return z_[p];
}

PrefixMatchArray prefix_match_array(const Word& w) {
  const auto& s = w.symbols();
  const std::size_t n = s.size();
  if (n == 0) throw DomainError("prefix-match array needs a nonempty word");
  std::vector<std::int32_t> z(n, 0);
  z[0] = static_cast<std::int32_t>(n);
  std::size_t l = 0, r = 0;  // [l, r) = rightmost match window seen so far
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = 0;
    if (i < r) k = std::min(r - i, static_cast<std::size_t>(z[i - l]));
    while (i + k < n && s[k] == s[i + k]) ++k;
    z[i] = static_cast<std::int32_t>(k);
    if (i + k > r) {
      l = i;
      r = i + k;
    }
  }
  return PrefixMatchArray(std::move(z), n);
}

std::vector<Word> enumerate_words(const SftSpec& sft, int n, std::size_t cap) {
  if (n < 0) throw DomainError("word length must be nonnegative");
  if (n == 0) return {Word()};
  const std::uint64_t total = count_words(sft, n);
  if (total > cap)
    throw ResourceLimitError("enumeration of " + std::to_string(total) +
                             " words exceeds cap");
  std::vector<Word> out;
  out.reserve(total);
  std::vector<std::int32_t> stack;
  stack.reserve(n);
  // Iterative depth-first walk in symbol order gives lexicographic output.
  std::vector<std::int32_t> next(1, 1);
  while (!next.empty()) {
    std::int32_t& candidate = next.back();
    if (candidate > sft.K()) {
      next.pop_back();
      if (!stack.empty()) stack.pop_back();
      continue;
    }
    if (!stack.empty() && !sft.allowed(stack.back(), candidate)) {
      ++candidate;
      continue;
    }
    stack.push_back(candidate);
    ++candidate;
    if (stack.size() == static_cast<std::size_t>(n)) {
      out.emplace_back(stack, sft);
      stack.pop_back();
    } else {
      next.push_back(1);
    }
  }
  return out;
}

std::uint64_t count_words(const SftSpec& sft, int n) {
  if (n < 0) throw DomainError("word length must be nonnegative");
  if (n == 0) return 1;
  const int K = sft.K();
  std::vector<std::uint64_t> v(K, 1);
  for (int step = 1; step < n; ++step) {
    std::vector<std::uint64_t> w(K, 0);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j)
        if (sft.allowed(i + 1, j + 1)) w[i] += v[j];
    v = std::move(w);
  }
  std::uint64_t total = 0;
  for (auto x : v) total += x;
  return total;
}

}  // namespace gibbsrec
