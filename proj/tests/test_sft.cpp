#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "gibbsrec/sft.hpp"
#include "oracles.hpp"

using namespace gibbsrec;

TEST_CASE("admissibility checks adjacent pairs against the matrix") {
  auto full = fixtures::full_2();
  auto golden = fixtures::golden_mean();
  CHECK(is_admissible({1, 2, 2, 1}, full));
  CHECK_FALSE(is_admissible({2, 2}, golden));
  CHECK(is_admissible({1, 2, 1, 2}, golden));
  CHECK(is_admissible({}, golden));
  CHECK_THROWS_AS(is_admissible({0, 1}, full), DomainError);
  CHECK_THROWS_AS(is_admissible({1, 3}, full), DomainError);
}

TEST_CASE("word construction rejects inadmissible input") {
  auto golden = fixtures::golden_mean();
  CHECK_THROWS_AS(Word({2, 2}, golden), DomainError);
  Word w({1, 2, 1}, golden);
  CHECK(w.size() == 3);
  CHECK(w.at(1) == 1);
  CHECK(w.at(3) == 1);
}

TEST_CASE("mixing exponent is the first entrywise-positive power") {
  CHECK(fixtures::full_2().mixing_exponent() == 1);
  CHECK(fixtures::golden_mean().mixing_exponent() == 2);
  auto period = fixtures::period_two();
  CHECK_FALSE(period.mixing_exponent().has_value());
  CHECK_THROWS_AS(period.require_mixing(), NotMixingError);
}

TEST_CASE("spec validation rejects malformed matrices") {
  CHECK_THROWS_AS(SftSpec(1, {{1}}), DomainError);
  CHECK_THROWS_AS(SftSpec(2, {{1, 1}}), DomainError);
  CHECK_THROWS_AS(SftSpec(2, {{1, 2}, {1, 1}}), DomainError);
  // Dead row / dead column.
  CHECK_THROWS_AS(SftSpec(2, {{0, 0}, {1, 1}}), DomainError);
  CHECK_THROWS_AS(SftSpec(2, {{1, 0}, {1, 0}}), DomainError);
}

TEST_CASE("common prefix length truncates at the shorter word") {
  auto full = fixtures::full_2();
  CHECK(common_prefix_length(Word({1, 2, 1}, full), Word({1, 2, 2}, full)) == 2);
  CHECK(common_prefix_length(Word({1, 1}, full), Word({2, 1}, full)) == 0);
  Word w({1, 2, 1, 2, 1}, full);
  CHECK(common_prefix_length(w, w) == 5);
  CHECK(common_prefix_length(Word(), w) == 0);
}

TEST_CASE("metric is K to the minus prefix length") {
  auto full = fixtures::full_2();
  CHECK(metric(Word({1, 2, 1, 1}, full), Word({1, 2, 1, 2}, full)) ==
        doctest::Approx(0.125).epsilon(1e-15));
  auto full3 = SftSpec::full_shift(3);
  CHECK(metric(Word({1, 1}, full3), Word({2, 1}, full3)) == 1.0);
  Word same({1, 2}, full);
  CHECK(metric(same, same) == 0.25);
  CHECK(metric(same, same, true) == 0.0);
}

TEST_CASE("metric is symmetric and ultrametric on enumerated words") {
  for (const auto& sft : {fixtures::golden_mean(), SftSpec::full_shift(3)}) {
    auto words = enumerate_words(sft, 3);
    for (const auto& a : words)
      for (const auto& b : words) {
        CHECK(metric(a, b) == metric(b, a));
        for (const auto& c : words)
          CHECK(metric(a, c) <= std::max(metric(a, b), metric(b, c)));
      }
  }
}

TEST_CASE("prefix match array on hand-checked words") {
  auto full = fixtures::full_2();
  auto z1 = prefix_match_array(Word({1, 1, 1, 1}, full));
  CHECK(z1.at(1) == 3);
  CHECK(z1.at(2) == 2);
  CHECK(z1.at(3) == 1);
  auto z2 = prefix_match_array(Word({1, 2, 1, 2, 1}, full));
  CHECK(z2.at(1) == 0);
  CHECK(z2.at(2) == 3);
  CHECK(z2.at(3) == 0);
  CHECK(z2.at(4) == 1);
  auto z3 = prefix_match_array(Word({1, 2, 2}, full));
  CHECK(z3.at(1) == 0);
  CHECK(z3.at(2) == 0);
  CHECK_THROWS_AS(z3.at(0), DomainError);
  CHECK_THROWS_AS(z3.at(3), DomainError);
}

TEST_CASE("prefix match array equals the quadratic reference on random words") {
  std::mt19937_64 rng(12345);
  auto full3 = SftSpec::full_shift(3);
  for (int rep = 0; rep < 300; ++rep) {
    std::uniform_int_distribution<int> len_dist(1, 200);
    const int len = len_dist(rng);
    std::vector<std::int32_t> symbols(len);
    std::uniform_int_distribution<int> sym_dist(1, 3);
    for (auto& s : symbols) s = sym_dist(rng);
    Word w(symbols, full3);
    auto z = prefix_match_array(w);
    auto ref = oracle::prefix_match_quadratic(symbols);
    for (int p = 1; p < len; ++p) CHECK(z.at(p) == ref[p]);
  }
}

TEST_CASE("prefix match bound characterizes the metric to shifted suffixes") {
  std::mt19937_64 rng(777);
  auto golden = fixtures::golden_mean();
  for (int rep = 0; rep < 100; ++rep) {
    // Random admissible word via a lazy walk.
    std::uniform_int_distribution<int> len_dist(2, 120);
    const int len = len_dist(rng);
    std::vector<std::int32_t> symbols;
    symbols.push_back(1 + static_cast<int>(rng() % 2));
    while (symbols.size() < static_cast<std::size_t>(len)) {
      int next = 1 + static_cast<int>(rng() % 2);
      if (!golden.allowed(symbols.back(), next)) next = 1;
      symbols.push_back(next);
    }
    Word w(symbols, golden);
    auto z = prefix_match_array(w);
    for (int p = 1; p < len; ++p) {
      Word suffix(std::vector<std::int32_t>(symbols.begin() + p,
                                            symbols.end()),
                  golden);
      for (int m = 0; m <= len - p; ++m) {
        const bool by_array = z.at(p) >= m;
        const bool by_metric = metric(w, suffix) <= std::pow(2.0, -m) + 1e-15;
        CHECK(by_array == by_metric);
      }
    }
  }
}

TEST_CASE("word enumeration is lexicographic and complete") {
  auto golden = fixtures::golden_mean();
  auto words2 = enumerate_words(golden, 2);
  REQUIRE(words2.size() == 3);
  CHECK(words2[0].symbols() == std::vector<std::int32_t>{1, 1});
  CHECK(words2[1].symbols() == std::vector<std::int32_t>{1, 2});
  CHECK(words2[2].symbols() == std::vector<std::int32_t>{2, 1});

  CHECK(enumerate_words(fixtures::full_2(), 3).size() == 8);
  CHECK(enumerate_words(golden, 4).size() == 8);  // Fibonacci count

  auto empty = enumerate_words(golden, 0);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].empty());
}

TEST_CASE("enumeration agrees with transfer counts and the exhaustive scan") {
  for (const auto& sft :
       {fixtures::full_2(), fixtures::golden_mean(), SftSpec::full_shift(3)}) {
    for (int n = 1; n <= 7; ++n) {
      const auto listed = enumerate_words(sft, n).size();
      CHECK(listed == count_words(sft, n));
      CHECK(listed == oracle::count_words_exhaustive(sft, n));
    }
  }
}

TEST_CASE("enumeration respects the resource cap") {
  CHECK_THROWS_AS(enumerate_words(fixtures::full_2(), 10, 100),
                  ResourceLimitError);
}
