#include <cmath>
#include <set>

#include "covent/error.hpp"
#include "covent/systems.hpp"
#include "covent/verify/oracles.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace covent;
using testing::full;
using testing::golden;

TEST_CASE("admissible words") {
  CHECK(admissible_words(*full(2), 2) == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto g3 = admissible_words(*golden(), 3);
  CHECK(g3 == std::vector<Word>{{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}});
  CHECK(admissible_words(*golden(), 1) == std::vector<Word>{{0}, {1}});
  for (int n = 1; n <= 12; ++n) CHECK(count_admissible_words(*golden(), n) == verify::golden_word_count(n));
}

TEST_CASE("prefixes and suffixes of admissible words are admissible") {
  auto sys = share(SymbolicSystem::sft({{1, 1, 0}, {0, 1, 1}, {1, 0, 1}}));
  for (int n = 1; n <= 6; ++n) {
    const auto shorter = admissible_words(*sys, n);
    const std::set<Word> known(shorter.begin(), shorter.end());
    for (const auto& w : admissible_words(*sys, n + 1)) {
      CHECK(known.count(Word(w.begin(), w.end() - 1)));
      CHECK(known.count(Word(w.begin() + 1, w.end())));
    }
  }
}

TEST_CASE("word count growth") {
  CHECK(word_count_growth(*full(2), 10) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(std::abs(word_count_growth(*golden(), 20) - verify::log_spectral_radius(golden()->transition())) < 0.05);
  CHECK(word_count_growth(*full(1), 5) == 0.0);
  double prev = word_count_growth(*golden(), 2);
  for (int n = 3; n <= 30; ++n) {
    const double g = word_count_growth(*golden(), n);
    CHECK(g <= prev + 1.0 / n);
    prev = g;
  }
}

TEST_CASE("power system") {
  auto g = golden();
  CHECK(power_system(*g, 1) == *g);
  const auto p = power_system(*g, 2);
  CHECK(p.alphabet_size() == 3);
  // letters 00, 01, 10; uv allowed iff the 4-word uv avoids "11"
  const auto letters = admissible_words(*g, 2);
  for (int u = 0; u < 3; ++u)
    for (int v = 0; v < 3; ++v) {
      Word uv = letters[u];
      uv.insert(uv.end(), letters[v].begin(), letters[v].end());
      CHECK(p.allows(u, v) == g->admissible(uv));
    }
  for (int n = 1; n <= 5; ++n) CHECK(count_admissible_words(p, n) == count_admissible_words(*g, 2 * n));

  const auto c4 = SymbolicSystem::permutation({1, 2, 3, 0});
  const auto sq = power_system(c4, 2);
  CHECK(sq.cycles() == std::vector<std::vector<int>>{{0, 2}, {1, 3}});
}

TEST_CASE("non-essential matrices are rejected") {
  CHECK_THROWS_AS(SymbolicSystem::sft({{1, 1}, {0, 0}}), Error);
  CHECK_THROWS_AS(SymbolicSystem::permutation({0, 0}), Error);
}
