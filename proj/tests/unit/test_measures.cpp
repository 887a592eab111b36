#include <cmath>

#include "covent/error.hpp"
#include "covent/measures.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace covent;
using namespace testing;

TEST_CASE("stationary vectors") {
  CHECK(stationary_of({{1.0}}) == std::vector<double>{1.0});
  const auto pi = stationary_of({{0.9, 0.1}, {0.5, 0.5}});
  CHECK(pi[0] == doctest::Approx(5.0 / 6).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(1.0 / 6).epsilon(1e-12));
  const auto sw = stationary_of({{0, 1}, {1, 0}});
  CHECK(sw[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(stationary_of({{1, 0}, {0, 1}}), Error);
}

TEST_CASE("cylinder masses") {
  auto f = full(2);
  const auto b = InvariantMeasure::bernoulli(f, {0.5, 0.5});
  CHECK(b.cylinder_mass(Word{0, 1}) == doctest::Approx(0.25));
  const auto m = InvariantMeasure::markov(f, {{0.9, 0.1}, {0.5, 0.5}});
  CHECK(m.cylinder_mass(Word{0, 1, 0}) == doctest::Approx(1.0 / 24).epsilon(1e-12));
  double total = 0.0;
  for (double x : m.masses(*Carrier::words(f, 3))) total += x;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("masses are shift invariant") {
  auto g = golden();
  const auto mu = parry(g);
  for (int n = 1; n <= 5; ++n) {
    auto cn = Carrier::words(g, n);
    auto cn1 = Carrier::words(g, n + 1);
    const auto a = mu.masses(*cn);
    const auto b = mu.masses(*cn1);
    for (std::size_t i = 0; i < cn->size(); ++i) {
      double pre = 0.0;  // words x_0 w: coordinates 1..n carry w
      for (std::size_t j = 0; j < cn1->size(); ++j) {
        const auto w = cn1->word(j);
        if (std::equal(w.begin() + 1, w.end(), cn->word(i).begin())) pre += b[j];
      }
      CHECK(pre == doctest::Approx(a[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("condition_on") {
  auto f = full(2);
  auto c = Carrier::words(f, 2);
  const auto mu = distribution(InvariantMeasure::bernoulli(f, {0.5, 0.5}), c);
  BitSet B(c->size());
  B.set(c->index_of(Word{0, 0}));
  B.set(c->index_of(Word{0, 1}));
  const auto cm = condition_on(mu, B);
  CHECK(cm.base_mass == doctest::Approx(0.5));
  CHECK(cm.weights[c->index_of(Word{0, 0})] == doctest::Approx(0.5));

  auto g = golden();
  auto cg = Carrier::words(g, 2);
  BitSet Z(cg->size());
  Z.set(cg->index_of(Word{1, 0}));
  const auto p = InvariantMeasure::markov(g, {{1.0, 0.0}, {1.0, 0.0}}, std::vector<double>{1.0, 0.0});
  CHECK(condition_on(distribution(p, cg), Z).is_zero());

  BitSet W(cg->size());
  W.set(cg->index_of(Word{1, 0}));
  W.set(cg->index_of(Word{0, 0}));
  const auto pm = parry(g);
  const auto cp = condition_on(distribution(pm, cg), W);
  const double m10 = pm.cylinder_mass(Word{1, 0}), m00 = pm.cylinder_mass(Word{0, 0});
  CHECK(cp.weights[cg->index_of(Word{1, 0})] == doctest::Approx(m10 / (m10 + m00)).epsilon(1e-12));
}

TEST_CASE("ergodic decomposition") {
  auto f = full(2);
  const auto b = InvariantMeasure::bernoulli(f, {0.3, 0.7});
  CHECK(ergodic_decompose(b).size() == 1);

  auto two = share(SymbolicSystem::sft({{1, 0}, {0, 1}}));
  const auto m = InvariantMeasure::markov(two, {{1, 0}, {0, 1}}, std::vector<double>{0.3, 0.7});
  const auto parts = ergodic_decompose(m);
  REQUIRE(parts.size() == 2);
  CHECK(parts[0].weight == doctest::Approx(0.3));
  CHECK(parts[1].weight == doctest::Approx(0.7));

  auto perm = share(SymbolicSystem::permutation({1, 0, 3, 4, 2}));
  const auto u = InvariantMeasure::on_points(perm, {0.2, 0.2, 0.2, 0.2, 0.2});
  const auto cyc = ergodic_decompose(u);
  REQUIRE(cyc.size() == 2);
  CHECK(cyc[0].weight == doctest::Approx(0.4));
  CHECK(cyc[1].weight == doctest::Approx(0.6));
}

TEST_CASE("mix round-trips") {
  auto two = share(SymbolicSystem::sft({{1, 0}, {0, 1}}));
  const auto m = InvariantMeasure::markov(two, {{1, 0}, {0, 1}}, std::vector<double>{0.3, 0.7});
  const auto back = mix(ergodic_decompose(m));
  auto c = Carrier::words(two, 3);
  const auto a = m.masses(*c), b = back.masses(*c);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-12);

  const auto same = mix({{1.0, m}}).masses(*c);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same[i] == doctest::Approx(a[i]).epsilon(1e-12));

  // two golden-mean chains on disjoint halves of a 4-letter SFT
  auto sys = share(SymbolicSystem::sft({{1, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 0}}));
  const Matrix P1{{1 / kPhi, 1 / (kPhi * kPhi), 0, 0}, {1, 0, 0, 0}, {0, 0, 0.5, 0.5}, {0, 0, 1, 0}};
  const Matrix P2{{0.5, 0.5, 0, 0}, {1, 0, 0, 0}, {0, 0, 0.6, 0.4}, {0, 0, 1, 0}};
  const auto m1 = InvariantMeasure::markov(sys, P1, std::vector<double>{kPhi * kPhi / (kPhi * kPhi + 1), 1 / (kPhi * kPhi + 1), 0, 0});
  const auto m2 = InvariantMeasure::markov(sys, P2, std::vector<double>{0, 0, 1 / 1.4, 0.4 / 1.4});
  const auto mixed = mix({{0.25, m1}, {0.75, m2}});
  auto c2 = Carrier::words(sys, 2);
  const auto x = mixed.masses(*c2), x1 = m1.masses(*c2), x2 = m2.masses(*c2);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(0.25 * x1[i] + 0.75 * x2[i]).epsilon(1e-12));
}

TEST_CASE("power measure") {
  auto g = golden();
  const auto mu = parry(g);
  auto p = share(power_system(*g, 2));
  const auto pm = power_measure(mu, p, 2);
  const auto letters = admissible_words(*g, 2);
  for (std::size_t j = 0; j < letters.size(); ++j)
    CHECK(pm.cylinder_mass(Word{static_cast<int>(j)}) == doctest::Approx(mu.cylinder_mass(letters[j])).epsilon(1e-12));
}

TEST_CASE("invalid measures") {
  auto g = golden();
  CHECK_THROWS_AS(InvariantMeasure::markov(g, {{0.5, 0.5}, {0.5, 0.5}}), Error);
  CHECK_THROWS_AS(InvariantMeasure::markov(g, {{0.5, 0.6}, {1.0, 0.0}}), Error);
  auto perm = share(SymbolicSystem::permutation({1, 0, 2}));
  CHECK_THROWS_AS(InvariantMeasure::on_points(perm, {0.1, 0.5, 0.4}), Error);
}
