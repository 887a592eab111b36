#include <cmath>

#include "covent/principles.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace covent;
using namespace testing;

namespace {
SystemPtr two_blocks() {
  return share(SymbolicSystem::sft({{1, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {0, 0, 1, 1}}));
}
const Matrix kHalves{{0.5, 0.5, 0, 0}, {0.5, 0.5, 0, 0}, {0, 0, 0.5, 0.5}, {0, 0, 0.5, 0.5}};
}  // namespace

TEST_CASE("pushforward") {
  auto g = golden();
  const auto mu = parry(g);
  const auto same = pushforward(FactorMap::identity(g), mu);
  CHECK(same.kind() == MeasureKind::Markov);
  CHECK(same.cylinder_mass(Word{0, 1}) == mu.cylinder_mass(Word{0, 1}));

  const auto phi = FactorMap::higher_block(g, 2);
  const auto nu = pushforward(phi, mu);
  const auto letters = admissible_words(*g, 2);
  for (std::size_t j = 0; j < letters.size(); ++j)
    CHECK(nu.cylinder_mass(Word{static_cast<int>(j)}) == doctest::Approx(mu.cylinder_mass(letters[j])));
}

TEST_CASE("factor invariance") {
  auto g = golden();
  const auto mu = parry(g);
  const auto c = FactorMap::constant(g);
  const auto r = factor_invariance_check(c, mu, cyl(c.codomain()), whole(c.codomain()), 5);
  CHECK(r.verdict == Verdict::HoldsWithinTol);
  CHECK(r.gap <= kIdentityTol);
  CHECK(r.lhs == doctest::Approx(0.0));

  const auto phi = FactorMap::higher_block(g, 2);
  const auto Y = phi.codomain();
  const auto U = words(Y, {{{0}, {1}}, {{1}, {2}}});
  const auto b = factor_invariance_check(phi, mu, U, whole(Y), 4);
  CHECK(b.verdict == Verdict::HoldsWithinTol);
  for (double gap : b.per_n_gaps) CHECK(gap <= kIdentityTol);
}

TEST_CASE("ergodic additivity") {
  auto sys = two_blocks();
  const auto m1 = InvariantMeasure::markov(sys, kHalves, std::vector<double>{0.5, 0.5, 0, 0});
  const auto m2 = InvariantMeasure::markov(sys, kHalves, std::vector<double>{0, 0, 0.5, 0.5});
  const auto r = ergodic_additivity_check({{0.5, m1}, {0.5, m2}}, cyl(sys), whole(sys), 5);
  CHECK(r.verdict == Verdict::HoldsWithinTol);
  CHECK(r.lhs == doctest::Approx(std::log(2.0)).epsilon(1e-6));

  const auto single = ergodic_additivity_check({{1.0, m1}}, cyl(sys), whole(sys), 5);
  CHECK(single.gap == doctest::Approx(0.0).epsilon(1e-9));

  const auto U = words(sys, {{{0}, {1}, {2}}, {{1}, {2}, {3}}});
  const auto cover = ergodic_additivity_check({{0.3, m1}, {0.7, m2}}, U, whole(sys), 4);
  CHECK(cover.verdict == Verdict::HoldsWithinTol);
}

TEST_CASE("min-max on an overlapping cover") {
  auto f = full(3);
  const auto U = words(f, {{{0}, {1}}, {{1}, {2}}});
  std::vector<InvariantMeasure> grid;
  for (const auto& p : {std::vector<double>{0.2, 0.3, 0.5}, {1.0 / 3, 1.0 / 3, 1.0 / 3}, {0.5, 0.25, 0.25}})
    grid.push_back(InvariantMeasure::bernoulli(f, p));
  MinmaxOptions opts;
  opts.refine = false;
  const auto r = minmax_check(f, U, whole(f), grid, 6, 1, opts);
  CHECK(r.rhs <= std::log(2.0) + 1e-9);
  CHECK(r.lhs >= r.rhs - 1e-9);
}

TEST_CASE("variational search is reproducible") {
  auto g = golden();
  VariationalOptions opts;
  opts.starts = 3;
  opts.max_iterations = 60;
  const auto a = variational_search(g, cyl(g), whole(g), 6, opts);
  const auto b = variational_search(g, cyl(g), whole(g), 6, opts);
  CHECK(a.lhs == b.lhs);
  CHECK(a.rhs == b.rhs);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) CHECK(a.trace[i].value == b.trace[i].value);
  CHECK(a.lhs <= a.rhs + 1e-9);
  CHECK(a.rhs - a.lhs < 0.1);
}

TEST_CASE("factor-conditioned entropy decreases with the window") {
  auto f = full(2);
  const auto mu = InvariantMeasure::bernoulli(f, {0.3, 0.7});
  const auto phi = FactorMap::identity(f);
  const auto U = words(f, {{{0, 0}, {0, 1}, {1, 1}}, {{0, 1}, {1, 0}}});
  const auto r = factor_conditioned_inf(mu, phi, U, {1, 2, 3}, 4);
  CHECK(r.verdict != Verdict::Violated);
  for (std::size_t i = 1; i < r.series.size(); ++i) CHECK(r.series[i] <= r.series[i - 1] + 1e-9);
}
