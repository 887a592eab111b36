#include <cmath>

#include "covent/dynamic_entropy.hpp"
#include "covent/error.hpp"
#include "covent/verify/oracles.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace covent;
using namespace testing;

namespace {
double h2(double p) { return -p * std::log(p) - (1 - p) * std::log(1 - p); }
}  // namespace

TEST_CASE("linear sequences") {
  const auto e = subadditive_estimate([](int N) { return 0.7 * N; }, 8);
  CHECK(e.exactness == Exactness::ExactConstant);
  CHECK(e.running_inf == doctest::Approx(0.7));
  CHECK(e.stabilization_gap == doctest::Approx(0.0));

  const auto f = subadditive_estimate([](int N) { return N + 1.0; }, 10);
  CHECK(f.exactness == Exactness::UpperBoundCertified);
  CHECK(f.running_inf == doctest::Approx(1.1));
  CHECK(f.increment == doctest::Approx(1.0));
  CHECK(f.a(3) == 4.0);
}

TEST_CASE("superadditive sequences are rejected") {
  try {
    subadditive_estimate([](int N) { return 1.0 * N * N; }, 4);
    FAIL("no violation reported");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SubadditivityViolation);
  }
  const std::vector<double> up{1.0, 4.0, 9.0};
  CHECK(estimate_from_terms(up, true).exactness == Exactness::Truncated);
}

TEST_CASE("join ladder") {
  const auto ladder = join_ladder(cyl(golden()), 4);
  REQUIRE(ladder.size() == 4);
  for (int N = 1; N <= 4; ++N) {
    CHECK(ladder[N - 1].window() == N);
    CHECK(static_cast<double>(ladder[N - 1].size()) == verify::golden_word_count(N));
  }
}

TEST_CASE("Bernoulli measures give the Shannon entropy") {
  auto f = full(2);
  for (double p : {0.5, 0.3, 0.1}) {
    const auto mu = InvariantMeasure::bernoulli(f, {p, 1 - p});
    const auto e = h_minus(mu, cyl(f), whole(f), 8);
    CHECK(e.exactness == Exactness::ExactConstant);
    CHECK(e.running_inf == doctest::Approx(h2(p)).epsilon(1e-9));
  }
}

TEST_CASE("Markov measures: the increment is the rate") {
  auto g = golden();
  const auto mu = parry(g);
  const auto e = h_partition_cond(mu, cyl(g), whole(g), 6);
  CHECK(e.increment == doctest::Approx(kLogPhi).epsilon(1e-9));
  CHECK(e.running_inf > kLogPhi);
  for (std::size_t i = 1; i < e.sequence.size(); ++i) CHECK(e.sequence[i].rate <= e.sequence[i - 1].rate + 1e-12);
}

TEST_CASE("conditioning on the generator kills the entropy") {
  auto f = full(2);
  const auto mu = InvariantMeasure::bernoulli(f, {0.4, 0.6});
  CHECK(h_minus(mu, cyl(f), cyl(f), 5).running_inf == doctest::Approx(0.0));
  CHECK(h_top_cond(cyl(f), cyl(f), 5).running_inf == 0.0);
}

TEST_CASE("topological conditional entropy") {
  const auto e = h_top_cond(cyl(full(2)), whole(full(2)), 10);
  CHECK(e.exactness == Exactness::ExactConstant);
  CHECK(e.running_inf == doctest::Approx(std::log(2.0)));
  const auto g = h_top_cond(cyl(golden()), whole(golden()), 14);
  CHECK(g.running_inf >= kLogPhi);
  CHECK(g.running_inf - kLogPhi < 0.06);
}

TEST_CASE("permutations have zero entropy") {
  auto perm = share(SymbolicSystem::permutation({1, 2, 0, 4, 3}));
  const auto mu = InvariantMeasure::on_points(perm, {0.2, 0.2, 0.2, 0.2, 0.2});
  const auto U = pts(perm, {{0, 1, 3}, {1, 2, 4}});
  const auto e = h_minus(mu, U, SetFamily::trivial(Carrier::points(perm)), 12);
  CHECK(e.running_inf < 0.2);
  CHECK(e.sequence.back().a <= std::log(6.0) + 1e-9);
}

TEST_CASE("h_plus at window one") {
  auto f = full(3);
  const auto mu = InvariantMeasure::bernoulli(f, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto U = words(f, {{{0}, {1}}, {{1}, {2}}});
  const auto r = h_plus(mu, U, whole(f), 4, 1);
  CHECK(r.candidates == 2);
  CHECK(r.estimate.running_inf == doctest::Approx(0.636514168).epsilon(1e-8));
  CHECK_FALSE(r.ext_fallback);
  const auto hm = h_minus(mu, U, whole(f), 4);
  CHECK(hm.running_inf <= r.estimate.running_inf + 1e-9);
}

TEST_CASE("power identity") {
  auto g = golden();
  const auto mu = parry(g);
  const auto one = power_identity_check(mu, cyl(g), whole(g), 1, 5);
  CHECK(one.lhs == one.rhs);
  CHECK(one.max_gap == 0.0);
  const auto two = power_identity_check(mu, cyl(g), whole(g), 2, 3);
  CHECK(two.max_gap <= 1e-9);
  CHECK_FALSE(two.truncated);
}

TEST_CASE("recode to power") {
  auto g = golden();
  auto p = share(power_system(*g, 2));
  const auto r = recode_to_power(cyl(g, 2), p, 2);
  CHECK(r.window() == 1);
  CHECK(r.size() == 3);
}
