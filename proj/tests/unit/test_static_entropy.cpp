#include <cmath>
#include <random>

#include "covent/error.hpp"
#include "covent/set_cover.hpp"
#include "covent/static_entropy.hpp"
#include "covent/verify/oracles.hpp"
#include "covent/verify/random.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace covent;
using namespace testing;

const double kH13 = -(1.0 / 3) * std::log(1.0 / 3) - (2.0 / 3) * std::log(2.0 / 3);

TEST_CASE("shannon") {
  const std::vector<double> w{1.0 / 3, 2.0 / 3};
  CHECK(shannon(w).nats == doctest::Approx(0.636514168).epsilon(1e-9));
  CHECK(shannon(std::vector<double>{1.0}).nats == 0.0);
  CHECK(shannon(std::vector<double>{0.0, 1.0}).nats == 0.0);
  CHECK(phi(0.0) == 0.0);
  CHECK_THROWS_AS(shannon(std::vector<double>{-0.1, 1.1}), Error);
}

TEST_CASE("conditional partition entropy") {
  auto s = three_points();
  const auto mu = uniform3(s);
  const auto singles = pts(s, {{0}, {1}, {2}}, FamilyKind::Partition);
  const auto beta = pts(s, {{0}, {1, 2}}, FamilyKind::Partition);
  CHECK(conditional_partition_entropy(mu, singles, beta).nats == doctest::Approx(2.0 / 3 * std::log(2.0)));
  CHECK(conditional_partition_entropy(mu, beta, singles).nats == doctest::Approx(0.0));
  const auto triv = SetFamily::trivial(Carrier::points(s));
  CHECK(conditional_partition_entropy(mu, singles, triv).nats == doctest::Approx(std::log(3.0)));
}

TEST_CASE("conditional cover count") {
  auto s = three_points();
  const auto U = pts(s, {{0, 1}, {1, 2}});
  CHECK(conditional_cover_count(U, SetFamily::trivial(Carrier::points(s))) == 2);
  CHECK(conditional_cover_count(U, pts(s, {{0}, {1, 2}}, FamilyKind::Partition)) == 1);
  CHECK(conditional_cover_count(U, pts(s, {{0, 2}, {1}}, FamilyKind::Partition)) == 2);
}

TEST_CASE("cover entropy") {
  auto s = three_points();
  const auto U = pts(s, {{0, 1}, {1, 2}});
  const auto mu = uniform3(s);
  const auto h = cover_entropy(mu, U);
  CHECK(h.value.nats == doctest::Approx(kH13).epsilon(1e-12));
  CHECK(h.value.method != Method::HeuristicUpperBound);
  CHECK(h.value.gap == 0.0);

  const Distribution point(Carrier::points(s), {0.0, 1.0, 0.0});
  CHECK(cover_entropy(point, U).value.nats == 0.0);
  const Distribution zero(Carrier::points(s), {0.0, 0.0, 0.0});
  CHECK(cover_entropy(zero, U).value.nats == 0.0);

  const auto alpha = pts(s, {{0}, {1, 2}}, FamilyKind::Partition);
  CHECK(cover_entropy(mu, alpha).value.nats == doctest::Approx(partition_entropy(mu, alpha).nats));
}

TEST_CASE("conditional cover entropy") {
  auto s = three_points();
  const auto U = pts(s, {{0, 1}, {1, 2}});
  const auto mu = uniform3(s);
  const auto r = conditional_cover_entropy(mu, U, pts(s, {{0}, {1, 2}}, FamilyKind::Partition));
  CHECK(r.value.nats == doctest::Approx(0.0));
  CHECK(r.route_a == doctest::Approx(0.0));
  REQUIRE(r.route_c);
  CHECK(*r.route_c == doctest::Approx(0.0));
  CHECK(r.ustar_count == 2);

  const auto un = conditional_cover_entropy(mu, U, SetFamily::trivial(Carrier::points(s)));
  CHECK(un.value.nats == doctest::Approx(kH13));
  CHECK(un.route_b == doctest::Approx(un.route_a).epsilon(1e-9));
}

TEST_CASE("static quantities against brute force") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 300; ++i) {
    const auto inst = verify::random_instance(rng);
    const auto w = verify::build(inst);
    const auto n = conditional_cover_count(w.U, w.beta);
    CHECK(n == verify::brute_count_cond(inst.U, inst.beta));
    const auto r = conditional_cover_entropy(w.mu, w.U, w.beta);
    CHECK(std::abs(r.value.nats - verify::brute_cover_cond(inst.mu, inst.U, inst.beta)) <= kAgreeTol);
    CHECK(r.value.nats >= -kAgreeTol);
    CHECK(r.value.nats <= std::log(static_cast<double>(n)) + kAgreeTol);
  }
}

TEST_CASE("min set cover") {
  const std::size_t n = 6;
  std::vector<BitSet> sets;
  for (std::vector<std::size_t> idx : {std::vector<std::size_t>{0, 1, 2}, {3, 4, 5}, {0, 3}, {1, 4}, {2, 5}})
    sets.push_back(BitSet::of(n, idx));
  CHECK(min_set_cover(sets, BitSet::full(n)) == 2);
  CHECK(min_set_cover(std::span(sets).subspan(2), BitSet::full(n)) == 3);
  CHECK(min_set_cover(sets, BitSet(n)) == 0);
  CHECK_THROWS_AS(min_set_cover(std::span(sets).subspan(0, 1), BitSet::full(n)), Error);
}
