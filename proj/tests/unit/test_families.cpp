#include <random>
#include <set>

#include "covent/error.hpp"
#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/verify/oracles.hpp"
#include "covent/verify/random.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace covent;
using namespace testing;

namespace {
verify::Sets sets_of(const SetFamily& F) { return verify::to_sets(F); }
}  // namespace

TEST_CASE("finer") {
  auto s = three_points();
  const auto singles = pts(s, {{0}, {1}, {2}});
  const auto U = pts(s, {{0, 1}, {1, 2}});
  CHECK(finer(singles, U));
  CHECK_FALSE(finer(U, singles));
  CHECK(finer(U, U));
}

TEST_CASE("join") {
  auto s = three_points();
  const auto U = pts(s, {{0, 1}, {1, 2}});
  const auto V = pts(s, {{0}, {1, 2}});
  CHECK(sets_of(join(U, V)) == verify::Sets{{0}, {1}, {1, 2}});
  CHECK(join(U, SetFamily::trivial(U.carrier())) == canonicalize(U));
  const auto alpha = pts(s, {{0}, {1, 2}}, FamilyKind::Partition);
  CHECK(join(alpha, alpha) == canonicalize(alpha));
  CHECK(join(alpha, alpha).is_partition());
  CHECK_FALSE(join(U, V).is_partition());
}

TEST_CASE("join drops repeated intersections") {
  // {a,b} and {b,c} both meet {b}
  auto s = three_points();
  const auto U = pts(s, {{0, 1}, {1, 2}});
  const auto V = pts(s, {{0}, {1}, {2}});
  CHECK(finer(V, U));
  std::size_t raw = 0;
  for (const auto& u : U.elements())
    for (const auto& v : V.elements()) raw += (u & v).any();
  CHECK(raw == 4);
  CHECK(join(U, V).size() == 3);
}

TEST_CASE("extend_window") {
  auto f = full(2);
  const auto U = cyl(f);
  CHECK(sets_of(extend_window(U, 2))[0] == std::vector<int>{0, 1});  // {00, 01}
  auto g = golden();
  const auto one = words(g, {{{1}}, {{0}}});
  const auto e = extend_window(one, 2);
  CHECK(e.carrier()->label(e[0].find_first()) == "10");
  CHECK(e[0].count() == 1);
  CHECK(extend_window(U, 1) == U);
}

TEST_CASE("dynamical_join") {
  const auto a = dynamical_join(cyl(full(2)), 0, 1);
  CHECK(a.size() == 4);
  for (const auto& e : a.elements()) CHECK(e.count() == 1);
  const auto b = dynamical_join(cyl(golden()), 0, 1);
  CHECK(b.size() == 3);
  const auto U = words(golden(), {{{0, 0}, {1, 0}}, {{0, 1}, {1, 0}}});
  CHECK(dynamical_join(U, 0, 0) == canonicalize(U));
}

TEST_CASE("dynamical_join splits into consecutive blocks") {
  auto f = full(2);
  const auto U = words(f, {{{0}}, {{0}, {1}}});
  const auto V = words(f, {{{0, 0}, {0, 1}, {1, 1}}, {{0, 1}, {1, 0}}});
  for (const auto& W : {U, V})
    for (int N = 1; N <= 3; ++N)
      for (int M = 1; M <= 2; ++M) {
        const auto whole = dynamical_join(W, 0, N + M - 1);
        const auto head = extend_window(dynamical_join(W, 0, N - 1), whole.window());
        const auto tail = shift_preimage(dynamical_join(W, N, N + M - 1), N);
        CHECK(whole == join(head, extend_window(tail, whole.window())));
      }
}

TEST_CASE("Ext partitions") {
  auto s = three_points();
  const auto U = pts(s, {{0, 1}, {1, 2}});
  ExtPartitions ext(U);
  std::set<verify::Sets> seen;
  int count = 0;
  while (auto d = ext.next()) {
    ++count;
    auto c = sets_of(d->partition);
    std::sort(c.begin(), c.end());
    seen.insert(c);
  }
  CHECK(count == 2);
  CHECK(seen == std::set<verify::Sets>{{{0, 1}, {2}}, {{0}, {1, 2}}});

  const auto alpha = pts(s, {{0}, {1}, {2}}, FamilyKind::Partition);
  ExtPartitions pe(alpha);
  int n = 0;
  while (auto d = pe.next()) {
    ++n;
    CHECK(canonicalize(d->partition) == canonicalize(alpha));
  }
  CHECK(n == 6);

  ExtPartitions one(SetFamily::trivial(Carrier::points(s)));
  CHECK(one.next()->partition.size() == 1);
  CHECK_FALSE(one.next());
}

TEST_CASE("U* enumeration") {
  auto s = three_points();
  auto e = ustar_enumerate(pts(s, {{0, 1}, {1, 2}}));
  CHECK(e.assignment_count == 2);
  std::set<verify::Sets> seen;
  while (auto a = e.stream->next()) seen.insert(sets_of(*a));
  CHECK(seen == std::set<verify::Sets>{{{0, 1}, {2}}, {{0}, {1, 2}}});

  const auto alpha = pts(s, {{0}, {1, 2}}, FamilyKind::Partition);
  auto p = ustar_enumerate(alpha);
  CHECK(p.assignment_count == 1);
  CHECK(*p.stream->next() == alpha);

  auto triple = ustar_enumerate(pts(s, {{0, 1}, {1}, {1, 2}}));
  CHECK(triple.assignment_count == 3);

  auto refused = ustar_enumerate(pts(s, {{0, 1}, {1, 2}}), 1);
  CHECK(refused.refused());
  CHECK(refused.assignment_count == 2);
}

TEST_CASE("family_delta") {
  auto s = three_points();
  const auto mu = uniform3(s);
  const auto U = pts(s, {{0, 1}, {1, 2}});
  CHECK(family_delta(mu, U, U) == 0.0);
  CHECK(family_delta(mu, U, pts(s, {{0}, {1, 2}})) == doctest::Approx(1.0 / 3));
  const auto A = pts(s, {{0}, {1}, {2}});
  const auto B = pts(s, {{1}, {0}, {2}});
  CHECK(family_delta(mu, A, B) == doctest::Approx(4.0 / 3));
}

TEST_CASE("pullback") {
  auto g = golden();
  const auto id = FactorMap::identity(g);
  const auto U = words(g, {{{0}}, {{0}, {1}}});
  CHECK(pullback(id, U) == U);

  const auto phi = FactorMap::higher_block(g, 2);
  const auto back = pullback(phi, cyl(phi.codomain()));
  CHECK(back.window() == 2);
  CHECK(back.size() == 3);
  for (const auto& e : back.elements()) CHECK(e.count() == 1);

  const auto c = FactorMap::constant(g);
  CHECK(pullback(c, whole(c.codomain())) == whole(g));
}

TEST_CASE("pullback commutes with joins") {
  auto g = golden();
  const auto phi = FactorMap::higher_block(g, 2);
  auto Y = phi.codomain();
  const auto U = words(Y, {{{0}, {1}}, {{1}, {2}}});
  const auto V = words(Y, {{{0}}, {{1}, {2}}});
  CHECK(pullback(phi, join(U, V)) == join(pullback(phi, U), pullback(phi, V)));
  for (int N = 1; N <= 3; ++N) {
    const auto a = pullback(phi, dynamical_join(U, 0, N));
    const auto b = dynamical_join(pullback(phi, U), 0, N);
    CHECK(a == b);
  }
}

TEST_CASE("random families keep the algebra laws") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto inst = verify::random_instance(rng);
    const auto w = verify::build(inst);
    const auto J = join(w.U, w.V);
    CHECK(finer(J, w.U));
    CHECK(finer(J, w.V));
    auto e = ustar_enumerate(w.U);
    while (auto a = e.stream->next()) CHECK(finer(*a, w.U));
  }
}

TEST_CASE("invalid families") {
  auto s = three_points();
  CHECK_THROWS_AS(pts(s, {{0}, {1}}), Error);
  CHECK_THROWS_AS(pts(s, {{0, 1}, {1, 2}}, FamilyKind::Partition), Error);
  CHECK_THROWS_AS(join(pts(s, {{0, 1, 2}}), whole(full(2))), Error);
}
