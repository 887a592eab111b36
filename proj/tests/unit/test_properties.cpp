#include <string>

#include "covent/verify/properties.hpp"
#include "doctest.h"

using namespace covent;
using namespace covent::verify;

TEST_CASE("property suites pass") {
  for (const auto& o : run_suites(Level::Fast, 42)) {
    INFO(o.name << ": " << o.detail << "\n" << o.counterexample);
    CHECK(o.passed());
    CHECK(o.instances == instances_for(Level::Fast));
  }
}

namespace {

int caught(const StaticImpl& impl) {
  int failing = 0;
  for (const auto& c : axiom_checks(impl)) {
    const auto o = run_property(c.name, 200, 5, c.check);
    if (o.passed()) continue;
    ++failing;
    CHECK(o.counterexample_points <= 8);
    CHECK_FALSE(o.counterexample.empty());
  }
  return failing;
}

}  // namespace

TEST_CASE("axiom suites catch an off-by-one count") {
  StaticImpl plus;
  plus.count = [](const SetFamily& U, const SetFamily& beta) { return conditional_cover_count(U, beta) + 1; };
  CHECK(caught(plus) > 0);

  StaticImpl minus;
  minus.count = [](const SetFamily& U, const SetFamily& beta) { return conditional_cover_count(U, beta) - 1; };
  CHECK(caught(minus) > 0);
}

TEST_CASE("axiom suites catch a shifted entropy") {
  StaticImpl shifted;
  shifted.entropy = [](const Distribution& mu, const SetFamily& U, const SetFamily& beta) {
    return conditional_cover_entropy(mu, U, beta).value.nats + 0.01;
  };
  CHECK(caught(shifted) > 0);
}

TEST_CASE("shrinking keeps a failing instance small") {
  const auto o = run_property("eight_points_or_fewer_fail", 50, 1, [](const PointInstance& inst) -> std::optional<std::string> {
    if (inst.points() >= 3) return "at least three points";
    return std::nullopt;
  });
  REQUIRE_FALSE(o.passed());
  CHECK(o.counterexample_points == 3);
}
