#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/static_entropy.hpp"
#include "covent/verify/random.hpp"

namespace covent::verify {

enum class Level { Fast, Full };

int instances_for(Level level);

struct PropertyOutcome {
  std::string name;
  int instances = 0;
  int failures = 0;
  std::string detail;          // failure message for the shrunk instance
  std::string counterexample;  // shrunk instance, serialized
  int counterexample_points = 0;
  double seconds = 0.0;

  bool passed() const noexcept { return failures == 0; }
};

/// nullopt when the instance satisfies the property, a message otherwise.
using Check = std::function<std::optional<std::string>(const PointInstance&)>;

/// Checks `count` random instances drawn from `seed`; the first failing
/// instance is shrunk while it keeps failing. Exceptions count as failures.
PropertyOutcome run_property(const std::string& name, int count, std::uint64_t seed, const Check& check,
                             const InstanceShape& shape = {});

/// The static quantities under test. Defaults to the library; tests swap
/// in deliberately broken versions to see the suites catch them.
struct StaticImpl {
  std::function<std::size_t(const SetFamily&, const SetFamily&)> count = conditional_cover_count;
  std::function<double(const Distribution&, const SetFamily&, const SetFamily&)> entropy =
      [](const Distribution& mu, const SetFamily& U, const SetFamily& beta) {
        return conditional_cover_entropy(mu, U, beta).value.nats;
      };
};

struct NamedCheck {
  std::string name;
  Check check;
};

/// Route equality against the brute-force oracle.
std::vector<NamedCheck> route_checks();
/// Bounds, shift invariance, monotonicity and subadditivity of H(U|beta)
/// and N(U|beta), with N >= 1.
std::vector<NamedCheck> axiom_checks(const StaticImpl& impl = {});
/// Set-cover, cover entropy and Ext/U* oracles, nesting, concavity and
/// family algebra.
std::vector<NamedCheck> oracle_checks();

/// Every check above at the level's instance count.
std::vector<PropertyOutcome> run_suites(Level level, std::uint64_t seed, const StaticImpl& impl = {});

}  // namespace covent::verify
