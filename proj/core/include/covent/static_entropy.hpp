#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covent/families.hpp"
#include "covent/measures.hpp"

namespace covent {

/// How an entropy value was obtained.
enum class Method { Exact, BranchAndBound, HeuristicUpperBound };

struct EntropyValue {
  double nats = 0.0;
  Method method = Method::Exact;
  /// Known optimality gap; set (to 0) for exact methods, unset for heuristics.
  std::optional<double> gap = 0.0;
};

/// Absolute tolerance, in nats, for every "must agree" check and every
/// inequality slack in the library.
inline constexpr double kAgreeTol = 1e-9;

/// phi(x) = -x log x, phi(0) = 0.
double phi(double x) noexcept;

/// sum_i phi(w_i). Sub-probability vectors are allowed (any disjoint
/// family); negative weights throw.
EntropyValue shannon(std::span<const double> weights);

/// H_mu(alpha) = sum over cells of phi(mu(A)).
EntropyValue partition_entropy(const Distribution& mu, const SetFamily& alpha);

/// H_mu(alpha | beta), computed both as H(alpha v beta) - H(beta) and as
/// sum_B mu(B) H_{mu_B}(alpha). The routes must agree within kAgreeTol
/// (RouteDisagreement otherwise); the per-atom value is returned.
EntropyValue conditional_partition_entropy(const Distribution& mu, const SetFamily& alpha, const SetFamily& beta);

/// N(U | beta) = max over nonempty atoms B of the minimal number of
/// elements of U covering B. Equals 1 exactly when beta is finer than U.
std::size_t conditional_cover_count(const SetFamily& U, const SetFamily& beta);

struct StaticOptions {
  /// U* assignments allowed for the exhaustive third route.
  std::uint64_t ustar_budget = kDefaultUStarBudget;
  /// Branch-and-bound nodes per cover-entropy search before falling back
  /// to the greedy upper bound.
  std::uint64_t node_budget = 10'000'000;
  bool route_c = true;
};

struct CoverEntropy {
  EntropyValue value;
  /// Minimizing U* partition as an element index per carrier index; -1 off
  /// the support of the measure.
  std::vector<int> assignment;
  std::uint64_t nodes = 0;
};

/// H_mu(U) = min over Ext(U) (equivalently U*) of sum phi(mu(cell)).
///
/// Exact branch and bound over element orderings. Within the remaining
/// set R only traces U_m cap R matter; traces contained in another trace
/// are dropped, traces that do not overlap split the problem into
/// independent parts, and the remaining cost is bounded below by the
/// entropy of the greedy-filled vector that majorizes every feasible cell
/// vector. Solved subproblems are memoized by R. On node-budget overflow
/// the greedy value is returned with method HeuristicUpperBound.
///
/// The measure need not be normalized or invariant; a zero measure gives 0.
CoverEntropy cover_entropy(const Distribution& mu, const SetFamily& U, const StaticOptions& opts = {});
CoverEntropy cover_entropy(const ConditionalMeasure& mu_B, const SetFamily& U, const StaticOptions& opts = {});

struct CoverConditionalEntropy {
  EntropyValue value;
  double route_a = 0.0;  // sum_B mu(B) H_{mu_B}(U)
  double route_b = 0.0;  // H_mu(alpha | beta) for the glued per-atom minimizer alpha
  std::optional<double> route_c;  // min over U* of H_mu(alpha | beta), when within budget
  std::uint64_t ustar_count = 0;
  std::uint64_t nodes = 0;
  std::optional<SetFamily> glued;
};

/// H_mu(U | beta) by the per-atom definition and by the infimum over
/// partitions finer than U. Route A and route B must agree within
/// kAgreeTol, and route C as well when it fits the U* budget;
/// disagreement throws RouteDisagreement.
CoverConditionalEntropy conditional_cover_entropy(const Distribution& mu, const SetFamily& U,
                                                  const SetFamily& beta, const StaticOptions& opts = {});

}  // namespace covent
