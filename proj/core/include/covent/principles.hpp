#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "covent/dynamic_entropy.hpp"
#include "covent/factor_map.hpp"
#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/static_entropy.hpp"

namespace covent {

/// Identities that hold exactly per N may be Violated; limit statements are
/// only ever HoldsWithinTol or BracketOpen.
enum class Verdict { HoldsWithinTol, BracketOpen, Violated };

std::string to_string(Verdict v);

struct NamedEstimate {
  std::string name;
  EntropyEstimate estimate;
};

struct SearchTraceEntry {
  int start = 0;
  int iterations = 0;
  double value = 0.0;
  bool converged = false;
};

struct PrincipleReport {
  std::string check;
  std::string lhs_name;
  std::string rhs_name;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  int n_max = 0;
  Verdict verdict = Verdict::HoldsWithinTol;
  std::vector<double> per_n_gaps;
  /// Per-window or per-candidate values, as labelled in `notes`.
  std::vector<double> series;
  std::vector<NamedEstimate> estimates;
  std::vector<std::string> notes;
  std::vector<SearchTraceEntry> trace;
  std::optional<Matrix> best_transition;
};

inline constexpr double kIdentityTol = 1e-9;
inline constexpr double kBracketTol = 2e-2;

/// nu = mu o phi^{-1}. The identity code returns mu itself.
InvariantMeasure pushforward(const FactorMap& phi, const InvariantMeasure& mu);

/// Per-N equality of H_nu(U_0^{N-1} | beta_0^{N-1}) with the pulled-back
/// sequence on the domain, and likewise for log N.
PrincipleReport factor_invariance_check(const FactorMap& phi, const InvariantMeasure& mu, const SetFamily& U,
                                        const SetFamily& beta, int n_max, const StaticOptions& opts = {});

struct VariationalOptions {
  int starts = 8;
  int max_iterations = 300;
  double step = 1.0;
  double size_tol = 1e-6;
  std::uint64_t seed = 42;
  double tolerance = kBracketTol;
  StaticOptions inner{kDefaultUStarBudget, 10'000'000, false};
};

/// Maximizes the h^- running infimum over Markov measures on an
/// irreducible SFT. Row i of P is a softmax of free logits on the allowed
/// successors of i (the last logit fixed to 0); Nelder-Mead runs from the
/// uniform-row point and from starts-1 Gaussian points drawn from `seed`.
/// The best measure is re-evaluated with the exhaustive U* route on.
PrincipleReport variational_search(const SystemPtr& sys, const SetFamily& U, const SetFamily& beta, int n_max,
                                   const VariationalOptions& opts = {});

struct MinmaxOptions {
  bool refine = true;  // add a variational search per candidate
  double tolerance = kIdentityTol;
  VariationalOptions search{};
};

/// min over alpha in U*(U at `window`) of the max over `grid` (plus an
/// optional variational refinement) of h_mu(alpha | beta) against
/// h(U | beta).
PrincipleReport minmax_check(const SystemPtr& sys, const SetFamily& U, const SetFamily& beta,
                             const std::vector<InvariantMeasure>& grid, int n_max, int window,
                             const MinmaxOptions& opts = {});

/// h^- against the window-indexed h^+ minima; width is the last h^+
/// running infimum minus the h^- one.
PrincipleReport plus_minus_bracket(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta, int n_max,
                                   const std::vector<int>& windows, double tolerance = kBracketTol,
                                   const StaticOptions& opts = {});

/// Mixed-measure estimate against the weighted component estimates.
/// Partitions compare limit increments at tolerance max(2 gap, 1e-6);
/// covers check the per-N bracket
///   sum_i w_i a_N(mu_i) <= a_N(mu) <= sum_i w_i a_N(mu_i) + H(w).
PrincipleReport ergodic_additivity_check(const std::vector<ErgodicComponent>& components, const SetFamily& U,
                                         const SetFamily& beta, int n_max, const StaticOptions& opts = {});

/// H_mu(U | phi^{-1} C_w) and h^-_mu(U | phi^{-1} C_w) over codomain
/// w-cylinder partitions C_w, asserted nonincreasing in w.
PrincipleReport factor_conditioned_inf(const InvariantMeasure& mu, const FactorMap& phi, const SetFamily& U,
                                       const std::vector<int>& windows, int n_max, const StaticOptions& opts = {});

}  // namespace covent
