#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/static_entropy.hpp"

namespace covent {

enum class Exactness {
  ExactConstant,        // a_N / N identical for every computed N
  UpperBoundCertified,  // running_inf bounds the limit from above
  Truncated,            // some a_N is itself only an upper bound
};

std::string to_string(Exactness e);

struct SequenceTerm {
  int n = 0;
  double a = 0.0;
  double rate = 0.0;  // a / n
};

/// Estimate of lim a_N / N = inf_N a_N / N for a subadditive sequence.
struct EntropyEstimate {
  std::vector<SequenceTerm> sequence;
  double running_inf = 0.0;
  /// |a_{n_max}/n_max - a_{n_max-1}/(n_max-1)|
  double stabilization_gap = 0.0;
  /// a_{n_max} - a_{n_max-1}. For a partition under an invariant measure
  /// this is H(alpha | alpha_1^{n_max-1}, ...) which decreases to the rate
  /// and equals it for Markov measures once n_max >= 2.
  double increment = 0.0;
  int n_max = 0;
  Exactness exactness = Exactness::UpperBoundCertified;

  double a(int N) const { return sequence.at(static_cast<std::size_t>(N - 1)).a; }
};

inline constexpr double kSubadditiveTol = 1e-9;

/// Evaluates a(1..n_max), audits a_{N+M} <= a_N + a_M + 1e-9 for every
/// computed pair (SubadditivityViolation naming N and M otherwise) and
/// assembles the estimate.
EntropyEstimate subadditive_estimate(const std::function<double(int)>& a, int n_max);

/// Same, from precomputed terms a_1..a_n. Truncated sequences skip the
/// audit: their terms are upper bounds only.
EntropyEstimate estimate_from_terms(std::span<const double> a, bool truncated = false);

/// U_0^{N-1} for N = 1..n_max (element N-1 of the result).
std::vector<SetFamily> join_ladder(const SetFamily& U, int n_max);

/// Joins of a family and a conditioner computed once, for evaluating the
/// per-N sequences under many measures.
class JoinPair {
 public:
  JoinPair(const SetFamily& U, const SetFamily& beta, int n_max);

  int n_max() const noexcept { return static_cast<int>(U_.size()); }
  const std::vector<SetFamily>& cover() const noexcept { return U_; }
  const std::vector<SetFamily>& conditioner() const noexcept { return B_; }
  bool partition() const noexcept { return partition_; }

  /// a_N = H_mu(U_0^{N-1} | beta_0^{N-1}) by the cover route, or by the
  /// partition formula when U is disjoint. `truncated` is set when a term
  /// is a heuristic upper bound.
  std::vector<double> terms(const InvariantMeasure& mu, const StaticOptions& opts, bool* truncated) const;
  EntropyEstimate rate(const InvariantMeasure& mu, const StaticOptions& opts = {}) const;
  EntropyEstimate counting() const;

 private:
  std::vector<SetFamily> U_;
  std::vector<SetFamily> B_;
  bool partition_ = false;
};

/// h_mu(alpha | beta, T). alpha and beta must share a carrier.
EntropyEstimate h_partition_cond(const InvariantMeasure& mu, const SetFamily& alpha, const SetFamily& beta,
                                 int n_max);

/// h^-_mu(U | beta, T) from a_N = H_mu(U_0^{N-1} | beta_0^{N-1}).
EntropyEstimate h_minus(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta, int n_max,
                        const StaticOptions& opts = {});

/// h(U | beta, T) from a_N = log N(U_0^{N-1} | beta_0^{N-1}).
EntropyEstimate h_top_cond(const SetFamily& U, const SetFamily& beta, int n_max);

struct HPlusResult {
  EntropyEstimate estimate;
  std::optional<SetFamily> best;
  int window = 0;
  std::uint64_t candidates = 0;
  /// U* at this window was over budget and only Ext(U) was searched.
  bool ext_fallback = false;
};

/// Minimum of h_mu(alpha | beta, T) over alpha in U* of U seen at
/// `window`, ranked by running_inf. beta is extended to the same window
/// when shorter.
HPlusResult h_plus(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta, int n_max, int window,
                   std::uint64_t budget = kDefaultUStarBudget);

/// F (on a word system at window W) rewritten on the carrier of the M-th
/// power system at window ceil(W / M). Point families move to the power
/// system's point carrier unchanged.
SetFamily recode_to_power(const SetFamily& F, const SystemPtr& power_sys, int M);

struct PowerIdentityReport {
  int M = 1;
  int n_max = 0;
  std::vector<double> lhs;   // a_{M n} for T, n = 1..n_max
  std::vector<double> rhs;   // a_n for T^M with U_0^{M-1}, beta_0^{M-1}
  std::vector<double> gaps;  // |lhs - rhs|
  double max_gap = 0.0;
  bool truncated = false;
};

/// Matched sequences of h^- for T and T^M.
PowerIdentityReport power_identity_check(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta,
                                         int M, int n_max, const StaticOptions& opts = {});

}  // namespace covent
