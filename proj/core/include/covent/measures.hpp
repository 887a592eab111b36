#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "covent/bitset.hpp"
#include "covent/carrier.hpp"
#include "covent/factor_map.hpp"
#include "covent/families.hpp"
#include "covent/systems.hpp"

namespace covent {

using Matrix = std::vector<std::vector<double>>;

enum class MeasureKind {
  Markov,   // stationary vector + stochastic matrix on a word system
  Points,   // T-invariant point weights on a permutation system
  Mixture,  // convex combination that is not itself Markov
  Image,    // pushforward of a word-system measure under a sliding-block code
};

struct ErgodicComponent;

/// A T-invariant probability measure on a finite symbolic system.
///
/// Markov measures check row-stochasticity (1e-12), support inside the
/// SFT (P_ij > 0 only on allowed transitions) and stationarity (1e-10).
/// Point measures must be constant on each cycle.
class InvariantMeasure {
 public:
  static InvariantMeasure markov(SystemPtr sys, Matrix P, std::optional<std::vector<double>> pi = std::nullopt);
  static InvariantMeasure bernoulli(SystemPtr sys, std::vector<double> p);
  static InvariantMeasure on_points(SystemPtr sys, std::vector<double> weights);
  /// One weight per cycle, cycles ordered as SymbolicSystem::cycles().
  static InvariantMeasure cycles(SystemPtr sys, std::vector<double> cycle_weights);
  static InvariantMeasure image(const FactorMap& phi, const InvariantMeasure& source);

  MeasureKind kind() const noexcept { return kind_; }
  const SystemPtr& system() const noexcept { return system_; }

  const std::vector<double>& stationary() const;
  const Matrix& transition() const;
  const std::vector<double>& point_weights() const;
  const std::vector<ErgodicComponent>& parts() const;

  /// mu([w]); for point systems w is a single point.
  double cylinder_mass(std::span<const int> w) const;
  /// Mass of every element of the carrier, in carrier order.
  std::vector<double> masses(const Carrier& carrier) const;

 private:
  friend InvariantMeasure mix(const std::vector<ErgodicComponent>& components);

  InvariantMeasure() = default;

  MeasureKind kind_ = MeasureKind::Markov;
  SystemPtr system_;
  std::vector<double> pi_;
  Matrix P_;
  std::vector<double> weights_;
  std::shared_ptr<const std::vector<ErgodicComponent>> parts_;
  std::shared_ptr<const FactorMap> factor_;
  std::shared_ptr<const InvariantMeasure> source_;
};

struct ErgodicComponent {
  double weight = 0.0;
  InvariantMeasure measure;
};

/// A (sub-)probability on one carrier, stored as per-index masses.
class Distribution {
 public:
  Distribution(CarrierPtr carrier, std::vector<double> masses);

  const CarrierPtr& carrier() const noexcept { return carrier_; }
  std::span<const double> masses() const noexcept { return masses_; }
  double operator[](std::size_t i) const { return masses_[i]; }
  double of(const BitSet& set) const noexcept { return set.weight(masses_); }
  double total() const noexcept { return total_; }
  /// Indices with strictly positive mass.
  BitSet support() const;

 private:
  CarrierPtr carrier_;
  std::vector<double> masses_;
  double total_ = 0.0;
};

Distribution distribution(const InvariantMeasure& mu, const CarrierPtr& carrier);

/// mu_B. When mu(B) = 0 this is the distinguished zero measure, whose
/// entropies are all zero.
struct ConditionalMeasure {
  BitSet atom;
  double base_mass = 0.0;
  Distribution weights;

  bool is_zero() const noexcept { return base_mass <= 0.0; }
};

ConditionalMeasure condition_on(const Distribution& mu, const BitSet& B);
ConditionalMeasure condition_on(const InvariantMeasure& mu, const CarrierPtr& carrier, const BitSet& B);

/// Unique stationary vector of a stochastic matrix with a single closed
/// class (transient states get mass 0). Throws ReducibleChain when there
/// is more than one closed class.
std::vector<double> stationary_of(const Matrix& P);

/// Closed communicating classes of P, each sorted, ordered by least state.
std::vector<std::vector<int>> closed_classes(const Matrix& P);

/// Finite ergodic decomposition: one component per closed class carrying
/// stationary mass (Markov) or per cycle (points). Zero-weight components
/// are omitted.
std::vector<ErgodicComponent> ergodic_decompose(const InvariantMeasure& mu);

/// Convex combination. Weights must sum to 1 within 1e-12. Point measures
/// and Markov measures with pairwise disjoint supports combine into a
/// measure of the same kind; anything else becomes a Mixture.
InvariantMeasure mix(const std::vector<ErgodicComponent>& components);

/// The measure of the M-th power system seen on non-overlapping M-blocks.
InvariantMeasure power_measure(const InvariantMeasure& mu, const SystemPtr& power_sys, int M);

double family_delta(const Distribution& mu, const SetFamily& U, const SetFamily& V);

}  // namespace covent
