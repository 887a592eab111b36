#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "covent/bitset.hpp"
#include "covent/carrier.hpp"
#include "covent/factor_map.hpp"

namespace covent {

enum class FamilyKind { Cover, Partition };

/// An ordered finite cover or partition of a carrier.
///
/// Element order is part of the identity: two families are equal only if
/// their ordered element lists agree. Elements may be empty (U* partitions
/// keep empty cells), but their union must be the whole carrier, and
/// partition elements must be pairwise disjoint.
class SetFamily {
 public:
  SetFamily(CarrierPtr carrier, std::vector<BitSet> elements, FamilyKind kind);

  static SetFamily from_words(CarrierPtr carrier, const std::vector<std::vector<Word>>& elements,
                              FamilyKind kind);
  static SetFamily from_points(CarrierPtr carrier, const std::vector<std::vector<int>>& elements,
                               FamilyKind kind);
  /// {X}
  static SetFamily trivial(CarrierPtr carrier);
  /// One singleton per carrier index: the window-L cylinder partition.
  static SetFamily cylinders(CarrierPtr carrier);

  const CarrierPtr& carrier() const noexcept { return carrier_; }
  const std::vector<BitSet>& elements() const noexcept { return elements_; }
  const BitSet& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const noexcept { return elements_.size(); }
  FamilyKind kind() const noexcept { return kind_; }
  bool is_partition() const noexcept { return kind_ == FamilyKind::Partition; }
  int window() const noexcept { return carrier_->window(); }

  /// True when the elements are pairwise disjoint, whatever the declared kind.
  bool disjoint() const noexcept;

  friend bool operator==(const SetFamily& a, const SetFamily& b) noexcept {
    return a.carrier_->same_as(*b.carrier_) && a.elements_ == b.elements_;
  }

 private:
  CarrierPtr carrier_;
  std::vector<BitSet> elements_;
  FamilyKind kind_;
};

/// U finer than V: every element of U lies inside some element of V.
bool finer(const SetFamily& U, const SetFamily& V);

/// Drops empty elements, merges identical ones and sorts the rest by
/// (size, ascending index list). This is the canonical form of joins.
SetFamily canonicalize(const SetFamily& F);

/// U v V in canonical form. The result is a partition iff both inputs are.
SetFamily join(const SetFamily& U, const SetFamily& V);

/// The same sets seen at a longer window: each element E becomes the
/// admissible L_new-words whose length-L prefix lies in E.
SetFamily extend_window(const SetFamily& U, int new_window);

/// T^{-s} U. On word carriers the result sits at window L + s and
/// constrains coordinates s..s+L-1; on point carriers it is the preimage
/// under the s-th iterate of the permutation.
SetFamily shift_preimage(const SetFamily& U, int s);

/// U_M^N = join of T^{-n} U for n = M..N, in canonical form. On word
/// carriers the sets are written at window N - M + L relative to
/// coordinate M (so U_M^N and U_0^{N-M} have the same word sets).
SetFamily dynamical_join(const SetFamily& U, int M, int N);

/// One ordered-difference partition {U_s1, U_s2 \ U_s1, ...}.
struct OrderedDifference {
  std::vector<std::size_t> order;  // order[k] = element index of cell k
  SetFamily partition;             // cells in `order` order; empty cells kept
};

/// Lazy stream over Ext(U): one partition per ordering of U's elements
/// (d! emissions, in lexicographic order of permutations).
///
/// With a restriction B, differences are taken inside B and the
/// complement B^c is appended as a final cell, so each emission is still a
/// partition of the carrier.
class ExtPartitions {
 public:
  explicit ExtPartitions(const SetFamily& U, std::optional<BitSet> within = std::nullopt);

  std::optional<OrderedDifference> next();
  void restart();

 private:
  SetFamily U_;
  std::optional<BitSet> within_;
  std::vector<std::size_t> perm_;
  bool done_ = false;
};

/// Lazy stream over U*: each carrier index is assigned to exactly one
/// element containing it. Cells are positionally aligned with U (cell m is
/// inside U_m) and may be empty.
class UStarStream {
 public:
  explicit UStarStream(const SetFamily& U);

  std::optional<SetFamily> next();
  void restart();

 private:
  SetFamily U_;
  std::vector<std::size_t> free_points_;
  std::vector<std::vector<std::size_t>> choices_;
  std::vector<std::size_t> digits_;
  std::vector<int> fixed_;
  bool done_ = false;
};

struct UStarEnumeration {
  std::uint64_t assignment_count = 0;  // saturates at UINT64_MAX
  std::optional<UStarStream> stream;   // empty when the budget refuses

  bool refused() const noexcept { return !stream.has_value(); }
};

inline constexpr std::uint64_t kDefaultUStarBudget = 1'000'000;

/// Exhaustive U* enumeration when prod_w |{m : w in U_m}| <= budget;
/// otherwise a refusal carrying the true count.
UStarEnumeration ustar_enumerate(const SetFamily& U, std::uint64_t budget = kDefaultUStarBudget);

/// sum_m mu(U_m symmetric-difference V_m) for per-index masses.
double family_delta(std::span<const double> masses, const SetFamily& U, const SetFamily& V);

/// phi^{-1} U: U lives on the codomain at window L; the result lives on the
/// domain at window L + b - 1.
SetFamily pullback(const FactorMap& phi, const SetFamily& U);

}  // namespace covent
