#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/systems.hpp"
#include "covent/verify/oracles.hpp"

namespace covent::verify {

/// A small problem on a permutation system: two covers, a partition beta,
/// a coarsening gamma of beta, and two invariant rational measures.
struct PointInstance {
  std::vector<int> perm;
  Sets U;
  Sets V;
  Labels beta;
  Labels gamma;
  std::vector<double> mu;
  std::vector<double> nu;

  int points() const { return static_cast<int>(perm.size()); }
};

struct InstanceShape {
  int max_points = 8;
  int max_elements = 4;
  int max_numerator = 6;  // measure weights are k / total with k in 0..max_numerator
};

PointInstance random_instance(std::mt19937_64& rng, const InstanceShape& shape = {});

/// Smaller variants: one point spliced out of its cycle, or one element
/// dropped when the rest still covers.
std::vector<PointInstance> shrink_candidates(const PointInstance& inst);

std::string describe(const PointInstance& inst);

/// Library objects built from an instance.
struct PointWorld {
  SystemPtr sys;
  CarrierPtr carrier;
  SetFamily U;
  SetFamily V;
  SetFamily beta;
  SetFamily gamma;
  Distribution mu;
  Distribution nu;
};

PointWorld build(const PointInstance& inst);

SetFamily make_cover(const CarrierPtr& c, const Sets& sets);
SetFamily make_partition(const CarrierPtr& c, const Labels& labels);

/// Random subsets of {0..n-1} that together cover it.
Sets random_cover_sets(std::mt19937_64& rng, int n, int elements);

}  // namespace covent::verify
