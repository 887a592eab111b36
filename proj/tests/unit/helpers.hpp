#pragma once

#include <cmath>
#include <vector>

#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/systems.hpp"

namespace testing {

using namespace covent;

inline const double kPhi = (1.0 + std::sqrt(5.0)) / 2.0;
inline const double kLogPhi = std::log(kPhi);

inline SystemPtr golden() { return share(SymbolicSystem::sft({{1, 1}, {1, 0}})); }
inline SystemPtr full(int k) { return share(SymbolicSystem::full_shift(k)); }

inline InvariantMeasure parry(const SystemPtr& g) {
  return InvariantMeasure::markov(g, {{1.0 / kPhi, 1.0 / (kPhi * kPhi)}, {1.0, 0.0}});
}

inline SetFamily words(const SystemPtr& sys, const std::vector<std::vector<Word>>& sets,
                       FamilyKind kind = FamilyKind::Cover) {
  return SetFamily::from_words(Carrier::words(sys, static_cast<int>(sets.at(0).at(0).size())), sets, kind);
}

inline SetFamily cyl(const SystemPtr& sys, int window = 1) { return SetFamily::cylinders(Carrier::words(sys, window)); }
inline SetFamily whole(const SystemPtr& sys, int window = 1) { return SetFamily::trivial(Carrier::words(sys, window)); }

/// Three fixed points a, b, c = 0, 1, 2.
inline SystemPtr three_points() { return share(SymbolicSystem::permutation({0, 1, 2})); }

inline SetFamily pts(const SystemPtr& sys, const std::vector<std::vector<int>>& sets,
                     FamilyKind kind = FamilyKind::Cover) {
  return SetFamily::from_points(Carrier::points(sys), sets, kind);
}

inline Distribution uniform3(const SystemPtr& sys) {
  return Distribution(Carrier::points(sys), {1.0 / 3, 1.0 / 3, 1.0 / 3});
}

}  // namespace testing
