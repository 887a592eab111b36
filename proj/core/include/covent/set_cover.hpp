#pragma once

#include <cstdint>
#include <span>

#include "covent/bitset.hpp"

namespace covent {

struct SetCoverStats {
  std::uint64_t nodes = 0;
};

/// Exact minimum number of sets whose union contains `target`.
///
/// Depth-first branch and bound: a greedy cover gives the first upper
/// bound, ceil(|uncovered| / largest set) the lower bound. Each node first
/// drops dominated sets, takes sets forced by points with a single
/// covering set, and splits into independent components. Throws
/// Internal if some target point lies in no set.
std::size_t min_set_cover(std::span<const BitSet> sets, const BitSet& target, SetCoverStats* stats = nullptr);

}  // namespace covent
