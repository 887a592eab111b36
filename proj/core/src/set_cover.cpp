#include "covent/set_cover.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "covent/error.hpp"

namespace covent {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 4;

class CoverSearch {
 public:
  explicit CoverSearch(SetCoverStats* stats) : stats_(stats) {}

  /// Exact minimum if it is below `limit`; otherwise some value >= limit.
  std::size_t solve(BitSet uncovered, std::vector<BitSet> sets, std::size_t limit) {
    if (stats_) ++stats_->nodes;
    std::size_t forced = 0;
    while (true) {
      if (uncovered.none()) return forced;
      reduce(uncovered, sets);
      const std::size_t n = take_forced(uncovered, sets);
      if (n == 0) break;
      forced += n;
      if (forced >= limit) return forced;
    }
    if (uncovered.none()) return forced;

    auto comps = components(uncovered, sets);
    if (comps.size() > 1) {
      std::vector<std::size_t> lbs(comps.size());
      std::size_t lb_sum = 0;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        lbs[c] = lower_bound(comps[c].first, comps[c].second);
        lb_sum += lbs[c];
      }
      if (forced + lb_sum >= limit) return forced + lb_sum;
      std::size_t acc = forced;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        lb_sum -= lbs[c];
        const std::size_t allowed = limit - acc - lb_sum;
        const std::size_t v = solve(comps[c].first, std::move(comps[c].second), allowed);
        acc += v;
        if (v >= allowed) return acc + lb_sum;
      }
      return acc;
    }

    if (forced + lower_bound(uncovered, sets) >= limit) return forced + lower_bound(uncovered, sets);

    // Branch on the uncovered point with the fewest covering sets.
    std::size_t pivot = BitSet::npos, fewest = kInf;
    uncovered.for_each([&](std::size_t p) {
      std::size_t c = 0;
      for (const auto& s : sets) c += s.test(p) ? 1 : 0;
      if (c < fewest) {
        fewest = c;
        pivot = p;
      }
    });
    std::vector<std::size_t> branch;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (sets[i].test(pivot)) branch.push_back(i);
    std::sort(branch.begin(), branch.end(),
              [&](std::size_t a, std::size_t b) { return sets[a].count() > sets[b].count(); });

    std::size_t best = limit - forced;
    for (auto i : branch) {
      if (best <= 1) break;
      BitSet rest = uncovered - sets[i];
      const std::size_t v = 1 + solve(std::move(rest), sets, best - 1);
      if (v < best) best = v;
    }
    return forced + best;
  }

 private:
  static void reduce(const BitSet& uncovered, std::vector<BitSet>& sets) {
    for (auto& s : sets) s &= uncovered;
    sets.erase(std::remove_if(sets.begin(), sets.end(), [](const BitSet& s) { return s.none(); }), sets.end());
    std::sort(sets.begin(), sets.end(), [](const BitSet& a, const BitSet& b) { return a.count() > b.count(); });
    std::vector<BitSet> kept;
    for (auto& s : sets) {
      const bool dominated =
          std::any_of(kept.begin(), kept.end(), [&](const BitSet& k) { return s.is_subset_of(k); });
      if (!dominated) kept.push_back(std::move(s));
    }
    sets = std::move(kept);
  }

  static std::size_t take_forced(BitSet& uncovered, std::vector<BitSet>& sets) {
    std::vector<char> take(sets.size(), 0);
    bool any = false;
    uncovered.for_each([&](std::size_t p) {
      std::size_t owner = kInf, hits = 0;
      for (std::size_t i = 0; i < sets.size() && hits < 2; ++i)
        if (sets[i].test(p)) {
          owner = i;
          ++hits;
        }
      if (hits == 0) fail(ErrorCode::Internal, "set cover: a point lies in no set");
      if (hits == 1) {
        take[owner] = 1;
        any = true;
      }
    });
    if (!any) return 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < sets.size(); ++i)
      if (take[i]) {
        uncovered.subtract(sets[i]);
        ++n;
      }
    return n;
  }

  static std::size_t lower_bound(const BitSet& uncovered, const std::vector<BitSet>& sets) {
    std::size_t biggest = 0;
    for (const auto& s : sets) biggest = std::max(biggest, (s & uncovered).count());
    if (biggest == 0) return kInf;
    const std::size_t u = uncovered.count();
    return (u + biggest - 1) / biggest;
  }

  static std::vector<std::pair<BitSet, std::vector<BitSet>>> components(const BitSet& uncovered,
                                                                         const std::vector<BitSet>& sets) {
    const std::size_t n = sets.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (sets[i].intersects(sets[j])) parent[find(i)] = find(j);
    std::vector<std::pair<BitSet, std::vector<BitSet>>> out;
    std::vector<std::size_t> slot(n, kInf);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = find(i);
      if (slot[r] == kInf) {
        slot[r] = out.size();
        out.push_back({BitSet(uncovered.size()), {}});
      }
      auto& c = out[slot[r]];
      c.first |= sets[i];
      c.second.push_back(sets[i]);
    }
    return out;
  }

  SetCoverStats* stats_;
};

}  // namespace

std::size_t min_set_cover(std::span<const BitSet> sets, const BitSet& target, SetCoverStats* stats) {
  if (target.none()) return 0;
  std::vector<BitSet> local;
  local.reserve(sets.size());
  BitSet uni(target.size());
  for (const auto& s : sets) {
    local.push_back(s & target);
    uni |= local.back();
  }
  require(target.is_subset_of(uni), ErrorCode::Internal, "set cover: target is not coverable");

  // Greedy upper bound.
  std::size_t greedy = 0;
  {
    BitSet left = target;
    while (left.any()) {
      std::size_t best = 0, pick = 0;
      for (std::size_t i = 0; i < local.size(); ++i) {
        const std::size_t c = (local[i] & left).count();
        if (c > best) {
          best = c;
          pick = i;
        }
      }
      left.subtract(local[pick]);
      ++greedy;
    }
  }
  CoverSearch search(stats);
  const std::size_t v = search.solve(target, std::move(local), greedy);
  return std::min(v, greedy);
}

}  // namespace covent
