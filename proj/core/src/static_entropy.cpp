#include "covent/static_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "covent/error.hpp"
#include "covent/set_cover.hpp"

namespace covent {

double phi(double x) noexcept { return x > 0.0 ? -x * std::log(x) : 0.0; }

EntropyValue shannon(std::span<const double> weights) {
  double h = 0.0;
  for (double w : weights) {
    require(w >= 0.0, ErrorCode::InvalidArgument, "shannon: negative weight");
    h += phi(w);
  }
  return {h, Method::Exact, 0.0};
}

namespace {

void require_partition(const SetFamily& F, const char* where) {
  require(F.is_partition() || F.disjoint(), ErrorCode::NotAPartition, std::string(where) + " needs a partition");
}

std::vector<int> labels(const SetFamily& F) {
  std::vector<int> out(F.carrier()->size(), -1);
  for (std::size_t m = 0; m < F.size(); ++m) F[m].for_each([&](std::size_t i) { out[i] = static_cast<int>(m); });
  return out;
}

std::vector<std::vector<std::size_t>> point_members(const SetFamily& U) {
  std::vector<std::vector<std::size_t>> out(U.carrier()->size());
  for (std::size_t m = 0; m < U.size(); ++m) U[m].for_each([&](std::size_t i) { out[i].push_back(m); });
  return out;
}

// --- Ext search -------------------------------------------------------------

/// A cover-entropy instance compressed to its positive-mass points, with
/// points of identical membership merged (an optimal U* assignment is
/// constant on such classes since phi is concave).
struct LocalProblem {
  std::vector<double> mass;
  std::vector<std::vector<std::size_t>> points;  // carrier indices per local point
  std::vector<BitSet> traces;
  std::vector<std::size_t> owner;  // element index of each trace
};

LocalProblem build_local(const std::vector<std::vector<std::size_t>>& members, std::span<const double> masses,
                         const BitSet& region, double scale) {
  std::map<std::vector<std::size_t>, std::size_t> ids;
  LocalProblem lp;
  region.for_each([&](std::size_t i) {
    auto [it, fresh] = ids.emplace(members[i], lp.mass.size());
    if (fresh) {
      lp.mass.push_back(0.0);
      lp.points.emplace_back();
    }
    lp.mass[it->second] += masses[i] * scale;
    lp.points[it->second].push_back(i);
  });
  for (const auto& [sig, j] : ids) lp.owner.insert(lp.owner.end(), sig.begin(), sig.end());
  std::sort(lp.owner.begin(), lp.owner.end());
  lp.owner.erase(std::unique(lp.owner.begin(), lp.owner.end()), lp.owner.end());
  lp.traces.assign(lp.owner.size(), BitSet(lp.mass.size()));
  for (const auto& [sig, j] : ids)
    for (auto m : sig)
      lp.traces[static_cast<std::size_t>(std::lower_bound(lp.owner.begin(), lp.owner.end(), m) - lp.owner.begin())]
          .set(j);
  return lp;
}

struct BudgetOverflow {};

class ExtSearch {
 public:
  ExtSearch(const LocalProblem& p, std::uint64_t budget) : p_(p), budget_(budget) {}

  /// Exact minimum; the greedy assignment seeds the cutoff and is kept in
  /// `local_owner` when nothing beats it.
  double solve(std::vector<int>& local_owner) {
    const double g = greedy(local_owner);
    const double cutoff = g + kAgreeTol * 1e-3;
    const BitSet all = BitSet::full(p_.mass.size());
    const double v = search(all, cutoff);
    if (v >= cutoff) return g;
    std::fill(local_owner.begin(), local_owner.end(), -1);
    rebuild(all, local_owner);
    return v;
  }

  /// Greedy: repeatedly take the heaviest surviving trace.
  double greedy(std::vector<int>& local_owner) {
    BitSet R = BitSet::full(p_.mass.size());
    double v = 0.0;
    while (R.any()) {
      const Active a = analyze(R);
      std::size_t pick = 0;
      for (std::size_t i = 1; i < a.sets.size(); ++i)
        if (a.mass[i] > a.mass[pick]) pick = i;
      v += phi(a.mass[pick]);
      a.sets[pick].for_each([&](std::size_t j) { local_owner[j] = static_cast<int>(p_.owner[a.trace[pick]]); });
      R.subtract(a.sets[pick]);
    }
    return v;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  static constexpr std::size_t kSplit = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kMemoCap = 4'000'000;

  struct Memo {
    double value;
    bool exact;
    std::size_t choice;
  };

  struct Active {
    std::vector<BitSet> sets;
    std::vector<double> mass;
    std::vector<std::size_t> trace;
  };

  double weight(const BitSet& s) const noexcept { return s.weight(p_.mass); }

  /// Surviving traces on R, heaviest first, with dominated ones removed.
  Active analyze(const BitSet& R) const {
    struct Item {
      BitSet set;
      double mass;
      std::size_t trace;
    };
    std::vector<Item> items;
    for (std::size_t t = 0; t < p_.traces.size(); ++t) {
      BitSet s = p_.traces[t] & R;
      if (s.none()) continue;
      const double m = weight(s);
      items.push_back({std::move(s), m, t});
    }
    std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      const auto ca = a.set.count(), cb = b.set.count();
      return ca != cb ? ca > cb : a.mass > b.mass;
    });
    Active out;
    for (auto& it : items) {
      const bool dominated = std::any_of(out.sets.begin(), out.sets.end(),
                                         [&](const BitSet& k) { return it.set.is_subset_of(k); });
      if (dominated) continue;
      out.sets.push_back(std::move(it.set));
      out.mass.push_back(it.mass);
      out.trace.push_back(it.trace);
    }
    std::vector<std::size_t> order(out.sets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.mass[a] > out.mass[b]; });
    Active sorted;
    for (auto i : order) {
      sorted.sets.push_back(std::move(out.sets[i]));
      sorted.mass.push_back(out.mass[i]);
      sorted.trace.push_back(out.trace[i]);
    }
    return sorted;
  }

  static std::vector<BitSet> split(const Active& a, std::size_t width) {
    const std::size_t n = a.sets.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (find(i) != find(j) && a.sets[i].intersects(a.sets[j])) parent[find(i)] = find(j);
    std::vector<BitSet> regions;
    std::vector<std::size_t> slot(n, kSplit);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t r = find(i);
      if (slot[r] == kSplit) {
        slot[r] = regions.size();
        regions.emplace_back(width);
      }
      regions[slot[r]] |= a.sets[i];
    }
    return regions;
  }

  /// Entropy of the vector with partial sums min(total, top-j masses):
  /// it majorizes every feasible cell vector, and the sum of phi is
  /// Schur-concave.
  static double lower_bound(const std::vector<double>& sorted_mass, double total) {
    double left = total, lb = 0.0;
    for (double m : sorted_mass) {
      if (left <= 0.0) break;
      const double take = std::min(m, left);
      lb += phi(take);
      left -= take;
    }
    return lb;
  }

  /// -sum_x mu(x) log(heaviest trace through x): the cell of x lies in
  /// some trace containing x.
  double pointwise_bound(const Active& a, const BitSet& R) const {
    double lb = 0.0;
    R.for_each([&](std::size_t j) {
      double top = 0.0;
      for (std::size_t i = 0; i < a.sets.size(); ++i)
        if (a.sets[i].test(j)) {
          top = a.mass[i];  // sets are sorted heaviest first
          break;
        }
      lb -= p_.mass[j] * std::log(top);
    });
    return lb;
  }

  double bound(const Active& a, const BitSet& R) const {
    return std::max(lower_bound(a.mass, weight(R)), pointwise_bound(a, R));
  }

  double region_lower_bound(const BitSet& R) const { return bound(analyze(R), R); }

  void remember(const BitSet& R, double value, bool exact, std::size_t choice) {
    auto it = memo_.find(R);
    if (it != memo_.end()) {
      if (it->second.exact) return;
      if (exact || value > it->second.value) it->second = {value, exact, choice};
      return;
    }
    if (!exact && memo_.size() >= kMemoCap) return;
    memo_.emplace(R, Memo{value, exact, choice});
  }

  /// Exact V(R) when it is below `cutoff`; otherwise a lower bound >= cutoff.
  double search(const BitSet& R, double cutoff) {
    if (R.none()) return 0.0;
    if (++nodes_ > budget_) throw BudgetOverflow{};
    double known_lb = 0.0;
    if (auto it = memo_.find(R); it != memo_.end()) {
      if (it->second.exact || it->second.value >= cutoff) return it->second.value;
      known_lb = it->second.value;
    }
    const Active a = analyze(R);
    const double total = weight(R);
    if (a.sets.size() == 1) {
      const double v = phi(total);
      remember(R, v, true, a.trace[0]);
      return v;
    }

    const auto regions = split(a, R.size());
    if (regions.size() > 1) {
      std::vector<double> lbs(regions.size());
      double rest = 0.0;
      for (std::size_t c = 0; c < regions.size(); ++c) {
        lbs[c] = region_lower_bound(regions[c]);
        rest += lbs[c];
      }
      if (rest >= cutoff) {
        remember(R, rest, false, kSplit);
        return rest;
      }
      double acc = 0.0;
      for (std::size_t c = 0; c < regions.size(); ++c) {
        rest -= lbs[c];
        const double allowed = cutoff - acc - rest;
        const double v = search(regions[c], allowed);
        acc += v;
        if (v >= allowed) {
          const double lb = std::max(acc + rest, cutoff);
          remember(R, lb, false, kSplit);
          return lb;
        }
      }
      remember(R, acc, true, kSplit);
      return acc;
    }

    const double lb = std::max(known_lb, bound(a, R));
    if (lb >= cutoff) {
      remember(R, lb, false, kSplit);
      return lb;
    }
    double best = cutoff;
    std::size_t choice = kSplit;
    for (std::size_t i = 0; i < a.sets.size(); ++i) {
      const double c = phi(a.mass[i]);
      if (c >= best) continue;
      const double allowed = best - c;
      const double v = search(R - a.sets[i], allowed);
      if (v < allowed) {
        best = c + v;
        choice = a.trace[i];
      }
      if (best <= lb) break;
    }
    if (choice != kSplit) {
      remember(R, best, true, choice);
      return best;
    }
    remember(R, cutoff, false, kSplit);
    return cutoff;
  }

  void rebuild(const BitSet& R, std::vector<int>& local_owner) {
    if (R.none()) return;
    const Active a = analyze(R);
    if (a.sets.size() == 1) {
      R.for_each([&](std::size_t j) { local_owner[j] = static_cast<int>(p_.owner[a.trace[0]]); });
      return;
    }
    const auto regions = split(a, R.size());
    if (regions.size() > 1) {
      for (const auto& r : regions) rebuild(r, local_owner);
      return;
    }
    const auto it = memo_.find(R);
    if (it == memo_.end() || !it->second.exact || it->second.choice == kSplit)
      fail(ErrorCode::Internal, "cover entropy: missing memo entry while rebuilding the minimizer");
    const std::size_t t = it->second.choice;
    const BitSet cell = p_.traces[t] & R;
    cell.for_each([&](std::size_t j) { local_owner[j] = static_cast<int>(p_.owner[t]); });
    rebuild(R - cell, local_owner);
  }

  const LocalProblem& p_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::unordered_map<BitSet, Memo, BitSetHash> memo_;
};

/// Solves one region; writes element indices into `assignment` for the
/// region's carrier indices.
struct RegionResult {
  double value = 0.0;
  bool exact = true;
  std::uint64_t nodes = 0;
};

RegionResult solve_region(const std::vector<std::vector<std::size_t>>& members, std::span<const double> masses, const BitSet& region, double scale,
                          std::uint64_t budget, std::vector<int>& assignment) {
  RegionResult out;
  if (region.none()) return out;
  const LocalProblem lp = build_local(members, masses, region, scale);
  std::vector<int> local_owner(lp.mass.size(), -1);
  // One trace holding everything is optimal outright: phi is subadditive.
  for (std::size_t t = 0; t < lp.traces.size(); ++t) {
    if (lp.traces[t].count() != lp.mass.size()) continue;
    out.value = phi(std::accumulate(lp.mass.begin(), lp.mass.end(), 0.0));
    for (const auto& pts : lp.points)
      for (auto i : pts) assignment[i] = static_cast<int>(lp.owner[t]);
    return out;
  }
  // No trace joins two points: every U* choice gives the same cells.
  if (std::all_of(lp.traces.begin(), lp.traces.end(), [](const BitSet& t) { return t.count() <= 1; })) {
    for (std::size_t t = 0; t < lp.traces.size(); ++t)
      lp.traces[t].for_each([&](std::size_t j) { local_owner[j] = static_cast<int>(t); });
    for (std::size_t j = 0; j < lp.mass.size(); ++j) {
      out.value += phi(lp.mass[j]);
      for (auto i : lp.points[j]) assignment[i] = static_cast<int>(lp.owner[local_owner[j]]);
    }
    return out;
  }
  ExtSearch search(lp, budget);
  try {
    out.value = search.solve(local_owner);
  } catch (const BudgetOverflow&) {
    std::fill(local_owner.begin(), local_owner.end(), -1);
    out.value = search.greedy(local_owner);
    out.exact = false;
  }
  out.nodes = search.nodes();
  for (std::size_t j = 0; j < lp.points.size(); ++j)
    for (auto i : lp.points[j]) assignment[i] = local_owner[j];
  return out;
}

}  // namespace

EntropyValue partition_entropy(const Distribution& mu, const SetFamily& alpha) {
  require_same_carrier(*mu.carrier(), *alpha.carrier(), "partition_entropy");
  require_partition(alpha, "partition_entropy");
  double h = 0.0;
  for (const auto& a : alpha.elements()) h += phi(mu.of(a));
  return {h, Method::Exact, 0.0};
}

EntropyValue conditional_partition_entropy(const Distribution& mu, const SetFamily& alpha, const SetFamily& beta) {
  require_same_carrier(*alpha.carrier(), *beta.carrier(), "conditional_partition_entropy");
  require_same_carrier(*mu.carrier(), *alpha.carrier(), "conditional_partition_entropy");
  require_partition(alpha, "conditional_partition_entropy");
  require_partition(beta, "conditional_partition_entropy");
  const auto la = labels(alpha);
  const auto lb = labels(beta);
  const std::uint64_t na = alpha.size();
  std::unordered_map<std::uint64_t, double> joint;
  std::vector<double> atom(beta.size(), 0.0);
  for (std::size_t i = 0; i < la.size(); ++i) {
    const double m = mu[i];
    if (m <= 0.0) continue;
    joint[static_cast<std::uint64_t>(lb[i]) * na + static_cast<std::uint64_t>(la[i])] += m;
    atom[lb[i]] += m;
  }
  std::vector<std::pair<std::uint64_t, double>> cells(joint.begin(), joint.end());
  std::sort(cells.begin(), cells.end());

  double h_joint = 0.0, h_beta = 0.0, per_atom = 0.0;
  for (const auto& [key, m] : cells) h_joint += phi(m);
  for (double m : atom) h_beta += phi(m);
  for (const auto& [key, m] : cells) {
    const double mb = atom[key / na];
    per_atom += mb * phi(m / mb);
  }
  const double difference = h_joint - h_beta;
  require(std::abs(difference - per_atom) <= kAgreeTol, ErrorCode::RouteDisagreement,
          "H(a|b): H(a v b) - H(b) and the per-atom sum disagree");
  return {std::max(0.0, per_atom), Method::Exact, 0.0};
}

std::size_t conditional_cover_count(const SetFamily& U, const SetFamily& beta) {
  require_same_carrier(*U.carrier(), *beta.carrier(), "conditional_cover_count");
  require_partition(beta, "conditional_cover_count");
  const auto members = point_members(U);
  std::vector<char> mark(U.size(), 0);
  std::size_t worst = 0;
  for (const auto& B : beta.elements()) {
    if (B.none()) continue;
    std::vector<std::size_t> cand;
    B.for_each([&](std::size_t i) {
      for (auto m : members[i])
        if (!mark[m]) {
          mark[m] = 1;
          cand.push_back(m);
        }
    });
    std::vector<BitSet> sets;
    sets.reserve(cand.size());
    for (auto m : cand) {
      sets.push_back(U[m] & B);
      mark[m] = 0;
    }
    worst = std::max(worst, min_set_cover(sets, B));
  }
  return worst;
}

CoverEntropy cover_entropy(const Distribution& mu, const SetFamily& U, const StaticOptions& opts) {
  require_same_carrier(*mu.carrier(), *U.carrier(), "cover_entropy");
  CoverEntropy out;
  out.assignment.assign(U.carrier()->size(), -1);
  const auto r = solve_region(point_members(U), mu.masses(), mu.support(), 1.0, opts.node_budget, out.assignment);
  out.nodes = r.nodes;
  out.value.nats = r.value;
  if (!r.exact) {
    out.value.method = Method::HeuristicUpperBound;
    out.value.gap.reset();
  } else {
    out.value.method = U.disjoint() ? Method::Exact : Method::BranchAndBound;
  }
  return out;
}

CoverEntropy cover_entropy(const ConditionalMeasure& mu_B, const SetFamily& U, const StaticOptions& opts) {
  if (mu_B.is_zero()) {
    CoverEntropy out;
    out.assignment.assign(U.carrier()->size(), -1);
    return out;
  }
  return cover_entropy(mu_B.weights, U, opts);
}

CoverConditionalEntropy conditional_cover_entropy(const Distribution& mu, const SetFamily& U, const SetFamily& beta,
                                                  const StaticOptions& opts) {
  require_same_carrier(*U.carrier(), *beta.carrier(), "conditional_cover_entropy");
  require_same_carrier(*mu.carrier(), *U.carrier(), "conditional_cover_entropy");
  require_partition(beta, "conditional_cover_entropy");

  CoverConditionalEntropy out;
  const std::size_t n = U.carrier()->size();
  std::vector<int> assignment(n, -1);
  const BitSet support = mu.support();
  bool exact = true;
  const auto members = point_members(U);
  for (const auto& B : beta.elements()) {
    const double mb = mu.of(B);
    if (mb <= 0.0) continue;
    const auto r = solve_region(members, mu.masses(), B & support, 1.0 / mb, opts.node_budget, assignment);
    out.route_a += mb * r.value;
    out.nodes += r.nodes;
    exact = exact && r.exact;
  }

  // Glue the per-atom minimizers into one partition finer than U; null
  // points go to the first element containing them.
  std::vector<BitSet> cells(U.size(), BitSet(n));
  for (std::size_t i = 0; i < n; ++i) {
    int m = assignment[i];
    if (m < 0) {
      for (std::size_t k = 0; k < U.size(); ++k)
        if (U[k].test(i)) {
          m = static_cast<int>(k);
          break;
        }
    }
    cells[static_cast<std::size_t>(m)].set(i);
  }
  SetFamily glued(U.carrier(), std::move(cells), FamilyKind::Partition);
  out.route_b = conditional_partition_entropy(mu, glued, beta).nats;
  require(std::abs(out.route_a - out.route_b) <= kAgreeTol, ErrorCode::RouteDisagreement,
          "H(U|b): per-atom sum and glued-partition entropy disagree");
  out.glued = std::move(glued);

  if (opts.route_c) {
    auto e = ustar_enumerate(U, opts.ustar_budget);
    out.ustar_count = e.assignment_count;
    if (!e.refused()) {
      double best = std::numeric_limits<double>::infinity();
      while (auto alpha = e.stream->next()) best = std::min(best, conditional_partition_entropy(mu, *alpha, beta).nats);
      out.route_c = best;
      if (exact)
        require(std::abs(best - out.route_a) <= kAgreeTol, ErrorCode::RouteDisagreement,
                "H(U|b): exhaustive U* minimum disagrees with the per-atom value");
      else
        require(best <= out.route_a + kAgreeTol, ErrorCode::RouteDisagreement,
                "H(U|b): exhaustive U* minimum exceeds the heuristic upper bound");
    }
  }

  out.value.nats = std::max(0.0, out.route_a);
  if (exact) {
    out.value.method = Method::BranchAndBound;
    out.value.gap = 0.0;
  } else {
    out.value.method = Method::HeuristicUpperBound;
    out.value.gap.reset();
  }
  return out;
}

}  // namespace covent
