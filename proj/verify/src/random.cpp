#include "covent/verify/random.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace covent::verify {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<std::vector<int>> cycles_of(const std::vector<int>& perm) {
  std::vector<std::vector<int>> out;
  std::vector<char> seen(perm.size(), 0);
  for (std::size_t s = 0; s < perm.size(); ++s) {
    if (seen[s]) continue;
    std::vector<int> c;
    for (int x = static_cast<int>(s); !seen[x]; x = perm[x]) {
      seen[x] = 1;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> cycle_measure(std::mt19937_64& rng, const std::vector<int>& perm, int max_numerator) {
  const auto cycles = cycles_of(perm);
  std::vector<int> k(cycles.size());
  for (auto& x : k) x = uniform(rng, 0, max_numerator);
  if (std::all_of(k.begin(), k.end(), [](int x) { return x == 0; })) k[uniform(rng, 0, static_cast<int>(k.size()) - 1)] = 1;
  double total = 0.0;
  for (std::size_t c = 0; c < cycles.size(); ++c) total += static_cast<double>(k[c]) * static_cast<double>(cycles[c].size());
  std::vector<double> w(perm.size(), 0.0);
  for (std::size_t c = 0; c < cycles.size(); ++c)
    for (int x : cycles[c]) w[x] = k[c] / total;
  return w;
}

void normalize(std::vector<double>& w) {
  const double t = std::accumulate(w.begin(), w.end(), 0.0);
  if (t > 0.0)
    for (auto& x : w) x /= t;
  else
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
}

}  // namespace

Sets random_cover_sets(std::mt19937_64& rng, int n, int elements) {
  Sets out(static_cast<std::size_t>(elements));
  for (int x = 0; x < n; ++x) {
    bool any = false;
    for (auto& s : out)
      if (uniform(rng, 0, 1)) {
        s.push_back(x);
        any = true;
      }
    if (!any) out[static_cast<std::size_t>(uniform(rng, 0, elements - 1))].push_back(x);
  }
  for (auto& s : out) std::sort(s.begin(), s.end());
  return out;
}

PointInstance random_instance(std::mt19937_64& rng, const InstanceShape& shape) {
  PointInstance inst;
  const int n = uniform(rng, 1, shape.max_points);
  inst.perm.resize(static_cast<std::size_t>(n));
  std::iota(inst.perm.begin(), inst.perm.end(), 0);
  std::shuffle(inst.perm.begin(), inst.perm.end(), rng);
  inst.U = random_cover_sets(rng, n, uniform(rng, 1, shape.max_elements));
  inst.V = random_cover_sets(rng, n, uniform(rng, 1, shape.max_elements));
  const int nb = uniform(rng, 1, n);
  inst.beta.resize(static_cast<std::size_t>(n));
  for (auto& b : inst.beta) b = uniform(rng, 0, nb - 1);
  const int ng = uniform(rng, 1, nb);
  std::vector<int> merge(static_cast<std::size_t>(nb));
  for (auto& m : merge) m = uniform(rng, 0, ng - 1);
  inst.gamma.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) inst.gamma[i] = merge[inst.beta[i]];
  inst.mu = cycle_measure(rng, inst.perm, shape.max_numerator);
  inst.nu = cycle_measure(rng, inst.perm, shape.max_numerator);
  return inst;
}

std::vector<PointInstance> shrink_candidates(const PointInstance& inst) {
  std::vector<PointInstance> out;
  const int n = inst.points();
  for (int x = 0; n > 1 && x < n; ++x) {
    PointInstance s;
    auto relabel = [&](int y) { return y < x ? y : y - 1; };
    int pred = 0;
    for (int y = 0; y < n; ++y)
      if (inst.perm[y] == x) pred = y;
    std::vector<int> perm = inst.perm;
    perm[pred] = perm[x];
    for (int y = 0; y < n; ++y)
      if (y != x) s.perm.push_back(relabel(perm[y] == x ? perm[x] : perm[y]));
    auto drop = [&](const Sets& in) {
      Sets o;
      for (const auto& e : in) {
        std::vector<int> t;
        for (int y : e)
          if (y != x) t.push_back(relabel(y));
        o.push_back(std::move(t));
      }
      return o;
    };
    s.U = drop(inst.U);
    s.V = drop(inst.V);
    for (int y = 0; y < n; ++y)
      if (y != x) {
        s.beta.push_back(inst.beta[y]);
        s.gamma.push_back(inst.gamma[y]);
        s.mu.push_back(inst.mu[y]);
        s.nu.push_back(inst.nu[y]);
      }
    normalize(s.mu);
    normalize(s.nu);
    out.push_back(std::move(s));
  }
  auto covers = [&](const Sets& sets) {
    std::vector<char> c(static_cast<std::size_t>(n), 0);
    for (const auto& e : sets)
      for (int y : e) c[y] = 1;
    return std::all_of(c.begin(), c.end(), [](char v) { return v != 0; });
  };
  for (std::size_t m = 0; inst.U.size() > 1 && m < inst.U.size(); ++m) {
    PointInstance s = inst;
    s.U.erase(s.U.begin() + static_cast<std::ptrdiff_t>(m));
    if (covers(s.U)) out.push_back(std::move(s));
  }
  for (std::size_t m = 0; inst.V.size() > 1 && m < inst.V.size(); ++m) {
    PointInstance s = inst;
    s.V.erase(s.V.begin() + static_cast<std::ptrdiff_t>(m));
    if (covers(s.V)) out.push_back(std::move(s));
  }
  return out;
}

std::string describe(const PointInstance& inst) {
  std::ostringstream os;
  os.precision(17);
  auto list = [&](const auto& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
  };
  auto sets = [&](const Sets& s) {
    os << '[';
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) os << ',';
      list(s[i]);
    }
    os << ']';
  };
  os << "{\"perm\":";
  list(inst.perm);
  os << ",\"U\":";
  sets(inst.U);
  os << ",\"V\":";
  sets(inst.V);
  os << ",\"beta\":";
  list(inst.beta);
  os << ",\"gamma\":";
  list(inst.gamma);
  os << ",\"mu\":";
  list(inst.mu);
  os << ",\"nu\":";
  list(inst.nu);
  os << '}';
  return os.str();
}

SetFamily make_cover(const CarrierPtr& c, const Sets& sets) {
  std::vector<std::vector<int>> e(sets.begin(), sets.end());
  return SetFamily::from_points(c, e, FamilyKind::Cover);
}

SetFamily make_partition(const CarrierPtr& c, const Labels& labels) {
  const int k = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::vector<int>> cells(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) cells[labels[i]].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> nonempty;
  for (auto& c2 : cells)
    if (!c2.empty()) nonempty.push_back(std::move(c2));
  return SetFamily::from_points(c, nonempty, FamilyKind::Partition);
}

PointWorld build(const PointInstance& inst) {
  auto sys = share(SymbolicSystem::permutation(inst.perm));
  auto c = Carrier::points(sys);
  return PointWorld{sys,
                    c,
                    make_cover(c, inst.U),
                    make_cover(c, inst.V),
                    make_partition(c, inst.beta),
                    make_partition(c, inst.gamma),
                    Distribution(c, inst.mu),
                    Distribution(c, inst.nu)};
}

}  // namespace covent::verify
