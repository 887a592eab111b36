#include "covent/verify/oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace covent::verify {

Sets to_sets(const SetFamily& F) {
  Sets out;
  for (const auto& e : F.elements()) {
    std::vector<int> s;
    e.for_each([&](std::size_t i) { s.push_back(static_cast<int>(i)); });
    out.push_back(std::move(s));
  }
  return out;
}

Labels to_labels(const SetFamily& F) {
  Labels out(F.carrier()->size(), -1);
  for (std::size_t m = 0; m < F.size(); ++m) F[m].for_each([&](std::size_t i) { out[i] = static_cast<int>(m); });
  return out;
}

double ref_phi(double x) { return x <= 0.0 ? 0.0 : -x * std::log(x); }

std::size_t brute_min_cover(const Sets& sets, const std::vector<int>& target) {
  if (target.empty()) return 0;
  const std::size_t k = sets.size();
  if (k > 24) throw std::invalid_argument("brute_min_cover: too many sets");
  int n = 0;
  for (const auto& s : sets)
    for (int x : s) n = std::max(n, x + 1);
  for (int x : target) n = std::max(n, x + 1);
  std::vector<std::vector<char>> has(k, std::vector<char>(static_cast<std::size_t>(n), 0));
  for (std::size_t i = 0; i < k; ++i)
    for (int x : sets[i]) has[i][x] = 1;
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcount(mask));
    if (size >= best) continue;
    bool ok = true;
    for (int x : target) {
      bool in = false;
      for (std::size_t i = 0; i < k && !in; ++i) in = ((mask >> i) & 1u) && has[i][x];
      if (!in) {
        ok = false;
        break;
      }
    }
    if (ok) best = size;
  }
  if (best == std::numeric_limits<std::size_t>::max()) throw std::logic_error("brute_min_cover: target not coverable");
  return best;
}

std::size_t brute_count_cond(const Sets& U, const Labels& beta) {
  std::map<int, std::vector<int>> atoms;
  for (std::size_t i = 0; i < beta.size(); ++i) atoms[beta[i]].push_back(static_cast<int>(i));
  std::size_t worst = 0;
  for (const auto& [label, pts] : atoms) worst = std::max(worst, brute_min_cover(U, pts));
  return worst;
}

double brute_partition_cond(const std::vector<double>& w, const Labels& alpha, const Labels& beta) {
  const int na = *std::max_element(alpha.begin(), alpha.end()) + 1;
  const int nb = *std::max_element(beta.begin(), beta.end()) + 1;
  std::vector<double> joint(static_cast<std::size_t>(na * nb), 0.0), marg(static_cast<std::size_t>(nb), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    joint[static_cast<std::size_t>(beta[i] * na + alpha[i])] += w[i];
    marg[static_cast<std::size_t>(beta[i])] += w[i];
  }
  double h = 0.0;
  for (double x : joint) h += ref_phi(x);
  for (double x : marg) h -= ref_phi(x);
  return h;
}

double brute_cover_cond(const std::vector<double>& w, const Sets& U, const Labels& beta) {
  const std::size_t n = w.size();
  std::vector<std::vector<int>> owners(n);
  for (std::size_t m = 0; m < U.size(); ++m)
    for (int x : U[m]) owners[x].push_back(static_cast<int>(m));
  for (const auto& o : owners)
    if (o.empty()) throw std::invalid_argument("brute_cover_cond: not a cover");
  std::vector<std::size_t> digit(n, 0);
  Labels alpha(n);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    for (std::size_t i = 0; i < n; ++i) alpha[i] = owners[i][digit[i]];
    best = std::min(best, brute_partition_cond(w, alpha, beta));
    std::size_t i = 0;
    while (i < n && ++digit[i] == owners[i].size()) digit[i++] = 0;
    if (i == n) break;
  }
  return best;
}

double brute_ext_min(const std::vector<double>& w, const Sets& U) {
  std::vector<std::size_t> order(U.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<char> taken(w.size(), 0);
    double h = 0.0;
    for (auto m : order) {
      double cell = 0.0;
      for (int x : U[m])
        if (!taken[x]) {
          taken[x] = 1;
          cell += w[x];
        }
      h += ref_phi(cell);
    }
    best = std::min(best, h);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

double log_spectral_radius(const std::vector<std::vector<int>>& A) {
  const auto n = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd M(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) M(i, j) = A[i][j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  double r = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) r = std::max(r, std::abs(es.eigenvalues()[i]));
  return std::log(r);
}

double markov_entropy_rate(const std::vector<std::vector<double>>& P, const std::vector<double>& pi) {
  double h = 0.0;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (double p : P[i]) h += pi[i] * ref_phi(p);
  return h;
}

double golden_word_count(int n) {
  double a = 1.0, b = 2.0;  // F(2), F(3)
  for (int i = 1; i < n; ++i) {
    const double c = a + b;
    a = b;
    b = c;
  }
  return b;
}

}  // namespace covent::verify
