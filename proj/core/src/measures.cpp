#include "covent/measures.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "covent/error.hpp"

namespace covent {

namespace {

constexpr double kRowTol = 1e-12;
constexpr double kStationaryTol = 1e-10;

void check_stochastic(const Matrix& P) {
  const std::size_t k = P.size();
  require(k >= 1, ErrorCode::InvalidArgument, "empty transition matrix");
  for (std::size_t i = 0; i < k; ++i) {
    require(P[i].size() == k, ErrorCode::InvalidArgument, "transition matrix is not square");
    double s = 0.0;
    for (double v : P[i]) {
      require(v >= 0.0 && std::isfinite(v), ErrorCode::InvalidArgument, "negative transition probability");
      s += v;
    }
    require(std::abs(s - 1.0) <= kRowTol, ErrorCode::InvalidArgument,
            "row " + std::to_string(i) + " of P does not sum to 1");
  }
}

/// reach[i][j]: j reachable from i in zero or more steps.
std::vector<std::vector<char>> reachability(const Matrix& P) {
  const std::size_t k = P.size();
  std::vector<std::vector<char>> r(k, std::vector<char>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    r[i][i] = 1;
    for (std::size_t j = 0; j < k; ++j)
      if (P[i][j] > 0.0) r[i][j] = 1;
  }
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < k; ++i)
      if (r[i][m])
        for (std::size_t j = 0; j < k; ++j)
          if (r[m][j]) r[i][j] = 1;
  return r;
}

std::vector<double> solve_on_class(const Matrix& P, const std::vector<int>& cls) {
  const auto n = static_cast<Eigen::Index>(cls.size());
  // Rows 0..n-1: (P_C^T - I) pi = 0; last row: sum pi = 1.
  Eigen::MatrixXd A(n + 1, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c)
      A(r, c) = P[cls[c]][cls[r]] - (r == c ? 1.0 : 0.0);
  A.row(n).setOnes();
  b(n) = 1.0;
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(b);
  std::vector<double> pi(P.size(), 0.0);
  double s = 0.0;
  for (Eigen::Index c = 0; c < n; ++c) {
    const double v = std::max(0.0, x(c));
    pi[cls[c]] = v;
    s += v;
  }
  for (double& v : pi) v /= s;
  return pi;
}

std::vector<double> stationary_check(const std::vector<double>& pi, const Matrix& P) {
  std::vector<double> out(pi.size(), 0.0);
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < P.size(); ++j) out[j] += pi[i] * P[i][j];
  return out;
}

bool same_measure(const InvariantMeasure& a, const InvariantMeasure& b) {
  if (a.kind() != b.kind() || !(*a.system() == *b.system())) return false;
  auto close = [](const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (std::abs(x[i] - y[i]) > 1e-12) return false;
    return true;
  };
  switch (a.kind()) {
    case MeasureKind::Markov: {
      if (!close(a.stationary(), b.stationary())) return false;
      for (std::size_t i = 0; i < a.transition().size(); ++i)
        if (a.stationary()[i] > 0.0 && !close(a.transition()[i], b.transition()[i])) return false;
      return true;
    }
    case MeasureKind::Points: return close(a.point_weights(), b.point_weights());
    default: return false;
  }
}

std::vector<ErgodicComponent> merge_components(std::vector<ErgodicComponent> in) {
  std::vector<ErgodicComponent> out;
  for (auto& c : in) {
    if (c.weight <= 0.0) continue;
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const ErgodicComponent& o) { return same_measure(o.measure, c.measure); });
    if (it != out.end())
      it->weight += c.weight;
    else
      out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

// --- construction -----------------------------------------------------------

InvariantMeasure InvariantMeasure::markov(SystemPtr sys, Matrix P, std::optional<std::vector<double>> pi) {
  require(sys && sys->is_word_system(), ErrorCode::InvalidArgument, "Markov measures live on word systems");
  const int k = sys->alphabet_size();
  require(static_cast<int>(P.size()) == k, ErrorCode::InvalidArgument,
          "transition matrix size does not match the alphabet");
  check_stochastic(P);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      require(P[i][j] == 0.0 || sys->allows(i, j), ErrorCode::InvalidArgument,
              "P puts mass on a forbidden transition " + std::to_string(i) + "->" + std::to_string(j));
  InvariantMeasure m;
  m.kind_ = MeasureKind::Markov;
  m.system_ = std::move(sys);
  if (pi) {
    require(static_cast<int>(pi->size()) == k, ErrorCode::InvalidArgument, "stationary vector has wrong length");
    double s = 0.0;
    for (double v : *pi) {
      require(v >= 0.0, ErrorCode::InvalidArgument, "negative stationary mass");
      s += v;
    }
    require(std::abs(s - 1.0) <= kStationaryTol, ErrorCode::InvalidArgument, "stationary vector does not sum to 1");
    const auto piP = stationary_check(*pi, P);
    for (int i = 0; i < k; ++i)
      require(std::abs(piP[i] - (*pi)[i]) <= kStationaryTol, ErrorCode::InvalidArgument,
              "pi P != pi: the measure is not shift invariant");
    m.pi_ = std::move(*pi);
  } else {
    m.pi_ = stationary_of(P);
  }
  m.P_ = std::move(P);
  return m;
}

InvariantMeasure InvariantMeasure::bernoulli(SystemPtr sys, std::vector<double> p) {
  require(sys && sys->is_word_system(), ErrorCode::InvalidArgument, "Bernoulli measures live on word systems");
  const int k = sys->alphabet_size();
  require(static_cast<int>(p.size()) == k, ErrorCode::InvalidArgument, "probability vector has wrong length");
  Matrix P(k, p);
  return markov(std::move(sys), std::move(P), p);
}

InvariantMeasure InvariantMeasure::on_points(SystemPtr sys, std::vector<double> weights) {
  require(sys && sys->kind() == SystemKind::Permutation, ErrorCode::InvalidArgument,
          "point measures live on permutation systems");
  require(static_cast<int>(weights.size()) == sys->point_count(), ErrorCode::InvalidArgument,
          "one weight per point required");
  double s = 0.0;
  for (double v : weights) {
    require(v >= 0.0, ErrorCode::InvalidArgument, "negative point weight");
    s += v;
  }
  require(std::abs(s - 1.0) <= kRowTol, ErrorCode::InvalidArgument, "point weights do not sum to 1");
  for (int p = 0; p < sys->point_count(); ++p)
    require(std::abs(weights[sys->image(p)] - weights[p]) <= kRowTol, ErrorCode::InvalidArgument,
            "point weights are not constant on cycles");
  InvariantMeasure m;
  m.kind_ = MeasureKind::Points;
  m.system_ = std::move(sys);
  m.weights_ = std::move(weights);
  return m;
}

InvariantMeasure InvariantMeasure::cycles(SystemPtr sys, std::vector<double> cycle_weights) {
  require(sys && sys->kind() == SystemKind::Permutation, ErrorCode::InvalidArgument,
          "cycle measures live on permutation systems");
  const auto cyc = sys->cycles();
  require(cyc.size() == cycle_weights.size(), ErrorCode::InvalidArgument,
          "one weight per cycle required (" + std::to_string(cyc.size()) + " cycles)");
  std::vector<double> w(sys->point_count(), 0.0);
  for (std::size_t c = 0; c < cyc.size(); ++c)
    for (int p : cyc[c]) w[p] = cycle_weights[c] / static_cast<double>(cyc[c].size());
  return on_points(std::move(sys), std::move(w));
}

InvariantMeasure InvariantMeasure::image(const FactorMap& phi, const InvariantMeasure& source) {
  require(*source.system() == *phi.domain(), ErrorCode::InvalidArgument,
          "pushforward: measure does not live on the factor's domain");
  InvariantMeasure m;
  m.kind_ = MeasureKind::Image;
  m.system_ = phi.codomain();
  m.factor_ = std::make_shared<const FactorMap>(phi);
  m.source_ = std::make_shared<const InvariantMeasure>(source);
  return m;
}

const std::vector<double>& InvariantMeasure::stationary() const {
  require(kind_ == MeasureKind::Markov, ErrorCode::InvalidArgument, "not a Markov measure");
  return pi_;
}

const Matrix& InvariantMeasure::transition() const {
  require(kind_ == MeasureKind::Markov, ErrorCode::InvalidArgument, "not a Markov measure");
  return P_;
}

const std::vector<double>& InvariantMeasure::point_weights() const {
  require(kind_ == MeasureKind::Points, ErrorCode::InvalidArgument, "not a point measure");
  return weights_;
}

const std::vector<ErgodicComponent>& InvariantMeasure::parts() const {
  require(kind_ == MeasureKind::Mixture, ErrorCode::InvalidArgument, "not a mixture");
  return *parts_;
}

// --- evaluation -------------------------------------------------------------

double InvariantMeasure::cylinder_mass(std::span<const int> w) const {
  switch (kind_) {
    case MeasureKind::Markov: {
      require(!w.empty() && system_->admissible(w), ErrorCode::InadmissibleWord, "cylinder of an inadmissible word");
      double m = pi_[w[0]];
      for (std::size_t i = 1; i < w.size(); ++i) m *= P_[w[i - 1]][w[i]];
      return m;
    }
    case MeasureKind::Points:
      require(w.size() == 1 && w[0] >= 0 && w[0] < system_->point_count(), ErrorCode::InadmissibleWord,
              "not a point of the system");
      return weights_[w[0]];
    case MeasureKind::Mixture: {
      double m = 0.0;
      for (const auto& c : *parts_) m += c.weight * c.measure.cylinder_mass(w);
      return m;
    }
    case MeasureKind::Image: {
      require(!w.empty() && system_->admissible(w), ErrorCode::InadmissibleWord, "cylinder of an inadmissible word");
      const auto c = Carrier::words(system_, static_cast<int>(w.size()));
      return masses(*c)[c->index_of(w)];
    }
  }
  return 0.0;
}

std::vector<double> InvariantMeasure::masses(const Carrier& carrier) const {
  require(*carrier.system() == *system_, ErrorCode::CarrierMismatch, "carrier belongs to another system");
  std::vector<double> out(carrier.size(), 0.0);
  switch (kind_) {
    case MeasureKind::Markov:
      for (std::size_t i = 0; i < carrier.size(); ++i) {
        const auto w = carrier.word(i);
        double m = pi_[w[0]];
        for (std::size_t j = 1; j < w.size() && m > 0.0; ++j) m *= P_[w[j - 1]][w[j]];
        out[i] = m;
      }
      break;
    case MeasureKind::Points:
      out = weights_;
      break;
    case MeasureKind::Mixture:
      for (const auto& c : *parts_) {
        const auto part = c.measure.masses(carrier);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += c.weight * part[i];
      }
      break;
    case MeasureKind::Image: {
      const auto dom = Carrier::words(factor_->domain(), carrier.window() + factor_->block() - 1);
      const auto src = source_->masses(*dom);
      for (std::size_t i = 0; i < dom->size(); ++i) {
        if (src[i] == 0.0) continue;
        out[carrier.index_of(factor_->image(dom->word(i)))] += src[i];
      }
      break;
    }
  }
  return out;
}

// --- distributions ----------------------------------------------------------

Distribution::Distribution(CarrierPtr carrier, std::vector<double> masses)
    : carrier_(std::move(carrier)), masses_(std::move(masses)) {
  require(masses_.size() == carrier_->size(), ErrorCode::CarrierMismatch, "mass vector sized for another carrier");
  total_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

BitSet Distribution::support() const {
  BitSet s(masses_.size());
  for (std::size_t i = 0; i < masses_.size(); ++i)
    if (masses_[i] > 0.0) s.set(i);
  return s;
}

Distribution distribution(const InvariantMeasure& mu, const CarrierPtr& carrier) {
  return Distribution(carrier, mu.masses(*carrier));
}

ConditionalMeasure condition_on(const Distribution& mu, const BitSet& B) {
  require(B.size() == mu.carrier()->size(), ErrorCode::CarrierMismatch, "conditioning set sized for another carrier");
  const double base = mu.of(B);
  std::vector<double> w(B.size(), 0.0);
  if (base > 0.0) B.for_each([&](std::size_t i) { w[i] = mu[i] / base; });
  return ConditionalMeasure{B, base > 0.0 ? base : 0.0, Distribution(mu.carrier(), std::move(w))};
}

ConditionalMeasure condition_on(const InvariantMeasure& mu, const CarrierPtr& carrier, const BitSet& B) {
  return condition_on(distribution(mu, carrier), B);
}

// --- chains -----------------------------------------------------------------

std::vector<std::vector<int>> closed_classes(const Matrix& P) {
  check_stochastic(P);
  const int k = static_cast<int>(P.size());
  const auto r = reachability(P);
  std::vector<std::vector<int>> out;
  std::vector<char> assigned(k, 0);
  for (int i = 0; i < k; ++i) {
    if (assigned[i]) continue;
    std::vector<int> cls;
    for (int j = 0; j < k; ++j)
      if (r[i][j] && r[j][i]) cls.push_back(j);
    for (int j : cls) assigned[j] = 1;
    bool closed = true;
    for (int a : cls)
      for (int b = 0; b < k; ++b)
        if (P[a][b] > 0.0 && !(r[b][a])) closed = false;
    if (closed) out.push_back(std::move(cls));
  }
  return out;
}

std::vector<double> stationary_of(const Matrix& P) {
  const auto classes = closed_classes(P);
  require(classes.size() == 1, ErrorCode::ReducibleChain,
          "chain has " + std::to_string(classes.size()) +
              " closed classes; the stationary vector is not unique (use ergodic_decompose)");
  return solve_on_class(P, classes.front());
}

// --- decomposition ----------------------------------------------------------

std::vector<ErgodicComponent> ergodic_decompose(const InvariantMeasure& mu) {
  std::vector<ErgodicComponent> out;
  switch (mu.kind()) {
    case MeasureKind::Markov: {
      const auto& pi = mu.stationary();
      const auto& P = mu.transition();
      const auto classes = closed_classes(P);
      std::vector<char> recurrent(pi.size(), 0);
      for (const auto& cls : classes)
        for (int s : cls) recurrent[s] = 1;
      for (std::size_t s = 0; s < pi.size(); ++s)
        require(recurrent[s] || pi[s] <= kStationaryTol, ErrorCode::InvalidArgument,
                "stationary vector puts mass on transient state " + std::to_string(s));
      for (const auto& cls : classes) {
        double w = 0.0;
        for (int s : cls) w += pi[s];
        if (w <= kStationaryTol) continue;
        std::vector<double> local(pi.size(), 0.0);
        for (int s : cls) local[s] = pi[s] / w;
        out.push_back({w, InvariantMeasure::markov(mu.system(), P, local)});
      }
      double total = 0.0;
      for (const auto& c : out) total += c.weight;
      for (auto& c : out) c.weight /= total;
      break;
    }
    case MeasureKind::Points: {
      const auto& w = mu.point_weights();
      for (const auto& cyc : mu.system()->cycles()) {
        double cw = 0.0;
        for (int p : cyc) cw += w[p];
        if (cw <= 0.0) continue;
        std::vector<double> local(w.size(), 0.0);
        for (int p : cyc) local[p] = 1.0 / static_cast<double>(cyc.size());
        out.push_back({cw, InvariantMeasure::on_points(mu.system(), std::move(local))});
      }
      break;
    }
    case MeasureKind::Mixture: {
      std::vector<ErgodicComponent> all;
      for (const auto& part : mu.parts())
        for (auto& c : ergodic_decompose(part.measure)) all.push_back({part.weight * c.weight, std::move(c.measure)});
      out = merge_components(std::move(all));
      break;
    }
    case MeasureKind::Image:
      fail(ErrorCode::InvalidArgument, "ergodic_decompose: decompose the source measure before pushing forward");
  }
  return out;
}

InvariantMeasure mix(const std::vector<ErgodicComponent>& components) {
  require(!components.empty(), ErrorCode::InvalidArgument, "mix needs at least one component");
  double total = 0.0;
  for (const auto& c : components) {
    require(c.weight >= 0.0, ErrorCode::InvalidArgument, "negative mixture weight");
    require(*c.measure.system() == *components.front().measure.system(), ErrorCode::InvalidArgument,
            "mixture components live on different systems");
    total += c.weight;
  }
  require(std::abs(total - 1.0) <= kRowTol, ErrorCode::InvalidArgument, "mixture weights do not sum to 1");

  std::vector<ErgodicComponent> live;
  for (const auto& c : components)
    if (c.weight > 0.0) live.push_back(c);
  if (live.size() == 1) return live.front().measure;

  const auto kind = live.front().measure.kind();
  const bool uniform_kind = std::all_of(live.begin(), live.end(),
                                        [&](const ErgodicComponent& c) { return c.measure.kind() == kind; });
  const auto& sys = live.front().measure.system();

  if (uniform_kind && kind == MeasureKind::Points) {
    std::vector<double> w(sys->point_count(), 0.0);
    for (const auto& c : live)
      for (std::size_t p = 0; p < w.size(); ++p) w[p] += c.weight * c.measure.point_weights()[p];
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= s;
    return InvariantMeasure::on_points(sys, std::move(w));
  }

  if (uniform_kind && kind == MeasureKind::Markov) {
    const std::size_t k = static_cast<std::size_t>(sys->alphabet_size());
    std::vector<int> owner(k, -1);
    bool disjoint = true;
    for (std::size_t c = 0; c < live.size() && disjoint; ++c)
      for (std::size_t s = 0; s < k; ++s)
        if (live[c].measure.stationary()[s] > 0.0) {
          if (owner[s] >= 0) disjoint = false;
          owner[s] = static_cast<int>(c);
        }
    if (disjoint) {
      Matrix P = live.front().measure.transition();
      std::vector<double> pi(k, 0.0);
      for (std::size_t s = 0; s < k; ++s) {
        if (owner[s] >= 0) P[s] = live[owner[s]].measure.transition()[s];
        for (const auto& c : live) pi[s] += c.weight * c.measure.stationary()[s];
      }
      return InvariantMeasure::markov(sys, std::move(P), std::move(pi));
    }
  }

  InvariantMeasure m;
  m.kind_ = MeasureKind::Mixture;
  m.system_ = sys;
  m.parts_ = std::make_shared<const std::vector<ErgodicComponent>>(std::move(live));
  return m;
}

InvariantMeasure power_measure(const InvariantMeasure& mu, const SystemPtr& power_sys, int M) {
  require(M >= 1, ErrorCode::InvalidArgument, "power_measure: M must be positive");
  if (M == 1) return mu;
  switch (mu.kind()) {
    case MeasureKind::Points:
      return InvariantMeasure::on_points(power_sys, mu.point_weights());
    case MeasureKind::Markov: {
      const auto blocks = admissible_words(*mu.system(), M);
      const std::size_t n = blocks.size();
      require(static_cast<int>(n) == power_sys->alphabet_size(), ErrorCode::InvalidArgument,
              "power system alphabet does not match the M-blocks");
      const auto& P = mu.transition();
      std::vector<double> pi(n);
      std::vector<double> inner(n, 1.0);
      for (std::size_t u = 0; u < n; ++u) {
        pi[u] = mu.cylinder_mass(blocks[u]);
        for (int j = 1; j < M; ++j) inner[u] *= P[blocks[u][j - 1]][blocks[u][j]];
      }
      Matrix Q(n, std::vector<double>(n, 0.0));
      for (std::size_t u = 0; u < n; ++u) {
        double s = 0.0;
        for (std::size_t v = 0; v < n; ++v) {
          Q[u][v] = P[blocks[u].back()][blocks[v].front()] * inner[v];
          s += Q[u][v];
        }
        // Rows sum to 1 up to rounding; renormalize so the 1e-12 check holds.
        for (auto& x : Q[u]) x /= s;
      }
      return InvariantMeasure::markov(power_sys, std::move(Q), std::move(pi));
    }
    case MeasureKind::Mixture: {
      std::vector<ErgodicComponent> parts;
      for (const auto& c : mu.parts()) parts.push_back({c.weight, power_measure(c.measure, power_sys, M)});
      return mix(parts);
    }
    case MeasureKind::Image:
      break;
  }
  fail(ErrorCode::InvalidArgument, "power_measure does not support pushforward measures");
}

double family_delta(const Distribution& mu, const SetFamily& U, const SetFamily& V) {
  require_same_carrier(*mu.carrier(), *U.carrier(), "family_delta");
  return family_delta(mu.masses(), U, V);
}

}  // namespace covent
