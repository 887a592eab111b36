#include "covent/principles.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "covent/error.hpp"

namespace covent {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::HoldsWithinTol: return "holds_within_tol";
    case Verdict::BracketOpen: return "bracket_open";
    case Verdict::Violated: return "violated";
  }
  return "?";
}

namespace {

bool is_identity(const FactorMap& phi) {
  if (phi.block() != 1 || !(*phi.domain() == *phi.codomain())) return false;
  const auto& c = phi.code();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] != static_cast<int>(i)) return false;
  return true;
}

SetFamily widen(const SetFamily& F, int W) { return F.window() < W ? extend_window(F, W) : F; }

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(9);
  os << std::fixed << x;
  return os.str();
}

// --- Nelder-Mead over softmax rows ------------------------------------------

class MarkovParameterization {
 public:
  explicit MarkovParameterization(const SystemPtr& sys) : sys_(sys) {
    const auto A = sys->transition();
    for (std::size_t i = 0; i < A.size(); ++i) {
      std::vector<int> row;
      for (std::size_t j = 0; j < A[i].size(); ++j)
        if (A[i][j]) row.push_back(static_cast<int>(j));
      dims_ += row.size() - 1;
      allowed_.push_back(std::move(row));
    }
  }

  std::size_t dims() const noexcept { return dims_; }

  Matrix transition(std::span<const double> x) const {
    const std::size_t k = allowed_.size();
    Matrix P(k, std::vector<double>(k, 0.0));
    std::size_t off = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const auto& row = allowed_[i];
      std::vector<double> logit(row.size(), 0.0);
      for (std::size_t t = 0; t + 1 < row.size(); ++t) logit[t] = std::clamp(x[off + t], -30.0, 30.0);
      off += row.size() - 1;
      const double top = *std::max_element(logit.begin(), logit.end());
      double z = 0.0;
      for (auto& l : logit) z += (l = std::exp(l - top));
      for (std::size_t t = 0; t < row.size(); ++t) P[i][row[t]] = logit[t] / z;
    }
    return P;
  }

  InvariantMeasure measure(std::span<const double> x) const { return InvariantMeasure::markov(sys_, transition(x)); }

 private:
  SystemPtr sys_;
  std::vector<std::vector<int>> allowed_;
  std::size_t dims_ = 0;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

double gsl_objective(const gsl_vector* v, void* params) {
  auto& f = *static_cast<std::function<double(std::span<const double>)>*>(params);
  try {
    return f({v->data, v->size});
  } catch (const std::exception&) {
    return std::numeric_limits<double>::max();
  }
}

NelderMeadResult nelder_mead(std::function<double(std::span<const double>)> f, std::vector<double> x0, double step,
                             double size_tol, int max_iterations) {
  NelderMeadResult out;
  const std::size_t n = x0.size();
  if (n == 0) {
    out.value = f({});
    out.converged = true;
    return out;
  }
  gsl_multimin_function fn{&gsl_objective, n, &f};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(n), &gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> ss(gsl_vector_alloc(n), &gsl_vector_free);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x.get(), i, x0[i]);
  gsl_vector_set_all(ss.get(), step);
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n), &gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(s.get(), &fn, x.get(), ss.get());
  while (out.iterations < max_iterations) {
    ++out.iterations;
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol) == GSL_SUCCESS) {
      out.converged = true;
      break;
    }
  }
  out.x.assign(s->x->data, s->x->data + n);
  out.value = s->fval;
  return out;
}

}  // namespace

InvariantMeasure pushforward(const FactorMap& phi, const InvariantMeasure& mu) {
  if (is_identity(phi)) return mu;
  return InvariantMeasure::image(phi, mu);
}

PrincipleReport factor_invariance_check(const FactorMap& phi, const InvariantMeasure& mu, const SetFamily& U,
                                        const SetFamily& beta, int n_max, const StaticOptions& opts) {
  PrincipleReport r;
  r.check = "factor_invariance";
  r.lhs_name = "H_nu(U|beta)";
  r.rhs_name = "H_mu(phi^-1 U|phi^-1 beta)";
  r.tolerance = kIdentityTol;
  r.n_max = n_max;

  const InvariantMeasure nu = pushforward(phi, mu);
  const JoinPair down(U, beta, n_max);
  const JoinPair up(pullback(phi, U), pullback(phi, beta), n_max);
  bool cut_down = false, cut_up = false;
  const auto a = down.terms(nu, opts, &cut_down);
  const auto b = up.terms(mu, opts, &cut_up);
  const auto ca = down.counting();
  const auto cb = up.counting();
  double worst = 0.0;
  for (int N = 1; N <= n_max; ++N) {
    const double g = std::max(std::abs(a[N - 1] - b[N - 1]), std::abs(ca.a(N) - cb.a(N)));
    r.per_n_gaps.push_back(g);
    worst = std::max(worst, g);
  }
  const auto ea = estimate_from_terms(a, cut_down);
  const auto eb = estimate_from_terms(b, cut_up);
  r.lhs = ea.running_inf;
  r.rhs = eb.running_inf;
  r.gap = worst;
  r.estimates = {{"h_minus_codomain", ea}, {"h_minus_domain", eb}, {"h_top_codomain", ca}, {"h_top_domain", cb}};
  if (cut_down || cut_up) r.notes.push_back("a cover entropy fell back to the greedy bound");
  r.verdict = worst <= r.tolerance ? Verdict::HoldsWithinTol : Verdict::Violated;
  return r;
}

PrincipleReport variational_search(const SystemPtr& sys, const SetFamily& U, const SetFamily& beta, int n_max,
                                   const VariationalOptions& opts) {
  require(sys->is_word_system(), ErrorCode::InvalidArgument, "variational_search needs a shift system");
  require(sys->irreducible(), ErrorCode::InvalidArgument, "variational_search needs an irreducible SFT");
  require(*U.carrier()->system() == *sys, ErrorCode::CarrierMismatch, "variational_search: cover on another system");
  require(opts.starts >= 1, ErrorCode::InvalidArgument, "variational_search needs at least one start");
  gsl_set_error_handler_off();

  PrincipleReport r;
  r.check = "variational";
  r.lhs_name = "sup_mu h_minus";
  r.rhs_name = "h_top";
  r.tolerance = opts.tolerance;
  r.n_max = n_max;

  const JoinPair pair(U, beta, n_max);
  const MarkovParameterization param(sys);
  std::function<double(std::span<const double>)> f = [&](std::span<const double> x) {
    return -pair.rate(param.measure(x), opts.inner).running_inf;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  NelderMeadResult best;
  best.value = std::numeric_limits<double>::infinity();
  bool exhausted = false;
  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> x0(param.dims(), 0.0);
    if (s > 0)
      for (auto& v : x0) v = gauss(rng);
    auto res = nelder_mead(f, std::move(x0), opts.step, opts.size_tol, opts.max_iterations);
    r.trace.push_back({s, res.iterations, -res.value, res.converged});
    exhausted = exhausted || !res.converged;
    if (res.value < best.value) best = std::move(res);
    if (param.dims() == 0) break;
  }

  StaticOptions check = opts.inner;
  check.route_c = true;
  const InvariantMeasure mu = param.measure(best.x);
  const auto sup = pair.rate(mu, check);
  const auto top = pair.counting();
  r.best_transition = mu.transition();
  r.lhs = sup.running_inf;
  r.rhs = top.running_inf;
  r.gap = r.rhs - r.lhs;
  r.estimates = {{"h_minus_best", sup}, {"h_top", top}};
  for (int N = 1; N <= n_max; ++N) r.per_n_gaps.push_back(top.a(N) - sup.a(N));
  if (exhausted) r.notes.push_back("at least one start hit the iteration cap");
  if (sup.exactness == Exactness::Truncated) r.notes.push_back("h_minus sequence truncated by the node budget");
  if (r.gap < -kIdentityTol && sup.exactness != Exactness::Truncated)
    r.notes.push_back("h_minus estimate exceeds the h_top estimate");
  r.verdict = r.gap <= r.tolerance ? Verdict::HoldsWithinTol : Verdict::BracketOpen;
  return r;
}

PrincipleReport minmax_check(const SystemPtr& sys, const SetFamily& U, const SetFamily& beta,
                             const std::vector<InvariantMeasure>& grid, int n_max, int window,
                             const MinmaxOptions& opts) {
  require_same_carrier(*U.carrier(), *beta.carrier(), "minmax_check");
  PrincipleReport r;
  r.check = "minmax";
  r.lhs_name = "min_alpha max_mu h_mu(alpha|beta)";
  r.rhs_name = "h_top";
  r.tolerance = opts.tolerance;
  r.n_max = n_max;

  SetFamily base = U;
  SetFamily cond = beta;
  if (!U.carrier()->is_points()) {
    require(window >= U.window(), ErrorCode::InvalidArgument, "minmax_check: window shorter than the cover");
    base = widen(U, window);
    cond = widen(beta, std::max(window, beta.window()));
  }

  std::vector<SetFamily> candidates;
  auto e = ustar_enumerate(base);
  if (!e.refused()) {
    while (auto a = e.stream->next()) candidates.push_back(widen(*a, cond.window()));
  } else {
    r.notes.push_back("U* over budget; candidates restricted to Ext(U)");
    ExtPartitions ext(base);
    while (auto d = ext.next()) candidates.push_back(widen(d->partition, cond.window()));
  }

  double minmax = std::numeric_limits<double>::infinity();
  for (const auto& alpha : candidates) {
    const JoinPair pair(alpha, cond, n_max);
    double inner = -std::numeric_limits<double>::infinity();
    for (const auto& mu : grid) inner = std::max(inner, pair.rate(mu).running_inf);
    if (opts.refine && sys->is_word_system() && sys->irreducible())
      inner = std::max(inner, variational_search(sys, alpha, cond, n_max, opts.search).lhs);
    r.series.push_back(inner);
    minmax = std::min(minmax, inner);
  }
  require(std::isfinite(minmax), ErrorCode::InvalidArgument, "minmax_check needs a measure grid or a refinement");

  const auto top = h_top_cond(U, beta, n_max);
  r.lhs = minmax;
  r.rhs = top.running_inf;
  r.gap = r.rhs - r.lhs;
  r.estimates = {{"h_top", top}};
  r.notes.push_back("series: inner max per candidate, " + std::to_string(candidates.size()) + " candidates, " +
                    std::to_string(grid.size()) + " grid measures");
  r.verdict = r.lhs <= r.rhs + r.tolerance ? Verdict::HoldsWithinTol : Verdict::BracketOpen;
  return r;
}

PrincipleReport plus_minus_bracket(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta, int n_max,
                                   const std::vector<int>& windows, double tolerance, const StaticOptions& opts) {
  require(!windows.empty(), ErrorCode::InvalidArgument, "plus_minus_bracket needs at least one window");
  PrincipleReport r;
  r.check = "plus_minus_bracket";
  r.lhs_name = "h_minus";
  r.rhs_name = "h_plus";
  r.tolerance = tolerance;
  r.n_max = n_max;

  const auto hm = h_minus(mu, U, beta, n_max, opts);
  r.estimates.push_back({"h_minus", hm});
  std::optional<EntropyEstimate> best;
  std::string best_label;
  for (int w : windows) {
    const auto hp = h_plus(mu, U, beta, n_max, w);
    const std::string label = "h_plus[w=" + std::to_string(w) + "]";
    r.estimates.push_back({label, hp.estimate});
    if (hp.ext_fallback) r.notes.push_back(label + " searched Ext(U) only");
    if (!best || hp.estimate.running_inf < best->running_inf) {
      best = hp.estimate;
      best_label = label;
    }
    r.series.push_back(best->running_inf);
  }
  r.notes.push_back("series: running minimum of h_plus over windows; best " + best_label);

  bool violated = false;
  for (int N = 1; N <= n_max; ++N) {
    const double g = best->a(N) - hm.a(N);
    r.per_n_gaps.push_back(g);
    if (g < -kIdentityTol && hm.exactness != Exactness::Truncated) violated = true;
  }
  if (hm.exactness == Exactness::Truncated) r.notes.push_back("h_minus sequence truncated by the node budget");
  r.lhs = hm.running_inf;
  r.rhs = best->running_inf;
  r.gap = r.rhs - r.lhs;
  if (violated) {
    r.notes.push_back("per-N h_minus term exceeds the h_plus candidate term");
    r.verdict = Verdict::Violated;
  } else {
    r.verdict = r.gap <= tolerance ? Verdict::HoldsWithinTol : Verdict::BracketOpen;
  }
  return r;
}

PrincipleReport ergodic_additivity_check(const std::vector<ErgodicComponent>& components, const SetFamily& U,
                                         const SetFamily& beta, int n_max, const StaticOptions& opts) {
  require(!components.empty(), ErrorCode::InvalidArgument, "ergodic_additivity_check needs components");
  PrincipleReport r;
  r.check = "ergodic_additivity";
  r.lhs_name = "h(mix)";
  r.rhs_name = "sum_i w_i h(mu_i)";
  r.n_max = n_max;

  const JoinPair pair(U, beta, n_max);
  const InvariantMeasure mixed = mix(components);
  const auto em = pair.rate(mixed, opts);
  r.estimates.push_back({"mixed", em});
  std::vector<double> weighted(static_cast<std::size_t>(n_max), 0.0);
  double hw = 0.0, inc = 0.0, inf = 0.0;
  bool truncated = em.exactness == Exactness::Truncated;
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& c = components[i];
    hw += phi(c.weight);
    const auto ec = pair.rate(c.measure, opts);
    truncated = truncated || ec.exactness == Exactness::Truncated;
    r.estimates.push_back({"component[" + std::to_string(i) + "]", ec});
    for (int N = 1; N <= n_max; ++N) weighted[N - 1] += c.weight * ec.a(N);
    inc += c.weight * ec.increment;
    inf += c.weight * ec.running_inf;
  }

  bool outside = false;
  for (int N = 1; N <= n_max; ++N) {
    const double d = em.a(N) - weighted[N - 1];
    r.per_n_gaps.push_back(d);
    if (d < -kIdentityTol || d > hw + kIdentityTol) outside = true;
  }
  r.notes.push_back("per_n_gaps: a_N(mix) - sum_i w_i a_N(mu_i), bracket [0, H(w)] with H(w) = " + fmt(hw));
  if (truncated) r.notes.push_back("some sequence truncated by the node budget");

  if (pair.partition()) {
    r.lhs = em.increment;
    r.rhs = inc;
    r.gap = std::abs(r.lhs - r.rhs);
    r.tolerance = std::max(2.0 * em.stabilization_gap, 1e-6);
    r.notes.push_back("limits compared through increments a_N - a_{N-1}; running_inf gap " +
                      fmt(std::abs(em.running_inf - inf)));
    if (outside && !truncated)
      r.verdict = Verdict::Violated;
    else
      r.verdict = r.gap <= r.tolerance ? Verdict::HoldsWithinTol : Verdict::BracketOpen;
  } else {
    r.lhs = em.running_inf;
    r.rhs = inf;
    r.gap = r.lhs - r.rhs;
    r.tolerance = kIdentityTol;
    r.notes.push_back("cover case reported as the per-N bracket; increment gap " + fmt(std::abs(em.increment - inc)));
    r.verdict = outside ? (truncated ? Verdict::BracketOpen : Verdict::Violated) : Verdict::HoldsWithinTol;
  }
  return r;
}

PrincipleReport factor_conditioned_inf(const InvariantMeasure& mu, const FactorMap& phi, const SetFamily& U,
                                       const std::vector<int>& windows, int n_max, const StaticOptions& opts) {
  require(!windows.empty(), ErrorCode::InvalidArgument, "factor_conditioned_inf needs at least one window");
  require(std::is_sorted(windows.begin(), windows.end()) && windows.front() >= 1, ErrorCode::InvalidArgument,
          "factor_conditioned_inf needs ascending positive windows");
  require(*U.carrier()->system() == *phi.domain(), ErrorCode::CarrierMismatch,
          "factor_conditioned_inf: cover is not on the factor's domain");
  PrincipleReport r;
  r.check = "factor_conditioned";
  r.lhs_name = "H_mu(U|phi^-1 C_first)";
  r.rhs_name = "H_mu(U|phi^-1 C_last)";
  r.tolerance = kIdentityTol;
  r.n_max = n_max;

  std::optional<EntropyEstimate> prev;
  bool increases = false, truncated = false;
  for (int w : windows) {
    const SetFamily C = SetFamily::cylinders(Carrier::words(phi.codomain(), w));
    SetFamily B = pullback(phi, C);
    const int W = std::max(U.window(), B.window());
    const SetFamily UW = widen(U, W);
    B = widen(B, W);
    const auto st = conditional_cover_entropy(distribution(mu, UW.carrier()), UW, B, opts);
    truncated = truncated || st.value.method == Method::HeuristicUpperBound;
    if (!r.series.empty() && st.value.nats > r.series.back() + kIdentityTol) increases = true;
    r.series.push_back(st.value.nats);
    const auto hm = h_minus(mu, UW, B, n_max, opts);
    truncated = truncated || hm.exactness == Exactness::Truncated;
    if (prev)
      for (int N = 1; N <= n_max; ++N)
        if (hm.a(N) > prev->a(N) + kIdentityTol) increases = true;
    r.estimates.push_back({"h_minus[w=" + std::to_string(w) + "]", hm});
    prev = hm;
  }
  r.notes.push_back("series: static H_mu(U|phi^-1 C_w) per window");
  if (truncated) r.notes.push_back("some value truncated by the node budget");
  r.lhs = r.series.front();
  r.rhs = r.series.back();
  r.gap = r.lhs - r.rhs;
  for (std::size_t i = 1; i < r.series.size(); ++i) r.per_n_gaps.push_back(r.series[i - 1] - r.series[i]);
  if (increases)
    r.verdict = truncated ? Verdict::BracketOpen : Verdict::Violated;
  else
    r.verdict = Verdict::HoldsWithinTol;
  return r;
}

}  // namespace covent
