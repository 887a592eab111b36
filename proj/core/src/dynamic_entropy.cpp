#include "covent/dynamic_entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "covent/error.hpp"

namespace covent {

std::string to_string(Exactness e) {
  switch (e) {
    case Exactness::ExactConstant: return "exact_constant";
    case Exactness::UpperBoundCertified: return "upper_bound_certified";
    case Exactness::Truncated: return "truncated";
  }
  return "?";
}

EntropyEstimate estimate_from_terms(std::span<const double> a, bool truncated) {
  const int n_max = static_cast<int>(a.size());
  require(n_max >= 1, ErrorCode::InvalidArgument, "subadditive estimate needs at least one term");
  for (double x : a) require(std::isfinite(x), ErrorCode::InvalidArgument, "subadditive estimate: non-finite term");
  if (!truncated) {
    for (int N = 1; N <= n_max; ++N)
      for (int M = N; N + M <= n_max; ++M)
        if (a[N + M - 1] > a[N - 1] + a[M - 1] + kSubadditiveTol)
          fail(ErrorCode::SubadditivityViolation,
               "a_{N+M} > a_N + a_M at N=" + std::to_string(N) + ", M=" + std::to_string(M));
  }
  EntropyEstimate e;
  e.n_max = n_max;
  e.running_inf = std::numeric_limits<double>::infinity();
  for (int N = 1; N <= n_max; ++N) {
    const double r = a[N - 1] / N;
    e.sequence.push_back({N, a[N - 1], r});
    e.running_inf = std::min(e.running_inf, r);
  }
  if (n_max >= 2) {
    e.stabilization_gap = std::abs(e.sequence[n_max - 1].rate - e.sequence[n_max - 2].rate);
    e.increment = a[n_max - 1] - a[n_max - 2];
  } else {
    e.increment = a[0];
  }
  const double r0 = e.sequence.front().rate;
  const bool constant = std::all_of(e.sequence.begin(), e.sequence.end(),
                                    [&](const SequenceTerm& t) { return std::abs(t.rate - r0) <= 1e-11; });
  if (truncated)
    e.exactness = Exactness::Truncated;
  else
    e.exactness = constant ? Exactness::ExactConstant : Exactness::UpperBoundCertified;
  return e;
}

EntropyEstimate subadditive_estimate(const std::function<double(int)>& a, int n_max) {
  require(n_max >= 2, ErrorCode::InvalidArgument, "subadditive_estimate needs n_max >= 2");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(n_max));
  for (int N = 1; N <= n_max; ++N) terms.push_back(a(N));
  return estimate_from_terms(terms);
}

std::vector<SetFamily> join_ladder(const SetFamily& U, int n_max) {
  require(n_max >= 1, ErrorCode::InvalidArgument, "join_ladder needs n_max >= 1");
  std::vector<SetFamily> out;
  out.reserve(static_cast<std::size_t>(n_max));
  out.push_back(U);
  const bool points = U.carrier()->is_points();
  const int L = U.window();
  for (int N = 2; N <= n_max; ++N) {
    const SetFamily& prev = out.back();
    const SetFamily shifted = shift_preimage(U, N - 1);
    out.push_back(points ? join(prev, shifted) : join(extend_window(prev, L + N - 1), shifted));
  }
  return out;
}

namespace {

void require_aligned(const SetFamily& a, const SetFamily& b, const char* where) {
  require_same_carrier(*a.carrier(), *b.carrier(), where);
}

}  // namespace

JoinPair::JoinPair(const SetFamily& U, const SetFamily& beta, int n_max) : partition_(U.disjoint()) {
  require_aligned(U, beta, "JoinPair");
  U_ = join_ladder(U, n_max);
  B_ = join_ladder(beta, n_max);
}

std::vector<double> JoinPair::terms(const InvariantMeasure& mu, const StaticOptions& opts, bool* truncated) const {
  std::vector<double> a;
  a.reserve(U_.size());
  bool cut = false;
  for (std::size_t k = 0; k < U_.size(); ++k) {
    const Distribution d = distribution(mu, U_[k].carrier());
    if (partition_) {
      a.push_back(conditional_partition_entropy(d, U_[k], B_[k]).nats);
    } else {
      const auto r = conditional_cover_entropy(d, U_[k], B_[k], opts);
      cut = cut || r.value.method == Method::HeuristicUpperBound;
      a.push_back(r.value.nats);
    }
  }
  if (truncated) *truncated = cut;
  return a;
}

EntropyEstimate JoinPair::rate(const InvariantMeasure& mu, const StaticOptions& opts) const {
  bool truncated = false;
  const auto a = terms(mu, opts, &truncated);
  return estimate_from_terms(a, truncated);
}

EntropyEstimate JoinPair::counting() const {
  std::vector<double> a;
  for (std::size_t k = 0; k < U_.size(); ++k)
    a.push_back(std::log(static_cast<double>(conditional_cover_count(U_[k], B_[k]))));
  return estimate_from_terms(a);
}

EntropyEstimate h_partition_cond(const InvariantMeasure& mu, const SetFamily& alpha, const SetFamily& beta,
                                 int n_max) {
  require(alpha.disjoint(), ErrorCode::NotAPartition, "h_partition_cond needs a partition");
  return JoinPair(alpha, beta, n_max).rate(mu);
}

EntropyEstimate h_minus(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta, int n_max,
                        const StaticOptions& opts) {
  return JoinPair(U, beta, n_max).rate(mu, opts);
}

EntropyEstimate h_top_cond(const SetFamily& U, const SetFamily& beta, int n_max) {
  return JoinPair(U, beta, n_max).counting();
}

HPlusResult h_plus(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta, int n_max, int window,
                   std::uint64_t budget) {
  require(*U.carrier()->system() == *beta.carrier()->system(), ErrorCode::CarrierMismatch,
          "h_plus: cover and conditioner live on different systems");
  HPlusResult out;
  SetFamily base = U;
  SetFamily cond = beta;
  if (!U.carrier()->is_points()) {
    require(window >= U.window(), ErrorCode::InvalidArgument, "h_plus: window shorter than the cover");
    const int W = std::max(window, beta.window());
    base = extend_window(U, window);
    cond = extend_window(beta, W);
    out.window = window;
  } else {
    require_aligned(U, beta, "h_plus");
  }

  auto consider = [&](const SetFamily& alpha) {
    const SetFamily aligned = alpha.window() < cond.window() ? extend_window(alpha, cond.window()) : alpha;
    auto est = h_partition_cond(mu, aligned, cond, n_max);
    ++out.candidates;
    if (!out.best || est.running_inf < out.estimate.running_inf) {
      out.estimate = std::move(est);
      out.best = alpha;
    }
  };

  auto e = ustar_enumerate(base, budget);
  if (!e.refused()) {
    while (auto alpha = e.stream->next()) consider(*alpha);
  } else {
    out.ext_fallback = true;
    ExtPartitions ext(base);
    while (auto d = ext.next()) consider(d->partition);
  }
  return out;
}

SetFamily recode_to_power(const SetFamily& F, const SystemPtr& power_sys, int M) {
  require(M >= 1, ErrorCode::InvalidArgument, "recode_to_power: M must be positive");
  if (F.carrier()->is_points()) {
    require(!power_sys->is_word_system() && power_sys->point_count() == F.carrier()->system()->point_count(),
            ErrorCode::CarrierMismatch, "recode_to_power: power system has another point set");
    return SetFamily(Carrier::points(power_sys), F.elements(), F.kind());
  }
  const auto& sys = *F.carrier()->system();
  const int Lp = (F.window() + M - 1) / M;
  const SetFamily wide = extend_window(F, M * Lp);
  const auto blocks = admissible_words(sys, M);
  require(static_cast<int>(blocks.size()) == power_sys->alphabet_size(), ErrorCode::CarrierMismatch,
          "recode_to_power: power system alphabet does not match the M-blocks");
  const auto to = Carrier::words(power_sys, Lp);
  const auto& from = *wide.carrier();
  std::vector<std::size_t> index_in_from(to->size());
  Word w(static_cast<std::size_t>(M * Lp));
  for (std::size_t i = 0; i < to->size(); ++i) {
    const auto pw = to->word(i);
    for (int k = 0; k < Lp; ++k) std::copy(blocks[pw[k]].begin(), blocks[pw[k]].end(), w.begin() + k * M);
    index_in_from[i] = from.index_of(w);
  }
  require(to->size() == from.size(), ErrorCode::Internal, "recode_to_power: block recoding is not a bijection");
  std::vector<BitSet> elems(wide.size(), BitSet(to->size()));
  for (std::size_t m = 0; m < wide.size(); ++m)
    for (std::size_t i = 0; i < to->size(); ++i)
      if (wide[m].test(index_in_from[i])) elems[m].set(i);
  return SetFamily(to, std::move(elems), F.kind());
}

PowerIdentityReport power_identity_check(const InvariantMeasure& mu, const SetFamily& U, const SetFamily& beta,
                                         int M, int n_max, const StaticOptions& opts) {
  require(M >= 1 && n_max >= 1, ErrorCode::InvalidArgument, "power_identity_check needs M >= 1 and n_max >= 1");
  require_aligned(U, beta, "power_identity_check");
  PowerIdentityReport r;
  r.M = M;
  r.n_max = n_max;

  const auto UL = join_ladder(U, M * n_max);
  const auto BL = join_ladder(beta, M * n_max);
  for (int n = 1; n <= n_max; ++n) {
    const auto& u = UL[M * n - 1];
    const auto c = conditional_cover_entropy(distribution(mu, u.carrier()), u, BL[M * n - 1], opts);
    r.truncated = r.truncated || c.value.method == Method::HeuristicUpperBound;
    r.lhs.push_back(c.value.nats);
  }

  const SystemPtr psys = share(power_system(*U.carrier()->system(), M));
  const InvariantMeasure pmu = power_measure(mu, psys, M);
  const SetFamily PU = recode_to_power(UL[M - 1], psys, M);
  const SetFamily PB = recode_to_power(BL[M - 1], psys, M);
  require_aligned(PU, PB, "power_identity_check");
  const auto PUL = join_ladder(PU, n_max);
  const auto PBL = join_ladder(PB, n_max);
  for (int n = 1; n <= n_max; ++n) {
    const auto& u = PUL[n - 1];
    const auto c = conditional_cover_entropy(distribution(pmu, u.carrier()), u, PBL[n - 1], opts);
    r.truncated = r.truncated || c.value.method == Method::HeuristicUpperBound;
    r.rhs.push_back(c.value.nats);
    r.gaps.push_back(std::abs(r.lhs[n - 1] - r.rhs.back()));
    r.max_gap = std::max(r.max_gap, r.gaps.back());
  }
  return r;
}

}  // namespace covent
