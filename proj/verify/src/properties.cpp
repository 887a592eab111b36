#include "covent/verify/properties.hpp"

#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

#include "covent/error.hpp"

namespace covent::verify {

namespace {

constexpr double kSlack = 1e-9;

std::uint64_t name_hash(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::optional<std::string> run_guarded(const Check& check, const PointInstance& inst) {
  try {
    return check(inst);
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

std::vector<double> mixture(const std::vector<double>& a, const std::vector<double>& b, double t) {
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = t * a[i] + (1.0 - t) * b[i];
  return m;
}

Sets padded(Sets s, std::size_t d) {
  s.resize(d);
  return s;
}

SetFamily ext_identity(const SetFamily& U) {
  ExtPartitions ext(U);
  return ext.next()->partition;
}

}  // namespace

int instances_for(Level level) { return level == Level::Full ? 1000 : 100; }

PropertyOutcome run_property(const std::string& name, int count, std::uint64_t seed, const Check& check,
                             const InstanceShape& shape) {
  PropertyOutcome out;
  out.name = name;
  const auto t0 = std::chrono::steady_clock::now();
  std::seed_seq seq{seed, name_hash(name)};
  std::mt19937_64 rng(seq);
  for (int i = 0; i < count; ++i) {
    const PointInstance inst = random_instance(rng, shape);
    ++out.instances;
    auto fail = run_guarded(check, inst);
    if (!fail) continue;
    ++out.failures;
    if (out.failures > 1) continue;
    PointInstance cur = inst;
    bool progress = true;
    while (progress) {
      progress = false;
      for (auto& cand : shrink_candidates(cur)) {
        if (auto f = run_guarded(check, cand)) {
          cur = std::move(cand);
          fail = std::move(f);
          progress = true;
          break;
        }
      }
    }
    out.detail = *fail;
    out.counterexample = describe(cur);
    out.counterexample_points = cur.points();
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

std::vector<NamedCheck> route_checks() {
  return {{"static.route_equality", [](const PointInstance& inst) -> std::optional<std::string> {
             const auto w = build(inst);
             const auto r = conditional_cover_entropy(w.mu, w.U, w.beta);
             if (!r.route_c) return "route C refused";
             const double ref = brute_cover_cond(inst.mu, inst.U, inst.beta);
             const double g = std::max({std::abs(r.route_a - r.route_b), std::abs(r.route_a - *r.route_c),
                                        std::abs(r.route_a - ref)});
             if (g > kSlack)
               return "routes A/B/C/oracle = " + num(r.route_a) + "/" + num(r.route_b) + "/" + num(*r.route_c) + "/" +
                      num(ref);
             return std::nullopt;
           }}};
}

std::vector<NamedCheck> axiom_checks(const StaticImpl& impl) {
  std::vector<NamedCheck> out;
  out.push_back({"axiom.bounds", [impl](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const double h = impl.entropy(w.mu, w.U, w.beta);
                   const auto n = impl.count(w.U, w.beta);
                   if (n < 1) return "N(U|beta) = " + std::to_string(n) + " < 1";
                   if (h < -kSlack) return "H(U|beta) negative: " + num(h);
                   if (h > std::log(static_cast<double>(n)) + kSlack)
                     return "H(U|beta) = " + num(h) + " > log N = " + num(std::log(static_cast<double>(n)));
                   if (finer(w.beta, w.U) && h > kSlack) return "beta finer than U but H = " + num(h);
                   return std::nullopt;
                 }});
  out.push_back({"axiom.count_one_iff_finer", [impl](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const bool one = impl.count(w.U, w.beta) == 1;
                   if (one != finer(w.beta, w.U))
                     return std::string("N == 1 is ") + (one ? "true" : "false") + " but beta finer than U is " +
                            (one ? "false" : "true");
                   return std::nullopt;
                 }});
  out.push_back({"axiom.shift_invariance", [impl](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const auto TU = shift_preimage(w.U, 1);
                   const auto Tb = shift_preimage(w.beta, 1);
                   const double a = impl.entropy(w.mu, w.U, w.beta), b = impl.entropy(w.mu, TU, Tb);
                   if (std::abs(a - b) > kSlack) return "H changes under T^-1: " + num(a) + " vs " + num(b);
                   if (impl.count(w.U, w.beta) != impl.count(TU, Tb)) return "N changes under T^-1";
                   return std::nullopt;
                 }});
  out.push_back({"axiom.conditioner_monotone", [impl](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const double hb = impl.entropy(w.mu, w.U, w.beta), hg = impl.entropy(w.mu, w.U, w.gamma);
                   if (hb > hg + kSlack) return "H(U|beta) = " + num(hb) + " > H(U|gamma) = " + num(hg);
                   if (impl.count(w.U, w.beta) > impl.count(w.U, w.gamma)) return "N(U|beta) > N(U|gamma)";
                   return std::nullopt;
                 }});
  out.push_back({"axiom.subadditive", [impl](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const auto J = join(w.U, w.V);
                   const double hj = impl.entropy(w.mu, J, w.beta);
                   const double hu = impl.entropy(w.mu, w.U, w.beta), hv = impl.entropy(w.mu, w.V, w.beta);
                   if (hj > hu + hv + kSlack) return "H(U v V|beta) = " + num(hj) + " > " + num(hu + hv);
                   if (impl.count(J, w.beta) > impl.count(w.U, w.beta) * impl.count(w.V, w.beta))
                     return "N(U v V|beta) > N(U|beta) N(V|beta)";
                   return std::nullopt;
                 }});
  out.push_back({"axiom.count_cover_monotone", [impl](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   Sets coarse;
                   for (std::size_t m = 0; m < inst.U.size(); m += 2) {
                     std::set<int> s(inst.U[m].begin(), inst.U[m].end());
                     if (m + 1 < inst.U.size()) s.insert(inst.U[m + 1].begin(), inst.U[m + 1].end());
                     coarse.emplace_back(s.begin(), s.end());
                   }
                   const auto C = make_cover(w.carrier, coarse);
                   if (!finer(w.U, C)) return "test construction: U not finer than its coarsening";
                   if (impl.count(w.U, w.beta) < impl.count(C, w.beta)) return "N(U|beta) < N(V|beta) with U finer";
                   const auto J = join(w.U, w.V);
                   if (impl.count(J, w.beta) < impl.count(w.U, w.beta)) return "N(U v V|beta) < N(U|beta)";
                   return std::nullopt;
                 }});
  return out;
}

std::vector<NamedCheck> oracle_checks() {
  std::vector<NamedCheck> out;
  out.push_back({"count.oracle", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const auto n = conditional_cover_count(w.U, w.beta);
                   const auto ref = brute_count_cond(inst.U, inst.beta);
                   if (n != ref) return "N = " + std::to_string(n) + ", brute force " + std::to_string(ref);
                   return std::nullopt;
                 }});
  out.push_back({"cover.oracle", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const double h = cover_entropy(w.mu, w.U).value.nats;
                   const double star = brute_cover_cond(inst.mu, inst.U, Labels(inst.mu.size(), 0));
                   const double ext = brute_ext_min(inst.mu, inst.U);
                   if (std::abs(h - star) > kSlack || std::abs(h - ext) > kSlack)
                     return "H(U) = " + num(h) + ", U* min " + num(star) + ", Ext min " + num(ext);
                   return std::nullopt;
                 }});
  out.push_back({"cover.nesting", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   for (const auto& A : w.beta.elements()) {
                     BitSet B(A.size());
                     for (const auto& G : w.gamma.elements())
                       if (G.intersects(A)) B = G;
                     const auto cA = condition_on(w.mu, A);
                     const auto cB = condition_on(w.mu, B);
                     const double lhs = cA.base_mass * cover_entropy(cA, w.U).value.nats;
                     const double rhs = cB.base_mass * cover_entropy(cB, w.U).value.nats;
                     if (lhs > rhs + kSlack) return "mu(A) H_A(U) = " + num(lhs) + " > mu(B) H_B(U) = " + num(rhs);
                   }
                   return std::nullopt;
                 }});
  out.push_back({"families.ext_inside_ustar", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   std::set<std::vector<BitSet>, decltype([](const auto& a, const auto& b) {
                                return std::lexicographical_compare(
                                    a.begin(), a.end(), b.begin(), b.end(),
                                    BitSet::lex_less);
                              })>
                       star;
                   auto e = ustar_enumerate(w.U);
                   while (auto a = e.stream->next()) {
                     if (!finer(*a, w.U)) return "U* member not finer than U";
                     star.insert(a->elements());
                   }
                   ExtPartitions ext(w.U);
                   while (auto d = ext.next()) {
                     if (!finer(d->partition, w.U)) return "Ext member not finer than U";
                     std::vector<BitSet> positional(w.U.size(), BitSet(w.carrier->size()));
                     for (std::size_t k = 0; k < d->order.size(); ++k) positional[d->order[k]] = d->partition[k];
                     if (!star.count(positional)) return "Ext member missing from U*";
                   }
                   return std::nullopt;
                 }});
  out.push_back({"families.join_finer", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const auto J = join(w.U, w.V);
                   if (!finer(J, w.U) || !finer(J, w.V)) return "U v V not finer than both";
                   return std::nullopt;
                 }});
  out.push_back({"families.delta_pseudometric", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const std::size_t d = std::max(inst.U.size(), inst.V.size());
                   const auto A = make_cover(w.carrier, padded(inst.U, d));
                   const auto B = make_cover(w.carrier, padded(inst.V, d));
                   const auto C = make_cover(w.carrier, padded(to_sets(ext_identity(w.U)), d));
                   const double ab = family_delta(w.mu, A, B), ba = family_delta(w.mu, B, A);
                   const double ac = family_delta(w.mu, A, C), cb = family_delta(w.mu, C, B);
                   if (family_delta(w.mu, A, A) != 0.0) return "delta(U, U) != 0";
                   if (std::abs(ab - ba) > kSlack) return "delta not symmetric";
                   if (ab > ac + cb + kSlack) return "triangle inequality fails";
                   if (ab > 2.0 * static_cast<double>(d) + kSlack) return "delta exceeds 2 * elements";
                   return std::nullopt;
                 }});
  out.push_back({"measures.concavity", [](const PointInstance& inst) -> std::optional<std::string> {
                   const auto w = build(inst);
                   const auto alpha = ext_identity(w.U);
                   const double hm = conditional_partition_entropy(w.mu, alpha, w.beta).nats;
                   const double hn = conditional_partition_entropy(w.nu, alpha, w.beta).nats;
                   for (double t : {0.25, 0.5, 0.75}) {
                     const Distribution m(w.carrier, mixture(inst.mu, inst.nu, t));
                     const double h = conditional_partition_entropy(m, alpha, w.beta).nats;
                     if (h < t * hm + (1.0 - t) * hn - kSlack) return "concavity fails at t = " + num(t);
                   }
                   return std::nullopt;
                 }});
  return out;
}

std::vector<PropertyOutcome> run_suites(Level level, std::uint64_t seed, const StaticImpl& impl) {
  const int count = instances_for(level);
  std::vector<PropertyOutcome> out;
  for (const auto& groups : {route_checks(), axiom_checks(impl), oracle_checks()})
    for (const auto& c : groups) out.push_back(run_property(c.name, count, seed, c.check));
  return out;
}

}  // namespace covent::verify
