#include "covent/cli/app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>

#include "covent/cli/model.hpp"
#include "covent/dynamic_entropy.hpp"
#include "covent/error.hpp"
#include "covent/principles.hpp"
#include "covent/static_entropy.hpp"
#include "covent/verify/acceptance.hpp"

namespace covent::cli {

namespace {

struct Settings {
  double scale = 1.0;  // 1 / log 2 in bits mode
  std::optional<int> n_max;
  std::optional<double> tolerance;
  std::uint64_t seed = 42;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9f", x);
  std::string s = buf;
  if (s == "-0.000000000") s.erase(0, 1);
  return s;
}

struct SummaryRow {
  std::string check_name;
  double lhs = 0.0, rhs = 0.0, gap = 0.0;
  std::string verdict;
  int n_max = 0;
  double tolerance = 0.0;
};

struct TaskOutput {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  json report;
  SummaryRow summary;
  int exit = kOk;
  std::string error_code;
  std::string error;
};

class Task {
 public:
  Task(Model& model, const json& def, int index, const Settings& s) : m_(model), d_(def), index_(index), s_(s) {}

  std::string kind() const { return str("kind"); }
  std::string name() const { return d_.contains("name") ? str("name") : kind() + "_" + std::to_string(index_); }

  int n_max(int fallback = 6) const { return s_.n_max ? *s_.n_max : d_.value("n_max", fallback); }
  double tolerance(double fallback) const { return s_.tolerance ? *s_.tolerance : d_.value("tolerance", fallback); }
  double scale() const { return d_.value("log_base", std::string("e")) == "2" ? 1.0 / std::log(2.0) : s_.scale; }

  std::string str(const char* key) const {
    if (!d_.contains(key) || !d_[key].is_string())
      throw CliError("INVALID_CONFIG", index_, std::string("task needs string \"") + key + "\"");
    return d_[key].get<std::string>();
  }
  template <class T>
  T get(const char* key, T fallback) const {
    try {
      return d_.value(key, fallback);
    } catch (const json::exception& e) {
      throw CliError("INVALID_CONFIG", index_, std::string("bad \"") + key + "\": " + e.what());
    }
  }

  const InvariantMeasure& measure(const char* key = "measure") const { return m_.measure(str(key)); }
  const SetFamily& cover() const { return m_.family(str("cover")); }
  SetFamily conditioner() const {
    return d_.contains("conditioner") ? m_.family(str("conditioner")) : SetFamily::trivial(cover().carrier());
  }
  const FactorMap& factor() const { return m_.factor(str("factor")); }
  Model& model() const { return m_; }
  int index() const noexcept { return index_; }
  std::uint64_t seed() const noexcept { return s_.seed; }
  const json& def() const noexcept { return d_; }

 private:
  Model& m_;
  const json& d_;
  int index_;
  const Settings& s_;
};

json estimate_json(const EntropyEstimate& e, double k) {
  json seq = json::array();
  for (const auto& t : e.sequence) seq.push_back({{"n", t.n}, {"a", t.a * k}, {"rate", t.rate * k}});
  return {{"sequence", seq},
          {"running_inf", e.running_inf * k},
          {"stabilization_gap", e.stabilization_gap * k},
          {"increment", e.increment * k},
          {"n_max", e.n_max},
          {"exactness", to_string(e.exactness)}};
}

json report_json(const PrincipleReport& r, double k) {
  json j{{"check", r.check},         {"lhs_name", r.lhs_name}, {"rhs_name", r.rhs_name},
         {"lhs", r.lhs * k},         {"rhs", r.rhs * k},       {"gap", r.gap * k},
         {"tolerance", r.tolerance * k}, {"n_max", r.n_max},   {"verdict", to_string(r.verdict)},
         {"notes", r.notes}};
  json gaps = json::array(), series = json::array(), est = json::object(), trace = json::array();
  for (double g : r.per_n_gaps) gaps.push_back(g * k);
  for (double v : r.series) series.push_back(v * k);
  for (const auto& e : r.estimates) est[e.name] = estimate_json(e.estimate, k);
  for (const auto& t : r.trace)
    trace.push_back({{"start", t.start}, {"iterations", t.iterations}, {"value", t.value * k}, {"converged", t.converged}});
  j["per_n_gaps"] = gaps;
  j["series"] = series;
  j["estimates"] = est;
  j["trace"] = trace;
  if (r.best_transition) j["best_transition"] = *r.best_transition;
  return j;
}

void from_report(TaskOutput& out, const Task& t, const PrincipleReport& r, double k) {
  out.report = report_json(r, k);
  out.summary = {t.name(), r.lhs * k, r.rhs * k, r.gap * k, to_string(r.verdict), r.n_max, r.tolerance * k};
  if (r.verdict == Verdict::Violated) out.exit = kViolation;
}

void gap_rows(TaskOutput& out, const PrincipleReport& r, double k) {
  out.header = {"n", "gap"};
  for (std::size_t i = 0; i < r.per_n_gaps.size(); ++i) out.rows.push_back({std::to_string(i + 1), num(r.per_n_gaps[i] * k)});
}

void estimate_task(TaskOutput& out, const Task& t, const EntropyEstimate& e, double k) {
  out.header = {"n", "a_n", "rate"};
  for (const auto& s : e.sequence) out.rows.push_back({std::to_string(s.n), num(s.a * k), num(s.rate * k)});
  out.report = estimate_json(e, k);
  out.summary = {t.name(), e.running_inf * k, e.sequence.back().rate * k, e.stabilization_gap * k,
                 to_string(e.exactness), e.n_max, 0.0};
}

StaticOptions static_options(const Task& t) {
  StaticOptions o;
  o.ustar_budget = t.get<std::uint64_t>("ustar_budget", o.ustar_budget);
  o.node_budget = t.get<std::uint64_t>("node_budget", o.node_budget);
  o.route_c = t.get<bool>("route_c", true);
  return o;
}

TaskOutput execute(const Task& t) {
  TaskOutput out;
  const std::string kind = t.kind();
  const double k = t.scale();

  if (kind == "static") {
    const SetFamily& U = t.cover();
    const SetFamily beta = t.conditioner();
    const auto opts = static_options(t);
    const auto r = conditional_cover_entropy(distribution(t.measure(), U.carrier()), U, beta, opts);
    if (t.get<bool>("require_exhaustive", false) && !r.route_c)
      throw CliError("BUDGET_EXCEEDED", t.index(),
                     "U* has " + std::to_string(r.ustar_count) + " assignments, over the budget", kBudgetRefusal);
    const double rc = r.route_c ? *r.route_c : std::nan("");
    out.header = {"quantity", "value"};
    out.rows = {{"H_cover_cond", num(r.value.nats * k)},
                {"route_a", num(r.route_a * k)},
                {"route_b", num(r.route_b * k)},
                {"route_c", r.route_c ? num(rc * k) : ""},
                {"ustar_count", std::to_string(r.ustar_count)}};
    const char* method = r.value.method == Method::HeuristicUpperBound ? "heuristic_upper_bound" : "exact";
    out.report = {{"H_cover_cond", r.value.nats * k}, {"route_a", r.route_a * k}, {"route_b", r.route_b * k},
                  {"route_c", r.route_c ? json(rc * k) : json(nullptr)}, {"ustar_count", r.ustar_count},
                  {"nodes", r.nodes}, {"method", method}};
    const double other = r.route_c ? rc : r.route_b;
    out.summary = {t.name(), r.route_a * k, other * k, std::abs(r.route_a - other) * k, "holds_within_tol", 1,
                   kAgreeTol * k};
    return out;
  }
  if (kind == "count") {
    const SetFamily& U = t.cover();
    const auto n = conditional_cover_count(U, t.conditioner());
    const double l = std::log(static_cast<double>(n));
    out.header = {"quantity", "value"};
    out.rows = {{"N_cond", std::to_string(n)}, {"log_N_cond", num(l * k)}};
    out.report = {{"N_cond", n}, {"log_N_cond", l * k}};
    out.summary = {t.name(), l * k, l * k, 0.0, "exact", 1, 0.0};
    return out;
  }
  if (kind == "h_minus") {
    estimate_task(out, t, h_minus(t.measure(), t.cover(), t.conditioner(), t.n_max(), static_options(t)), k);
    return out;
  }
  if (kind == "h_top") {
    estimate_task(out, t, h_top_cond(t.cover(), t.conditioner(), t.n_max()), k);
    return out;
  }
  if (kind == "h_plus") {
    const SetFamily& U = t.cover();
    const auto r = h_plus(t.measure(), U, t.conditioner(), t.n_max(), t.get<int>("window", U.window()),
                          t.get<std::uint64_t>("ustar_budget", kDefaultUStarBudget));
    if (r.ext_fallback && !t.get<bool>("fallback", true))
      throw CliError("BUDGET_EXCEEDED", t.index(), "U* over budget and fallback disabled", kBudgetRefusal);
    estimate_task(out, t, r.estimate, k);
    out.report["window"] = r.window;
    out.report["candidates"] = r.candidates;
    out.report["ext_fallback"] = r.ext_fallback;
    return out;
  }
  if (kind == "power_check") {
    const auto r = power_identity_check(t.measure(), t.cover(), t.conditioner(), t.get<int>("M", 2), t.n_max(3),
                                        static_options(t));
    const double tol = t.tolerance(kIdentityTol);
    out.header = {"n", "lhs", "rhs", "gap"};
    json gaps = json::array();
    for (std::size_t i = 0; i < r.gaps.size(); ++i) {
      out.rows.push_back({std::to_string(i + 1), num(r.lhs[i] * k), num(r.rhs[i] * k), num(r.gaps[i] * k)});
      gaps.push_back(r.gaps[i] * k);
    }
    std::string verdict = r.max_gap <= tol ? "holds_within_tol" : r.truncated ? "bracket_open" : "violated";
    if (verdict == "violated") out.exit = kViolation;
    out.report = {{"M", r.M}, {"n_max", r.n_max}, {"gaps", gaps}, {"max_gap", r.max_gap * k},
                  {"truncated", r.truncated}, {"verdict", verdict}};
    const int n = r.n_max;
    out.summary = {t.name(), r.lhs.back() * k, r.rhs.back() * k, r.max_gap * k, verdict, n, tol * k};
    return out;
  }
  if (kind == "factor_check") {
    const auto r = factor_invariance_check(t.factor(), t.measure(), t.cover(), t.conditioner(), t.n_max(),
                                           static_options(t));
    gap_rows(out, r, k);
    from_report(out, t, r, k);
    return out;
  }
  if (kind == "variational") {
    VariationalOptions o;
    o.starts = t.get<int>("starts", o.starts);
    o.max_iterations = t.get<int>("max_iterations", o.max_iterations);
    o.seed = t.seed();
    o.tolerance = t.tolerance(o.tolerance);
    const SetFamily& U = t.cover();
    const auto r = variational_search(U.carrier()->system(), U, t.conditioner(), t.n_max(), o);
    out.header = {"start", "iterations", "value", "converged"};
    for (const auto& e : r.trace)
      out.rows.push_back({std::to_string(e.start), std::to_string(e.iterations), num(e.value * k), e.converged ? "1" : "0"});
    from_report(out, t, r, k);
    out.report["seed"] = o.seed;
    return out;
  }
  if (kind == "minmax") {
    MinmaxOptions o;
    o.refine = t.get<bool>("refine", true);
    o.tolerance = t.tolerance(o.tolerance);
    o.search.seed = t.seed();
    std::vector<InvariantMeasure> grid;
    for (const auto& name : t.get<std::vector<std::string>>("measures", {})) grid.push_back(t.model().measure(name));
    const SetFamily& U = t.cover();
    const auto r = minmax_check(U.carrier()->system(), U, t.conditioner(), grid, t.n_max(),
                                t.get<int>("window", U.window()), o);
    out.header = {"candidate", "inner_max"};
    for (std::size_t i = 0; i < r.series.size(); ++i) out.rows.push_back({std::to_string(i), num(r.series[i] * k)});
    from_report(out, t, r, k);
    return out;
  }
  if (kind == "bracket") {
    const auto r = plus_minus_bracket(t.measure(), t.cover(), t.conditioner(), t.n_max(),
                                      t.get<std::vector<int>>("windows", {1, 2}), t.tolerance(kBracketTol),
                                      static_options(t));
    gap_rows(out, r, k);
    from_report(out, t, r, k);
    return out;
  }
  if (kind == "ergodic_check") {
    std::vector<ErgodicComponent> comps;
    if (t.def().contains("components")) {
      for (const auto& c : t.def()["components"]) {
        if (!c.contains("measure") || !c.contains("weight"))
          throw CliError("INVALID_CONFIG", t.index(), "components need \"measure\" and \"weight\"");
        comps.push_back({c["weight"].get<double>(), t.model().measure(c["measure"].get<std::string>())});
      }
    } else {
      comps = ergodic_decompose(t.measure());
    }
    const auto r = ergodic_additivity_check(comps, t.cover(), t.conditioner(), t.n_max(), static_options(t));
    gap_rows(out, r, k);
    from_report(out, t, r, k);
    return out;
  }
  if (kind == "factor_cond") {
    const auto windows = t.get<std::vector<int>>("windows", {1, 2, 3});
    const auto r = factor_conditioned_inf(t.measure(), t.factor(), t.cover(), windows, t.n_max(), static_options(t));
    out.header = {"window", "value"};
    for (std::size_t i = 0; i < r.series.size() && i < windows.size(); ++i)
      out.rows.push_back({std::to_string(windows[i]), num(r.series[i] * k)});
    from_report(out, t, r, k);
    return out;
  }
  throw CliError("UNKNOWN_TASK", t.index(), "unknown task kind \"" + kind + "\"");
}

int exit_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::BudgetExceeded: return kBudgetRefusal;
    case ErrorCode::RouteDisagreement:
    case ErrorCode::SubadditivityViolation:
    case ErrorCode::Internal: return kViolation;
    default: return kConfigError;
  }
}

TaskOutput guarded(Model& model, const json& def, int index, const Settings& s) {
  const Task t(model, def, index, s);
  try {
    return execute(t);
  } catch (const CliError& e) {
    TaskOutput out;
    out.exit = e.exit_code();
    out.error_code = e.code();
    out.error = e.what();
    return out;
  } catch (const Error& e) {
    TaskOutput out;
    out.exit = exit_for(e.code());
    out.error_code = std::string(to_string(e.code()));
    out.error = e.what();
    return out;
  } catch (const json::exception& e) {
    TaskOutput out;
    out.exit = kConfigError;
    out.error_code = "INVALID_CONFIG";
    out.error = e.what();
    return out;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

void write_csv(const std::filesystem::path& p, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream f(p);
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) f << (i ? "," : "") << csv_field(r[i]);
    f << "\n";
  };
  line(header);
  for (const auto& r : rows) line(r);
}

std::string file_stem(int index, const std::string& name) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d_", index);
  std::string s = buf;
  for (char c : name) s += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') ? c : '_';
  return s;
}

}  // namespace

int run(const RunOptions& opts, std::ostream& log) {
  json config;
  {
    std::ifstream in(opts.config);
    if (!in) {
      log << "error: INVALID_CONFIG: cannot read " << opts.config << "\n";
      return kConfigError;
    }
    try {
      config = json::parse(in);
    } catch (const json::exception& e) {
      log << "error: INVALID_CONFIG: " << e.what() << "\n";
      return kConfigError;
    }
  }
  std::optional<Model> model;
  try {
    model.emplace(config);
    model->validate();
  } catch (const CliError& e) {
    log << "error: " << e.code() << ": " << e.what() << "\n";
    return e.exit_code();
  } catch (const json::exception& e) {
    log << "error: INVALID_CONFIG: " << e.what() << "\n";
    return kConfigError;
  }

  std::error_code ec;
  std::filesystem::create_directories(opts.out, ec);
  if (ec) {
    log << "error: cannot create output directory " << opts.out << ": " << ec.message() << "\n";
    return kConfigError;
  }

  Settings s;
  s.scale = opts.bits ? 1.0 / std::log(2.0) : 1.0;
  s.n_max = opts.n_max;
  s.tolerance = opts.tolerance;
  s.seed = opts.seed ? *opts.seed : model->seed();

  const json& tasks = model->tasks();
  const int n = static_cast<int>(tasks.size());
  std::vector<TaskOutput> outs(static_cast<std::size_t>(n));
  if (opts.parallel) {
    // Measures and families are resolved up front so workers only read the model.
    std::vector<std::future<TaskOutput>> jobs;
    for (int i = 0; i < n; ++i)
      jobs.push_back(std::async(std::launch::async, guarded, std::ref(*model), std::cref(tasks[i]), i, std::cref(s)));
    for (int i = 0; i < n; ++i) outs[i] = jobs[i].get();
  } else {
    for (int i = 0; i < n; ++i) outs[i] = guarded(*model, tasks[i], i, s);
  }

  int status = kOk;
  std::vector<std::vector<std::string>> summary;
  json summary_json = json::array();
  for (int i = 0; i < n; ++i) {
    auto& o = outs[i];
    const std::string name = tasks[i].contains("name") && tasks[i]["name"].is_string()
                                 ? tasks[i]["name"].get<std::string>()
                                 : tasks[i].value("kind", std::string("task")) + "_" + std::to_string(i);
    const std::string stem = file_stem(i, name);
    json doc{{"task_index", i}, {"task", tasks[i]}, {"seed", s.seed}, {"units", opts.bits ? "bits" : "nats"}};
    if (!o.error_code.empty()) {
      log << "error: task " << i << " (" << name << "): " << o.error_code << ": " << o.error << "\n";
      doc["error"] = {{"code", o.error_code}, {"message", o.error}, {"task_index", i}};
      summary_json.push_back({{"task_index", i}, {"check_name", name}, {"error", o.error_code}});
    } else {
      write_csv(opts.out / (stem + ".csv"), o.header, o.rows);
      doc["result"] = o.report;
      const auto& r = o.summary;
      summary.push_back({r.check_name, num(r.lhs), num(r.rhs), num(r.gap), r.verdict, std::to_string(r.n_max),
                         num(r.tolerance)});
      summary_json.push_back({{"task_index", i}, {"check_name", r.check_name}, {"lhs", r.lhs}, {"rhs", r.rhs},
                              {"gap", r.gap}, {"verdict", r.verdict}, {"n_max", r.n_max},
                              {"tolerance", r.tolerance}});
      log << "task " << i << " (" << name << "): " << r.verdict << "\n";
    }
    std::ofstream(opts.out / (stem + ".json")) << doc.dump(2) << "\n";
    if (status == kOk && o.exit != kOk) status = o.exit;
  }
  write_csv(opts.out / "summary.csv", {"check_name", "lhs", "rhs", "gap", "verdict", "n_max", "tolerance"}, summary);
  std::ofstream(opts.out / "summary.json") << json{{"tasks", summary_json}, {"exit_code", status}}.dump(2) << "\n";
  return status;
}

int verify_suite(const VerifyOptions& opts, std::ostream& out) {
  int failed = 0;
  const auto props = verify::run_suites(opts.level, opts.seed);
  out << "property suites (" << verify::instances_for(opts.level) << " instances each, seed " << opts.seed << ")\n";
  for (const auto& p : props) {
    char line[256];
    std::snprintf(line, sizeof line, "  [%s] %-32s %5d/%-5d %7.2fs\n", p.passed() ? "PASS" : "FAIL", p.name.c_str(),
                  p.instances - p.failures, p.instances, p.seconds);
    out << line;
    if (!p.passed()) {
      ++failed;
      out << "      " << p.detail << "\n      counterexample (" << p.counterexample_points
          << " points): " << p.counterexample << "\n";
    }
  }
  if (opts.acceptance) {
    out << "acceptance scenarios\n";
    for (int id = 1; id <= verify::kCriterionCount; ++id) {
      const auto r = verify::run_criterion(id, opts.seed);
      char line[256];
      std::snprintf(line, sizeof line, "  [%s] %2d %-28s %7.2fs  ", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(),
                    r.seconds);
      out << line << r.detail << "\n" << std::flush;
      if (!r.passed) ++failed;
    }
  }
  out << (failed == 0 ? "all passed" : std::to_string(failed) + " failing") << "\n";
  return failed == 0 ? kOk : kViolation;
}

}  // namespace covent::cli
