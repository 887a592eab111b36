#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "covent/cli/app.hpp"
#include "covent/cli/model.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using covent::cli::RunOptions;
using nlohmann::json;

namespace {

const fs::path kData = COVENT_TEST_DATA;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("covent_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

fs::path write_config(const fs::path& dir, const json& cfg) {
  const auto p = dir / "config.json";
  std::ofstream(p) << cfg.dump(2);
  return p;
}

int run(const fs::path& config, const fs::path& out, bool bits = false, std::string* log = nullptr) {
  RunOptions o;
  o.config = config;
  o.out = out;
  o.bits = bits;
  std::ostringstream os;
  const int code = covent::cli::run(o, os);
  if (log) *log = os.str();
  return code;
}

const json kGoldenSmall = json::parse(R"({
  "seed": 3,
  "system": {"kind": "sft", "transition": [[1, 1], [1, 0]]},
  "measures": {"parry": {"kind": "markov", "P": [[0.6180339887498949, 0.3819660112501051], [1.0, 0.0]]}},
  "families": {
    "C": {"kind": "cylinders", "window": 1},
    "W": {"kind": "cover", "sets": [["00", "10"], ["01", "10"]]},
    "beta2": {"kind": "extend", "of": "C", "window": 2}
  },
  "tasks": [
    {"kind": "h_top", "name": "top", "cover": "C", "n_max": 8},
    {"kind": "h_minus", "name": "minus", "measure": "parry", "cover": "W", "conditioner": "beta2", "n_max": 4},
    {"kind": "variational", "name": "search", "cover": "C", "n_max": 5, "starts": 2}
  ]
})");

}  // namespace

TEST_CASE("three-point example") {
  const auto out = scratch("three");
  CHECK(run(kData / "three_point.json", out) == covent::cli::kOk);
  CHECK(first_line(out / "summary.csv") == "check_name,lhs,rhs,gap,verdict,n_max,tolerance");
  CHECK(first_line(out / "00_running_example.csv") == "quantity,value");
  const auto s = json::parse(slurp(out / "summary.json"));
  REQUIRE(s["tasks"].size() == 3);
  CHECK(s["tasks"][0]["lhs"].get<double>() == doctest::Approx(0.0));
  CHECK(s["tasks"][1]["lhs"].get<double>() == doctest::Approx(0.636514168).epsilon(1e-9));
  CHECK(s["tasks"][2]["lhs"].get<double>() == doctest::Approx(std::log(2.0)));
  const auto count = slurp(out / "02_count.csv");
  CHECK(count.find("N_cond,2") != std::string::npos);
}

TEST_CASE("empty task list") {
  const auto out = scratch("empty");
  CHECK(run(kData / "empty.json", out) == covent::cli::kOk);
  CHECK(slurp(out / "summary.csv") == "check_name,lhs,rhs,gap,verdict,n_max,tolerance\n");
}

TEST_CASE("unresolved names are config errors") {
  const auto out = scratch("unresolved");
  std::string log;
  CHECK(run(kData / "unresolved.json", out, false, &log) == covent::cli::kConfigError);
  CHECK(log.find("NAME_UNRESOLVED") != std::string::npos);
  CHECK(log.find("mu7") != std::string::npos);
  CHECK(run(kData / "missing.json", scratch("missing")) == covent::cli::kConfigError);
}

TEST_CASE("budget refusals") {
  const auto dir = scratch("budget");
  json cfg = json::parse(slurp(kData / "three_point.json"));
  cfg["tasks"] = json::array({{{"kind", "static"},
                               {"name", "strict"},
                               {"measure", "uniform"},
                               {"cover", "U"},
                               {"ustar_budget", 1},
                               {"require_exhaustive", true}}});
  CHECK(run(write_config(dir, cfg), dir / "out") == covent::cli::kBudgetRefusal);
}

TEST_CASE("bits rescale entropies only") {
  const auto dir = scratch("bits");
  const auto cfg = write_config(dir, kGoldenSmall);
  REQUIRE(run(cfg, dir / "nats") == covent::cli::kOk);
  REQUIRE(run(cfg, dir / "bits", true) == covent::cli::kOk);
  const auto a = json::parse(slurp(dir / "nats" / "summary.json"))["tasks"];
  const auto b = json::parse(slurp(dir / "bits" / "summary.json"))["tasks"];
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (const char* key : {"lhs", "rhs", "gap", "tolerance"})
      CHECK(b[i][key].get<double>() == doctest::Approx(a[i][key].get<double>() / std::log(2.0)).epsilon(1e-12));
    CHECK(b[i]["verdict"] == a[i]["verdict"]);
    CHECK(b[i]["n_max"] == a[i]["n_max"]);
  }
}

TEST_CASE("runs are reproducible") {
  const auto dir = scratch("repeat");
  const auto cfg = write_config(dir, kGoldenSmall);
  REQUIRE(run(cfg, dir / "a") == covent::cli::kOk);
  REQUIRE(run(cfg, dir / "b") == covent::cli::kOk);
  for (const auto& entry : fs::directory_iterator(dir / "a"))
    CHECK(slurp(entry.path()) == slurp(dir / "b" / entry.path().filename()));
  CHECK(first_line(dir / "a" / "00_top.csv") == "n,a_n,rate");
  CHECK(first_line(dir / "a" / "02_search.csv") == "start,iterations,value,converged");
}
