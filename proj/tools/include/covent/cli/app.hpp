#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "covent/verify/properties.hpp"

namespace covent::cli {

struct RunOptions {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_max;
  std::optional<double> tolerance;
  bool bits = false;
  bool parallel = false;
};

/// Executes every task of the config and writes per-task CSV and JSON plus
/// summary.csv / summary.json into `out`. Returns an ExitCode.
int run(const RunOptions& opts, std::ostream& log);

struct VerifyOptions {
  verify::Level level = verify::Level::Fast;
  std::uint64_t seed = 42;
  bool acceptance = true;
};

/// Property suites plus (optionally) the acceptance scenarios; prints a
/// pass/fail matrix and shrunk counterexamples.
int verify_suite(const VerifyOptions& opts, std::ostream& out);

}  // namespace covent::cli
