#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "covent/factor_map.hpp"
#include "covent/families.hpp"
#include "covent/measures.hpp"
#include "covent/systems.hpp"
#include "json.hpp"

namespace covent::cli {

using nlohmann::json;

enum ExitCode : int { kOk = 0, kViolation = 1, kConfigError = 2, kBudgetRefusal = 3 };

/// A failure with a machine-readable code. `task` is -1 for errors in the
/// object sections.
class CliError : public std::runtime_error {
 public:
  CliError(std::string code, int task, const std::string& what, int exit_code = kConfigError)
      : std::runtime_error(what), code_(std::move(code)), task_(task), exit_(exit_code) {}
  const std::string& code() const noexcept { return code_; }
  int task() const noexcept { return task_; }
  int exit_code() const noexcept { return exit_; }

 private:
  std::string code_;
  int task_;
  int exit_;
};

/// Named objects of an experiment config. Systems and factor maps are
/// built when the config loads; measures and families are built on first
/// use so that an unresolved name is reported against the task using it.
class Model {
 public:
  explicit Model(const json& config);

  const SystemPtr& system(const std::string& name) const;
  const FactorMap& factor(const std::string& name) const;
  const InvariantMeasure& measure(const std::string& name);
  const SetFamily& family(const std::string& name);

  /// Forces every definition; errors carry task index -1.
  void validate();

  std::uint64_t seed() const noexcept { return seed_; }
  const json& tasks() const noexcept { return tasks_; }

 private:
  SystemPtr build_system(const std::string& name, const json& d);
  InvariantMeasure build_measure(const std::string& name, const json& d);
  SetFamily build_family(const std::string& name, const json& d);
  const SystemPtr& system_of(const json& d) const;

  std::map<std::string, SystemPtr> systems_;
  std::map<std::string, FactorMap> factors_;
  std::map<std::string, json> measure_defs_;
  std::map<std::string, json> family_defs_;
  std::map<std::string, InvariantMeasure> measures_;
  std::map<std::string, SetFamily> families_;
  std::vector<std::string> resolving_;
  std::uint64_t seed_ = 42;
  json tasks_ = json::array();
};

/// "0110" -> {0,1,1,0}
Word parse_word(const std::string& s);

}  // namespace covent::cli
