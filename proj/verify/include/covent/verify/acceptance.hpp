#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace covent::verify {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Runs one named acceptance scenario (1..12).
CriterionResult run_criterion(int id, std::uint64_t seed = 42);

std::vector<CriterionResult> run_acceptance(std::uint64_t seed = 42);

}  // namespace covent::verify
