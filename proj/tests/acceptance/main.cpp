// Prints one PASS/FAIL line per acceptance criterion.

#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "covent/verify/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"covent acceptance scenarios"};
  std::vector<int> only;
  std::uint64_t seed = 42;
  app.add_option("--only", only, "criterion ids to run (default: all)")
      ->check(CLI::Range(1, covent::verify::kCriterionCount));
  app.add_option("--seed", seed, "seed for randomized criteria");
  CLI11_PARSE(app, argc, argv);

  if (only.empty())
    for (int id = 1; id <= covent::verify::kCriterionCount; ++id) only.push_back(id);

  int failed = 0;
  for (int id : only) {
    const auto r = covent::verify::run_criterion(id, seed);
    std::printf("[%s] criterion %2d %-26s %8.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.passed) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(only.size()) - failed, only.size());
  return failed == 0 ? 0 : 1;
}
