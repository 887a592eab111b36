#include <iostream>

#include "CLI11.hpp"
#include "covent/cli/app.hpp"
#include "covent/cli/model.hpp"

int main(int argc, char** argv) {
  CLI::App app{"covent: conditional cover entropies of finite symbolic systems"};
  app.require_subcommand(1);

  covent::cli::RunOptions run;
  std::uint64_t seed = 0;
  int n_max = 0;
  double tol = 0.0;
  auto* r = app.add_subcommand("run", "execute the tasks of an experiment config");
  r->add_option("config", run.config, "config JSON")->required()->check(CLI::ExistingFile);
  r->add_option("-o,--out", run.out, "output directory")->required();
  auto* seed_opt = r->add_option("--seed", seed, "override the config seed");
  auto* n_opt = r->add_option("--n-max", n_max, "override every task's n_max")->check(CLI::PositiveNumber);
  auto* tol_opt = r->add_option("--tol", tol, "override every task's tolerance")->check(CLI::NonNegativeNumber);
  r->add_flag("--bits", run.bits, "report entropies in bits instead of nats");
  r->add_flag("--parallel", run.parallel, "run tasks concurrently");

  covent::cli::VerifyOptions ver;
  std::string level = "fast";
  bool no_acceptance = false;
  auto* v = app.add_subcommand("verify", "run the property suites and acceptance scenarios");
  v->add_option("--level", level, "fast (100 instances) or full (1000)")->check(CLI::IsMember({"fast", "full"}));
  v->add_option("--seed", ver.seed, "seed for every randomized check");
  v->add_flag("--properties-only", no_acceptance, "skip the acceptance scenarios");

  CLI11_PARSE(app, argc, argv);

  if (r->parsed()) {
    if (seed_opt->count()) run.seed = seed;
    if (n_opt->count()) run.n_max = n_max;
    if (tol_opt->count()) run.tolerance = tol;
    return covent::cli::run(run, std::cerr);
  }
  ver.level = level == "full" ? covent::verify::Level::Full : covent::verify::Level::Fast;
  ver.acceptance = !no_acceptance;
  return covent::cli::verify_suite(ver, std::cout);
}
