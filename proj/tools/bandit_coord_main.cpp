#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bandit_coord/harness.hpp"

using namespace bandit_coord;

int main(int argc, char** argv) {
  CLI::App app{"bandit submodular coordination simulator"};
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand(
      "simulate", "run Monte-Carlo trials and write results.csv / summary.json");
  std::string sim_config;
  bool with_oracle = false;
  int trials_override = -1;
  long long seed_override = -1;
  simulate->add_option("--config", sim_config, "experiment config (JSON)")
      ->required();
  simulate->add_flag("--with-oracle", with_oracle,
                     "compute per-trial hindsight-optimal regret reports");
  simulate->add_option("--trials", trials_override, "override config trials");
  simulate->add_option("--seed", seed_override, "override config seed base");

  auto* verify = app.add_subcommand(
      "verify", "run the exhaustive property suite on built-in instances");
  bool inject_supermodular = false;
  verify->add_flag("--inject-supermodular", inject_supermodular,
                   "self-test: add a known-bad objective; expected exit 1");

  auto* bench = app.add_subcommand(
      "bench", "report per-step timing and gated evaluation counts");
  std::string bench_config;
  bench->add_option("--config", bench_config, "experiment config (JSON)")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      ExperimentConfig cfg = load_experiment_config(sim_config);
      if (with_oracle) cfg.with_oracle = true;
      if (trials_override >= 0) cfg.trials = trials_override;
      if (seed_override >= 0) cfg.seed_base = static_cast<uint64_t>(seed_override);
      if (cfg.trials < 1) {
        std::cerr << "trials must be >= 1\n";
        return 2;
      }
      const RunResult result = run_experiment(cfg);
      return write_outputs(result);
    }
    if (verify->parsed()) {
      return run_verification(std::cout, inject_supermodular);
    }
    if (bench->parsed()) {
      const ExperimentConfig cfg = load_experiment_config(bench_config);
      return run_bench(cfg, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
