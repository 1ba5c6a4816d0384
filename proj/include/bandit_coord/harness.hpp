#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandit_coord/coordination.hpp"
#include "bandit_coord/oracle.hpp"
#include "bandit_coord/scenarios.hpp"

namespace bandit_coord {

struct ExperimentConfig {
  std::string scenario_name = "twoVtwo_suboptimal";
  Scenario scenario;  // resolved from scenario_name or inline "world"
  int trials = 50;
  uint64_t seed_base = 1;
  int horizon = 2000;
  std::vector<Algorithm> algorithms = {Algorithm::MetaBSG, Algorithm::BSG,
                                       Algorithm::CommandOnly};
  std::string output_dir = "out";
  MetaUpdateMode meta_update_mode = MetaUpdateMode::kPaper;
  bool with_oracle = false;
  double oracle_delta = 0.05;
  double bound_c = 8.0;
  int threads = 0;  // 0 => BANDIT_COORD_THREADS or hardware concurrency
};

// Throws std::invalid_argument with a diagnostic on any schema violation.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
ExperimentConfig load_experiment_config(const std::string& path);

Algorithm algorithm_from_name(const std::string& name);

struct AlgorithmSeries {
  Algorithm algorithm = Algorithm::BSG;
  uint64_t seed = 0;
  std::vector<double> value;      // normalized f_t(executed), length T
  std::vector<double> min_dist;   // total minimum distance, length T
  std::vector<int8_t> strategy;   // -1 none; else int(Strategy)
  std::vector<double> q_ext;      // MetaBSG: q_t(ExtComm); else empty
};

struct TrialResult {
  int trial = 0;
  std::vector<AlgorithmSeries> series;  // one per requested algorithm
  std::optional<RegretReport> report;   // when the oracle ran
};

struct RunResult {
  ExperimentConfig config;
  std::vector<TrialResult> trials;
};

// Runs trials x algorithms episodes with seed = seed_base + trial. Trials run
// on a worker pool (size capped by config.threads / BANDIT_COORD_THREADS);
// output ordering is independent of scheduling.
RunResult run_experiment(const ExperimentConfig& cfg);

// CSV schema: trial,algorithm,t,value,total_min_distance,strategy,seed
// LF line endings, %.9g floats, strategy empty for non-MetaBSG rows,
// rows sorted by (trial, algorithm name, t).
void write_results_csv(const RunResult& result, std::ostream& out);

nlohmann::json summary_json(const RunResult& result);

// Writes results.csv and summary.json under cfg.output_dir.
// Returns 0, or 3 on filesystem failure.
int write_outputs(const RunResult& result);

// Exhaustive property suite over small built-in instances (Definition-1
// checks, SG half-bound sweep, telescoping, learner regret smoke test).
// Returns 0 when everything holds, 1 otherwise, dumping the counterexample.
// `inject_supermodular` adds a known-bad objective to prove the verifier
// catches it (expected exit 1).
int run_verification(std::ostream& out, bool inject_supermodular = false);

// Timing and evaluation-count report: per-step wall time and the exact
// gated-evaluation count per agent (one per step over an episode).
int run_bench(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace bandit_coord
