#include "bandit_coord/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "bandit_coord/synthetic.hpp"
#include "bandit_coord/tracksim.hpp"

namespace bandit_coord {

namespace {

std::string format_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

int resolve_threads(int configured, std::size_t jobs) {
  int n = configured;
  if (n <= 0) {
    if (const char* env = std::getenv("BANDIT_COORD_THREADS")) {
      n = std::atoi(env);
    }
  }
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  return static_cast<int>(std::min(static_cast<std::size_t>(n),
                                   std::max<std::size_t>(jobs, 1)));
}

}  // namespace

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "MetaBSG") return Algorithm::MetaBSG;
  if (name == "BSG") return Algorithm::BSG;
  if (name == "CommandOnly") return Algorithm::CommandOnly;
  if (name == "SG-oracle" || name == "SG") return Algorithm::SG;
  throw std::invalid_argument("unknown algorithm: " + name);
}

namespace {

Vec2 vec2_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument("expected [x, y] pair");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Vec2> polyline_from_json(const nlohmann::json& j) {
  std::vector<Vec2> out;
  for (const auto& p : j) out.push_back(vec2_from_json(p));
  return out;
}

Scenario scenario_from_world_json(const nlohmann::json& w, int horizon) {
  Scenario sc;
  sc.name = "custom";
  sc.world.horizon = horizon;
  if (w.contains("step_hz")) sc.world.step_hz = w["step_hz"].get<double>();
  if (w.contains("estimate_smoothing")) {
    sc.world.estimate_smoothing = w["estimate_smoothing"].get<double>();
  }
  if (!w.contains("robots") || !w.contains("targets") ||
      !w.contains("command_waypoints")) {
    throw std::invalid_argument(
        "custom scenario requires world.robots, world.targets, "
        "world.command_waypoints");
  }
  for (const auto& r : w["robots"]) {
    RobotSpec spec;
    spec.start = vec2_from_json(r.at("start"));
    if (r.contains("speed")) spec.speed = r["speed"].get<double>();
    if (r.contains("fov_radius")) spec.fov_radius = r["fov_radius"].get<double>();
    if (r.contains("range_sigma0")) spec.range_sigma0 = r["range_sigma0"].get<double>();
    if (r.contains("bearing_sigma0")) {
      spec.bearing_sigma0 = r["bearing_sigma0"].get<double>();
    }
    sc.world.robots.push_back(spec);
  }
  for (const auto& t : w["targets"]) {
    TargetSpec spec;
    spec.waypoints = polyline_from_json(t.at("waypoints"));
    if (t.contains("speed")) spec.speed = t["speed"].get<double>();
    sc.world.targets.push_back(spec);
  }
  for (const auto& line : w["command_waypoints"]) {
    sc.command_polylines.push_back(polyline_from_json(line));
  }
  if (sc.command_polylines.size() != sc.world.robots.size()) {
    throw std::invalid_argument("one command polyline per robot required");
  }
  sc.world.validate();
  return sc;
}

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  ExperimentConfig cfg;
  if (j.contains("scenario")) cfg.scenario_name = j["scenario"].get<std::string>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("seed")) cfg.seed_base = j["seed"].get<uint64_t>();
  if (j.contains("T")) cfg.horizon = j["T"].get<int>();
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("with_oracle")) cfg.with_oracle = j["with_oracle"].get<bool>();
  if (j.contains("oracle_delta")) cfg.oracle_delta = j["oracle_delta"].get<double>();
  if (j.contains("bound_c")) cfg.bound_c = j["bound_c"].get<double>();
  if (j.contains("threads")) cfg.threads = j["threads"].get<int>();
  if (j.contains("meta_update")) {
    const std::string mode = j["meta_update"].get<std::string>();
    if (mode == "paper") {
      cfg.meta_update_mode = MetaUpdateMode::kPaper;
    } else if (mode == "standard") {
      cfg.meta_update_mode = MetaUpdateMode::kStandard;
    } else {
      throw std::invalid_argument("meta_update must be \"paper\" or \"standard\"");
    }
  }
  if (j.contains("algorithms")) {
    cfg.algorithms.clear();
    for (const auto& a : j["algorithms"]) {
      cfg.algorithms.push_back(algorithm_from_name(a.get<std::string>()));
    }
  }
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.horizon < 0) throw std::invalid_argument("T must be >= 0");
  if (cfg.algorithms.empty()) {
    throw std::invalid_argument("algorithms must be non-empty");
  }

  if (cfg.scenario_name == "custom") {
    if (!j.contains("world")) {
      throw std::invalid_argument("custom scenario requires a world section");
    }
    cfg.scenario = scenario_from_world_json(j["world"], cfg.horizon);
  } else {
    cfg.scenario = make_scenario(cfg.scenario_name, cfg.horizon);
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_experiment_config(j);
}

namespace {

TrialResult run_trial(const ExperimentConfig& cfg, int trial) {
  TrialResult result;
  result.trial = trial;
  const uint64_t seed = cfg.seed_base + static_cast<uint64_t>(trial);

  const bool oracle_feasible =
      cfg.with_oracle &&
      complete_count(ActionSpace(cfg.scenario.world.num_robots(),
                                 kNumMoveActions)) <= 1'000'000;

  std::vector<EpisodeTrace> traces;
  traces.reserve(cfg.algorithms.size());
  for (Algorithm alg : cfg.algorithms) {
    TrackingEnvironment env(cfg.scenario.world);
    WaypointCommander commander(cfg.scenario.command_polylines);
    CommandSource source = [&](int) {
      return commander.command(env.state(), env.config());
    };

    CoordinatorConfig run_cfg;
    run_cfg.horizon = cfg.horizon;
    run_cfg.seed = seed;
    run_cfg.meta_update_mode = cfg.meta_update_mode;
    run_cfg.record_value_tables = oracle_feasible && alg == Algorithm::MetaBSG;

    EpisodeTrace trace = run_episode(alg, env, run_cfg, &source);

    AlgorithmSeries series;
    series.algorithm = alg;
    series.seed = seed;
    series.value.reserve(trace.steps.size());
    series.min_dist.reserve(trace.steps.size());
    series.strategy.reserve(trace.steps.size());
    for (const StepRecord& s : trace.steps) {
      series.value.push_back(s.total_value);
      series.min_dist.push_back(s.step_metric);
      series.strategy.push_back(
          s.strategy ? static_cast<int8_t>(*s.strategy) : int8_t{-1});
      if (alg == Algorithm::MetaBSG && s.meta_distribution) {
        series.q_ext.push_back((*s.meta_distribution)[0]);
      }
    }
    result.series.push_back(std::move(series));
    traces.push_back(std::move(trace));
  }

  // The per-trial regret report needs all three arbitration-relevant traces
  // plus the hindsight optimum of the arbitrated run's realized objective.
  if (oracle_feasible) {
    const EpisodeTrace* meta = nullptr;
    const EpisodeTrace* bsg = nullptr;
    const EpisodeTrace* command = nullptr;
    for (const EpisodeTrace& t : traces) {
      if (t.algorithm == Algorithm::MetaBSG) meta = &t;
      if (t.algorithm == Algorithm::BSG) bsg = &t;
      if (t.algorithm == Algorithm::CommandOnly) command = &t;
    }
    if (meta && bsg && command && !meta->value_tables.empty()) {
      const SetFunction f = tabulated_function(*meta);
      const HindsightSolution sol = hindsight_optimal(
          f, cfg.horizon, meta->space);
      result.report =
          bound_report(*meta, *bsg, *command, sol, cfg.oracle_delta, cfg.bound_c);
    }
  }
  return result;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
  if (static_cast<int>(cfg.scenario.command_polylines.size()) !=
      cfg.scenario.world.num_robots()) {
    throw std::invalid_argument("scenario: one command polyline per robot required");
  }
  RunResult result;
  result.config = cfg;
  result.trials.resize(cfg.trials);

  const int workers = resolve_threads(cfg.threads, cfg.trials);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        while (true) {
          const int trial = next.fetch_add(1);
          if (trial >= cfg.trials) break;
          result.trials[trial] = run_trial(cfg, trial);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return result;
}

void write_results_csv(const RunResult& result, std::ostream& out) {
  out << "trial,algorithm,t,value,total_min_distance,strategy,seed\n";
  for (const TrialResult& trial : result.trials) {
    // Rows sorted by (trial, algorithm name, t).
    std::vector<const AlgorithmSeries*> ordered;
    for (const AlgorithmSeries& s : trial.series) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const AlgorithmSeries* a, const AlgorithmSeries* b) {
                return std::string_view(to_string(a->algorithm)) <
                       std::string_view(to_string(b->algorithm));
              });
    for (const AlgorithmSeries* s : ordered) {
      for (std::size_t i = 0; i < s->value.size(); ++i) {
        out << trial.trial << ',' << to_string(s->algorithm) << ',' << (i + 1)
            << ',' << format_g9(s->value[i]) << ','
            << format_g9(s->min_dist[i]) << ',';
        if (s->strategy[i] >= 0) {
          out << to_string(static_cast<Strategy>(s->strategy[i]));
        }
        out << ',' << s->seed << '\n';
      }
    }
  }
}

namespace {

struct Welford {
  double mean = 0.0;
  double m2 = 0.0;
  long n = 0;
  void add(double x) {
    ++n;
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double stderr_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

}  // namespace

nlohmann::json summary_json(const RunResult& result) {
  nlohmann::json out;
  const ExperimentConfig& cfg = result.config;
  out["scenario"] = cfg.scenario_name;
  out["trials"] = cfg.trials;
  out["T"] = cfg.horizon;
  out["seed"] = cfg.seed_base;
  out["meta_update"] = to_string(cfg.meta_update_mode);

  nlohmann::json algs = nlohmann::json::object();
  for (Algorithm alg : cfg.algorithms) {
    Welford cumulative;
    std::vector<double> dist_sum(cfg.horizon, 0.0);
    int series_count = 0;
    for (const TrialResult& trial : result.trials) {
      for (const AlgorithmSeries& s : trial.series) {
        if (s.algorithm != alg) continue;
        double total = 0.0;
        for (double v : s.value) total += v;
        cumulative.add(total);
        for (std::size_t i = 0; i < s.min_dist.size(); ++i) {
          dist_sum[i] += s.min_dist[i];
        }
        ++series_count;
      }
    }
    nlohmann::json entry;
    entry["mean_cumulative_value"] = cumulative.mean;
    entry["stderr_cumulative_value"] = cumulative.stderr_mean();
    // Mean total-min-distance curve decimated to at most 100 points.
    nlohmann::json curve = nlohmann::json::array();
    if (series_count > 0 && cfg.horizon > 0) {
      const int points = std::min(100, cfg.horizon);
      for (int k = 0; k < points; ++k) {
        const int idx =
            points == 1 ? 0
                        : static_cast<int>(std::llround(
                              static_cast<double>(k) * (cfg.horizon - 1) /
                              (points - 1)));
        curve.push_back({idx + 1, dist_sum[idx] / series_count});
      }
    }
    entry["min_distance_curve"] = curve;
    algs[to_string(alg)] = entry;
  }
  out["algorithms"] = algs;

  Welford delta_t, beta, meta_slack, half_slack, opt_total;
  long within = 0, reports = 0;
  for (const TrialResult& trial : result.trials) {
    if (!trial.report) continue;
    ++reports;
    delta_t.add(static_cast<double>(trial.report->delta_t));
    beta.add(trial.report->empirical_beta);
    meta_slack.add(trial.report->meta_slack);
    half_slack.add(trial.report->sg_half_slack);
    opt_total.add(trial.report->opt_total);
    within += trial.report->meta_within_bound ? 1 : 0;
  }
  if (reports > 0) {
    nlohmann::json oracle;
    oracle["trials_with_report"] = reports;
    oracle["delta_T_mean"] = delta_t.mean;
    oracle["empirical_beta_mean"] = beta.mean;
    oracle["opt_total_mean"] = opt_total.mean;
    oracle["meta_slack_mean"] = meta_slack.mean;
    oracle["sg_half_slack_mean"] = half_slack.mean;
    oracle["meta_within_bound_fraction"] =
        static_cast<double>(within) / static_cast<double>(reports);
    oracle["bound_c"] = cfg.bound_c;
    oracle["delta"] = cfg.oracle_delta;
    out["oracle"] = oracle;
  }
  return out;
}

int write_outputs(const RunResult& result) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(result.config.output_dir, ec);
  if (ec) {
    std::cerr << "cannot create output directory: " << ec.message() << "\n";
    return 3;
  }
  const fs::path csv_path = fs::path(result.config.output_dir) / "results.csv";
  const fs::path json_path = fs::path(result.config.output_dir) / "summary.json";
  {
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv) {
      std::cerr << "cannot open " << csv_path << "\n";
      return 3;
    }
    write_results_csv(result, csv);
    if (!csv.good()) return 3;
  }
  {
    std::ofstream js(json_path, std::ios::binary);
    if (!js) {
      std::cerr << "cannot open " << json_path << "\n";
      return 3;
    }
    js << summary_json(result).dump(2) << "\n";
    if (!js.good()) return 3;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify: exhaustive property suite over small built-in instances
// ---------------------------------------------------------------------------

namespace {

struct VerifyContext {
  std::ostream& out;
  int failures = 0;

  void check(bool ok, const std::string& what, const std::string& detail = "") {
    out << (ok ? "[ok]   " : "[FAIL] ") << what;
    if (!ok && !detail.empty()) out << "\n       " << detail;
    out << "\n";
    if (!ok) ++failures;
  }
};

}  // namespace

int run_verification(std::ostream& out, bool inject_supermodular) {
  VerifyContext ctx{out};
  RngStream rng(20240901, 7);

  // Definition-1 verifier on weighted coverage instances.
  {
    bool all_pass = true;
    std::string detail;
    for (int k = 0; k < 25 && all_pass; ++k) {
      CoverageInstance inst = random_coverage(rng);
      const auto report = verify_definition1(inst.as_set_function(), 1, inst.space);
      if (!report.passed()) {
        all_pass = false;
        detail = report.violation->describe();
      }
    }
    ctx.check(all_pass, "coverage objectives satisfy Definition 1", detail);
  }

  // Definition-1 verifier on the normalized tracking objective.
  {
    bool all_pass = true;
    std::string detail;
    for (int k = 0; k < 10 && all_pass; ++k) {
      WorldConfig w;
      w.horizon = 2;
      RobotSpec r1, r2;
      r1.start = {rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)};
      r2.start = {rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)};
      w.robots = {r1, r2};
      w.targets = {TargetSpec{{{rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)}}, 0.05},
                   TargetSpec{{{rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)}}, 0.05}};
      TrackingEnvironment env(w);
      env.reset(17 + k);
      JointAction executed = JointAction::complete_from(
          {rng.uniform_int(0, 7), rng.uniform_int(0, 7)});
      env.execute(1, executed);
      SetFunction g;
      g.horizon = 1;
      g.evaluate = [&env](int t, const JointAction& a) { return env.evaluate(t, a); };
      const auto report = verify_definition1(g, 1, env.action_space());
      if (!report.passed()) {
        all_pass = false;
        detail = report.violation->describe();
      }
    }
    ctx.check(all_pass, "normalized tracking objective satisfies Definition 1",
              detail);
  }

  // Injected supermodular function: a rejection is the correct outcome and
  // fails the run with the violating triple.
  if (inject_supermodular) {
    const SetFunction bad = supermodular_square(2);
    const auto report = verify_definition1(bad, 1, ActionSpace{1, 1});
    if (report.passed()) {
      ctx.check(false, "injected |A|^2 objective must be rejected",
                "verifier accepted a supermodular function");
    } else {
      out << "[FAIL] injected supermodular objective\n"
          << "       " << report.violation->describe() << "\n";
      ++ctx.failures;
    }
  }

  // Sequential greedy half-bound sweep against brute-force OPT.
  {
    int violations = 0;
    std::string detail;
    for (int k = 0; k < 1000; ++k) {
      CoverageInstance inst = random_coverage(rng);
      const SetFunction f = inst.as_set_function();
      const JointAction greedy = sequential_greedy(f, 1, inst.space);
      const HindsightSolution opt = hindsight_optimal(f, 1, inst.space);
      if (f.evaluate(1, greedy) < 0.5 * opt.total_value) {
        ++violations;
        detail = "instance " + std::to_string(k);
      }
    }
    ctx.check(violations == 0,
              "sequential greedy attains 1/2 of OPT on 1000 random instances",
              detail);
  }

  // Telescoping identity over BSG and MetaBSG episodes.
  {
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 5 && ok; ++k) {
      CoverageInstance inst = random_coverage(rng);
      SetFunction f = inst.as_set_function(50);
      const double scale = inst.max_value();
      SetFunction g = normalize(
          [f](int t, const JointAction& a) { return f.evaluate(t, a); },
          scale <= 0.0 ? 1.0 : scale, 50, static_cast<int>(inst.space.size()));
      StaticEnvironment env(g, inst.space);
      CoordinatorConfig cc;
      cc.horizon = 50;
      cc.seed = 100 + k;
      CommandSource cmd = [&](int) {
        JointAction a(static_cast<int>(inst.space.size()));
        for (std::size_t i = 0; i < inst.space.size(); ++i) {
          a.assign(static_cast<int>(i), 0);
        }
        return a;
      };
      for (Algorithm alg : {Algorithm::BSG, Algorithm::MetaBSG}) {
        const EpisodeTrace trace = run_episode(alg, env, cc, &cmd);
        for (const StepRecord& s : trace.steps) {
          double sum = 0.0;
          for (double r : s.per_agent_reward) sum += r;
          if (std::abs(sum - s.total_value) > 1e-9) {
            ok = false;
            detail = "step " + std::to_string(s.t);
            break;
          }
        }
      }
    }
    ctx.check(ok, "per-agent rewards telescope to the executed set's value", detail);
  }

  // Learner regret smoke test: two-arm bandit with a clear gap.
  {
    int wins = 0;
    const int runs = 20;
    for (int s = 0; s < runs; ++s) {
      MetaLearner learner = MetaLearner::make(2000);
      RngStream draw(999 + s, 0), payoff(999 + s, 1);
      double reward_total = 0.0;
      for (int t = 0; t < 2000; ++t) {
        const auto q = learner.distribution();
        const int arm = draw.categorical({q[0], q[1]});
        const double mean = arm == 0 ? 0.8 : 0.2;
        const double r = payoff.uniform() < mean ? 1.0 : 0.0;
        reward_total += r;
        learner.update(static_cast<Strategy>(arm), r);
      }
      const double bound =
          0.8 * 2000 - 8.0 * std::sqrt(2000.0 * std::log(2.0));
      if (reward_total >= bound) ++wins;
    }
    ctx.check(wins >= 19, "meta learner regret within the sqrt(T ln 2) envelope",
              std::to_string(wins) + "/" + std::to_string(runs));
  }

  out << (ctx.failures == 0 ? "verification passed\n" : "verification FAILED\n");
  return ctx.failures == 0 ? 0 : 1;
}

int run_bench(const ExperimentConfig& cfg, std::ostream& out) {
  using clock = std::chrono::steady_clock;
  out << "scenario " << cfg.scenario_name << ", T=" << cfg.horizon << ", "
      << cfg.scenario.world.num_robots() << " robots\n";
  for (Algorithm alg : cfg.algorithms) {
    TrackingEnvironment env(cfg.scenario.world);
    WaypointCommander commander(cfg.scenario.command_polylines);
    CommandSource source = [&](int) {
      return commander.command(env.state(), env.config());
    };
    CoordinatorConfig cc;
    cc.horizon = cfg.horizon;
    cc.seed = cfg.seed_base;
    cc.meta_update_mode = cfg.meta_update_mode;

    const auto start = clock::now();
    const EpisodeTrace trace = run_episode(alg, env, cc, &source);
    const auto elapsed =
        std::chrono::duration<double>(clock::now() - start).count();

    const int agents = cfg.scenario.world.num_robots();
    out << to_string(alg) << ": " << elapsed * 1e6 / std::max(1, cfg.horizon)
        << " us/step, gated evaluations " << trace.gated_evaluations;
    if (alg == Algorithm::BSG || alg == Algorithm::MetaBSG) {
      out << " (" << trace.gated_evaluations / std::max(1, agents)
          << " per agent, expected " << cfg.horizon << ")";
    }
    if (alg == Algorithm::MetaBSG) {
      out << ", meta updates " << trace.meta_updates;
    }
    out << "\n";
  }
  return 0;
}

}  // namespace bandit_coord
