#include <doctest.h>

#include <cmath>

#include "bandit_coord/scenarios.hpp"
#include "bandit_coord/submodular.hpp"
#include "bandit_coord/tracksim.hpp"

using namespace bandit_coord;

namespace {

WorldConfig two_robot_world() {
  WorldConfig w;
  w.horizon = 10;
  RobotSpec r;
  r.start = {0.0, 0.0};
  w.robots = {r, r};
  w.robots[1].start = {5.0, 0.0};
  TargetSpec t;
  t.waypoints = {{2.0, 1.0}};
  t.speed = 0.05;
  w.targets = {t};
  return w;
}

}  // namespace

TEST_CASE("target kinematics") {
  SUBCASE("zero speed leaves positions unchanged") {
    WorldConfig w = two_robot_world();
    w.targets[0].waypoints = {{1.0, 2.0}, {9.0, 2.0}};
    w.targets[0].speed = 0.0;
    WorldState s = initial_world_state(w);
    for (int i = 0; i < 5; ++i) step_targets(s, w);
    CHECK(s.target_positions[0] == Vec2{1.0, 2.0});
  }
  SUBCASE("straight segment advances by speed each step") {
    WorldConfig w = two_robot_world();
    w.targets[0].waypoints = {{0.0, 0.0}, {100.0, 0.0}};
    w.targets[0].speed = 0.5;
    WorldState s = initial_world_state(w);
    for (int i = 0; i < 10; ++i) step_targets(s, w);
    CHECK(s.target_positions[0].x == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(s.target_positions[0].y == 0.0);
  }
  SUBCASE("targets hold the final waypoint after completing the polyline") {
    WorldConfig w = two_robot_world();
    w.targets[0].waypoints = {{0.0, 0.0}, {1.0, 0.0}};
    w.targets[0].speed = 0.4;
    WorldState s = initial_world_state(w);
    for (int i = 0; i < 10; ++i) step_targets(s, w);
    CHECK(s.target_positions[0] == Vec2{1.0, 0.0});
  }
  SUBCASE("crossing straight lines meet at the configured step") {
    // Solving the linear motion: both targets cover 30 m at 0.05 m/step,
    // reaching the origin after exactly 600 steps.
    Scenario sc = scenario_two_v_two_suboptimal(2000);
    WorldState s = initial_world_state(sc.world);
    for (int i = 0; i < 600; ++i) step_targets(s, sc.world);
    CHECK(norm(s.target_positions[0]) < 1e-9);
    CHECK(norm(s.target_positions[1]) < 1e-9);
  }
}

TEST_CASE("robot kinematics") {
  WorldConfig w = two_robot_world();
  WorldState s = initial_world_state(w);
  SUBCASE("axis move") {
    apply_actions(s, JointAction::complete_from(
                         {static_cast<int>(MoveAction::kRight),
                          static_cast<int>(MoveAction::kUp)}),
                  w);
    CHECK(s.robot_positions[0] == Vec2{1.0, 0.0});
    CHECK(s.robot_positions[1] == Vec2{5.0, 1.0});
  }
  SUBCASE("diagonal moves are unit speed") {
    apply_actions(s, JointAction::complete_from(
                         {static_cast<int>(MoveAction::kUpRight),
                          static_cast<int>(MoveAction::kDownLeft)}),
                  w);
    CHECK(s.robot_positions[0].x == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.robot_positions[0].y == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(norm(s.robot_positions[0]) == doctest::Approx(1.0));
  }
  SUBCASE("opposite moves cancel") {
    const JointAction up = JointAction::complete_from(
        {static_cast<int>(MoveAction::kUp), static_cast<int>(MoveAction::kUp)});
    const JointAction down = JointAction::complete_from(
        {static_cast<int>(MoveAction::kDown),
         static_cast<int>(MoveAction::kDown)});
    apply_actions(s, up, w);
    apply_actions(s, down, w);
    CHECK(s.robot_positions[0] == Vec2{0.0, 0.0});
  }
}

TEST_CASE("sensing and fusion") {
  SUBCASE("noiseless measurements reproduce the target exactly") {
    WorldConfig w = two_robot_world();
    w.robots[0].range_sigma0 = 0.0;
    w.robots[0].bearing_sigma0 = 0.0;
    w.robots[1].range_sigma0 = 0.0;
    w.robots[1].bearing_sigma0 = 0.0;
    WorldState s = initial_world_state(w);
    RngStream rng(1, 0);
    sense_and_fuse(s, w, rng);
    REQUIRE(s.estimates[0].observed);
    CHECK(distance(s.estimates[0].position, s.target_positions[0]) < 1e-9);
  }
  SUBCASE("targets outside every field of view are unobserved") {
    WorldConfig w = two_robot_world();
    w.targets[0].waypoints = {{100.0, 100.0}};
    WorldState s = initial_world_state(w);
    RngStream rng(1, 0);
    sense_and_fuse(s, w, rng);
    CHECK_FALSE(s.estimates[0].observed);
    CHECK(s.measurements.empty());
  }
  SUBCASE("equal variances fuse to the midpoint of the measured points") {
    WorldConfig w = two_robot_world();
    // Symmetric geometry: both robots at distance sqrt(5) from the target.
    w.robots[0].start = {0.0, 0.0};
    w.robots[1].start = {4.0, 0.0};
    w.targets[0].waypoints = {{2.0, 1.0}};
    WorldState s = initial_world_state(w);
    RngStream rng(7, 0);
    sense_and_fuse(s, w, rng);
    REQUIRE(s.measurements.size() == 2);
    Vec2 mid{0.0, 0.0};
    for (const Measurement& m : s.measurements) {
      const Vec2 origin = s.robot_positions[m.robot];
      mid = mid + Vec2{origin.x + m.range * std::cos(m.bearing),
                       origin.y + m.range * std::sin(m.bearing)};
    }
    mid = 0.5 * mid;
    REQUIRE(s.estimates[0].observed);
    CHECK(distance(s.estimates[0].position, mid) < 1e-9);
  }
}

TEST_CASE("tracking objective values") {
  WorldConfig w = two_robot_world();
  WorldState s = initial_world_state(w);
  s.base_positions = s.robot_positions;
  const double d_max = w.d_max();
  REQUIRE(d_max == 10.0);

  SUBCASE("single observer at estimated distance 2") {
    // Robot 0 at (0,0) moving right lands at (1,0); estimate at (3,0).
    s.estimates[0] = {{3.0, 0.0}, true};
    JointAction a(2);
    a.assign(0, static_cast<int>(MoveAction::kRight));
    CHECK(tracking_objective(s, a, w) == doctest::Approx(-2.0).epsilon(1e-12));
  }
  SUBCASE("unobserved target contributes the -4 d_max floor") {
    s.estimates[0] = {{0.0, 0.0}, false};
    JointAction a(2);
    a.assign(0, static_cast<int>(MoveAction::kRight));
    CHECK(tracking_objective(s, a, w) == -40.0);
  }
  SUBCASE("a robot exactly on the estimate maximizes the term") {
    s.estimates[0] = {{1.0, 0.0}, true};
    JointAction a(2);
    a.assign(0, static_cast<int>(MoveAction::kRight));  // lands exactly there
    CHECK(tracking_objective(s, a, w) == 0.0);
  }
  SUBCASE("raw range stays within [-4 d_max |targets|, 0]") {
    RngStream rng(3, 0);
    WorldConfig wc = two_robot_world();
    wc.targets.push_back(wc.targets[0]);
    for (int k = 0; k < 200; ++k) {
      WorldState st = initial_world_state(wc);
      st.base_positions = st.robot_positions;
      for (auto& est : st.estimates) {
        est = {{rng.normal(0.0, 8.0), rng.normal(0.0, 8.0)},
               rng.uniform() < 0.8};
      }
      JointAction a(2);
      if (rng.uniform() < 0.9) a.assign(0, rng.uniform_int(0, 7));
      if (rng.uniform() < 0.9) a.assign(1, rng.uniform_int(0, 7));
      const double f = tracking_objective(st, a, wc);
      CHECK(f <= 0.0);
      CHECK(f >= -4.0 * wc.d_max() * 2);
    }
  }
  SUBCASE("adding an observer never lowers the objective") {
    RngStream rng(5, 0);
    for (int k = 0; k < 100; ++k) {
      WorldState st = initial_world_state(w);
      st.base_positions = st.robot_positions;
      st.estimates[0] = {{rng.normal(2.0, 3.0), rng.normal(0.0, 3.0)}, true};
      JointAction solo(2);
      solo.assign(0, rng.uniform_int(0, 7));
      JointAction both = solo.with(1, rng.uniform_int(0, 7));
      CHECK(tracking_objective(st, both, w) >=
            tracking_objective(st, solo, w) - 1e-12);
    }
  }
}

TEST_CASE("normalized tracking objective satisfies definition 1") {
  RngStream rng(11, 0);
  for (int k = 0; k < 10; ++k) {
    WorldConfig w;
    w.horizon = 2;
    RobotSpec r1, r2;
    r1.start = {rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)};
    r2.start = {rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)};
    w.robots = {r1, r2};
    w.targets = {
        TargetSpec{{{rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)}}, 0.05},
        TargetSpec{{{rng.normal(0.0, 4.0), rng.normal(0.0, 4.0)}}, 0.05}};
    TrackingEnvironment env(w);
    env.reset(100 + k);
    env.execute(1, JointAction::complete_from(
                       {rng.uniform_int(0, 7), rng.uniform_int(0, 7)}));
    SetFunction g;
    g.horizon = 1;
    g.evaluate = [&env](int t, const JointAction& a) {
      return env.evaluate(t, a);
    };
    const auto report = verify_definition1(g, 1, env.action_space());
    if (!report.passed()) {
      FAIL(report.violation->describe());
    }
  }
}

TEST_CASE("waypoint commands") {
  WorldConfig w = two_robot_world();
  WorldState s = initial_world_state(w);

  SUBCASE("a waypoint directly right commands right") {
    CHECK(best_direction_toward({0, 0}, {5, 0}) == MoveAction::kRight);
  }
  SUBCASE("44 degrees favors the diagonal") {
    const double rad = 44.0 * M_PI / 180.0;
    CHECK(best_direction_toward({0, 0}, {std::cos(rad), std::sin(rad)}) ==
          MoveAction::kUpRight);
  }
  SUBCASE("the exact 22.5-degree tie resolves by action order") {
    const double rad = M_PI / 8.0;
    CHECK(best_direction_toward({0, 0}, {std::cos(rad), std::sin(rad)}) ==
          MoveAction::kRight);
  }
  SUBCASE("empty polylines are rejected") {
    std::vector<std::vector<Vec2>> lines(1);
    CHECK_THROWS_AS(WaypointCommander{lines}, std::invalid_argument);
  }
  SUBCASE("cursor paces dense polylines one waypoint per step") {
    WaypointCommander commander(
        {dense_polyline({{0.0, 0.0}, {10.0, 0.0}}, 0.1),
         {{5.0, 10.0}}});
    const JointAction a = commander.command(s, w);
    CHECK(static_cast<MoveAction>(a.action(0)) == MoveAction::kRight);
    CHECK(static_cast<MoveAction>(a.action(1)) == MoveAction::kUp);
  }
}

TEST_CASE("scenario B commands intercept all four targets by mid-episode") {
  Scenario sc = scenario_two_v_four_nearoptimal(2000);
  for (RobotSpec& r : sc.world.robots) {
    r.range_sigma0 = 0.0;
    r.bearing_sigma0 = 0.0;
  }
  TrackingEnvironment env(sc.world);
  env.reset(1);
  WaypointCommander commander(sc.command_polylines);
  bool all_observed_at_mid = true;
  for (int t = 1; t <= 1000; ++t) {
    const JointAction cmd = commander.command(env.state(), env.config());
    env.execute(t, cmd);
    if (t == 1000) {
      for (const TargetEstimate& e : env.state().estimates) {
        all_observed_at_mid = all_observed_at_mid && e.observed;
      }
    }
    env.advance(t);
  }
  CHECK(all_observed_at_mid);
}

TEST_CASE("total minimum distance") {
  WorldConfig w = two_robot_world();
  WorldState s = initial_world_state(w);
  SUBCASE("zero when a robot sits on every target") {
    s.robot_positions = {{2.0, 1.0}, {50.0, 50.0}};
    s.target_positions = {{2.0, 1.0}};
    CHECK(total_min_distance(s) == 0.0);
  }
  SUBCASE("hand-computed euclidean sums") {
    s.robot_positions = {{0.0, 0.0}};
    s.target_positions = {{3.0, 4.0}, {0.0, 1.0}};
    CHECK(total_min_distance(s) == doctest::Approx(6.0).epsilon(1e-12));
  }
  SUBCASE("invariant under robot permutation") {
    s.robot_positions = {{1.0, 2.0}, {-3.0, 0.5}};
    s.target_positions = {{2.0, 2.0}, {-1.0, 0.0}};
    const double before = total_min_distance(s);
    std::swap(s.robot_positions[0], s.robot_positions[1]);
    CHECK(total_min_distance(s) == before);
  }
}

TEST_CASE("tracking environment properties") {
  SUBCASE("noiseless episodes are bit-reproducible") {
    Scenario sc = scenario_two_v_two_suboptimal(100);
    for (RobotSpec& r : sc.world.robots) {
      r.range_sigma0 = 0.0;
      r.bearing_sigma0 = 0.0;
    }
    auto run = [&]() {
      TrackingEnvironment env(sc.world);
      CoordinatorConfig cfg;
      cfg.horizon = 100;
      cfg.seed = 42;
      return run_episode(Algorithm::BSG, env, cfg);
    };
    const EpisodeTrace a = run(), b = run();
    for (std::size_t i = 0; i < a.steps.size(); ++i) {
      CHECK(a.steps[i].total_value == b.steps[i].total_value);
      CHECK(a.steps[i].executed == b.steps[i].executed);
      CHECK(a.steps[i].step_metric == b.steps[i].step_metric);
    }
  }
  SUBCASE("target trajectories are identical whatever the robots do") {
    Scenario sc = scenario_two_v_two_suboptimal(150);
    TrackingEnvironment env_a(sc.world);
    TrackingEnvironment env_b(sc.world);
    env_a.reset(9);
    env_b.reset(9);
    RngStream actions(3, 3);
    for (int t = 1; t <= 150; ++t) {
      env_a.execute(t, JointAction::complete_from(
                           {actions.uniform_int(0, 7), actions.uniform_int(0, 7)}));
      env_b.execute(t, JointAction::complete_from({0, 0}));
      for (std::size_t j = 0; j < sc.world.targets.size(); ++j) {
        CHECK(env_a.state().target_positions[j] ==
              env_b.state().target_positions[j]);
      }
      env_a.advance(t);
      env_b.advance(t);
    }
  }
  SUBCASE("evaluate before execute is rejected") {
    Scenario sc = scenario_two_v_two_suboptimal(10);
    TrackingEnvironment env(sc.world);
    env.reset(1);
    CHECK_THROWS_AS(env.evaluate(1, JointAction(2)), std::logic_error);
  }
  SUBCASE("normalized objective is zero on the empty set and within [0,1]") {
    Scenario sc = scenario_two_v_two_suboptimal(50);
    TrackingEnvironment env(sc.world);
    env.reset(5);
    RngStream actions(8, 8);
    for (int t = 1; t <= 50; ++t) {
      env.execute(t, JointAction::complete_from(
                         {actions.uniform_int(0, 7), actions.uniform_int(0, 7)}));
      CHECK(env.evaluate(t, JointAction(2)) == 0.0);
      const double v = env.evaluate(
          t, JointAction::complete_from(
                 {actions.uniform_int(0, 7), actions.uniform_int(0, 7)}));
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      env.advance(t);
    }
  }
}
