#pragma once

#include <optional>
#include <vector>

#include "bandit_coord/coordination.hpp"
#include "bandit_coord/rng.hpp"
#include "bandit_coord/submodular.hpp"
#include "bandit_coord/types.hpp"

namespace bandit_coord {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
  friend bool operator==(const Vec2&, const Vec2&) = default;
};
double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

// The eight constant-speed motion primitives. Order matters: it is the
// deterministic tie-break order for command generation.
enum class MoveAction {
  kUp = 0,
  kDown,
  kLeft,
  kRight,
  kUpLeft,
  kUpRight,
  kDownLeft,
  kDownRight,
};
inline constexpr int kNumMoveActions = 8;
// Unit direction (diagonals normalized so every action moves at equal speed).
Vec2 move_direction(MoveAction a);
const char* to_string(MoveAction a);

struct RobotSpec {
  Vec2 start;
  double speed = 1.0;           // m per step
  double fov_radius = 10.0;     // sensing disk radius, m
  double range_sigma0 = 0.1;    // range noise std at zero distance, m
  double bearing_sigma0 = 0.02; // bearing noise std at zero distance, rad
};

struct TargetSpec {
  std::vector<Vec2> waypoints;  // polyline, traversed once then held
  double speed = 0.5;           // m per step
};

struct WorldConfig {
  std::vector<RobotSpec> robots;
  std::vector<TargetSpec> targets;
  int horizon = 2000;
  double step_hz = 20.0;             // nominal re-selection frequency, metadata
  double estimate_smoothing = 0.0;   // 0 = single-step fusion; (0,1] blends
                                     // the previous estimate exponentially

  double d_max() const;   // largest sensing range over robots
  double r_max() const;   // 4 * d_max * |targets|: raw objective span
  void validate() const;  // speeds positive; targets slower than every robot

  int num_robots() const { return static_cast<int>(robots.size()); }
  int num_targets() const { return static_cast<int>(targets.size()); }
};

struct Measurement {
  int robot = 0;
  int target = 0;
  double range = 0.0;    // m
  double bearing = 0.0;  // world-frame angle, rad
};

struct TargetEstimate {
  Vec2 position;
  bool observed = false;  // present iff some robot measured it this step
};

struct WorldState {
  int t = 0;
  std::vector<Vec2> robot_positions;       // after this step's moves
  std::vector<Vec2> base_positions;        // before this step's moves
  std::vector<Vec2> target_positions;      // ground truth
  std::vector<double> target_arc;          // progress along each polyline, m
  std::vector<TargetEstimate> estimates;   // fused, this step
  std::vector<Measurement> measurements;   // raw, this step
};

WorldState initial_world_state(const WorldConfig& cfg);

// Point at the given arc length along a polyline (clamped to its ends).
Vec2 polyline_point(const std::vector<Vec2>& waypoints, double arc);

// Advances each target by its speed along its polyline; targets hold their
// final waypoint after completing the traverse. Trajectories are predefined:
// they never depend on robot motion.
void step_targets(WorldState& state, const WorldConfig& cfg);

// Moves each assigned robot by speed * unit(direction).
void apply_actions(WorldState& state, const JointAction& actions,
                   const WorldConfig& cfg);

// Collects range/bearing measurements for every robot-target pair within
// field of view (noise std sigma0 * (1 + d / d_max)), then fuses them into
// per-target estimates by inverse-variance-weighted mean of the measured
// Cartesian points.
void sense_and_fuse(WorldState& state, const WorldConfig& cfg, RngStream& rng);

// Raw step objective:
//   f(A) = sum_j [ -sum_{i in N_j} 1 / d(i, j) ]^{-1}
// where d(i, j) is the distance from robot i's post-action position to
// target j's estimate and N_j are the assigned robots within sensing range
// of that estimate. A target with no observers (or no estimate this step)
// contributes -4 * d_max. A robot exactly on the estimate drives the
// target's term to 0, the maximum.
double tracking_objective(const WorldState& state, const JointAction& actions,
                          const WorldConfig& cfg);

// Performance metric: sum over targets of the true distance to the nearest
// robot.
double total_min_distance(const WorldState& state);

// Stateful waypoint follower used to generate external commands. Each step
// the commanded action is the MoveAction minimizing the angle to the
// robot's current waypoint; the cursor advances at most one waypoint per
// step, once the robot is within one step's reach of it.
class WaypointCommander {
 public:
  explicit WaypointCommander(std::vector<std::vector<Vec2>> polylines);
  void reset() { std::fill(cursor_.begin(), cursor_.end(), 0); }
  JointAction command(const WorldState& state, const WorldConfig& cfg);

 private:
  std::vector<std::vector<Vec2>> polylines_;
  std::vector<std::size_t> cursor_;
};

// MoveAction minimizing the angular error toward `to`; ties broken by the
// enum order. A degenerate direction (|to - from| ~ 0) maps to kUp.
MoveAction best_direction_toward(Vec2 from, Vec2 to);

// Environment adapter: serves the normalized tracking objective
//   g = (f_raw + 4 d_max |targets|) / (4 d_max |targets|)
// and advances the world per executed actions.
class TrackingEnvironment final : public Environment {
 public:
  explicit TrackingEnvironment(WorldConfig cfg);

  int num_agents() const override { return cfg_.num_robots(); }
  ActionSpace action_space() const override;
  int horizon() const override { return cfg_.horizon; }
  void reset(uint64_t seed) override;
  void execute(int t, const JointAction& executed) override;
  double evaluate(int t, const JointAction& a) const override;
  double plan_evaluate(int t, const JointAction& a) const override;
  void advance(int t) override;
  double step_metric() const override { return total_min_distance(state_); }

  const WorldConfig& config() const { return cfg_; }
  const WorldState& state() const { return state_; }

  TrackingEnvironment(const TrackingEnvironment&) = delete;
  TrackingEnvironment& operator=(const TrackingEnvironment&) = delete;

 private:
  WorldConfig cfg_;
  WorldState state_;
  SetFunction normalized_;  // tracking objective through normalize()
  RngStream noise_;
  bool executed_this_step_ = false;
};

}  // namespace bandit_coord
