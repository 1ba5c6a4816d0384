#include "bandit_coord/tracksim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bandit_coord {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return norm(a - b); }

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kZeroDistanceFloor = 1e-9;

const Vec2 kDirections[kNumMoveActions] = {
    {0.0, 1.0},                  // up
    {0.0, -1.0},                 // down
    {-1.0, 0.0},                 // left
    {1.0, 0.0},                  // right
    {-kInvSqrt2, kInvSqrt2},     // upleft
    {kInvSqrt2, kInvSqrt2},      // upright
    {-kInvSqrt2, -kInvSqrt2},    // downleft
    {kInvSqrt2, -kInvSqrt2},     // downright
};

const char* kDirectionNames[kNumMoveActions] = {
    "up", "down", "left", "right", "upleft", "upright", "downleft", "downright",
};

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

Vec2 move_direction(MoveAction a) { return kDirections[static_cast<int>(a)]; }

const char* to_string(MoveAction a) {
  return kDirectionNames[static_cast<int>(a)];
}

double WorldConfig::d_max() const {
  double m = 0.0;
  for (const RobotSpec& r : robots) m = std::max(m, r.fov_radius);
  return m;
}

double WorldConfig::r_max() const {
  return 4.0 * d_max() * static_cast<double>(targets.size());
}

void WorldConfig::validate() const {
  if (robots.empty()) throw std::invalid_argument("world: no robots");
  if (targets.empty()) throw std::invalid_argument("world: no targets");
  if (horizon < 0) throw std::invalid_argument("world: negative horizon");
  double min_robot_speed = std::numeric_limits<double>::infinity();
  for (const RobotSpec& r : robots) {
    if (!(r.speed > 0.0)) throw std::invalid_argument("world: robot speed must be positive");
    if (!(r.fov_radius > 0.0)) throw std::invalid_argument("world: fov radius must be positive");
    if (r.range_sigma0 < 0.0 || r.bearing_sigma0 < 0.0) {
      throw std::invalid_argument("world: negative sensor noise");
    }
    min_robot_speed = std::min(min_robot_speed, r.speed);
  }
  for (const TargetSpec& t : targets) {
    if (!(t.speed > 0.0)) throw std::invalid_argument("world: target speed must be positive");
    if (t.speed >= min_robot_speed) {
      throw std::invalid_argument("world: every target must be slower than every robot");
    }
    if (t.waypoints.empty()) throw std::invalid_argument("world: target without waypoints");
  }
  if (estimate_smoothing < 0.0 || estimate_smoothing > 1.0) {
    throw std::invalid_argument("world: estimate_smoothing outside [0,1]");
  }
}

WorldState initial_world_state(const WorldConfig& cfg) {
  WorldState s;
  s.t = 0;
  s.robot_positions.reserve(cfg.robots.size());
  for (const RobotSpec& r : cfg.robots) s.robot_positions.push_back(r.start);
  s.base_positions = s.robot_positions;
  s.target_positions.reserve(cfg.targets.size());
  for (const TargetSpec& t : cfg.targets) {
    s.target_positions.push_back(t.waypoints.front());
  }
  s.target_arc.assign(cfg.targets.size(), 0.0);
  s.estimates.assign(cfg.targets.size(), TargetEstimate{});
  return s;
}

Vec2 polyline_point(const std::vector<Vec2>& wp, double arc) {
  if (wp.empty()) throw std::invalid_argument("polyline_point: empty polyline");
  if (arc <= 0.0) return wp.front();
  Vec2 prev = wp.front();
  double remaining = arc;
  for (std::size_t k = 1; k < wp.size(); ++k) {
    const double seg = distance(prev, wp[k]);
    if (remaining <= seg) {
      if (seg <= 0.0) return wp[k];
      const double f = remaining / seg;
      return {prev.x + f * (wp[k].x - prev.x), prev.y + f * (wp[k].y - prev.y)};
    }
    remaining -= seg;
    prev = wp[k];
  }
  return wp.back();  // past the end: hold the final waypoint
}

void step_targets(WorldState& state, const WorldConfig& cfg) {
  for (std::size_t j = 0; j < cfg.targets.size(); ++j) {
    state.target_arc[j] += cfg.targets[j].speed;
    state.target_positions[j] =
        polyline_point(cfg.targets[j].waypoints, state.target_arc[j]);
  }
}

void apply_actions(WorldState& state, const JointAction& actions,
                   const WorldConfig& cfg) {
  for (int i = 0; i < actions.num_agents(); ++i) {
    if (!actions.assigned(i)) continue;
    const Vec2 dir =
        move_direction(static_cast<MoveAction>(actions.action(i)));
    state.robot_positions[i] =
        state.robot_positions[i] + cfg.robots[i].speed * dir;
  }
}

void sense_and_fuse(WorldState& state, const WorldConfig& cfg,
                    RngStream& rng) {
  state.measurements.clear();
  const double d_max = cfg.d_max();
  std::vector<TargetEstimate> previous = state.estimates;

  std::vector<Vec2> weighted_sum(cfg.targets.size(), Vec2{});
  std::vector<double> weight_total(cfg.targets.size(), 0.0);

  for (std::size_t i = 0; i < cfg.robots.size(); ++i) {
    for (std::size_t j = 0; j < cfg.targets.size(); ++j) {
      const Vec2 rp = state.robot_positions[i];
      const Vec2 tp = state.target_positions[j];
      const double d = distance(rp, tp);
      if (d > cfg.robots[i].fov_radius) continue;

      const double scale = 1.0 + d / d_max;
      const double sigma_r = cfg.robots[i].range_sigma0 * scale;
      const double sigma_b = cfg.robots[i].bearing_sigma0 * scale;
      const double true_bearing = std::atan2(tp.y - rp.y, tp.x - rp.x);

      Measurement m;
      m.robot = static_cast<int>(i);
      m.target = static_cast<int>(j);
      m.range = rng.normal(d, sigma_r);
      m.bearing = rng.normal(true_bearing, sigma_b);
      if (m.range < 0.0) m.range = 0.0;
      state.measurements.push_back(m);

      const Vec2 point{rp.x + m.range * std::cos(m.bearing),
                       rp.y + m.range * std::sin(m.bearing)};
      // Scalar proxy for the measurement covariance: radial plus
      // transverse variance. Exact measurements get a large finite weight.
      const double variance = sigma_r * sigma_r + (d * sigma_b) * (d * sigma_b);
      const double weight = 1.0 / std::max(variance, 1e-18);
      weighted_sum[j] = weighted_sum[j] + weight * point;
      weight_total[j] += weight;
    }
  }

  for (std::size_t j = 0; j < cfg.targets.size(); ++j) {
    if (weight_total[j] <= 0.0) {
      state.estimates[j] = TargetEstimate{};  // unobserved this step
      continue;
    }
    Vec2 fused{weighted_sum[j].x / weight_total[j],
               weighted_sum[j].y / weight_total[j]};
    const double s = cfg.estimate_smoothing;
    if (s > 0.0 && previous[j].observed) {
      fused = {(1.0 - s) * fused.x + s * previous[j].position.x,
               (1.0 - s) * fused.y + s * previous[j].position.y};
    }
    state.estimates[j] = TargetEstimate{fused, true};
  }
}

double tracking_objective(const WorldState& state, const JointAction& actions,
                          const WorldConfig& cfg) {
  const double d_max = cfg.d_max();
  double total = 0.0;
  for (std::size_t j = 0; j < cfg.targets.size(); ++j) {
    if (!state.estimates[j].observed) {
      total += -4.0 * d_max;
      continue;
    }
    const Vec2 est = state.estimates[j].position;
    double inv_sum = 0.0;
    bool zero_distance = false;
    bool any_observer = false;
    for (int i = 0; i < actions.num_agents(); ++i) {
      if (!actions.assigned(i)) continue;
      const Vec2 pos =
          state.base_positions[i] +
          cfg.robots[i].speed *
              move_direction(static_cast<MoveAction>(actions.action(i)));
      const double d = distance(pos, est);
      if (d > cfg.robots[i].fov_radius) continue;
      any_observer = true;
      if (d == 0.0) {
        zero_distance = true;
        break;
      }
      inv_sum += 1.0 / std::max(d, kZeroDistanceFloor);
    }
    if (zero_distance) {
      // Stated limit: a robot at zero estimated distance drives the term
      // to 0, the maximum.
      continue;
    }
    if (!any_observer) {
      total += -4.0 * d_max;
    } else {
      total += -1.0 / inv_sum;
    }
  }
  return total;
}

double total_min_distance(const WorldState& state) {
  double total = 0.0;
  for (const Vec2& tp : state.target_positions) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& rp : state.robot_positions) {
      best = std::min(best, distance(rp, tp));
    }
    total += best;
  }
  return total;
}

MoveAction best_direction_toward(Vec2 from, Vec2 to) {
  const Vec2 d = to - from;
  if (norm(d) < 1e-12) return MoveAction::kUp;
  const double desired = std::atan2(d.y, d.x);
  int best = 0;
  double best_err = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kNumMoveActions; ++k) {
    const Vec2 dir = kDirections[k];
    const double err = std::abs(wrap_angle(desired - std::atan2(dir.y, dir.x)));
    if (err < best_err - 1e-12) {  // ties keep the earlier action
      best_err = err;
      best = k;
    }
  }
  return static_cast<MoveAction>(best);
}

WaypointCommander::WaypointCommander(std::vector<std::vector<Vec2>> polylines)
    : polylines_(std::move(polylines)), cursor_(polylines_.size(), 0) {
  for (const auto& line : polylines_) {
    if (line.empty()) {
      throw std::invalid_argument("WaypointCommander: empty polyline");
    }
  }
}

JointAction WaypointCommander::command(const WorldState& state,
                                       const WorldConfig& cfg) {
  if (polylines_.size() != cfg.robots.size()) {
    throw std::invalid_argument("WaypointCommander: one polyline per robot required");
  }
  JointAction a(static_cast<int>(cfg.robots.size()));
  for (std::size_t i = 0; i < polylines_.size(); ++i) {
    const auto& line = polylines_[i];
    const Vec2 pos = state.robot_positions[i];
    // Advance at most one waypoint per step once it is within one step's
    // reach; dense waypoints therefore pace the commanded robot.
    if (cursor_[i] + 1 < line.size() &&
        distance(pos, line[cursor_[i]]) <= cfg.robots[i].speed) {
      ++cursor_[i];
    }
    a.assign(static_cast<int>(i),
             static_cast<int>(best_direction_toward(pos, line[cursor_[i]])));
  }
  return a;
}

ActionSpace TrackingEnvironment::action_space() const {
  return ActionSpace(cfg_.num_robots(), kNumMoveActions);
}

namespace {
WorldConfig validated(WorldConfig cfg) {
  cfg.validate();
  return cfg;
}
}  // namespace

TrackingEnvironment::TrackingEnvironment(WorldConfig cfg)
    : cfg_(validated(std::move(cfg))), state_(initial_world_state(cfg_)) {
  normalized_ = normalize(
      [this](int, const JointAction& a) {
        return tracking_objective(state_, a, cfg_);
      },
      cfg_.r_max(), cfg_.horizon, cfg_.num_robots());
}

void TrackingEnvironment::reset(uint64_t seed) {
  state_ = initial_world_state(cfg_);
  noise_ = RngStream(seed, 0);
  executed_this_step_ = false;
}

void TrackingEnvironment::execute(int t, const JointAction& executed) {
  if (!executed.complete()) {
    throw std::invalid_argument("TrackingEnvironment: executed action must be complete");
  }
  state_.t = t;
  state_.base_positions = state_.robot_positions;
  apply_actions(state_, executed, cfg_);
  sense_and_fuse(state_, cfg_, noise_);
  executed_this_step_ = true;
}

double TrackingEnvironment::evaluate(int t, const JointAction& a) const {
  if (!executed_this_step_) {
    throw std::logic_error(
        "TrackingEnvironment: evaluate before execute; estimates are stale");
  }
  return normalized_.evaluate(t, a);
}

double TrackingEnvironment::plan_evaluate(int, const JointAction& a) const {
  if (executed_this_step_) {
    throw std::logic_error(
        "TrackingEnvironment: plan_evaluate is a pre-execution objective");
  }
  // Full-information planning view: true target positions stand in for the
  // estimates. Only meaningful for omniscient baselines.
  WorldState omniscient = state_;
  omniscient.base_positions = state_.robot_positions;
  for (std::size_t j = 0; j < cfg_.targets.size(); ++j) {
    omniscient.estimates[j] = {state_.target_positions[j], true};
  }
  const double raw = tracking_objective(omniscient, a, cfg_);
  return (raw + cfg_.r_max()) / cfg_.r_max();
}

void TrackingEnvironment::advance(int) {
  step_targets(state_, cfg_);
  executed_this_step_ = false;
}

}  // namespace bandit_coord
