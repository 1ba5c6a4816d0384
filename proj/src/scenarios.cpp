#include "bandit_coord/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace bandit_coord {

std::vector<Vec2> dense_polyline(const std::vector<Vec2>& waypoints,
                                 double spacing) {
  if (waypoints.empty()) {
    throw std::invalid_argument("dense_polyline: empty polyline");
  }
  if (!(spacing > 0.0)) {
    throw std::invalid_argument("dense_polyline: spacing must be positive");
  }
  double length = 0.0;
  for (std::size_t k = 1; k < waypoints.size(); ++k) {
    length += distance(waypoints[k - 1], waypoints[k]);
  }
  if (length <= 0.0) return {waypoints.front()};
  const int n = static_cast<int>(std::ceil(length / spacing));
  std::vector<Vec2> out;
  out.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    out.push_back(polyline_point(waypoints, length * k / n));
  }
  return out;
}

namespace {

RobotSpec default_robot(Vec2 start) {
  RobotSpec r;
  r.start = start;
  r.speed = 1.0;
  r.fov_radius = 10.0;
  r.range_sigma0 = 0.1;
  r.bearing_sigma0 = 0.02;
  return r;
}

// Targets crawl relative to the sensing range so that per-step displacement
// stays small against the field of view (high re-selection frequency).
constexpr double kTargetSpeed = 0.05;

}  // namespace

Scenario scenario_two_v_two_suboptimal(int horizon) {
  Scenario sc;
  sc.name = "twoVtwo_suboptimal";
  sc.world.horizon = horizon;
  sc.world.robots = {default_robot({-27.0, 3.0}), default_robot({3.0, -27.0})};
  sc.world.targets = {
      TargetSpec{{{-30.0, 0.0}, {30.0, 0.0}}, kTargetSpeed},
      TargetSpec{{{0.0, -30.0}, {0.0, 30.0}}, kTargetSpeed},
  };
  // Patrol lines at least twice the sensing range away from both target
  // paths: following them tracks nothing.
  sc.command_polylines = {
      {{-70.0, 55.0}, {70.0, 55.0}},
      {{55.0, -70.0}, {55.0, 70.0}},
  };
  return sc;
}

Scenario scenario_two_v_four_nearoptimal(int horizon) {
  Scenario sc;
  sc.name = "twoVfour_nearoptimal";
  sc.world.horizon = horizon;
  sc.world.robots = {default_robot({-28.0, 2.0}), default_robot({-26.0, -2.0})};
  // Two pairs, each diverging along straight lines; the pairs' paths cross
  // near the origin around mid-traverse.
  sc.world.targets = {
      TargetSpec{{{-30.0, 0.5}, {30.0, 8.0}}, kTargetSpeed},
      TargetSpec{{{-30.0, -0.5}, {30.0, -8.0}}, kTargetSpeed},
      TargetSpec{{{0.5, -30.0}, {8.0, 30.0}}, kTargetSpeed},
      TargetSpec{{{-0.5, -30.0}, {-8.0, 30.0}}, kTargetSpeed},
  };
  // Each robot paces a pair's bisector at the targets' speed: dense
  // waypoints advance one per step, so the commanded robot stays with the
  // pair and holds both members in view for the whole traverse.
  sc.command_polylines = {
      dense_polyline({{-30.0, 0.0}, {30.0, 0.0}}, kTargetSpeed),
      dense_polyline({{0.0, -30.0}, {0.0, 30.0}}, kTargetSpeed),
  };
  return sc;
}

Scenario make_scenario(const std::string& name, int horizon) {
  if (name == "twoVtwo_suboptimal") return scenario_two_v_two_suboptimal(horizon);
  if (name == "twoVfour_nearoptimal") {
    return scenario_two_v_four_nearoptimal(horizon);
  }
  throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace bandit_coord
