#pragma once

#include <string>
#include <vector>

#include "bandit_coord/tracksim.hpp"

namespace bandit_coord {

struct Scenario {
  std::string name;
  WorldConfig world;
  std::vector<std::vector<Vec2>> command_polylines;  // one per robot
};

// Resamples a polyline at (at most) `spacing` between consecutive waypoints.
// Dense waypoints act as a speed profile for WaypointCommander: the cursor
// advances one waypoint per step, so the commanded pace is ~spacing/step.
std::vector<Vec2> dense_polyline(const std::vector<Vec2>& waypoints,
                                 double spacing);

// 2 robots vs 2 targets whose straight paths cross at the origin. The
// command polylines patrol lines at least twice the sensing range away from
// every target path, so following them tracks nothing.
Scenario scenario_two_v_two_suboptimal(int horizon = 2000);

// 2 robots vs 4 targets: two pairs diverge from their spawn points along
// straight crossing lines. The command polylines pace each pair's bisector
// at the targets' speed, keeping both pair members in view throughout; the
// robots start near one pair only, so uncommanded coordination tends to
// track just that pair.
Scenario scenario_two_v_four_nearoptimal(int horizon = 2000);

// Looks up a built-in scenario by name; throws std::invalid_argument for
// unknown names.
Scenario make_scenario(const std::string& name, int horizon);

}  // namespace bandit_coord
