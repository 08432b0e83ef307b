#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "navexplain/decision.hpp"
#include "navexplain/world.hpp"

namespace navexplain {

// Every tunable of the simulator and controller. Loaded from plain
// `key = value` text; see config/default.conf for the documented keys.
struct NavConfig {
  SensorConfig sensor;
  ActionSet actions;
  std::vector<AdvisorId> advisors{std::begin(kTier3Advisors), std::end(kTier3Advisors)};

  double epsilon_wall = 0.2;
  double safety_margin = 0.1;
  double not_opposite_tolerance = 0.05;
  double arrival_radius = 0.5;
  int cycle_cap = 1000;

  double conveyor_cell_size = 2.0;
  double door_arc_length = 0.5;
  // How far ahead a turn's projected endpoint sits along the new heading.
  double turn_lookahead = 1.6;
};

// Unknown keys and malformed values throw std::invalid_argument naming the line.
NavConfig load_config(std::string_view text, NavConfig base = {});
NavConfig load_config_file(const std::string& path, NavConfig base = {});
std::string format_config(const NavConfig& cfg);

}  // namespace navexplain
