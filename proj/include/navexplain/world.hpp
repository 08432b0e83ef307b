#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "navexplain/geometry.hpp"

namespace navexplain {

// Raised when a world or targets file cannot be parsed. Carries the 1-based
// line number of the offending line.
class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The robot left the world bounds; always a simulation bug.
class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Allocentric pose. theta is kept in [-pi, pi).
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(normalize_angle(theta_)) {}

  Vec2 position() const { return {x, y}; }
  friend bool operator==(const Pose&, const Pose&) = default;
};

struct SensorConfig {
  std::size_t beam_count = 660;
  double fov = 220.0 * kPi / 180.0;
  double max_range = 25.0;
};

struct LaserScan {
  std::vector<double> ranges;
  double fov = 0.0;
  double max_range = 0.0;
  Pose origin;

  std::size_t size() const { return ranges.size(); }
  // Allocentric angle of beam i.
  double beam_angle(std::size_t i) const;
  // Whether beam i returned an obstacle (rather than running out of range).
  bool is_hit(std::size_t i) const { return ranges[i] < max_range; }
  Vec2 hit_point(std::size_t i) const;
  // Index of the beam nearest to an allocentric angle, or npos when the angle
  // lies outside the field of view.
  std::size_t beam_near(double angle) const;
  // Free distance sensed along an allocentric angle; 0 outside the field of view.
  double range_toward(double angle) const;
  // Sensed obstacle points (beams that hit something).
  std::vector<Vec2> obstacle_points() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

enum class ActionKind { Move, Turn };

struct Action {
  ActionKind kind = ActionKind::Move;
  int intensity_index = 0;
  // Meters for Move, signed radians for Turn (positive is counter-clockwise, i.e. left).
  double magnitude = 0.0;

  bool is_pause() const { return kind == ActionKind::Move && magnitude == 0.0; }
  friend bool operator==(const Action&, const Action&) = default;
};

std::string_view to_string(ActionKind kind);
std::string describe(const Action& a);  // e.g. "move:1.6", "turn:-0.25"

// The configured intensity ladders. Moves include the 0 m pause.
struct ActionSet {
  std::vector<double> moves{0.0, 0.2, 0.4, 0.8, 1.6};
  std::vector<double> turns{-1.57, -1.0, -0.5, -0.25, 0.25, 0.5, 1.0, 1.57};

  std::vector<Action> move_actions() const;
  std::vector<Action> turn_actions() const;
  Action move(std::size_t index) const;
  Action turn(std::size_t index) const;
  // Look up an action by kind and magnitude; throws ValidationError when absent.
  Action find(ActionKind kind, double magnitude) const;
  bool contains(const Action& a) const;
};

struct World {
  std::string name;
  Bounds bounds;
  std::vector<Segment> obstacles;

  // Throws ValidationError when an invariant fails.
  void validate() const;
  // True when the straight line between a and b crosses no obstacle.
  bool line_of_sight(Vec2 a, Vec2 b) const;
  double nearest_obstacle_distance(Vec2 p) const;
};

World load_world(std::string_view text, std::string name = {});
World load_world_file(const std::string& path);

LaserScan ray_cast(const World& world, const Pose& pose, std::size_t beam_count, double fov,
                   double max_range);
inline LaserScan ray_cast(const World& world, const Pose& pose, const SensorConfig& sensor) {
  return ray_cast(world, pose, sensor.beam_count, sensor.fov, sensor.max_range);
}

struct StepResult {
  Pose pose;
  bool truncated = false;
};

// Turns rotate in place. Moves translate along theta and stop short of any
// obstacle so the robot stays at least `safety_margin` away from it.
StepResult apply_action(const World& world, const Pose& pose, const Action& action,
                        double safety_margin = 0.1);

std::vector<Vec2> load_targets(std::string_view text);
std::vector<Vec2> load_targets_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace navexplain
