#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "navexplain/decision.hpp"
#include "navexplain/geometry.hpp"
#include "navexplain/world.hpp"

namespace navexplain {

// A door is a counter-clockwise arc on the region circle from `start` to
// `end`. start is in [-pi, pi); end >= start and may exceed pi when the arc
// wraps. A zero-width door has start == end.
struct Door {
  double start = 0.0;
  double end = 0.0;

  double width() const { return end - start; }
  double mid() const { return normalize_angle(start + width() / 2.0); }
  bool covers(double angle, double tol = 1e-9) const;
};

// Free-space circle learned from one decision state.
struct Region {
  Vec2 center;
  double radius = 0.0;
  std::vector<Vec2> exits;
  std::vector<Door> doors;

  bool contains(Vec2 p) const { return distance(p, center) <= radius; }
  double angle_of(Vec2 p) const { return std::atan2(p.y - center.y, p.x - center.x); }
  Vec2 point_at(double angle) const { return center + unit_vector(angle) * radius; }
};

struct TrailMarker {
  Pose pose;
  std::size_t path_index = 0;  // position of the marker's state in its path
};

struct Trail {
  std::vector<TrailMarker> markers;
};

struct CellIndex {
  int col = 0;
  int row = 0;
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

// Tally grid aligned to the world bounds. Cells are half-open
// [x0, x0 + size) x [y0, y0 + size); the far bounds edge folds into the last cell.
class ConveyorGrid {
 public:
  ConveyorGrid() = default;
  ConveyorGrid(const Bounds& bounds, double cell_size);

  int cols() const { return cols_; }
  int rows() const { return rows_; }
  double cell_size() const { return cell_size_; }
  const Bounds& bounds() const { return bounds_; }

  std::optional<CellIndex> cell_of(Vec2 p) const;
  Vec2 cell_center(CellIndex c) const;
  std::uint32_t count(CellIndex c) const;
  std::uint32_t count_at(Vec2 p) const;
  void increment(CellIndex c);

  // Median of the nonzero counts; 0 when nothing has been learned.
  double conveyor_threshold() const;
  bool is_conveyor(CellIndex c) const;

  // Cells with a nonzero tally, row-major order.
  std::vector<std::pair<CellIndex, std::uint32_t>> nonzero() const;
  std::uint64_t total() const;

 private:
  Bounds bounds_;
  double cell_size_ = 1.0;
  int cols_ = 0;
  int rows_ = 0;
  std::vector<std::uint32_t> counts_;
};

// Every cell whose half-open square contains some point of segment [a, b],
// in traversal order. Points outside the grid are skipped.
std::vector<CellIndex> supercover_cells(const ConveyorGrid& grid, Vec2 a, Vec2 b);

struct Skeleton {
  std::vector<std::size_t> nodes;
  std::set<std::pair<std::size_t, std::size_t>> edges;  // stored as (min, max)

  void add_node(std::size_t id);
  // Adds the undirected edge; self-loops and unknown nodes are rejected.
  bool add_edge(std::size_t a, std::size_t b);
  bool has_edge(std::size_t a, std::size_t b) const;
  std::size_t degree(std::size_t id) const;
};

struct SpatialModel {
  std::vector<Region> regions;
  std::vector<Trail> trails;
  ConveyorGrid conveyors;
  Skeleton skeleton;

  SpatialModel() = default;
  SpatialModel(const Bounds& bounds, double conveyor_cell_size);

  // Containing region with the nearest center, if any.
  std::optional<std::size_t> region_containing(Vec2 p) const;
  std::size_t exit_count() const;
  std::size_t door_count() const;
};

// Region centred on the state's position with radius = the smallest range.
Region region_from_state(const DecisionState& state);

// Adds the state's region unless its center already lies inside a known
// region. Returns the new region's index when one was added.
std::optional<std::size_t> learn_region(SpatialModel& model, const DecisionState& state);

// Appends a circumference crossing point for every path step that crosses
// the circle. Crossings on chords shorter than `chord_tolerance` are ignored.
void learn_exits(Region& region, std::span<const Pose> path, double chord_tolerance = 1e-6);

// Rebuilds the region's doors from its exits: exits whose angular separation
// is within `epsilon` (radians) chain into one arc; isolated exits become
// zero-width doors.
void merge_doors(Region& region, double epsilon);

// Could a sensor at `from` perceive `to`: within range and unobstructed.
bool could_sense(const World& world, Vec2 from, Vec2 to, double max_range);

Trail learn_trail(std::span<const DecisionState> path, const World& world, double max_range);

// One increment per trail to every cell crossed between consecutive markers.
void update_conveyors(const Trail& trail, ConveyorGrid& grid);

// Adds an edge whenever the occupied region changes along the path. States
// outside every region keep the last occupied one.
void update_skeleton(std::span<const DecisionState> path, SpatialModel& model);

struct LearningParams {
  double max_range = 25.0;
  double door_arc_length = 0.5;
};

// Path-completion learning: exits and doors for every region, then trail,
// conveyors and skeleton.
void learn_from_path(SpatialModel& model, std::span<const DecisionState> path, const World& world,
                     const LearningParams& params);

// Line-oriented text dump, one record per affordance (format in docs/model_format.md).
std::string export_model(const SpatialModel& model);

}  // namespace navexplain
