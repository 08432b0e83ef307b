#include "navexplain/spatial_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace navexplain {

bool Door::covers(double angle, double tol) const {
  double rel = std::fmod(angle - start, kTwoPi);
  if (rel < 0.0) rel += kTwoPi;
  return rel <= width() + tol || rel >= kTwoPi - tol;
}

ConveyorGrid::ConveyorGrid(const Bounds& bounds, double cell_size)
    : bounds_(bounds), cell_size_(cell_size) {
  if (!(cell_size > 0.0)) throw std::invalid_argument("conveyor cell size must be positive");
  cols_ = std::max(1, static_cast<int>(std::ceil(bounds.width() / cell_size)));
  rows_ = std::max(1, static_cast<int>(std::ceil(bounds.height() / cell_size)));
  counts_.assign(static_cast<std::size_t>(cols_) * static_cast<std::size_t>(rows_), 0);
}

std::optional<CellIndex> ConveyorGrid::cell_of(Vec2 p) const {
  if (counts_.empty() || !bounds_.contains(p)) return std::nullopt;
  int c = static_cast<int>(std::floor((p.x - bounds_.min_x) / cell_size_));
  int r = static_cast<int>(std::floor((p.y - bounds_.min_y) / cell_size_));
  return CellIndex{std::clamp(c, 0, cols_ - 1), std::clamp(r, 0, rows_ - 1)};
}

Vec2 ConveyorGrid::cell_center(CellIndex c) const {
  return {bounds_.min_x + (c.col + 0.5) * cell_size_, bounds_.min_y + (c.row + 0.5) * cell_size_};
}

std::uint32_t ConveyorGrid::count(CellIndex c) const {
  if (c.col < 0 || c.row < 0 || c.col >= cols_ || c.row >= rows_) return 0;
  return counts_[static_cast<std::size_t>(c.row) * cols_ + c.col];
}

std::uint32_t ConveyorGrid::count_at(Vec2 p) const {
  auto c = cell_of(p);
  return c ? count(*c) : 0;
}

void ConveyorGrid::increment(CellIndex c) {
  if (c.col < 0 || c.row < 0 || c.col >= cols_ || c.row >= rows_) return;
  ++counts_[static_cast<std::size_t>(c.row) * cols_ + c.col];
}

double ConveyorGrid::conveyor_threshold() const {
  std::vector<std::uint32_t> nz;
  for (auto v : counts_) {
    if (v > 0) nz.push_back(v);
  }
  if (nz.empty()) return 0.0;
  std::sort(nz.begin(), nz.end());
  const std::size_t n = nz.size();
  return n % 2 ? nz[n / 2] : 0.5 * (nz[n / 2 - 1] + nz[n / 2]);
}

bool ConveyorGrid::is_conveyor(CellIndex c) const {
  const auto v = count(c);
  return v > 0 && static_cast<double>(v) >= conveyor_threshold();
}

std::vector<std::pair<CellIndex, std::uint32_t>> ConveyorGrid::nonzero() const {
  std::vector<std::pair<CellIndex, std::uint32_t>> out;
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) {
      if (auto v = count({c, r}); v > 0) out.push_back({{c, r}, v});
    }
  }
  return out;
}

std::uint64_t ConveyorGrid::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::vector<CellIndex> supercover_cells(const ConveyorGrid& grid, Vec2 a, Vec2 b) {
  std::vector<CellIndex> out;
  auto start = grid.cell_of(a);
  if (!start) return out;
  const double s = grid.cell_size();
  const Bounds& bb = grid.bounds();
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
  const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);
  constexpr double inf = std::numeric_limits<double>::infinity();

  // Parameter t in [0, 1] at which the walk reaches the next vertical or
  // horizontal cell boundary.
  auto boundary_t = [&](double origin, double delta, double grid_min, int cell, int step) {
    if (step == 0) return inf;
    const double edge = grid_min + (step > 0 ? cell + 1 : cell) * s;
    return (edge - origin) / delta;
  };

  CellIndex cur = *start;
  double t_x = boundary_t(a.x, dx, bb.min_x, cur.col, step_x);
  double t_y = boundary_t(a.y, dy, bb.min_y, cur.row, step_y);

  // Half-open cells: crossing an upper edge enters the next cell at the edge
  // itself, crossing a lower edge only just after it.
  auto may_step = [](double t, int step) { return step > 0 ? t <= 1.0 : t < 1.0; };

  auto emit = [&](CellIndex c) {
    if (c.col < 0 || c.row < 0 || c.col >= grid.cols() || c.row >= grid.rows()) return false;
    out.push_back(c);
    return true;
  };
  emit(cur);

  while (true) {
    const bool can_x = step_x != 0 && may_step(t_x, step_x);
    const bool can_y = step_y != 0 && may_step(t_y, step_y);
    if (!can_x && !can_y) break;
    bool go_x = can_x && (!can_y || t_x <= t_y);
    bool go_y = can_y && (!can_x || t_y <= t_x);
    if (go_x && go_y && step_x != step_y) {
      // Exact corner with mixed directions: the corner point itself belongs
      // to the cell reached by the increasing axis.
      if (step_x > 0) {
        go_y = false;
      } else {
        go_x = false;
      }
    }
    // Recomputed from the edge each time so rounding cannot accumulate.
    if (go_x) {
      cur.col += step_x;
      t_x = boundary_t(a.x, dx, bb.min_x, cur.col, step_x);
    }
    if (go_y) {
      cur.row += step_y;
      t_y = boundary_t(a.y, dy, bb.min_y, cur.row, step_y);
    }
    if (!emit(cur)) break;
  }
  return out;
}

void Skeleton::add_node(std::size_t id) {
  if (std::find(nodes.begin(), nodes.end(), id) == nodes.end()) nodes.push_back(id);
}

bool Skeleton::add_edge(std::size_t a, std::size_t b) {
  if (a == b) return false;
  const bool known_a = std::find(nodes.begin(), nodes.end(), a) != nodes.end();
  const bool known_b = std::find(nodes.begin(), nodes.end(), b) != nodes.end();
  if (!known_a || !known_b) return false;
  return edges.insert({std::min(a, b), std::max(a, b)}).second;
}

bool Skeleton::has_edge(std::size_t a, std::size_t b) const {
  return edges.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::size_t Skeleton::degree(std::size_t id) const {
  std::size_t d = 0;
  for (const auto& [a, b] : edges) {
    if (a == id || b == id) ++d;
  }
  return d;
}

SpatialModel::SpatialModel(const Bounds& bounds, double conveyor_cell_size)
    : conveyors(bounds, conveyor_cell_size) {}

std::optional<std::size_t> SpatialModel::region_containing(Vec2 p) const {
  std::optional<std::size_t> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const double d = distance(p, regions[i].center);
    if (d <= regions[i].radius && d < best_d) {
      best = i;
      best_d = d;
    }
  }
  return best;
}

std::size_t SpatialModel::exit_count() const {
  std::size_t n = 0;
  for (const auto& r : regions) n += r.exits.size();
  return n;
}

std::size_t SpatialModel::door_count() const {
  std::size_t n = 0;
  for (const auto& r : regions) n += r.doors.size();
  return n;
}

Region region_from_state(const DecisionState& state) {
  Region r;
  r.center = state.pose.position();
  r.radius = state.scan.ranges.empty()
                 ? state.scan.max_range
                 : *std::min_element(state.scan.ranges.begin(), state.scan.ranges.end());
  return r;
}

std::optional<std::size_t> learn_region(SpatialModel& model, const DecisionState& state) {
  const Vec2 c = state.pose.position();
  for (const auto& r : model.regions) {
    if (r.contains(c)) return std::nullopt;
  }
  Region r = region_from_state(state);
  if (!(r.radius > 0.0)) return std::nullopt;
  model.regions.push_back(std::move(r));
  const std::size_t id = model.regions.size() - 1;
  model.skeleton.add_node(id);
  return id;
}

void learn_exits(Region& region, std::span<const Pose> path, double chord_tolerance) {
  for (std::size_t k = 1; k < path.size(); ++k) {
    const Vec2 p = path[k - 1].position();
    const Vec2 d = path[k].position() - p;
    const double a = dot(d, d);
    if (a == 0.0) continue;
    const Vec2 f = p - region.center;
    const double b = 2.0 * dot(f, d);
    const double c = dot(f, f) - region.radius * region.radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) continue;
    if (std::sqrt(disc / a) < chord_tolerance) continue;
    const double sq = std::sqrt(disc);
    for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
      if (t >= 0.0 && t < 1.0) {
        // Snap onto the circle exactly.
        region.exits.push_back(region.point_at(region.angle_of(p + d * t)));
      }
    }
  }
}

void merge_doors(Region& region, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("door epsilon must be positive");
  region.doors.clear();
  std::vector<double> angles;
  angles.reserve(region.exits.size());
  for (const auto& e : region.exits) angles.push_back(normalize_angle(region.angle_of(e)));
  if (angles.empty()) return;
  std::sort(angles.begin(), angles.end());
  const std::size_t n = angles.size();

  auto gap_after = [&](std::size_t i) {
    return i + 1 < n ? angles[i + 1] - angles[i] : angles[0] + kTwoPi - angles[n - 1];
  };

  // Start the sweep just after the widest gap so no group straddles the seam.
  std::size_t widest = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (gap_after(i) > gap_after(widest)) widest = i;
  }
  if (n == 1 || gap_after(widest) <= epsilon) {
    if (n == 1) {
      region.doors.push_back({angles[0], angles[0]});
    } else {
      const std::size_t first = (widest + 1) % n;
      region.doors.push_back({angles[first], angles[first] + kTwoPi - gap_after(widest)});
    }
    return;
  }

  std::size_t i = (widest + 1) % n;
  Door current{angles[i], angles[i]};
  for (std::size_t step = 0; step + 1 < n; ++step) {
    const double gap = gap_after(i);
    if (gap <= epsilon) {
      current.end += gap;
    } else {
      region.doors.push_back(current);
      const std::size_t next = (i + 1) % n;
      current = {angles[next], angles[next]};
    }
    i = (i + 1) % n;
  }
  region.doors.push_back(current);
}

bool could_sense(const World& world, Vec2 from, Vec2 to, double max_range) {
  return distance(from, to) <= max_range && world.line_of_sight(from, to);
}

Trail learn_trail(std::span<const DecisionState> path, const World& world, double max_range) {
  Trail trail;
  if (path.empty()) return trail;
  std::vector<std::size_t> picked{path.size() - 1};
  std::size_t current = path.size() - 1;
  while (current != 0) {
    std::size_t earliest = current - 1;
    const Vec2 target = path[current].pose.position();
    for (std::size_t i = 0; i < current; ++i) {
      if (could_sense(world, path[i].pose.position(), target, max_range)) {
        earliest = i;
        break;
      }
    }
    picked.push_back(earliest);
    current = earliest;
  }
  std::reverse(picked.begin(), picked.end());
  for (auto idx : picked) trail.markers.push_back({path[idx].pose, idx});
  return trail;
}

void update_conveyors(const Trail& trail, ConveyorGrid& grid) {
  std::set<CellIndex> cells;
  if (trail.markers.size() == 1) {
    if (auto c = grid.cell_of(trail.markers[0].pose.position())) cells.insert(*c);
  }
  for (std::size_t k = 1; k < trail.markers.size(); ++k) {
    for (auto c : supercover_cells(grid, trail.markers[k - 1].pose.position(),
                                   trail.markers[k].pose.position())) {
      cells.insert(c);
    }
  }
  for (auto c : cells) grid.increment(c);
}

void update_skeleton(std::span<const DecisionState> path, SpatialModel& model) {
  std::optional<std::size_t> last;
  for (const auto& state : path) {
    auto here = model.region_containing(state.pose.position());
    if (!here) continue;
    if (last && *last != *here) {
      model.skeleton.add_node(*last);
      model.skeleton.add_node(*here);
      model.skeleton.add_edge(*last, *here);
    }
    last = here;
  }
}

void learn_from_path(SpatialModel& model, std::span<const DecisionState> path, const World& world,
                     const LearningParams& params) {
  std::vector<Pose> poses;
  poses.reserve(path.size());
  for (const auto& s : path) poses.push_back(s.pose);
  for (auto& region : model.regions) {
    const std::size_t before = region.exits.size();
    learn_exits(region, poses);
    if (region.exits.size() != before) merge_doors(region, params.door_arc_length / region.radius);
  }
  if (path.size() >= 2) {
    model.trails.push_back(learn_trail(path, world, params.max_range));
    update_conveyors(model.trails.back(), model.conveyors);
  }
  update_skeleton(path, model);
}

std::string export_model(const SpatialModel& model) {
  std::string out = "# navexplain spatial model v1\n";
  char buf[160];
  auto line = [&](int n) { out.append(buf, static_cast<std::size_t>(std::min<int>(n, sizeof buf - 1))); };
  for (std::size_t i = 0; i < model.regions.size(); ++i) {
    const auto& r = model.regions[i];
    line(std::snprintf(buf, sizeof buf, "region %zu %.6f %.6f %.6f\n", i, r.center.x, r.center.y,
                       r.radius));
    for (const auto& e : r.exits) {
      line(std::snprintf(buf, sizeof buf, "exit %zu %.6f %.6f\n", i, e.x, e.y));
    }
    for (const auto& d : r.doors) {
      line(std::snprintf(buf, sizeof buf, "door %zu %.6f %.6f\n", i, d.start, d.end));
    }
  }
  for (std::size_t i = 0; i < model.trails.size(); ++i) {
    const auto& t = model.trails[i];
    line(std::snprintf(buf, sizeof buf, "trail %zu %zu\n", i, t.markers.size()));
    for (const auto& m : t.markers) {
      line(std::snprintf(buf, sizeof buf, "marker %zu %zu %.6f %.6f %.6f\n", i, m.path_index,
                         m.pose.x, m.pose.y, m.pose.theta));
    }
  }
  line(std::snprintf(buf, sizeof buf, "grid %d %d %.6f\n", model.conveyors.cols(),
                     model.conveyors.rows(), model.conveyors.cell_size()));
  for (const auto& [c, v] : model.conveyors.nonzero()) {
    line(std::snprintf(buf, sizeof buf, "conveyor %d %d %u\n", c.col, c.row, v));
  }
  for (auto n : model.skeleton.nodes) line(std::snprintf(buf, sizeof buf, "node %zu\n", n));
  for (const auto& [a, b] : model.skeleton.edges) {
    line(std::snprintf(buf, sizeof buf, "edge %zu %zu\n", a, b));
  }
  return out;
}

}  // namespace navexplain
