#include "navexplain/world.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace navexplain {

namespace {

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

double parse_number(std::string_view tok, std::size_t line_no) {
  double v = 0.0;
  const auto* first = tok.data();
  const auto* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw FormatError(line_no, "invalid number '" + std::string(tok) + "'");
  }
  return v;
}

// Calls fn(line_no, tokens) for each non-empty line after stripping comments.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_tokens(line);
    if (!tokens.empty()) fn(line_no, tokens);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

// Earliest distance along the ray at which the point enters the margin-wide
// capsule around the segment.
std::optional<double> capsule_entry(Vec2 origin, Vec2 dir, const Segment& s, double margin) {
  std::optional<double> best;
  auto consider = [&](std::optional<double> t) {
    if (t && (!best || *t < *best)) best = t;
  };
  const Vec2 e = s.b - s.a;
  const double len = norm(e);
  if (len > 0.0) {
    const Vec2 n{-e.y / len * margin, e.x / len * margin};
    consider(ray_segment_distance(origin, dir, Segment{s.a + n, s.b + n}));
    consider(ray_segment_distance(origin, dir, Segment{s.a - n, s.b - n}));
  }
  consider(ray_circle_distance(origin, dir, s.a, margin));
  consider(ray_circle_distance(origin, dir, s.b, margin));
  return best;
}

}  // namespace

double LaserScan::beam_angle(std::size_t i) const {
  const std::size_t n = ranges.size();
  if (n < 2) return origin.theta;
  return origin.theta - fov / 2.0 + static_cast<double>(i) * fov / static_cast<double>(n - 1);
}

Vec2 LaserScan::hit_point(std::size_t i) const {
  return origin.position() + unit_vector(beam_angle(i)) * ranges[i];
}

std::size_t LaserScan::beam_near(double angle) const {
  const std::size_t n = ranges.size();
  if (n < 2) return npos;
  const double rel = normalize_angle(angle - origin.theta);
  if (std::abs(rel) > fov / 2.0 + 1e-12) return npos;
  const double step = fov / static_cast<double>(n - 1);
  const double idx = std::round((rel + fov / 2.0) / step);
  return static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(n - 1)));
}

double LaserScan::range_toward(double angle) const {
  const std::size_t i = beam_near(angle);
  return i == npos ? 0.0 : ranges[i];
}

std::vector<Vec2> LaserScan::obstacle_points() const {
  std::vector<Vec2> pts;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (is_hit(i)) pts.push_back(hit_point(i));
  }
  return pts;
}

std::string_view to_string(ActionKind kind) {
  return kind == ActionKind::Move ? "move" : "turn";
}

std::string describe(const Action& a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%g", a.kind == ActionKind::Move ? "move" : "turn",
                a.magnitude);
  return buf;
}

std::vector<Action> ActionSet::move_actions() const {
  std::vector<Action> out;
  for (std::size_t i = 0; i < moves.size(); ++i) out.push_back(move(i));
  return out;
}

std::vector<Action> ActionSet::turn_actions() const {
  std::vector<Action> out;
  for (std::size_t i = 0; i < turns.size(); ++i) out.push_back(turn(i));
  return out;
}

Action ActionSet::move(std::size_t index) const {
  return {ActionKind::Move, static_cast<int>(index), moves.at(index)};
}

Action ActionSet::turn(std::size_t index) const {
  return {ActionKind::Turn, static_cast<int>(index), turns.at(index)};
}

Action ActionSet::find(ActionKind kind, double magnitude) const {
  const auto& ladder = kind == ActionKind::Move ? moves : turns;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    if (std::abs(ladder[i] - magnitude) < 1e-9) {
      return {kind, static_cast<int>(i), ladder[i]};
    }
  }
  throw ValidationError("no " + std::string(to_string(kind)) + " of magnitude " +
                        std::to_string(magnitude) + " in the action set");
}

bool ActionSet::contains(const Action& a) const {
  const auto& ladder = a.kind == ActionKind::Move ? moves : turns;
  return a.intensity_index >= 0 && static_cast<std::size_t>(a.intensity_index) < ladder.size() &&
         ladder[static_cast<std::size_t>(a.intensity_index)] == a.magnitude;
}

void World::validate() const {
  if (!(bounds.width() > 0.0) || !(bounds.height() > 0.0)) {
    throw ValidationError("bounds must have positive width and height");
  }
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto& s = obstacles[i];
    if (!bounds.contains(s.a) || !bounds.contains(s.b)) {
      throw ValidationError("wall " + std::to_string(i) + " lies outside the world bounds");
    }
  }
}

bool World::line_of_sight(Vec2 a, Vec2 b) const {
  const Segment sight{a, b};
  for (const auto& s : obstacles) {
    if (segments_intersect(sight, s)) return false;
  }
  return true;
}

double World::nearest_obstacle_distance(Vec2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : obstacles) best = std::min(best, point_segment_distance(p, s));
  return best;
}

World load_world(std::string_view text, std::string name) {
  World world;
  world.name = std::move(name);
  bool have_bounds = false;
  for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& tok) {
    if (!have_bounds) {
      if (tok[0] != "bounds") throw FormatError(line_no, "expected 'bounds' record first");
      if (tok.size() != 5) throw FormatError(line_no, "bounds takes 4 numbers");
      world.bounds = {parse_number(tok[1], line_no), parse_number(tok[2], line_no),
                      parse_number(tok[3], line_no), parse_number(tok[4], line_no)};
      have_bounds = true;
      return;
    }
    if (tok[0] != "wall") {
      throw FormatError(line_no, "unknown record '" + std::string(tok[0]) + "'");
    }
    if (tok.size() != 5) throw FormatError(line_no, "wall takes 4 numbers");
    world.obstacles.push_back({{parse_number(tok[1], line_no), parse_number(tok[2], line_no)},
                               {parse_number(tok[3], line_no), parse_number(tok[4], line_no)}});
  });
  if (!have_bounds) throw FormatError(1, "missing 'bounds' record");
  world.validate();
  return world;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

World load_world_file(const std::string& path) {
  std::string name = path;
  if (auto slash = name.find_last_of('/'); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return load_world(read_text_file(path), name);
}

std::vector<Vec2> load_targets(std::string_view text) {
  std::vector<Vec2> out;
  for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& tok) {
    if (tok[0] != "target" || tok.size() != 3) {
      throw FormatError(line_no, "expected 'target <x> <y>'");
    }
    out.push_back({parse_number(tok[1], line_no), parse_number(tok[2], line_no)});
  });
  return out;
}

std::vector<Vec2> load_targets_file(const std::string& path) {
  return load_targets(read_text_file(path));
}

LaserScan ray_cast(const World& world, const Pose& pose, std::size_t beam_count, double fov,
                   double max_range) {
  if (beam_count < 2) throw std::invalid_argument("beam_count must be at least 2");
  if (!(fov > 0.0) || fov > kTwoPi) throw std::invalid_argument("fov must lie in (0, 2pi]");
  if (!world.bounds.contains(pose.position())) {
    throw SimulationError("pose (" + std::to_string(pose.x) + ", " + std::to_string(pose.y) +
                          ") is outside the world bounds");
  }
  LaserScan scan;
  scan.fov = fov;
  scan.max_range = max_range;
  scan.origin = pose;
  scan.ranges.resize(beam_count, max_range);
  const Vec2 origin = pose.position();
  for (std::size_t i = 0; i < beam_count; ++i) {
    const Vec2 dir = unit_vector(scan.beam_angle(i));
    double best = max_range;
    for (const auto& s : world.obstacles) {
      if (auto t = ray_segment_distance(origin, dir, s); t && *t < best) best = *t;
    }
    // A range of exactly 0 would break the positive-range invariant.
    scan.ranges[i] = std::max(best, 1e-9);
  }
  return scan;
}

StepResult apply_action(const World& world, const Pose& pose, const Action& action,
                        double safety_margin) {
  if (action.kind == ActionKind::Turn) {
    return {Pose{pose.x, pose.y, pose.theta + action.magnitude}, false};
  }
  const double d = action.magnitude;
  if (d <= 0.0) return {pose, false};

  const Vec2 origin = pose.position();
  const Vec2 dir = unit_vector(pose.theta);
  double allowed = d;
  for (const auto& s : world.obstacles) {
    if (point_segment_distance(origin, s) < safety_margin) {
      // Already inside the margin: only refuse to pass through the wall itself.
      if (auto t = ray_segment_distance(origin, dir, s); t && *t <= d) {
        allowed = std::min(allowed, std::max(0.0, *t - safety_margin));
      }
      continue;
    }
    if (auto t = capsule_entry(origin, dir, s, safety_margin); t && *t < allowed) {
      allowed = *t;
    }
  }
  if (allowed >= d) {
    return {Pose{origin.x + dir.x * d, origin.y + dir.y * d, pose.theta}, false};
  }
  // Back off a hair so rounding cannot leave the robot inside the margin.
  allowed = std::max(0.0, allowed - 1e-9);
  return {Pose{origin.x + dir.x * allowed, origin.y + dir.y * allowed, pose.theta}, true};
}

}  // namespace navexplain
