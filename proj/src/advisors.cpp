#include "navexplain/advisors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace navexplain {

namespace {

constexpr std::array<AdvisorMeta, 14> kCatalog{{
    {AdvisorId::Victory, 1, "Go toward an unobstructed target", "", "", "", false},
    {AdvisorId::AvoidWalls, 1, "Do not go within epsilon of an obstacle", "", "", "", false},
    {AdvisorId::NotOpposite, 1, "Do not return to the last orientation", "", "", "", true},
    {AdvisorId::BigStep, 3, "Take a long step", "take a big step", "take a small step",
     "take a big step", false},
    {AdvisorId::ElbowRoom, 3, "Get far away from obstacles", "stay away from that wall",
     "go close to that wall", "stay away from that wall", false},
    {AdvisorId::Explorer, 3, "Go to unfamiliar locations", "go somewhere new",
     "go somewhere I've been", "go somewhere new", false},
    {AdvisorId::GoAround, 3, "Turn away from nearby obstacles", "get around this wall",
     "turn towards this wall", "get around this wall", false},
    {AdvisorId::Greedy, 3, "Get close to the target", "get close to our target",
     "get farther from our target", "get closer to our target", false},
    {AdvisorId::Access, 3, "Go to a region with many doors", "go somewhere familiar",
     "go somewhere with few ways out", "go somewhere familiar", true},
    {AdvisorId::Convey, 3, "Go to frequent, distant conveyors", "go to an area I've been to a lot",
     "go somewhere I rarely travel", "go to an area I've been to a lot", false},
    {AdvisorId::Enter, 3, "Go into the target's region", "go where our target is",
     "stay outside our target's area", "go where our target is", true},
    {AdvisorId::Exit, 3, "Leave a region without the target", "leave since our target isn't here",
     "stay here when our target isn't here", "leave since our target isn't here", false},
    {AdvisorId::Trailer, 3, "Use a trail segment to approach the target",
     "follow a familiar route that gets me closer to our target",
     "stray from a familiar route to our target", "follow a familiar route to our target", false},
    {AdvisorId::Unlikely, 3, "Avoid dead-end regions", "avoid a dead end", "go into a dead end",
     "avoid a dead end", true},
}};

// Smallest distance from any sensed obstacle point to the segment [a, b].
double path_clearance(std::span<const Vec2> obstacles, Vec2 a, Vec2 b) {
  double best = std::numeric_limits<double>::infinity();
  const Segment s{a, b};
  for (const auto& p : obstacles) best = std::min(best, point_segment_distance(p, s));
  return best;
}

double point_clearance(std::span<const Vec2> obstacles, Vec2 a) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : obstacles) best = std::min(best, distance(p, a));
  return best;
}

// A move goes "within epsilon" when its swept path comes closer than epsilon
// to a sensed obstacle and closer than the robot already is. The second
// clause lets a robot that already sits inside the band move away from it.
bool move_crowds_wall(std::span<const Vec2> obstacles, const Pose& pose, double magnitude,
                      double epsilon_wall) {
  if (magnitude <= 0.0) return false;
  const Vec2 start = pose.position();
  const Vec2 end = start + unit_vector(pose.theta) * magnitude;
  const double here = point_clearance(obstacles, start) - 1e-9;
  // Endpoint inside the wall band, or a path that grazes (or crosses) a wall.
  const double at_end = point_clearance(obstacles, end);
  if (at_end < epsilon_wall && at_end < here) return true;
  const double along = path_clearance(obstacles, start, end);
  return along < epsilon_wall / 2.0 && along < here;
}

}  // namespace

const AdvisorMeta& advisor_meta(AdvisorId id) {
  for (const auto& m : kCatalog) {
    if (m.id == id) return m;
  }
  throw std::invalid_argument("unknown advisor id");
}

std::string_view advisor_rationale(AdvisorId id, RationaleRole role) {
  const auto& m = advisor_meta(id);
  if (m.tier != 3) {
    throw std::invalid_argument(std::string(to_string(id)) + " is not a tier-3 advisor");
  }
  switch (role) {
    case RationaleRole::Support:
      return m.support;
    case RationaleRole::Oppose:
      return m.oppose;
    case RationaleRole::Prefer:
      return m.prefer;
  }
  return m.support;
}

std::string_view advisor_rationale(std::string_view name, RationaleRole role) {
  return advisor_rationale(parse_advisor(name), role);
}

std::string_view veto_rationale(AdvisorId id) {
  switch (id) {
    case AdvisorId::AvoidWalls:
      return "the wall was in the way";
    case AdvisorId::NotOpposite:
      return "I don't want to turn back the way I was facing";
    case AdvisorId::Victory:
      return "I sense our goal and another action would get us closer to it";
    default:
      throw std::invalid_argument(std::string(to_string(id)) + " never vetoes");
  }
}

Tier1Outcome tier1_evaluate(const DecisionState& state, std::span<const Action> actions,
                            double epsilon_wall, double not_opposite_tolerance) {
  Tier1Outcome out;
  const auto obstacles = state.scan.obstacle_points();
  const Vec2 here = state.pose.position();

  // Victory: the target is sensed with nothing in front of it.
  const double target_dist = distance(here, state.target);
  const double bearing = std::atan2(state.target.y - here.y, state.target.x - here.x);
  const std::size_t beam = state.scan.beam_near(bearing);
  const bool target_visible = target_dist <= state.scan.max_range && beam != LaserScan::npos &&
                              state.scan.ranges[beam] >= target_dist;
  if (target_visible) {
    std::optional<Action> best;
    for (const auto& a : actions) {
      if (a.kind != ActionKind::Move || a.magnitude <= 0.0) continue;
      if (a.magnitude > target_dist) continue;  // would overshoot
      const Vec2 end = here + unit_vector(state.pose.theta) * a.magnitude;
      if (distance(end, state.target) >= target_dist) continue;
      if (move_crowds_wall(obstacles, state.pose, a.magnitude, epsilon_wall)) continue;
      if (!best || a.magnitude > best->magnitude) best = a;
    }
    // In a turn phase: the turn that points most directly at the target,
    // skipping one that would restore the previous orientation.
    for (const auto& a : actions) {
      if (a.kind != ActionKind::Turn) continue;
      const double heading = state.pose.theta + a.magnitude;
      if (state.previous_orientation &&
          angle_between(heading, *state.previous_orientation) < not_opposite_tolerance) {
        continue;
      }
      if (!best || angle_between(heading, bearing) <
                       angle_between(state.pose.theta + best->magnitude, bearing)) {
        best = a;
      }
    }
    if (best) {
      out.mandate = best;
      out.deciding_advisor = AdvisorId::Victory;
      return out;
    }
  }

  for (const auto& a : actions) {
    if (a.kind == ActionKind::Move &&
        move_crowds_wall(obstacles, state.pose, a.magnitude, epsilon_wall)) {
      out.vetoes.push_back(a);
      out.veto_sources.push_back(AdvisorId::AvoidWalls);
    }
  }
  if (state.previous_orientation) {
    for (const auto& a : actions) {
      if (a.kind != ActionKind::Turn || out.is_vetoed(a)) continue;
      if (angle_between(state.pose.theta + a.magnitude, *state.previous_orientation) <
          not_opposite_tolerance) {
        out.vetoes.push_back(a);
        out.veto_sources.push_back(AdvisorId::NotOpposite);
      }
    }
  }
  return out;
}

Vec2 projected_endpoint(const DecisionState& state, const Action& a, const NavConfig& cfg) {
  const Vec2 here = state.pose.position();
  if (a.kind == ActionKind::Move) return here + unit_vector(state.pose.theta) * a.magnitude;
  const double heading = state.pose.theta + a.magnitude;
  const double free = state.scan.range_toward(heading);
  const double reach = std::clamp(free - cfg.epsilon_wall, 0.0, cfg.turn_lookahead);
  return here + unit_vector(heading) * reach;
}

std::vector<double> raw_scores(AdvisorId advisor, const DecisionState& state,
                               const SpatialModel& model, std::span<const Action> actions,
                               const NavConfig& cfg) {
  std::vector<double> raw(actions.size(), 0.0);
  std::vector<Vec2> ends;
  ends.reserve(actions.size());
  for (const auto& a : actions) ends.push_back(projected_endpoint(state, a, cfg));
  const Vec2 here = state.pose.position();

  switch (advisor) {
    case AdvisorId::Greedy:
      for (std::size_t j = 0; j < actions.size(); ++j) raw[j] = -distance(ends[j], state.target);
      break;

    case AdvisorId::BigStep:
      for (std::size_t j = 0; j < actions.size(); ++j) {
        const auto& a = actions[j];
        // Moves score by intensity level on the ladder; turns by the free
        // range they open up ahead.
        raw[j] = a.kind == ActionKind::Move ? static_cast<double>(a.intensity_index)
                                            : state.scan.range_toward(state.pose.theta + a.magnitude);
      }
      break;

    case AdvisorId::ElbowRoom: {
      const auto obstacles = state.scan.obstacle_points();
      for (std::size_t j = 0; j < actions.size(); ++j) {
        raw[j] = obstacles.empty() ? state.scan.max_range : point_clearance(obstacles, ends[j]);
      }
      break;
    }

    case AdvisorId::GoAround: {
      const auto& ranges = state.scan.ranges;
      if (ranges.empty()) break;
      const auto nearest = static_cast<std::size_t>(
          std::min_element(ranges.begin(), ranges.end()) - ranges.begin());
      if (!state.scan.is_hit(nearest)) break;
      const double obstacle_bearing = state.scan.beam_angle(nearest);
      for (std::size_t j = 0; j < actions.size(); ++j) {
        if (actions[j].kind == ActionKind::Turn) {
          raw[j] = angle_between(state.pose.theta + actions[j].magnitude, obstacle_bearing);
        }
      }
      break;
    }

    case AdvisorId::Explorer:
      for (std::size_t j = 0; j < actions.size(); ++j) {
        raw[j] = -static_cast<double>(model.conveyors.count_at(ends[j]));
      }
      break;

    case AdvisorId::Convey:
      for (std::size_t j = 0; j < actions.size(); ++j) {
        const auto cell = model.conveyors.cell_of(ends[j]);
        if (cell && model.conveyors.is_conveyor(*cell)) {
          raw[j] = model.conveyors.count(*cell) * distance(here, ends[j]);
        }
      }
      break;

    case AdvisorId::Access:
      for (std::size_t j = 0; j < actions.size(); ++j) {
        if (auto r = model.region_containing(ends[j])) {
          raw[j] = static_cast<double>(model.regions[*r].doors.size());
        }
      }
      break;

    case AdvisorId::Enter:
      for (std::size_t j = 0; j < actions.size(); ++j) {
        for (const auto& r : model.regions) {
          if (r.contains(ends[j]) && r.contains(state.target)) {
            raw[j] = 10.0;
            break;
          }
        }
      }
      break;

    case AdvisorId::Exit: {
      const auto current = model.region_containing(here);
      if (!current) break;
      const Region& region = model.regions[*current];
      if (region.contains(state.target) || region.doors.empty()) break;
      for (std::size_t j = 0; j < actions.size(); ++j) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& d : region.doors) {
          best = std::min(best, distance(ends[j], region.point_at(d.mid())));
        }
        raw[j] = -best;
      }
      break;
    }

    case AdvisorId::Trailer: {
      // Visible marker of any trail that gets closest to the target, provided
      // it is closer than the robot already is.
      const double own = distance(here, state.target);
      std::optional<Vec2> goal;
      double goal_dist = own;
      for (const auto& trail : model.trails) {
        for (const auto& m : trail.markers) {
          const Vec2 p = m.pose.position();
          const double to_target = distance(p, state.target);
          if (to_target >= goal_dist) continue;
          const double d = distance(here, p);
          if (d > state.scan.max_range) continue;
          const std::size_t beam = state.scan.beam_near(std::atan2(p.y - here.y, p.x - here.x));
          if (beam == LaserScan::npos || state.scan.ranges[beam] < d) continue;
          goal = p;
          goal_dist = to_target;
        }
      }
      if (!goal) break;
      for (std::size_t j = 0; j < actions.size(); ++j) raw[j] = -distance(ends[j], *goal);
      break;
    }

    case AdvisorId::Unlikely:
      for (std::size_t j = 0; j < actions.size(); ++j) {
        auto r = model.region_containing(ends[j]);
        if (r && model.skeleton.degree(*r) == 1 && !model.regions[*r].contains(state.target)) {
          raw[j] = -1.0;
        }
      }
      break;

    default:
      throw std::invalid_argument(std::string(to_string(advisor)) + " is not a tier-3 advisor");
  }
  return raw;
}

std::vector<double> rescale_strengths(std::span<const double> raw) {
  std::vector<double> out(raw.size(), 5.0);
  if (raw.empty()) return out;
  const auto [lo, hi] = std::minmax_element(raw.begin(), raw.end());
  const double span = *hi - *lo;
  if (!(span > 1e-12)) return out;
  for (std::size_t j = 0; j < raw.size(); ++j) {
    out[j] = std::clamp(10.0 * (raw[j] - *lo) / span, 0.0, 10.0);
  }
  return out;
}

std::vector<Comment> tier3_comment(AdvisorId advisor, const DecisionState& state,
                                   const SpatialModel& model, std::span<const Action> actions,
                                   const NavConfig& cfg) {
  const auto strengths = rescale_strengths(raw_scores(advisor, state, model, actions, cfg));
  std::vector<Comment> out;
  out.reserve(actions.size());
  for (std::size_t j = 0; j < actions.size(); ++j) out.push_back({advisor, actions[j], strengths[j]});
  return out;
}

}  // namespace navexplain
