#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "navexplain/spatial_model.hpp"
#include "test_util.hpp"

using namespace navexplain;
using navexplain::testing::box_world;
using navexplain::testing::open_world;

namespace {

DecisionState state_with_ranges(Pose pose, std::vector<double> ranges, double max_range = 25.0) {
  DecisionState s;
  s.pose = pose;
  s.scan.ranges = std::move(ranges);
  s.scan.fov = kPi;
  s.scan.max_range = max_range;
  s.scan.origin = pose;
  return s;
}

std::vector<DecisionState> states_at(const std::vector<Vec2>& points) {
  std::vector<DecisionState> out;
  for (auto p : points) out.push_back(state_with_ranges({p.x, p.y, 0}, {1.0}));
  return out;
}

// Parameter interval {t : lo <= c(t) < hi} for c(t) = a + t d, intersected with
// [0, 1]. Returns false when empty. Open/closed ends are tracked exactly.
struct TInterval {
  double lo = 0.0, hi = 1.0;
  bool lo_open = false, hi_open = false;
};

bool clip_axis(double a, double d, double lo, double hi, TInterval& iv) {
  if (d == 0.0) return a >= lo && a < hi;
  double t_lo = (lo - a) / d, t_hi = (hi - a) / d;
  bool lo_open = false, hi_open = true;  // for d > 0: lo <= .. < hi
  if (d < 0.0) {
    std::swap(t_lo, t_hi);
    lo_open = true;  // c < hi  <=>  t > (hi - a) / d
    hi_open = false;
  }
  if (t_lo > iv.lo || (t_lo == iv.lo && lo_open)) {
    iv.lo = t_lo;
    iv.lo_open = lo_open;
  }
  if (t_hi < iv.hi || (t_hi == iv.hi && hi_open)) {
    iv.hi = t_hi;
    iv.hi_open = hi_open;
  }
  return true;
}

bool segment_touches_cell(Vec2 a, Vec2 b, double x0, double y0, double size) {
  TInterval iv;
  const Vec2 d = b - a;
  if (!clip_axis(a.x, d.x, x0, x0 + size, iv)) return false;
  if (!clip_axis(a.y, d.y, y0, y0 + size, iv)) return false;
  if (iv.lo < iv.hi) return true;
  return iv.lo == iv.hi && !iv.lo_open && !iv.hi_open;
}

// Oracle for the grid walk: test every cell against the half-open square.
std::set<CellIndex> brute_force_cells(const ConveyorGrid& g, Vec2 a, Vec2 b) {
  std::set<CellIndex> out;
  for (int c = 0; c < g.cols(); ++c) {
    for (int r = 0; r < g.rows(); ++r) {
      const double x0 = g.bounds().min_x + c * g.cell_size();
      const double y0 = g.bounds().min_y + r * g.cell_size();
      if (segment_touches_cell(a, b, x0, y0, g.cell_size())) out.insert({c, r});
    }
  }
  return out;
}

// Independent visibility oracle: straight segment crosses no wall.
bool visible(const World& w, Vec2 a, Vec2 b, double max_range) {
  if (distance(a, b) > max_range) return false;
  for (const auto& s : w.obstacles) {
    const Vec2 r = b - a, q = s.b - s.a;
    const double den = cross(r, q);
    const Vec2 ap = s.a - a;
    if (den == 0.0) {
      if (cross(ap, r) != 0.0) continue;
      // Collinear: overlap test on the projection.
      const double rr = dot(r, r);
      if (rr == 0.0) continue;
      const double t0 = dot(ap, r) / rr, t1 = dot(s.b - a, r) / rr;
      if (std::max(t0, t1) >= 0.0 && std::min(t0, t1) <= 1.0) return false;
      continue;
    }
    const double t = cross(ap, q) / den, u = cross(ap, r) / den;
    if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) return false;
  }
  return true;
}

std::vector<std::size_t> oracle_trail(const std::vector<DecisionState>& path, const World& w,
                                      double max_range) {
  std::vector<std::size_t> idx{path.size() - 1};
  std::size_t cur = path.size() - 1;
  while (cur > 0) {
    std::size_t pick = cur - 1;
    for (std::size_t i = 0; i < cur; ++i) {
      if (visible(w, path[i].pose.position(), path[cur].pose.position(), max_range)) {
        pick = i;
        break;
      }
    }
    idx.insert(idx.begin(), pick);
    cur = pick;
  }
  return idx;
}

}  // namespace

// ---- regions ---------------------------------------------------------------

TEST(Region, UniformScanGivesMaxRangeRadius) {
  const World w = open_world(100, 100);
  const auto s = navexplain::testing::make_state(w, {50, 50, 0}, {0, 0});
  EXPECT_DOUBLE_EQ(region_from_state(s).radius, 25.0);
}

TEST(Region, RadiusIsMinimumRange) {
  const auto s = state_with_ranges({5, 5, 0}, {4.0, 1.3, 7.5});
  const Region r = region_from_state(s);
  EXPECT_DOUBLE_EQ(r.center.x, 5.0);
  EXPECT_DOUBLE_EQ(r.center.y, 5.0);
  EXPECT_DOUBLE_EQ(r.radius, 1.3);
}

TEST(Region, ContainedCenterAddsNothing) {
  SpatialModel m({0, 0, 20, 20}, 2.0);
  EXPECT_TRUE(learn_region(m, state_with_ranges({5, 5, 0}, {2.0})).has_value());
  EXPECT_FALSE(learn_region(m, state_with_ranges({5.1, 5, 0}, {2.0})).has_value());
  EXPECT_EQ(m.regions.size(), 1u);
  EXPECT_TRUE(learn_region(m, state_with_ranges({9, 5, 0}, {1.0})).has_value());
  EXPECT_EQ(m.skeleton.nodes.size(), 2u);
}

TEST(Region, AdmissionMatchesContainmentOracle) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 20), ur(0.2, 3);
  SpatialModel m({0, 0, 20, 20}, 2.0);
  std::vector<Region> expected;
  for (int k = 0; k < 300; ++k) {
    const auto s = state_with_ranges({u(rng), u(rng), 0}, {ur(rng), ur(rng)});
    const bool inside = std::any_of(expected.begin(), expected.end(), [&](const Region& r) {
      return std::hypot(s.pose.x - r.center.x, s.pose.y - r.center.y) <= r.radius;
    });
    if (!inside) expected.push_back(region_from_state(s));
    EXPECT_EQ(learn_region(m, s).has_value(), !inside);
  }
  ASSERT_EQ(m.regions.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_EQ(m.regions[i].radius, expected[i].radius);
  }
}

// ---- exits and doors -------------------------------------------------------

TEST(Exits, PathInsideCircleAddsNone) {
  Region r{{0, 0}, 2.0, {}, {}};
  const std::vector<Pose> path{{-1, 0, 0}, {0, 0.5, 0}, {1, 0, 0}};
  learn_exits(r, path);
  EXPECT_TRUE(r.exits.empty());
}

TEST(Exits, StraightPathThroughCenterGivesAntipodalPair) {
  Region r{{3, 4}, 1.5, {}, {}};
  const std::vector<Pose> path{{0, 4, 0}, {3, 4, 0}, {6, 4, 0}};
  learn_exits(r, path);
  ASSERT_EQ(r.exits.size(), 2u);
  EXPECT_NEAR(r.exits[0].x, 1.5, 1e-12);
  EXPECT_NEAR(r.exits[1].x, 4.5, 1e-12);
  EXPECT_NEAR(r.exits[0].y + r.exits[1].y, 8.0, 1e-12);
}

TEST(Exits, SingleSegmentCrossingTwice) {
  Region r{{0, 0}, 1.0, {}, {}};
  const std::vector<Pose> path{{-3, 0.6, 0}, {3, 0.6, 0}};
  learn_exits(r, path);
  ASSERT_EQ(r.exits.size(), 2u);
  EXPECT_NEAR(r.exits[0].x, -0.8, 1e-12);
  EXPECT_NEAR(r.exits[1].x, 0.8, 1e-12);
}

TEST(Exits, TangentPathIsIgnored) {
  Region r{{0, 0}, 1.0, {}, {}};
  const std::vector<Pose> path{{-3, 1.0, 0}, {3, 1.0, 0}};
  learn_exits(r, path);
  EXPECT_TRUE(r.exits.empty());
}

TEST(Exits, MatchLineCircleOracleOnRandomPaths) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    Region r{{u(rng) / 3, u(rng) / 3}, 1.0 + std::abs(u(rng)) / 2, {}, {}};
    std::vector<Pose> path;
    for (int k = 0; k < 8; ++k) path.push_back({u(rng), u(rng), 0});
    learn_exits(r, path);
    std::vector<Vec2> expected;
    for (std::size_t k = 1; k < path.size(); ++k) {
      const Vec2 p = path[k - 1].position(), q = path[k].position();
      // Solve |p + t (q - p) - c| = R in closed form.
      const double dx = q.x - p.x, dy = q.y - p.y;
      const double fx = p.x - r.center.x, fy = p.y - r.center.y;
      const double A = dx * dx + dy * dy, B = 2 * (fx * dx + fy * dy),
                   C = fx * fx + fy * fy - r.radius * r.radius;
      const double D = B * B - 4 * A * C;
      if (D <= 0) continue;
      for (double t : {(-B - std::sqrt(D)) / (2 * A), (-B + std::sqrt(D)) / (2 * A)}) {
        if (t >= 0 && t < 1) expected.push_back({p.x + t * dx, p.y + t * dy});
      }
    }
    ASSERT_EQ(r.exits.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_NEAR(r.exits[i].x, expected[i].x, 1e-9);
      EXPECT_NEAR(r.exits[i].y, expected[i].y, 1e-9);
      EXPECT_NEAR(distance(r.exits[i], r.center), r.radius, 1e-6);
    }
  }
}

TEST(Doors, SingleExitIsZeroWidthDoor) {
  Region r{{0, 0}, 2.0, {}, {}};
  r.exits.push_back(r.point_at(0.7));
  merge_doors(r, 0.1);
  ASSERT_EQ(r.doors.size(), 1u);
  EXPECT_NEAR(r.doors[0].start, 0.7, 1e-12);
  EXPECT_DOUBLE_EQ(r.doors[0].width(), 0.0);
}

TEST(Doors, CloseExitsMergeFarExitsDoNot) {
  Region r{{0, 0}, 2.0, {}, {}};
  r.exits = {r.point_at(1.0), r.point_at(1.05)};
  merge_doors(r, 0.1);
  ASSERT_EQ(r.doors.size(), 1u);
  EXPECT_NEAR(r.doors[0].start, 1.0, 1e-12);
  EXPECT_NEAR(r.doors[0].end, 1.05, 1e-12);

  r.exits = {r.point_at(1.0), r.point_at(1.3)};
  merge_doors(r, 0.1);
  EXPECT_EQ(r.doors.size(), 2u);
}

TEST(Doors, MergeAcrossTheSeam) {
  Region r{{0, 0}, 1.0, {}, {}};
  r.exits = {r.point_at(kPi - 0.02), r.point_at(-kPi + 0.02)};
  merge_doors(r, 0.1);
  ASSERT_EQ(r.doors.size(), 1u);
  EXPECT_NEAR(r.doors[0].width(), 0.04, 1e-9);
}

TEST(Doors, CoverEveryExitAndDoNotOverlap) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ua(-kPi, kPi), ue(0.01, 0.6);
  std::uniform_int_distribution<int> un(1, 25);
  for (int trial = 0; trial < 500; ++trial) {
    Region r{{1, 2}, 3.0, {}, {}};
    const int n = un(rng);
    for (int k = 0; k < n; ++k) r.exits.push_back(r.point_at(ua(rng)));
    const double eps = ue(rng);
    merge_doors(r, eps);
    for (const auto& e : r.exits) {
      const double a = r.angle_of(e);
      EXPECT_TRUE(std::any_of(r.doors.begin(), r.doors.end(),
                              [&](const Door& d) { return d.covers(a, 1e-9); }));
    }
    // Disjoint arcs: consecutive doors (by start) are separated by more than eps.
    auto doors = r.doors;
    std::sort(doors.begin(), doors.end(), [](auto& x, auto& y) { return x.start < y.start; });
    double total = 0.0;
    for (std::size_t i = 0; i < doors.size(); ++i) {
      total += doors[i].width();
      if (doors.size() < 2) break;
      const auto& next = doors[(i + 1) % doors.size()];
      double gap = next.start - doors[i].end;
      if (i + 1 == doors.size()) gap += kTwoPi;
      EXPECT_GT(gap, eps - 1e-12);
    }
    EXPECT_LE(total, kTwoPi + 1e-9);
  }
}

// ---- trails ----------------------------------------------------------------

TEST(Trail, StraightUnobstructedPathKeepsEnds) {
  const World w = box_world(20, 20);
  std::vector<Vec2> pts;
  for (int k = 0; k < 10; ++k) pts.push_back({2.0 + k, 5.0});
  const auto path = states_at(pts);
  const Trail t = learn_trail(path, w, 25.0);
  ASSERT_EQ(t.markers.size(), 2u);
  EXPECT_EQ(t.markers.front().path_index, 0u);
  EXPECT_EQ(t.markers.back().path_index, 9u);
}

TEST(Trail, CornerNeedsThreeMarkers) {
  // Opaque block occupying [5, 10] x [5, 10] inside the room.
  World w = box_world(20, 20);
  w.obstacles.push_back({{5, 5}, {10, 5}});
  w.obstacles.push_back({{5, 5}, {5, 10}});
  w.obstacles.push_back({{10, 5}, {10, 10}});
  w.obstacles.push_back({{5, 10}, {10, 10}});
  // L-shaped path: east along y = 3, then north along x = 12.
  std::vector<Vec2> pts{{3, 3}, {6, 3}, {9, 3}, {12, 3}, {12, 6}, {12, 9}, {12, 12}};
  const Trail t = learn_trail(states_at(pts), w, 25.0);
  ASSERT_EQ(t.markers.size(), 3u);
  EXPECT_EQ(t.markers[0].path_index, 0u);
  EXPECT_EQ(t.markers[2].path_index, 6u);
  const std::size_t mid = t.markers[1].path_index;
  EXPECT_TRUE(visible(w, pts[0], pts[mid], 25.0));
  EXPECT_TRUE(visible(w, pts[mid], pts[6], 25.0));
}

TEST(Trail, TwoStatePathIsItself) {
  const World w = box_world(10, 10);
  const Trail t = learn_trail(states_at({{1, 1}, {2, 2}}), w, 25.0);
  ASSERT_EQ(t.markers.size(), 2u);
  EXPECT_EQ(t.markers[0].path_index, 0u);
  EXPECT_EQ(t.markers[1].path_index, 1u);
}

TEST(Trail, RangeLimitForcesIntermediateMarkers) {
  const World w = open_world(100, 10);
  std::vector<Vec2> pts;
  for (int k = 0; k <= 40; ++k) pts.push_back({1.0 + 2.0 * k, 5.0});
  const Trail t = learn_trail(states_at(pts), w, 25.0);
  for (std::size_t k = 1; k < t.markers.size(); ++k) {
    EXPECT_LE(distance(t.markers[k - 1].pose.position(), t.markers[k].pose.position()), 25.0);
  }
  EXPECT_GT(t.markers.size(), 3u);
}

TEST(Trail, MatchesBackwardVisibilityOracle) {
  const World w = load_world_file(std::string(NAVEXPLAIN_DATA_DIR) + "/office.world");
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.5, 19.5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Vec2> pts;
    for (int k = 0; k < 12; ++k) pts.push_back({u(rng), u(rng)});
    const auto path = states_at(pts);
    const Trail t = learn_trail(path, w, 25.0);
    const auto expected = oracle_trail(path, w, 25.0);
    ASSERT_EQ(t.markers.size(), expected.size());
    EXPECT_LE(t.markers.size(), path.size());
    for (std::size_t k = 0; k < expected.size(); ++k) {
      EXPECT_EQ(t.markers[k].path_index, expected[k]);
    }
  }
}

// ---- conveyors -------------------------------------------------------------

TEST(Supercover, StraightRowCrossesFiveCells) {
  const ConveyorGrid g({0, 0, 20, 20}, 2.0);
  const auto cells = supercover_cells(g, {1, 5}, {9, 5});
  ASSERT_EQ(cells.size(), 5u);
  for (int c = 0; c < 5; ++c) EXPECT_EQ(cells[c], (CellIndex{c, 2}));
}

TEST(Supercover, ExactCornerGoesDiagonal) {
  const ConveyorGrid g({0, 0, 8, 8}, 2.0);
  const auto cells = supercover_cells(g, {1, 1}, {3, 3});
  EXPECT_EQ(cells, (std::vector<CellIndex>{{0, 0}, {1, 1}}));
  const auto back = supercover_cells(g, {3, 3}, {1, 1});
  EXPECT_EQ(std::set<CellIndex>(back.begin(), back.end()),
            (std::set<CellIndex>{{0, 0}, {1, 1}}));
}

TEST(Supercover, MatchesHalfOpenBruteForce) {
  const ConveyorGrid g({-3, -2, 17, 14}, 2.0);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ux(-3, 17), uy(-2, 14);
  std::uniform_int_distribution<int> gx(-1, 8), gy(-1, 7), pick(0, 2);
  for (int trial = 0; trial < 5000; ++trial) {
    Vec2 a{ux(rng), uy(rng)}, b{ux(rng), uy(rng)};
    if (pick(rng) == 0) {
      // Grid-aligned endpoints exercise corners and edges.
      a = {-3.0 + 2.0 * gx(rng) + (pick(rng) == 0 ? 1.0 : 0.0), -2.0 + 2.0 * gy(rng)};
      b = {-3.0 + 2.0 * gx(rng), -2.0 + 2.0 * gy(rng) + (pick(rng) == 0 ? 1.0 : 0.0)};
      a.x = std::clamp(a.x, -3.0, 16.5);
      b.x = std::clamp(b.x, -3.0, 16.5);
      a.y = std::clamp(a.y, -2.0, 13.5);
      b.y = std::clamp(b.y, -2.0, 13.5);
    }
    const auto cells = supercover_cells(g, a, b);
    const std::set<CellIndex> got(cells.begin(), cells.end());
    EXPECT_EQ(got.size(), cells.size()) << "duplicates";
    EXPECT_EQ(got, brute_force_cells(g, a, b))
        << "a=(" << a.x << "," << a.y << ") b=(" << b.x << "," << b.y << ")";
    for (std::size_t k = 1; k < cells.size(); ++k) {
      EXPECT_LE(std::abs(cells[k].col - cells[k - 1].col), 1);
      EXPECT_LE(std::abs(cells[k].row - cells[k - 1].row), 1);
    }
  }
}

TEST(Conveyors, EmptyTrailSetHasNoCounts) {
  const ConveyorGrid g({0, 0, 20, 20}, 2.0);
  EXPECT_EQ(g.total(), 0u);
  EXPECT_TRUE(g.nonzero().empty());
  EXPECT_DOUBLE_EQ(g.conveyor_threshold(), 0.0);
}

TEST(Conveyors, OneTrailOncePerCellAndAdditive) {
  ConveyorGrid g({0, 0, 20, 20}, 2.0);
  Trail t;
  t.markers = {{{1, 5, 0}, 0}, {{5, 5, 0}, 1}, {{9, 5, 0}, 2}};
  update_conveyors(t, g);
  EXPECT_EQ(g.total(), 5u);
  for (int c = 0; c < 5; ++c) EXPECT_EQ(g.count({c, 2}), 1u);
  update_conveyors(t, g);
  for (int c = 0; c < 5; ++c) EXPECT_EQ(g.count({c, 2}), 2u);
}

TEST(Conveyors, OrderOfTrailsDoesNotMatter) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0, 20);
  std::vector<Trail> trails(12);
  for (auto& t : trails) {
    for (std::size_t k = 0; k < 4; ++k) t.markers.push_back({{u(rng), u(rng), 0}, k});
  }
  ConveyorGrid a({0, 0, 20, 20}, 2.0), b({0, 0, 20, 20}, 2.0);
  for (const auto& t : trails) update_conveyors(t, a);
  std::shuffle(trails.begin(), trails.end(), rng);
  for (const auto& t : trails) update_conveyors(t, b);
  EXPECT_EQ(a.nonzero(), b.nonzero());
}

TEST(Conveyors, ThresholdIsMedianOfNonzeroCounts) {
  ConveyorGrid g({0, 0, 10, 10}, 2.0);
  for (int k = 0; k < 1; ++k) g.increment({0, 0});
  for (int k = 0; k < 3; ++k) g.increment({1, 0});
  for (int k = 0; k < 5; ++k) g.increment({2, 0});
  for (int k = 0; k < 9; ++k) g.increment({3, 0});
  EXPECT_DOUBLE_EQ(g.conveyor_threshold(), 4.0);
  EXPECT_FALSE(g.is_conveyor({1, 0}));
  EXPECT_TRUE(g.is_conveyor({2, 0}));
  EXPECT_FALSE(g.is_conveyor({4, 4}));
}

// ---- skeleton --------------------------------------------------------------

namespace {
SpatialModel three_regions() {
  SpatialModel m({0, 0, 20, 20}, 2.0);
  for (double x : {2.0, 6.0, 10.0}) {
    m.regions.push_back({{x, 5}, 1.0, {}, {}});
    m.skeleton.add_node(m.regions.size() - 1);
  }
  return m;
}
}  // namespace

TEST(Skeleton, PathWithinOneRegionAddsNoEdge) {
  SpatialModel m = three_regions();
  update_skeleton(states_at({{2, 5}, {2.5, 5}, {1.8, 5.2}}), m);
  EXPECT_TRUE(m.skeleton.edges.empty());
}

TEST(Skeleton, BackAndForthIsOneEdge) {
  SpatialModel m = three_regions();
  update_skeleton(states_at({{2, 5}, {4, 5}, {6, 5}, {4, 5}, {2, 5}}), m);
  EXPECT_EQ(m.skeleton.edges.size(), 1u);
  EXPECT_TRUE(m.skeleton.has_edge(0, 1));
  EXPECT_TRUE(m.skeleton.has_edge(1, 0));
}

TEST(Skeleton, ChainHasNoShortcut) {
  SpatialModel m = three_regions();
  update_skeleton(states_at({{2, 5}, {6, 5}, {10, 5}}), m);
  EXPECT_TRUE(m.skeleton.has_edge(0, 1));
  EXPECT_TRUE(m.skeleton.has_edge(1, 2));
  EXPECT_FALSE(m.skeleton.has_edge(0, 2));
  EXPECT_EQ(m.skeleton.degree(1), 2u);
}

TEST(Skeleton, RejectsSelfLoopsAndUnknownNodes) {
  Skeleton s;
  s.add_node(0);
  s.add_node(1);
  EXPECT_FALSE(s.add_edge(0, 0));
  EXPECT_FALSE(s.add_edge(0, 7));
  EXPECT_TRUE(s.add_edge(1, 0));
  EXPECT_FALSE(s.add_edge(0, 1));
  EXPECT_EQ(s.edges.size(), 1u);
}

// ---- export ----------------------------------------------------------------

TEST(ExportModel, OneRecordPerAffordance) {
  SpatialModel m = three_regions();
  m.regions[0].exits.push_back(m.regions[0].point_at(0.0));
  merge_doors(m.regions[0], 0.2);
  m.skeleton.add_edge(0, 1);
  Trail t;
  t.markers = {{{1, 5, 0}, 0}, {{9, 5, 0}, 3}};
  m.trails.push_back(t);
  update_conveyors(t, m.conveyors);
  const std::string text = export_model(m);
  auto count = [&](const std::string& prefix) {
    std::size_t n = 0, pos = 0;
    while ((pos = text.find("\n" + prefix + " ", pos)) != std::string::npos) ++n, ++pos;
    if (text.rfind(prefix + " ", 0) == 0) ++n;
    return n;
  };
  EXPECT_EQ(count("region"), 3u);
  EXPECT_EQ(count("exit"), 1u);
  EXPECT_EQ(count("door"), 1u);
  EXPECT_EQ(count("trail"), 1u);
  EXPECT_EQ(count("marker"), 2u);
  EXPECT_EQ(count("edge"), 1u);
  EXPECT_EQ(count("conveyor"), m.conveyors.nonzero().size());
}
