#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace navexplain {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
  friend Vec2 operator*(double s, Vec2 a) { return {a.x * s, a.y * s}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }
inline Vec2 unit_vector(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Wraps any angle into [-pi, pi).
inline double normalize_angle(double a) {
  if (a >= -kPi && a < kPi) return a;
  double r = std::fmod(a + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after rounding.
  if (r >= kPi) r -= kTwoPi;
  return r;
}

// Absolute angular separation in [0, pi].
inline double angle_between(double a, double b) {
  return std::abs(normalize_angle(a - b));
}

struct Segment {
  Vec2 a;
  Vec2 b;

  double length() const { return distance(a, b); }
  friend bool operator==(const Segment&, const Segment&) = default;
};

inline double point_segment_distance(Vec2 p, const Segment& s) {
  const Vec2 d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + d * t);
}

// Distance t >= 0 along the unit direction `dir` from `origin` to the first
// point of `s`, if the ray reaches it.
inline std::optional<double> ray_segment_distance(Vec2 origin, Vec2 dir, const Segment& s) {
  const Vec2 e = s.b - s.a;
  const Vec2 w = s.a - origin;
  const double denom = cross(dir, e);
  if (std::abs(denom) < 1e-15) {
    // Parallel. Only a collinear segment can be hit, at its nearer endpoint.
    if (std::abs(cross(w, dir)) > 1e-12) return std::nullopt;
    const double ta = dot(s.a - origin, dir);
    const double tb = dot(s.b - origin, dir);
    if (ta < 0.0 && tb < 0.0) return std::nullopt;
    if (ta < 0.0 || tb < 0.0) return 0.0;
    return std::min(ta, tb);
  }
  const double t = cross(w, e) / denom;
  const double u = cross(w, dir) / denom;
  if (t < 0.0 || u < 0.0 || u > 1.0) return std::nullopt;
  return t;
}

// First t >= 0 at which the ray meets the circle boundary, if any.
inline std::optional<double> ray_circle_distance(Vec2 origin, Vec2 dir, Vec2 center, double radius) {
  const Vec2 f = origin - center;
  const double b = dot(f, dir);
  const double c = dot(f, f) - radius * radius;
  const double disc = b * b - c;
  if (disc < 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = -b - sq;
  const double t1 = -b + sq;
  if (t0 >= 0.0) return t0;
  if (t1 >= 0.0) return t1;
  return std::nullopt;
}

inline int orientation_sign(Vec2 a, Vec2 b, Vec2 c) {
  const double v = cross(b - a, c - a);
  if (v > 0.0) return 1;
  if (v < 0.0) return -1;
  return 0;
}

inline bool on_segment_collinear(Vec2 p, const Segment& s) {
  return std::min(s.a.x, s.b.x) <= p.x && p.x <= std::max(s.a.x, s.b.x) &&
         std::min(s.a.y, s.b.y) <= p.y && p.y <= std::max(s.a.y, s.b.y);
}

// Closed-segment intersection test (touching counts).
inline bool segments_intersect(const Segment& p, const Segment& q) {
  const int o1 = orientation_sign(p.a, p.b, q.a);
  const int o2 = orientation_sign(p.a, p.b, q.b);
  const int o3 = orientation_sign(q.a, q.b, p.a);
  const int o4 = orientation_sign(q.a, q.b, p.b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment_collinear(q.a, p)) return true;
  if (o2 == 0 && on_segment_collinear(q.b, p)) return true;
  if (o3 == 0 && on_segment_collinear(p.a, q)) return true;
  if (o4 == 0 && on_segment_collinear(p.b, q)) return true;
  return false;
}

struct Bounds {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }
  bool contains(Vec2 p) const {
    return p.x >= min_x && p.x <= max_x && p.y >= min_y && p.y <= max_y;
  }
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

}  // namespace navexplain
