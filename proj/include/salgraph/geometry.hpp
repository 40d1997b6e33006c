#pragma once

#include <algorithm>
#include <cmath>

#include "salgraph/errors.hpp"

namespace salgraph {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
};

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& v) { return std::hypot(v.x, v.y); }
inline double norm(const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Vec2& a, const Vec2& b) { return norm(a - b); }
inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Wraps an angle into [0, 2*pi).
inline double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// Wraps an angle into (-pi, pi].
inline double wrap_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r > kPi) r -= kTwoPi;
  if (r <= -kPi) r += kTwoPi;
  return r;
}

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

// Absolute angular difference folded into [0, pi].
inline double angle_abs_diff(double a, double b) { return std::fabs(wrap_pi(a - b)); }

// Rotates a 2D vector counterclockwise by `angle`.
inline Vec2 rotate(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

struct Spherical {
  double azimuth = 0.0;  // from +X in the XY plane, in [0, 2*pi)
  double polar = 0.0;    // from +Z, in [0, pi]
  double radial = 0.0;   // Euclidean norm, metres
};

// Spherical coordinates of a point with the +Z axis as the polar reference
// and +X as the azimuth reference. A point on the Z axis gets azimuth 0.
inline Spherical spherical_of(const Vec3& p) {
  const double r = norm(p);
  if (r == 0.0) {
    throw DomainError(Errc::degenerate_centroid, "point at the frame origin has no direction");
  }
  Spherical s;
  s.radial = r;
  s.polar = std::acos(std::clamp(p.z / r, -1.0, 1.0));
  s.azimuth = (p.x == 0.0 && p.y == 0.0) ? 0.0 : wrap_two_pi(std::atan2(p.y, p.x));
  return s;
}

inline Vec3 cartesian_of(const Spherical& s) {
  const double sp = std::sin(s.polar);
  return {s.radial * sp * std::cos(s.azimuth), s.radial * sp * std::sin(s.azimuth),
          s.radial * std::cos(s.polar)};
}

}  // namespace salgraph
