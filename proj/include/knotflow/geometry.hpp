#pragma once

#include <cmath>
#include <numbers>

namespace knotflow {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduce an angle to [0, 2π).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// Reduce an angle difference to (-π, π].
inline double wrap_delta(double d) {
  double r = std::remainder(d, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

struct Vec3 {
  double vx = 0.0, vy = 0.0, vz = 0.0;

  double operator[](int i) const { return i == 0 ? vx : (i == 1 ? vy : vz); }
  double& operator[](int i) { return i == 0 ? vx : (i == 1 ? vy : vz); }

  friend Vec3 operator+(Vec3 a, const Vec3& b) { return {a.vx + b.vx, a.vy + b.vy, a.vz + b.vz}; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) { return {a.vx - b.vx, a.vy - b.vy, a.vz - b.vz}; }
  friend Vec3 operator*(double s, const Vec3& a) { return {s * a.vx, s * a.vy, s * a.vz}; }
  friend double dot(const Vec3& a, const Vec3& b) { return a.vx * b.vx + a.vy * b.vy + a.vz * b.vz; }
  friend Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.vy * b.vz - a.vz * b.vy, a.vz * b.vx - a.vx * b.vz, a.vx * b.vy - a.vy * b.vx};
  }
  friend double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
  friend double sup_norm(const Vec3& a) {
    return std::fmax(std::fabs(a.vx), std::fmax(std::fabs(a.vy), std::fabs(a.vz)));
  }
};

/// A point of the flat three-torus; coordinates are kept in [0, 2π).
class Point3 {
 public:
  Point3() = default;
  Point3(double x, double y, double z) : x_(wrap_angle(x)), y_(wrap_angle(y)), z_(wrap_angle(z)) {}

  double x() const { return x_; }
  double y() const { return y_; }
  double z() const { return z_; }
  double operator[](int i) const { return i == 0 ? x_ : (i == 1 ? y_ : z_); }

  /// Componentwise shortest signed displacement from `other` to this point.
  Vec3 minus(const Point3& other) const {
    return {wrap_delta(x_ - other.x_), wrap_delta(y_ - other.y_), wrap_delta(z_ - other.z_)};
  }
  /// Geodesic distance on the flat torus.
  double distance(const Point3& other) const { return norm(minus(other)); }

 private:
  double x_ = 0.0, y_ = 0.0, z_ = 0.0;
};

}  // namespace knotflow
