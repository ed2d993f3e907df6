#ifndef TWRI_GEOMETRY_HPP_
#define TWRI_GEOMETRY_HPP_

#include <cmath>
#include <complex>

namespace twri {

using cd = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;      // m/s
inline constexpr double kMu0 = 4.0e-7 * 3.14159265358979323846;
inline constexpr double kEps0 = 1.0 / (kMu0 * kSpeedOfLight * kSpeedOfLight);
inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

/// In-plane point of the 2D simulation space (x: cross-range, z: range).
struct Vec2 {
  double x = 0.0;
  double z = 0.0;

  double norm() const { return std::hypot(x, z); }
};

inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.z - b.z}; }
inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.z + b.z}; }
inline double norm(Vec2 a) { return a.norm(); }

/// Full 3D point (y: height above array center).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double norm(Vec3 a) { return a.norm(); }
inline Vec2 project2d(Vec3 a) { return {a.x, a.z}; }

}  // namespace twri

#endif  // TWRI_GEOMETRY_HPP_
