#pragma once

#include <cmath>
#include <complex>

namespace tmx {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm2() const { return x * x + y * y; }
  double norm() const { return std::hypot(x, y); }
  Vec2 operator-() const { return {-x, -y}; }
  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  bool operator==(const Vec2&) const = default;
};

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const { return std::sqrt(x * x + y * y + z * z); }
  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3&) const = default;
};

/// Complex 3-vector. Field amplitudes and complex wave vectors.
struct CVec3 {
  cplx x;
  cplx y;
  cplx z;

  CVec3() = default;
  CVec3(cplx x_, cplx y_, cplx z_) : x(x_), y(y_), z(z_) {}
  explicit CVec3(const Vec3& v) : x(v.x), y(v.y), z(v.z) {}

  CVec3 operator+(const CVec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  CVec3 operator-(const CVec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  CVec3 operator*(cplx s) const { return {x * s, y * s, z * s}; }
  CVec3& operator+=(const CVec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  CVec3 conj() const { return {std::conj(x), std::conj(y), std::conj(z)}; }
  double norm() const { return std::sqrt(std::norm(x) + std::norm(y) + std::norm(z)); }
};

inline CVec3 operator*(cplx s, const CVec3& v) { return v * s; }

/// Bilinear dot product (no conjugation).
inline cplx dot(const CVec3& a, const CVec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline CVec3 cross(const CVec3& a, const CVec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

}  // namespace tmx
