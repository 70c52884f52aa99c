#pragma once

#include <array>
#include <cmath>

namespace bwf {

struct Vec2 {
  double x = 0.0, y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double norm() const { return std::sqrt(x * x + y * y); }
};

inline double cross_z(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
  Vec3 cross(const Vec3& o) const {
    return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
  }
  double norm() const { return std::sqrt(dot(*this)); }
  double inf_norm() const { return std::max({std::fabs(x), std::fabs(y), std::fabs(z)}); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.dot(b); }
inline Vec3 cross(const Vec3& a, const Vec3& b) { return a.cross(b); }

// Row-major 3x3 matrix; enough linear algebra for pointwise frame work.
struct Mat3 {
  std::array<double, 9> m{};  // m[3*r + c]

  double& operator()(int r, int c) { return m[3 * r + c]; }
  double operator()(int r, int c) const { return m[3 * r + c]; }

  static Mat3 identity() {
    Mat3 I;
    I(0, 0) = I(1, 1) = I(2, 2) = 1.0;
    return I;
  }
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 A;
    A(0, 0) = c0.x; A(0, 1) = c1.x; A(0, 2) = c2.x;
    A(1, 0) = c0.y; A(1, 1) = c1.y; A(1, 2) = c2.y;
    A(2, 0) = c0.z; A(2, 1) = c1.z; A(2, 2) = c2.z;
    return A;
  }

  Vec3 col(int c) const { return {m[c], m[3 + c], m[6 + c]}; }
  Vec3 row(int r) const { return {m[3 * r], m[3 * r + 1], m[3 * r + 2]}; }

  Vec3 mul(const Vec3& v) const {
    return {m[0] * v.x + m[1] * v.y + m[2] * v.z,
            m[3] * v.x + m[4] * v.y + m[5] * v.z,
            m[6] * v.x + m[7] * v.y + m[8] * v.z};
  }
  // A^T v, used for the DF^{-T} chain rule without forming transposes.
  Vec3 tmul(const Vec3& v) const {
    return {m[0] * v.x + m[3] * v.y + m[6] * v.z,
            m[1] * v.x + m[4] * v.y + m[7] * v.z,
            m[2] * v.x + m[5] * v.y + m[8] * v.z};
  }

  Mat3 operator+(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] + o.m[i];
    return r;
  }
  Mat3 operator*(double s) const {
    Mat3 r;
    for (int i = 0; i < 9; ++i) r.m[i] = m[i] * s;
    return r;
  }

  double det() const {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
  }

  // Adjugate-based inverse; callers guard det away from zero.
  Mat3 inverse() const {
    const double idet = 1.0 / det();
    Mat3 r;
    r(0, 0) = (m[4] * m[8] - m[5] * m[7]) * idet;
    r(0, 1) = (m[2] * m[7] - m[1] * m[8]) * idet;
    r(0, 2) = (m[1] * m[5] - m[2] * m[4]) * idet;
    r(1, 0) = (m[5] * m[6] - m[3] * m[8]) * idet;
    r(1, 1) = (m[0] * m[8] - m[2] * m[6]) * idet;
    r(1, 2) = (m[2] * m[3] - m[0] * m[5]) * idet;
    r(2, 0) = (m[3] * m[7] - m[4] * m[6]) * idet;
    r(2, 1) = (m[1] * m[6] - m[0] * m[7]) * idet;
    r(2, 2) = (m[0] * m[4] - m[1] * m[3]) * idet;
    return r;
  }
};

// C3 polynomial ramp: 0 for s<=0, 1 for s>=1, r'(0)=r'(1)=r''=r'''=0 at ends.
inline double smoothstep(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double s2 = s * s;
  return s2 * s2 * (35.0 + s * (-84.0 + s * (70.0 - 20.0 * s)));
}

}  // namespace bwf
