#pragma once

#include <cmath>

#include "quint/errors.hpp"

namespace quint {

// Hamilton quaternion q = w + x*i + y*j + z*k with
//
//   i^2 = j^2 = k^2 = -1,   ij = -ji = k   (right-handed, cyclic).
//
// Components are stored scalar-first; all angles are radians.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline constexpr Quaternion quat_one{1.0, 0.0, 0.0, 0.0};
inline constexpr Quaternion quat_i{0.0, 1.0, 0.0, 0.0};
inline constexpr Quaternion quat_j{0.0, 0.0, 1.0, 0.0};
inline constexpr Quaternion quat_k{0.0, 0.0, 0.0, 1.0};

constexpr Quaternion operator+(const Quaternion& p, const Quaternion& q) {
  return {p.w + q.w, p.x + q.x, p.y + q.y, p.z + q.z};
}

constexpr Quaternion operator-(const Quaternion& p, const Quaternion& q) {
  return {p.w - q.w, p.x - q.x, p.y - q.y, p.z - q.z};
}

constexpr Quaternion operator-(const Quaternion& q) {
  return {-q.w, -q.x, -q.y, -q.z};
}

constexpr Quaternion operator*(double s, const Quaternion& q) {
  return {s * q.w, s * q.x, s * q.y, s * q.z};
}

constexpr Quaternion operator*(const Quaternion& q, double s) { return s * q; }

// Hamilton product.
constexpr Quaternion operator*(const Quaternion& p, const Quaternion& q) {
  return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
          p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
          p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
          p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

constexpr Quaternion mul(const Quaternion& p, const Quaternion& q) {
  return p * q;
}

constexpr Quaternion conj(const Quaternion& q) {
  return {q.w, -q.x, -q.y, -q.z};
}

constexpr double norm_sq(const Quaternion& q) {
  return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z;
}

inline double norm(const Quaternion& q) { return std::sqrt(norm_sq(q)); }

// Euclidean inner product of the (w,x,y,z) 4-vectors; equals the scalar
// part of p * conj(q). For unit p, q this is the cosine of their 4-D angle.
constexpr double dot4(const Quaternion& p, const Quaternion& q) {
  return p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
}

inline bool all_finite(const Quaternion& q) {
  return std::isfinite(q.w) && std::isfinite(q.x) && std::isfinite(q.y) &&
         std::isfinite(q.z);
}

// Unit vector in span{i,j,k}: the imaginary direction an amplitude or a
// slab phase rotates about. axis = (1,0,0) recovers ordinary complex i.
struct PureAxis {
  double x = 1.0;
  double y = 0.0;
  double z = 0.0;
};

inline constexpr PureAxis axis_i{1.0, 0.0, 0.0};
inline constexpr PureAxis axis_j{0.0, 1.0, 0.0};
inline constexpr PureAxis axis_k{0.0, 0.0, 1.0};

// Normalizing factory; rejects vectors too short to carry a direction.
inline PureAxis make_axis(double x, double y, double z) {
  const double m = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(m) || m < 1e-9)
    throw ValueError("axis vector has no usable direction");
  return {x / m, y / m, z / m};
}

constexpr Quaternion as_quaternion(const PureAxis& a) {
  return {0.0, a.x, a.y, a.z};
}

// Quaternion of unit norm; the hypercomplex generalization of exp(i*phi).
// Construction normalizes, so downstream arithmetic stays branch-free.
class UnitQuaternion {
public:
  UnitQuaternion() : q_(quat_one) {}

  explicit UnitQuaternion(const Quaternion& q) : q_(q) {
    const double n = quint::norm(q);
    if (!std::isfinite(n) || n < 1e-9)
      throw ValueError("cannot normalize a (near-)zero quaternion");
    q_ = (1.0 / n) * q;
  }

  // Trusted constructor for values already unit by construction.
  static UnitQuaternion from_unit(const Quaternion& q) {
    UnitQuaternion u;
    u.q_ = q;
    return u;
  }

  static UnitQuaternion identity() { return UnitQuaternion(); }

  const Quaternion& q() const { return q_; }
  operator const Quaternion&() const { return q_; }

private:
  Quaternion q_;
};

inline UnitQuaternion operator*(const UnitQuaternion& p,
                                const UnitQuaternion& q) {
  return UnitQuaternion::from_unit(p.q() * q.q());
}

inline double dot4(const UnitQuaternion& p, const UnitQuaternion& q) {
  return dot4(p.q(), q.q());
}

// exp(angle * axis) = cos(angle) + sin(angle) * (axis.x i + axis.y j + axis.z k).
// Unimodular for a unit axis; reduces to exp(i*angle) for axis = i.
inline UnitQuaternion exp_pure(const PureAxis& axis, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return UnitQuaternion::from_unit({c, s * axis.x, s * axis.y, s * axis.z});
}

// Canonical axis-angle split: q = |q| * (cos(angle) + axis * sin(angle)).
// The axis is flipped so its largest-magnitude component is positive,
// which pins the sign of the angle; angle lies in (-pi, pi].
struct AxisAngle {
  PureAxis axis;
  double angle = 0.0;
};

inline AxisAngle axis_angle(const Quaternion& q) {
  const double n = norm(q);
  if (!(n > 0.0) || !std::isfinite(n))
    throw ValueError("axis_angle of a zero or non-finite quaternion");
  const double m = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  if (m < 1e-15 * n) return {axis_i, q.w >= 0.0 ? 0.0 : 3.141592653589793};
  PureAxis axis{q.x / m, q.y / m, q.z / m};
  double angle = std::atan2(m, q.w);
  const double ax = std::fabs(axis.x), ay = std::fabs(axis.y),
               az = std::fabs(axis.z);
  const double lead =
      (ax >= ay && ax >= az) ? axis.x : (ay >= az ? axis.y : axis.z);
  if (lead < 0.0) {
    axis = {-axis.x, -axis.y, -axis.z};
    angle = -angle;
  }
  return {axis, angle};
}

}  // namespace quint
