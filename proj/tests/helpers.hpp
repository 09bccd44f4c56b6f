#pragma once

#include <cstdint>
#include <random>

#include "quint/interference.hpp"
#include "quint/quaternion.hpp"

namespace testutil {

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline quint::Quaternion random_quaternion(std::mt19937_64& rng,
                                           double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  return {gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
}

inline quint::UnitQuaternion random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    const quint::Quaternion q{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
    if (quint::norm(q) > 1e-6) return quint::UnitQuaternion(q);
  }
}

inline quint::PureAxis random_axis(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    const double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    if (x * x + y * y + z * z > 1e-12) return quint::make_axis(x, y, z);
  }
}

inline quint::Amplitude random_amplitude(std::mt19937_64& rng, double lo = 0.1,
                                         double hi = 10.0) {
  return {uniform(rng, lo, hi), random_unit(rng)};
}

// Product via the 16-term basis expansion table, independent of the
// component formula under test. e0=1, e1=i, e2=j, e3=k.
inline quint::Quaternion table_mul(const quint::Quaternion& p,
                                   const quint::Quaternion& q) {
  static constexpr int idx[4][4] = {
      {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr double sgn[4][4] = {{1.0, 1.0, 1.0, 1.0},
                                       {1.0, -1.0, 1.0, -1.0},
                                       {1.0, -1.0, -1.0, 1.0},
                                       {1.0, 1.0, -1.0, -1.0}};
  const double pc[4] = {p.w, p.x, p.y, p.z};
  const double qc[4] = {q.w, q.x, q.y, q.z};
  double out[4] = {0.0, 0.0, 0.0, 0.0};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out[idx[a][b]] += sgn[a][b] * pc[a] * qc[b];
  return {out[0], out[1], out[2], out[3]};
}

}  // namespace testutil
