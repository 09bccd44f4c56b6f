#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "quint/errors.hpp"
#include "quint/gauss_hermite.hpp"
#include "quint/interference.hpp"
#include "quint/quaternion.hpp"

// Forward-scattering optics of slow neutrons in S-wave:
//
//   f       = [eta sin(2 delta) + i (1 - eta cos(2 delta))] / 2k
//   sigma_s = (4 pi / k^2) [eta sin^2(delta) + ((1 - eta)/2)^2]
//   sigma_a = pi (1 - eta^2) / k^2
//
// with k the wave number, delta the S-wave phase shift and eta the
// elasticity parameter. Passage through a plate of thickness L with n
// scatterers per unit volume multiplies the transmitted amplitude by
// T exp(i Delta), where
//
//   Delta = [eta sin(2 delta) + i (1 - eta cos(2 delta))] pi n L / k^2;
//
// Re Delta is the change in optical path, Im Delta the attenuation. The
// hypercomplex generalization keeps Delta's magnitude but lets each
// material rotate about its own imaginary axis, so consecutive slabs of
// different materials need not commute.
//
// Internal units: cross sections in barn, k in 1/sqrt(barn), densities in
// barn^(-3/2) and thicknesses in sqrt(barn), which makes pi n L / k^2
// dimensionless. The CLI converts from 1/angstrom and cm at the boundary.

namespace quint {

struct NuclearChannel {
  double k = 0.0;      // wave number, 1/sqrt(barn)
  double delta = 0.0;  // S-wave phase shift, radians
  double eta = 1.0;    // elasticity, in [0, 1]
};

inline void validate(const NuclearChannel& ch) {
  if (!(ch.k > 0.0) || !std::isfinite(ch.k))
    throw ValueError("wave number must be positive");
  if (!std::isfinite(ch.delta))
    throw ValueError("phase shift must be finite");
  if (!(ch.eta >= 0.0) || !(ch.eta <= 1.0))
    throw ValueError("elasticity parameter must lie in [0, 1]");
}

// A neutron-optics plate. axis = i recovers ordinary complex optics;
// T absorbs surface reflections (multiple reflections between plates are
// not modeled).
struct SlabSpec {
  NuclearChannel channel;
  double number_density = 0.0;  // barn^(-3/2)
  double thickness = 0.0;       // sqrt(barn)
  PureAxis axis = axis_i;
  double transmission = 1.0;    // in (0, 1]
};

// Macroscopic phase shift of one slab, split into its real optical part
// and its nonnegative attenuation, about the material's axis.
struct SlabPhase {
  double optical = 0.0;      // radians
  double attenuation = 0.0;  // dimensionless, >= 0 for eta <= 1
  PureAxis axis = axis_i;
};

// (SlabPhase, T) as one beamline element.
struct SlabLayer {
  SlabPhase phase;
  double transmission = 1.0;
};

// Forward amplitude as magnitude times a unimodular direction in
// span{1, axis}. For delta = eta - 1 = 0 the amplitude vanishes and the
// direction defaults to the identity.
inline Amplitude forward_amplitude(const NuclearChannel& ch,
                                   const PureAxis& axis = axis_i) {
  validate(ch);
  const double re = ch.eta * std::sin(2.0 * ch.delta);
  const double im = 1.0 - ch.eta * std::cos(2.0 * ch.delta);
  const double scale = 1.0 / (2.0 * ch.k);
  const double mag = std::hypot(re, im) * scale;
  if (mag == 0.0) return Amplitude{0.0, UnitQuaternion::identity()};
  const Quaternion dir{re, im * axis.x, im * axis.y, im * axis.z};
  return Amplitude{mag, UnitQuaternion(dir)};
}

inline double scattering_xsec(const NuclearChannel& ch) {
  validate(ch);
  const double s = std::sin(ch.delta);
  const double half = (1.0 - ch.eta) / 2.0;
  return (4.0 * 3.141592653589793 / (ch.k * ch.k)) *
         (ch.eta * s * s + half * half);
}

inline double absorption_xsec(const NuclearChannel& ch) {
  validate(ch);
  return 3.141592653589793 * (1.0 - ch.eta * ch.eta) / (ch.k * ch.k);
}

// eta = sqrt(1 - sigma_a k^2 / pi); sigma_a beyond the unitarity bound
// pi/k^2 has no elasticity solution.
inline double eta_from_absorption(double sigma_a, double k) {
  if (!(k > 0.0)) throw ValueError("wave number must be positive");
  if (!(sigma_a >= 0.0)) throw ValueError("absorption cross section < 0");
  const double arg = 1.0 - sigma_a * k * k / 3.141592653589793;
  if (arg < 0.0)
    throw UnphysicalAbsorption("sigma_a exceeds the unitarity bound pi/k^2");
  return std::sqrt(arg);
}

// delta = asin(sqrt((sigma_s k^2/4pi - ((1-eta)/2)^2) / eta)), the branch
// in [0, pi/2].
inline double delta_from_scattering(double sigma_s, double k,
                                    double eta = 1.0) {
  if (!(k > 0.0)) throw ValueError("wave number must be positive");
  if (!(sigma_s >= 0.0)) throw ValueError("scattering cross section < 0");
  if (!(eta > 0.0) || !(eta <= 1.0))
    throw ValueError("elasticity must lie in (0, 1] to invert sigma_s");
  const double half = (1.0 - eta) / 2.0;
  const double s2 =
      (sigma_s * k * k / (4.0 * 3.141592653589793) - half * half) / eta;
  if (s2 < 0.0)
    throw ValueError("sigma_s below the absorption floor for this eta");
  if (s2 > 1.0)
    throw ValueError("sigma_s exceeds the S-wave unitarity bound");
  return std::asin(std::sqrt(s2));
}

inline SlabPhase slab_phase(const SlabSpec& slab) {
  validate(slab.channel);
  if (!(slab.number_density > 0.0) || !(slab.thickness > 0.0))
    throw ValueError("slab needs positive density and thickness");
  const double k = slab.channel.k;
  const double coupling = 3.141592653589793 * slab.number_density *
                          slab.thickness / (k * k);
  SlabPhase p;
  p.optical = slab.channel.eta * std::sin(2.0 * slab.channel.delta) * coupling;
  p.attenuation =
      (1.0 - slab.channel.eta * std::cos(2.0 * slab.channel.delta)) * coupling;
  p.axis = slab.axis;
  return p;
}

// The amplitude map of one slab: T e^(-attenuation) exp(axis * optical).
// With axis = i this is exactly T e^{i Delta}.
inline Quaternion slab_operator(const SlabPhase& p, double transmission) {
  if (!(transmission > 0.0) || !(transmission <= 1.0))
    throw ValueError("transmission coefficient must lie in (0, 1]");
  if (p.attenuation < 0.0) throw ValueError("attenuation must be >= 0");
  const double scale = transmission * std::exp(-p.attenuation);
  return scale * exp_pure(p.axis, p.optical).q();
}

inline Quaternion slab_operator(const SlabLayer& layer) {
  return slab_operator(layer.phase, layer.transmission);
}

// Product of slab operators in beam-traversal order: the first slab
// traversed is the rightmost factor (operators act on the state from the
// left). Aligned axes commute and reproduce a single slab with summed
// phases; different axes generally do not.
inline Quaternion compose_slabs(std::span<const SlabLayer> ordered) {
  Quaternion acc = quat_one;
  for (const auto& layer : ordered) acc = slab_operator(layer) * acc;
  return acc;
}

// 4-D angle between the two traversal orders of a slab pair, after
// normalizing away magnitudes. Zero means no observable order effect;
// the maximum pi is reached by e.g. quarter-turns about i and j.
inline double order_discrepancy(const SlabLayer& a, const SlabLayer& b) {
  const std::array<SlabLayer, 2> ab{a, b};
  const std::array<SlabLayer, 2> ba{b, a};
  const Quaternion qab = compose_slabs(ab);
  const Quaternion qba = compose_slabs(ba);
  const double nab = norm(qab), nba = norm(qba);
  if (nab < 1e-300 || nba < 1e-300)
    throw DegenerateOperator(
        "slab composition underflowed to zero (total absorption)");
  const Quaternion u{qab.w / nab, qab.x / nab, qab.y / nab, qab.z / nab};
  const Quaternion v{qba.w / nba, qba.x / nba, qba.y / nba, qba.z / nba};
  const Quaternion d{u.w - v.w, u.x - v.x, u.y - v.y, u.z - v.z};
  const Quaternion s{u.w + v.w, u.x + v.x, u.y + v.y, u.z + v.z};
  // atan2 form of acos(dot4(u, v)): stable at both ends of [0, pi]
  return 2.0 * std::atan2(norm(d), norm(s));
}

// Gaussian spectrum in k: mean wave number, relative spread s, and the
// Gauss-Hermite node count used to discretize it.
struct SpectralModel {
  double mean_k = 0.0;     // 1/sqrt(barn); only the ratio k0/k enters
  double rel_spread = 0.0; // s >= 0; s = 0 is the monochromatic limit
  int nodes = 129;         // >= 64
};

struct FringeResult {
  double visibility = 0.0;  // in [0, 1]
  double phase = 0.0;       // radians, canonical axis-angle convention
};

// Interference contrast between the slab path and an empty reference path
// for a polychromatic beam. Per spectral component the slab phases scale
// as Delta(k) = Delta(k0) (k0/k)^2 (attenuation likewise); the fringe term
// is the spectrum-weighted mean slab operator, normalized by the mean
// transmitted magnitude so that a monochromatic beam has visibility 1:
//
//   V e^{i Phi} = <Q(k)> / <|Q(k)|>,   Q = composed slab operator.
//
// Large phases decohere a narrow-band beam; a second slab of nearly
// opposite phase restores the contrast.
inline FringeResult fringe_visibility(std::span<const SlabLayer> slabs,
                                      const SpectralModel& spectrum) {
  if (slabs.empty()) throw ValueError("fringe_visibility needs >= 1 slab");
  if (!(spectrum.mean_k > 0.0))
    throw ValueError("mean wave number must be positive");
  if (!(spectrum.rel_spread >= 0.0))
    throw ValueError("relative spread must be >= 0");

  const auto compose_scaled = [&slabs](double scale) {
    Quaternion acc = quat_one;
    for (const auto& layer : slabs) {
      SlabPhase p = layer.phase;
      p.optical *= scale;
      p.attenuation *= scale;
      acc = slab_operator(p, layer.transmission) * acc;
    }
    return acc;
  };

  if (spectrum.rel_spread == 0.0) {
    const Quaternion q = compose_scaled(1.0);
    const double n = norm(q);
    if (n < 1e-300)
      throw DegenerateOperator("slab composition underflowed to zero");
    return {1.0, axis_angle(q).angle};
  }

  if (spectrum.nodes < 64)
    throw ValueError("spectral quadrature needs >= 64 nodes");
  const GaussHermiteRule rule = gauss_hermite(spectrum.nodes);

  // k = k0 (1 + sqrt(2) s t) under t ~ exp(-t^2); nodes that would push k
  // nonpositive carry weights ~ exp(-1/(2 s^2)) and are dropped.
  const double s = spectrum.rel_spread;
  Quaternion mean_q{};
  double mean_mag = 0.0;
  for (int idx = 0; idx < spectrum.nodes; ++idx) {
    const double ratio = 1.0 + 1.4142135623730951 * s * rule.nodes[idx];
    if (ratio <= 1e-6) continue;
    const double scale = 1.0 / (ratio * ratio);  // (k0/k)^2
    const Quaternion q = compose_scaled(scale);
    mean_q = mean_q + rule.weights[idx] * q;
    mean_mag += rule.weights[idx] * norm(q);
  }
  if (!(mean_mag > 0.0))
    throw DegenerateOperator("spectral mean of slab operator vanished");

  FringeResult out;
  out.visibility = norm(mean_q) / mean_mag;
  out.phase = norm(mean_q) > 0.0 ? axis_angle(mean_q).angle : 0.0;
  return out;
}

}  // namespace quint
