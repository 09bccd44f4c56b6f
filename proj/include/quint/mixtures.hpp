#pragma once

#include <cmath>
#include <span>

#include "quint/errors.hpp"
#include "quint/interference.hpp"

// Mixed beams (unpolarized or partially polarized) only expose averages of
// the pure-state cross sections. The averaged interference cosine
//
//   <gamma> = (<sigma12> - <sigma1> - <sigma2>) / 2 sqrt(<sigma1><sigma2>)
//           = <sqrt(sigma1 sigma2) cos(dphi)> / sqrt(<sigma1><sigma2>)
//
// still satisfies |<gamma>| <= 1 (Cauchy-Schwarz), but it is not the cosine
// of any single phase difference, so mixture-averaged inputs must not feed
// the real/complex F classification unless the cross sections are known to
// be spin independent. The harness enforces that rule.

namespace quint {

// One discrete spin/polarization component of a two-scatterer ensemble.
struct EnsembleComponent {
  double weight = 1.0;  // in [0,1]; ensemble weights sum to 1
  Amplitude amp1;
  Amplitude amp2;
};

inline double averaged_gamma(std::span<const EnsembleComponent> ensemble) {
  if (ensemble.empty())
    throw ValueError("averaged_gamma needs a nonempty ensemble");
  double wsum = 0.0;
  for (const auto& c : ensemble) {
    if (!std::isfinite(c.weight) || c.weight < 0.0 || c.weight > 1.0)
      throw ValueError("ensemble weight outside [0, 1]");
    wsum += c.weight;
  }
  if (std::fabs(wsum - 1.0) > 1e-12)
    throw ValueError("ensemble weights must sum to 1 within 1e-12");

  double s1 = 0.0, s2 = 0.0, s12 = 0.0;
  for (const auto& c : ensemble) {
    s1 += c.weight * cross_section(c.amp1);
    s2 += c.weight * cross_section(c.amp2);
    s12 += c.weight * pair_cross_section(c.amp1, c.amp2);
  }
  if (!(s1 > 0.0) || !(s2 > 0.0))
    throw DegenerateScatterer(
        "averaged single cross section is not positive");
  return (s12 - s1 - s2) / (2.0 * std::sqrt(s1 * s2));
}

}  // namespace quint
