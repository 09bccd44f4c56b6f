#pragma once

#include <cmath>
#include <vector>

#include "quint/errors.hpp"

namespace quint {

// Gauss-Hermite rule: integral of exp(-t^2) f(t) dt ~ sum w_i f(t_i).
// Nodes are roots of H_n found by Newton iteration on the orthonormal
// recurrence (stable for n well into the thousands); weights follow from
// the derivative of the orthonormal polynomial. Nodes come out sorted
// ascending.
struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw ValueError("Gauss-Hermite rule needs n >= 1");
  GaussHermiteRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);

  constexpr double pi_quarter = 0.7511255444649425;  // pi^(-1/4)

  // Orthonormal Hermite value and derivative at x.
  const auto eval = [n](double x, double& p, double& dp) {
    double pm1 = pi_quarter, pm2 = 0.0;
    for (int k = 1; k <= n; ++k) {
      const double pk =
          x * std::sqrt(2.0 / k) * pm1 - std::sqrt((k - 1.0) / k) * pm2;
      pm2 = pm1;
      pm1 = pk;
    }
    p = pm1;
    dp = std::sqrt(2.0 * n) * pm2;
  };

  const int half = (n + 1) / 2;
  double z = 0.0, z_prev1 = 0.0, z_prev2 = 0.0;
  for (int i = 0; i < half; ++i) {
    // Classical initial guesses, largest root first.
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) -
          1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * z_prev2;
    else if (i == 3)
      z = 1.91 * z - 0.91 * z_prev2;
    else
      z = 2.0 * z - z_prev2;

    double p = 0.0, dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      eval(z, p, dp);
      const double dz = p / dp;
      z -= dz;
      if (std::fabs(dz) <= 1e-15 * (1.0 + std::fabs(z))) break;
    }
    eval(z, p, dp);
    if (!std::isfinite(z) || !std::isfinite(dp) || dp == 0.0)
      throw NumericalError("Gauss-Hermite node iteration failed");

    const double w = 2.0 / (dp * dp);
    rule.nodes[n - 1 - i] = z;
    rule.weights[n - 1 - i] = w;
    rule.nodes[i] = -z;
    rule.weights[i] = w;

    z_prev2 = z_prev1;
    z_prev1 = z;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;  // exact symmetry for the center
  return rule;
}

}  // namespace quint
