#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>

#include "quint/errors.hpp"
#include "quint/quaternion.hpp"

// Observable algebra of coherent scattering by up to three scatterers.
//
// Each scatterer n is described by an amplitude a_n * u_n (a_n >= 0 in
// sqrt(barn), u_n unimodular). Cross sections add amplitudes, not
// intensities:
//
//   sigma_n  = a_n^2
//   sigma_nm = |a_n u_n + a_m u_m|^2
//            = sigma_n + sigma_m + 2 a_n a_m dot4(u_n, u_m)
//
// The normalized interference terms
//
//   alpha = (sigma_23 - sigma_2 - sigma_3) / 2 sqrt(sigma_2 sigma_3)
//   beta  = (sigma_31 - sigma_3 - sigma_1) / 2 sqrt(sigma_3 sigma_1)
//   gamma = (sigma_12 - sigma_1 - sigma_2) / 2 sqrt(sigma_1 sigma_2)
//
// are phase-difference cosines when the directions are complex phases and
// 4-D direction cosines in general. The discriminator
//
//   F = alpha^2 + beta^2 + gamma^2 - 2 alpha beta gamma = 1 - det(Gram)
//
// equals 1 whenever the three directions are coplanar with 1 (complex
// theory), lies in [0,1] for any genuine unit-quaternion triple, and
// exceeds 1 only if no superposition of amplitudes reproduces the data.
//
// Pair bookkeeping is fixed as gamma <-> (1,2), alpha <-> (2,3),
// beta <-> (3,1); swapping any of these silently breaks F = 1.

namespace quint {

// Scattering amplitude <chi, psi_n> = magnitude * direction.
// magnitude is a length (sqrt(barn)) so its square is a cross section;
// a complex amplitude a*exp(i*phi) is the special case axis = i.
struct Amplitude {
  double magnitude = 0.0;           // sqrt(barn)
  UnitQuaternion direction{};       // unimodular

  Amplitude() = default;
  Amplitude(double a, const UnitQuaternion& u) : magnitude(a), direction(u) {
    if (!std::isfinite(a) || a < 0.0)
      throw ValueError("amplitude magnitude must be finite and >= 0");
  }

  Quaternion value() const { return magnitude * direction.q(); }
};

// a * exp(i * phi): the ordinary complex amplitude.
inline Amplitude complex_amplitude(double a, double phi) {
  return {a, exp_pure(axis_i, phi)};
}

// The six (optionally seven) observable coherent cross sections of three
// scatterers, in barn, with optional per-entry standard errors.
struct CrossSectionSet {
  double sigma1 = 0.0, sigma2 = 0.0, sigma3 = 0.0;
  double sigma12 = 0.0, sigma23 = 0.0, sigma31 = 0.0;
  std::optional<double> sigma123;

  std::optional<double> err1, err2, err3;
  std::optional<double> err12, err23, err31;
  std::optional<double> err123;
};

// (alpha, beta, gamma) with optional propagated standard errors.
// Values outside [-1,1] are legal data -- they are the
// superposition-violation signal -- and are judged by classify().
struct CosineTriple {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  std::optional<double> alpha_err, beta_err, gamma_err;
};

enum class TheoryClass {
  RealAdmissible,
  ComplexAdmissible,
  QuaternionAdmissible,
  SuperpositionViolation,
};

inline const char* to_string(TheoryClass c) {
  switch (c) {
    case TheoryClass::RealAdmissible: return "REAL_ADMISSIBLE";
    case TheoryClass::ComplexAdmissible: return "COMPLEX_ADMISSIBLE";
    case TheoryClass::QuaternionAdmissible: return "QUATERNION_ADMISSIBLE";
    case TheoryClass::SuperpositionViolation: return "SUPERPOSITION_VIOLATION";
  }
  return "?";
}

struct TheoryVerdict {
  double f_value = 0.0;
  std::optional<double> f_error;
  TheoryClass cls = TheoryClass::ComplexAdmissible;
  double tolerance = 0.0;
};

// sigma_n = a_n^2.
inline double cross_section(const Amplitude& amp) {
  return amp.magnitude * amp.magnitude;
}

// sigma_nm = |a_n u_n + a_m u_m|^2, valid when double scattering is
// negligible and the relative scatterer positions are held fixed.
inline double pair_cross_section(const Amplitude& a, const Amplitude& b) {
  return cross_section(a) + cross_section(b) +
         2.0 * a.magnitude * b.magnitude * dot4(a.direction, b.direction);
}

// |sum of amplitudes|^2 for any number of coherent scatterers.
inline double combined_cross_section(std::span<const Amplitude> amps) {
  Quaternion sum{};
  for (const auto& a : amps) sum = sum + a.value();
  return norm_sq(sum);
}

// (sigma12 - sigma1 - sigma2) / (2 sqrt(sigma1 sigma2)).
inline double gamma_from_sigmas(double sigma1, double sigma2, double sigma12) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
    throw DegenerateScatterer(
        "interference cosine undefined: a single-scatterer cross section is "
        "not positive");
  return (sigma12 - sigma1 - sigma2) / (2.0 * std::sqrt(sigma1 * sigma2));
}

namespace detail {

// First-order variance of gamma(s1, s2, s12) for independent channel errors.
inline double gamma_variance(double s1, double s2, double s12, double e1,
                             double e2, double e12) {
  const double d = 2.0 * std::sqrt(s1 * s2);
  const double g = (s12 - s1 - s2) / d;
  const double d_s12 = 1.0 / d;
  const double d_s1 = -1.0 / d - g / (2.0 * s1);
  const double d_s2 = -1.0 / d - g / (2.0 * s2);
  return d_s12 * d_s12 * e12 * e12 + d_s1 * d_s1 * e1 * e1 +
         d_s2 * d_s2 * e2 * e2;
}

}  // namespace detail

// All three cosines from a measured set; propagates standard errors to a
// cosine whenever all three of its input channels carry one.
inline CosineTriple cosine_triple(const CrossSectionSet& s) {
  CosineTriple t;
  t.alpha = gamma_from_sigmas(s.sigma2, s.sigma3, s.sigma23);
  t.beta = gamma_from_sigmas(s.sigma3, s.sigma1, s.sigma31);
  t.gamma = gamma_from_sigmas(s.sigma1, s.sigma2, s.sigma12);
  if (s.err2 && s.err3 && s.err23)
    t.alpha_err = std::sqrt(detail::gamma_variance(s.sigma2, s.sigma3,
                                                   s.sigma23, *s.err2, *s.err3,
                                                   *s.err23));
  if (s.err3 && s.err1 && s.err31)
    t.beta_err = std::sqrt(detail::gamma_variance(s.sigma3, s.sigma1, s.sigma31,
                                                  *s.err3, *s.err1, *s.err31));
  if (s.err1 && s.err2 && s.err12)
    t.gamma_err = std::sqrt(detail::gamma_variance(s.sigma1, s.sigma2,
                                                   s.sigma12, *s.err1, *s.err2,
                                                   *s.err12));
  return t;
}

struct FStatistic {
  double value = 0.0;
  std::optional<double> error;
};

// F = alpha^2 + beta^2 + gamma^2 - 2 alpha beta gamma, with first-order
// error via the gradient (2a-2bc, 2b-2ac, 2c-2ab) when all cosine errors
// are present. The gradient degenerates at cosines of exactly +-1; a
// Monte-Carlo run is the fallback there.
inline FStatistic f_statistic(const CosineTriple& t) {
  FStatistic f;
  f.value = t.alpha * t.alpha + t.beta * t.beta + t.gamma * t.gamma -
            2.0 * t.alpha * t.beta * t.gamma;
  if (t.alpha_err && t.beta_err && t.gamma_err) {
    const double ga = 2.0 * t.alpha - 2.0 * t.beta * t.gamma;
    const double gb = 2.0 * t.beta - 2.0 * t.alpha * t.gamma;
    const double gc = 2.0 * t.gamma - 2.0 * t.alpha * t.beta;
    f.error = std::sqrt(ga * ga * *t.alpha_err * *t.alpha_err +
                        gb * gb * *t.beta_err * *t.beta_err +
                        gc * gc * *t.gamma_err * *t.gamma_err);
  }
  return f;
}

// Classification at tolerance tol (defaults to max(3*f_error, 1e-9)):
//
//   any |cosine| > 1+tol, F > 1+tol or F < -tol  ->  SUPERPOSITION_VIOLATION
//   |alpha|, |beta|, |gamma| all within tol of 1 ->  REAL_ADMISSIBLE
//   |F - 1| <= tol                               ->  COMPLEX_ADMISSIBLE
//   otherwise (-tol <= F < 1-tol)                ->  QUATERNION_ADMISSIBLE
//
// The violation-by-cosine test runs first: a pair with |cosine| > 1 already
// contradicts every superposition of amplitudes, whatever F happens to be.
inline TheoryVerdict classify(const CosineTriple& t,
                              std::optional<double> tol = std::nullopt) {
  const FStatistic f = f_statistic(t);
  double eps = tol ? *tol
                   : std::max(3.0 * f.error.value_or(0.0), 1e-9);
  if (!(eps > 0.0)) throw ValueError("classification tolerance must be > 0");
  TheoryVerdict v;
  v.f_value = f.value;
  v.f_error = f.error;
  v.tolerance = eps;
  const double ma = std::fabs(t.alpha), mb = std::fabs(t.beta),
               mc = std::fabs(t.gamma);
  const double mmax = std::max({ma, mb, mc});
  if (mmax > 1.0 + eps || f.value > 1.0 + eps || f.value < -eps)
    v.cls = TheoryClass::SuperpositionViolation;
  else if (std::fabs(ma - 1.0) <= eps && std::fabs(mb - 1.0) <= eps &&
           std::fabs(mc - 1.0) <= eps)
    v.cls = TheoryClass::RealAdmissible;
  else if (std::fabs(f.value - 1.0) <= eps)
    v.cls = TheoryClass::ComplexAdmissible;
  else
    v.cls = TheoryClass::QuaternionAdmissible;
  return v;
}

struct TripleCrossSection {
  double predicted = 0.0;            // barn
  std::optional<double> residual;    // sigma123 - predicted, when measured
};

// sigma123 = sigma12 + sigma23 + sigma31 - sigma1 - sigma2 - sigma3,
// an identity for every flavor of quantum theory: the triple measurement
// adds no information but makes a handy consistency check.
inline TripleCrossSection triple_cross_section(const CrossSectionSet& s) {
  TripleCrossSection r;
  r.predicted = s.sigma12 + s.sigma23 + s.sigma31 - s.sigma1 - s.sigma2 -
                s.sigma3;
  if (s.sigma123) r.residual = *s.sigma123 - r.predicted;
  return r;
}

namespace detail {

// Gram matrix of three hypothetical unit directions:
//   [ 1      gamma  beta ]
//   [ gamma  1      alpha]
//   [ beta   alpha  1    ]
struct Gram3 {
  double alpha, beta, gamma;

  double det() const {
    return 1.0 + 2.0 * alpha * beta * gamma - alpha * alpha - beta * beta -
           gamma * gamma;
  }

  // Smallest eigenvalue by the trigonometric closed form for symmetric 3x3.
  double min_eigenvalue() const {
    const double p1 = alpha * alpha + beta * beta + gamma * gamma;
    if (p1 == 0.0) return 1.0;
    const double p = std::sqrt(p1 / 3.0);
    // B = (G - I)/p has zero diagonal and off-diagonals scaled by 1/p.
    const double a = alpha / p, b = beta / p, c = gamma / p;
    double r = a * b * c;  // det(B)/... : det of zero-diagonal sym = 2abc
    r = std::clamp(r, -1.0, 1.0);
    const double phi = std::acos(r) / 3.0;
    // Eigenvalues of B are 2cos(phi + 2k pi/3); min at k = 1.
    return 1.0 + 2.0 * p * std::cos(phi + 2.0943951023931953);
  }

  bool is_psd(double tol) const { return min_eigenvalue() >= -tol; }
};

}  // namespace detail

// Constructive converse of the F criterion: three unimodular directions
// whose pairwise 4-D cosines are (alpha, beta, gamma). The Gram matrix of
// three unit vectors has rank <= 3, so rows embed in span{1, i, j} via a
// zero-clamped Cholesky factorization; the gauge comes out as u1 = 1 and
// u2 in span{1, i}. Magnitudes are set to 1.
//
// Throws NotRealizable when the Gram matrix has an eigenvalue below -1e-9,
// i.e. when F > 1 and no quantum model of any kind exists.
inline std::array<Amplitude, 3> realize_from_cosines(const CosineTriple& t) {
  const detail::Gram3 g{t.alpha, t.beta, t.gamma};
  const double lam = g.min_eigenvalue();
  if (lam < -1e-9)
    throw NotRealizable("cosine triple has no unit-vector realization "
                        "(Gram eigenvalue " + std::to_string(lam) + ")");
  // Row 1: (1, 0, 0).
  const Quaternion v1{1.0, 0.0, 0.0, 0.0};
  // Row 2: (gamma, s, 0) with s = sqrt(1 - gamma^2).
  const double s = std::sqrt(std::max(0.0, 1.0 - t.gamma * t.gamma));
  const Quaternion v2{t.gamma, s, 0.0, 0.0};
  // Row 3: (beta, p, q) with v2 . v3 = alpha.
  const double p = s > 0.0 ? (t.alpha - t.beta * t.gamma) / s : 0.0;
  const double q =
      std::sqrt(std::max(0.0, 1.0 - t.beta * t.beta - p * p));
  const Quaternion v3{t.beta, p, q, 0.0};
  return {Amplitude{1.0, UnitQuaternion(v1)},
          Amplitude{1.0, UnitQuaternion(v2)},
          Amplitude{1.0, UnitQuaternion(v3)}};
}

// Noiseless cross sections of three amplitudes (sigma123 included unless
// with_triple is false). Mainly a driver for tests, fits and simulations.
inline CrossSectionSet simulate_cross_sections(const Amplitude& a1,
                                               const Amplitude& a2,
                                               const Amplitude& a3,
                                               bool with_triple = true) {
  CrossSectionSet s;
  s.sigma1 = cross_section(a1);
  s.sigma2 = cross_section(a2);
  s.sigma3 = cross_section(a3);
  s.sigma12 = pair_cross_section(a1, a2);
  s.sigma23 = pair_cross_section(a2, a3);
  s.sigma31 = pair_cross_section(a3, a1);
  if (with_triple) {
    const std::array<Amplitude, 3> all{a1, a2, a3};
    s.sigma123 = combined_cross_section(all);
  }
  return s;
}

struct FitResult {
  std::array<Amplitude, 3> amplitudes;
  CosineTriple cosines;
  double rms_residual = 0.0;  // barn, over the three pair equations
  int iterations = 0;
};

// Inverse problem: amplitudes from a measured set. Magnitudes are pinned
// to sqrt(sigma_n); the three relative 4-D angles (theta12, theta23,
// theta31) are fit to the pair cross sections by damped least squares
// (Levenberg-Marquardt with step rejection), constrained to cosines whose
// Gram matrix stays positive semidefinite. Directions come out of
// realize_from_cosines, so the gauge is u1 = 1 and u2 in span{1, i}.
//
// With per-pair error bars present, a converged fit whose residual on some
// pair exceeds 3 standard errors throws NotRealizable (no PSD Gram matrix
// fits the data), reporting the minimal achievable residual.
inline FitResult fit_amplitudes(const CrossSectionSet& set) {
  if (!(set.sigma1 > 0.0) || !(set.sigma2 > 0.0) || !(set.sigma3 > 0.0))
    throw DegenerateScatterer("fit requires positive single cross sections");

  const double lever12 = 2.0 * std::sqrt(set.sigma1 * set.sigma2);
  const double lever23 = 2.0 * std::sqrt(set.sigma2 * set.sigma3);
  const double lever31 = 2.0 * std::sqrt(set.sigma3 * set.sigma1);
  const std::array<double, 3> lever{lever12, lever23, lever31};
  const std::array<double, 3> target{set.sigma12 - set.sigma1 - set.sigma2,
                                     set.sigma23 - set.sigma2 - set.sigma3,
                                     set.sigma31 - set.sigma3 - set.sigma1};

  // Raw per-pair cosines, clamped onto [-1, 1].
  std::array<double, 3> c;  // order: (gamma, alpha, beta) = pairs 12, 23, 31
  for (int m = 0; m < 3; ++m) c[m] = std::clamp(target[m] / lever[m], -1.0, 1.0);

  const auto gram_of = [](const std::array<double, 3>& cc) {
    return detail::Gram3{cc[1], cc[2], cc[0]};
  };

  // Shrink toward the origin (identity Gram) until PSD; the PSD segment
  // along the ray is an interval, so bisection is exact enough.
  constexpr double psd_tol = 1e-12;
  if (!gram_of(c).is_psd(psd_tol)) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      std::array<double, 3> cm{mid * c[0], mid * c[1], mid * c[2]};
      (gram_of(cm).min_eigenvalue() >= psd_tol ? lo : hi) = mid;
    }
    for (auto& v : c) v *= lo;
  }

  std::array<double, 3> theta;
  for (int m = 0; m < 3; ++m) theta[m] = std::acos(std::clamp(c[m], -1.0, 1.0));

  const auto residuals = [&](const std::array<double, 3>& th,
                             std::array<double, 3>& r) {
    double cost = 0.0;
    for (int m = 0; m < 3; ++m) {
      r[m] = lever[m] * std::cos(th[m]) - target[m];
      cost += r[m] * r[m];
    }
    return cost;
  };

  std::array<double, 3> r;
  double cost = residuals(theta, r);
  double lambda = 1e-3;
  int iter = 0;
  for (; iter < 200; ++iter) {
    // Each pair equation depends on its own angle only, so the Jacobian is
    // diagonal; the PSD constraint is the only coupling.
    std::array<double, 3> trial = theta;
    double step_norm = 0.0;
    for (int m = 0; m < 3; ++m) {
      const double jm = -lever[m] * std::sin(theta[m]);
      const double h = jm * jm * (1.0 + lambda) + 1e-12 * lever[m] * lever[m];
      const double dm = -jm * r[m] / h;
      trial[m] = std::clamp(theta[m] + dm, 0.0, 3.141592653589793);
      step_norm += dm * dm;
    }
    std::array<double, 3> ct;
    for (int m = 0; m < 3; ++m) ct[m] = std::cos(trial[m]);
    std::array<double, 3> rt;
    const bool psd_ok = gram_of(ct).is_psd(psd_tol);
    const double trial_cost = psd_ok ? residuals(trial, rt) : 0.0;
    if (psd_ok && trial_cost < cost) {
      theta = trial;
      r = rt;
      cost = trial_cost;
      lambda = std::max(lambda * 0.3, 1e-12);
    } else {
      lambda *= 10.0;
    }
    if (std::sqrt(step_norm) < 1e-14 || cost < 1e-30 || lambda > 1e15) break;
  }
  if (!std::isfinite(cost))
    throw NumericalError("amplitude fit produced non-finite cost");

  CosineTriple best;
  best.gamma = std::cos(theta[0]);
  best.alpha = std::cos(theta[1]);
  best.beta = std::cos(theta[2]);
  const double rms = std::sqrt(cost / 3.0);

  const std::array<std::optional<double>, 3> errs{set.err12, set.err23,
                                                  set.err31};
  for (int m = 0; m < 3; ++m) {
    if (errs[m] && std::fabs(r[m]) > 3.0 * *errs[m] + 1e-12 * lever[m])
      throw NotRealizable(
          "no realizable cosine triple fits the pair cross sections within "
          "3 standard errors (best rms residual " + std::to_string(rms) +
          " barn)");
  }

  auto dirs = realize_from_cosines(best);
  FitResult out{{Amplitude{std::sqrt(set.sigma1), dirs[0].direction},
                 Amplitude{std::sqrt(set.sigma2), dirs[1].direction},
                 Amplitude{std::sqrt(set.sigma3), dirs[2].direction}},
                best, rms, iter};
  return out;
}

}  // namespace quint
