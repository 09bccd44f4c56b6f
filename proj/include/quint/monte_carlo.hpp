#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "quint/errors.hpp"
#include "quint/interference.hpp"

// Counting-statistics simulation of the F test. Each trial draws
// independent Poisson counts with mean rate * sigma for the six channels
// of a known amplitude triple, converts counts back to cross-section
// estimates (sigma = N/rate, err = sqrt(N)/rate) and evaluates F. Trials
// where a single-scatterer channel draws zero counts leave the cosines
// undefined; they are excluded and counted, never imputed.
//
// Every trial derives its own generator from (seed, trial index), so the
// stream is independent of evaluation order; summaries reduce in trial
// order for bit-stable output.

namespace quint {

struct MonteCarloSpec {
  std::array<Amplitude, 3> truth;
  double counts_per_barn = 0.0;  // expected counts per barn of cross section
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
};

struct MonteCarloSummary {
  std::int64_t trials_requested = 0;
  std::int64_t trials_used = 0;
  std::int64_t trials_excluded = 0;
  double mean_f = 0.0;
  double stddev_f = 0.0;               // sample standard deviation
  double q05 = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0, q95 = 0.0;
  double fraction_f_above_1 = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline double interpolated_quantile(const std::vector<double>& sorted,
                                    double p) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double pos = p * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= n) return sorted[n - 1];
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace detail

inline MonteCarloSummary run_monte_carlo(const MonteCarloSpec& spec) {
  if (spec.trials < 1) throw ValueError("Monte Carlo needs trials >= 1");
  if (!(spec.counts_per_barn > 0.0))
    throw ValueError("count rate per barn must be positive");

  const CrossSectionSet truth = simulate_cross_sections(
      spec.truth[0], spec.truth[1], spec.truth[2], /*with_triple=*/false);
  const std::array<double, 6> mean_sigma{truth.sigma1,  truth.sigma2,
                                         truth.sigma3,  truth.sigma12,
                                         truth.sigma23, truth.sigma31};

  std::vector<double> f_values;
  f_values.reserve(static_cast<std::size_t>(spec.trials));
  std::int64_t excluded = 0;

  for (std::int64_t trial = 0; trial < spec.trials; ++trial) {
    std::mt19937_64 rng(detail::splitmix64(
        spec.seed ^ detail::splitmix64(static_cast<std::uint64_t>(trial))));

    std::array<double, 6> est{}, err{};
    for (std::size_t c = 0; c < 6; ++c) {
      const double lambda = spec.counts_per_barn * mean_sigma[c];
      std::poisson_distribution<std::int64_t> poisson(lambda);
      const double counts = static_cast<double>(poisson(rng));
      est[c] = counts / spec.counts_per_barn;
      err[c] = std::sqrt(counts) / spec.counts_per_barn;
    }
    if (est[0] <= 0.0 || est[1] <= 0.0 || est[2] <= 0.0) {
      ++excluded;  // zero counts on a single-scatterer channel
      continue;
    }
    CrossSectionSet s;
    s.sigma1 = est[0];
    s.sigma2 = est[1];
    s.sigma3 = est[2];
    s.sigma12 = est[3];
    s.sigma23 = est[4];
    s.sigma31 = est[5];
    s.err1 = err[0];
    s.err2 = err[1];
    s.err3 = err[2];
    s.err12 = err[3];
    s.err23 = err[4];
    s.err31 = err[5];
    f_values.push_back(f_statistic(cosine_triple(s)).value);
  }

  if (f_values.empty())
    throw NumericalError("every Monte Carlo trial was excluded");

  MonteCarloSummary out;
  out.trials_requested = spec.trials;
  out.trials_used = static_cast<std::int64_t>(f_values.size());
  out.trials_excluded = excluded;

  double sum = 0.0;
  std::int64_t above = 0;
  for (const double f : f_values) {
    sum += f;
    if (f > 1.0) ++above;
  }
  const double n = static_cast<double>(f_values.size());
  out.mean_f = sum / n;
  double ss = 0.0;
  for (const double f : f_values) ss += (f - out.mean_f) * (f - out.mean_f);
  out.stddev_f = f_values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  out.fraction_f_above_1 = static_cast<double>(above) / n;

  std::vector<double> sorted = f_values;
  std::sort(sorted.begin(), sorted.end());
  out.q05 = detail::interpolated_quantile(sorted, 0.05);
  out.q25 = detail::interpolated_quantile(sorted, 0.25);
  out.median = detail::interpolated_quantile(sorted, 0.50);
  out.q75 = detail::interpolated_quantile(sorted, 0.75);
  out.q95 = detail::interpolated_quantile(sorted, 0.95);
  return out;
}

}  // namespace quint
