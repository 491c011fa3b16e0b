#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "betasigma/beta_sample.hpp"
#include "betasigma/errors.hpp"
#include "betasigma/estimators.hpp"
#include "betasigma/rng.hpp"
#include "betasigma/series.hpp"

namespace betasigma {

/// A noisy sine on an equidistant grid: y_i = A sin(2 pi t_i / P) + eps_i
/// with t_i = i * delta_t and eps ~ N(0, sigma0^2).
struct SineSpec {
  double period = 1.0;
  double delta_t = 0.1;
  std::size_t n_points = 1000;
  double sigma0 = 0.1;
  std::uint64_t seed = 1;
  double amplitude = 1.0;
};

inline SeriesData generate_sine(const SineSpec& spec) {
  if (!(spec.period > 0.0) || !(spec.delta_t > 0.0) || !(spec.sigma0 >= 0.0))
    raise(Errc::InvalidArgument, "sine spec requires period > 0, delta_t > 0, sigma0 >= 0");
  SeriesData data;
  data.t.emplace();
  data.t->reserve(spec.n_points);
  data.y.reserve(spec.n_points);
  rng::Gaussian noise(spec.seed);
  const double omega = 2.0 * std::numbers::pi / spec.period;
  for (std::size_t i = 0; i < spec.n_points; ++i) {
    const double t = static_cast<double>(i) * spec.delta_t;
    data.t->push_back(t);
    data.y.push_back(spec.amplitude * std::sin(omega * t) + spec.sigma0 * noise());
  }
  return data;
}

/// Grid of mean relative deviations d = (s_E - sigma0) / se(s_E) over
/// repeated noisy-sine realizations, one row per sampling ratio and one
/// column per order.
struct DeviationReport {
  std::vector<double> periods_per_sample;  // P / delta_t
  std::vector<int> orders;
  std::vector<std::vector<double>> deviation;  // [ratio][order]
  std::size_t reps = 0;
};

/// Parameters of the sine benchmark grid. The amplitude-to-noise ratio of 20
/// is the one the reference deviation values correspond to.
struct SineBenchmark {
  std::size_t n_points = 1000;
  double delta_t = 0.1;
  double sigma0 = 0.1;
  double amplitude = 2.0;
};

/// Runs the sine benchmark: for every (P/delta_t, order) cell, `reps`
/// independent realizations are estimated with shifted subsets and the
/// minimum-variance estimator, and the relative deviations are averaged.
inline DeviationReport sine_deviation_table(std::vector<double> periods_per_sample,
                                            std::vector<int> orders, std::size_t reps,
                                            std::uint64_t seed,
                                            const SineBenchmark& bench = {}) {
  if (reps < 1) raise(Errc::InvalidArgument, "reps must be at least 1");
  DeviationReport report;
  report.periods_per_sample = std::move(periods_per_sample);
  report.orders = std::move(orders);
  report.reps = reps;
  report.deviation.assign(report.periods_per_sample.size(),
                          std::vector<double>(report.orders.size(), 0.0));
  for (std::size_t row = 0; row < report.periods_per_sample.size(); ++row) {
    for (std::size_t col = 0; col < report.orders.size(); ++col) {
      const int order = report.orders[col];
      const std::uint64_t cell = row * report.orders.size() + col;
      detail::CompensatedSum acc;
      for (std::size_t rep = 0; rep < reps; ++rep) {
        SineSpec spec;
        spec.period = report.periods_per_sample[row] * bench.delta_t;
        spec.delta_t = bench.delta_t;
        spec.n_points = bench.n_points;
        spec.sigma0 = bench.sigma0;
        spec.amplitude = bench.amplitude;
        spec.seed = rng::derive_seed(seed, (cell << 32) | rep);
        const SeriesData data = generate_sine(spec);
        const NoiseEstimate est = mv_estimate(
            build_beta(data, shifted_scheme(data.size(), order, 1), Sampling::AssumeEquidistant),
            Center::KnownZero);
        acc.add((est.sigma_hat - bench.sigma0) / est.std_error);
      }
      report.deviation[row][col] = acc.value() / static_cast<double>(reps);
    }
  }
  return report;
}

namespace detail {

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = sum(x) / n;
  const double my = sum(y) / n;
  CompensatedSum cxy, cxx, cyy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    cxy.add(dx * dy);
    cxx.add(dx * dx);
    cyy.add(dy * dy);
  }
  return cxy.value() / std::sqrt(cxx.value() * cyy.value());
}

}  // namespace detail

/// Correlation of variance estimates across orders: each repetition draws
/// pure unit noise, estimates the variance through shifted subsets at every
/// requested order, and the estimates are correlated across repetitions.
/// Returns the full symmetric matrix with unit diagonal.
inline std::vector<std::vector<double>> order_correlation_matrix(std::size_t n_points,
                                                                 std::vector<int> orders,
                                                                 std::size_t reps,
                                                                 std::uint64_t seed) {
  if (reps < 2) raise(Errc::InvalidArgument, "correlation needs at least 2 repetitions");
  std::vector<std::vector<double>> estimates(orders.size(), std::vector<double>(reps));
  SeriesData data;
  data.y.resize(n_points);
  for (std::size_t rep = 0; rep < reps; ++rep) {
    rng::Gaussian noise(rng::derive_seed(seed, rep));
    for (double& v : data.y) v = noise();
    for (std::size_t oi = 0; oi < orders.size(); ++oi) {
      const BetaSample sample =
          build_beta(data, shifted_scheme(n_points, orders[oi], 1), Sampling::AssumeEquidistant);
      const double n = static_cast<double>(sample.values.size());
      estimates[oi][rep] = detail::sum_squares(sample.values) / n;  // variance estimate
    }
  }
  std::vector<std::vector<double>> corr(orders.size(), std::vector<double>(orders.size(), 1.0));
  for (std::size_t a = 0; a < orders.size(); ++a)
    for (std::size_t b = a + 1; b < orders.size(); ++b)
      corr[a][b] = corr[b][a] = detail::pearson(estimates[a], estimates[b]);
  return corr;
}

/// The alternating series y_i = (-1)^i without noise. Estimates on it grow
/// without bound in the order, making it the canonical non-convergence
/// witness.
inline SeriesData pathological_series(std::size_t n_points) {
  if (n_points < 2) raise(Errc::InvalidArgument, "need at least 2 points");
  SeriesData data;
  data.y.resize(n_points);
  for (std::size_t i = 0; i < n_points; ++i) data.y[i] = (i % 2 == 0) ? 1.0 : -1.0;
  return data;
}

/// Variance efficiency relative to the shifted order-zero reference
/// 3 sigma^4 / n, in the large-sample limit where the sample-size prefactors
/// cancel. Shifted subsets pay the correlation factor; independent subsets
/// pay the sample-size ratio (N+2)/2.
struct EfficiencyPoint {
  int order = 0;
  double shifted = 0.0;
  double independent = 0.0;
};

inline std::vector<EfficiencyPoint> efficiency_curve(std::vector<int> orders,
                                                     std::size_t n_points) {
  if (orders.empty()) raise(Errc::InvalidArgument, "orders must not be empty");
  for (int order : orders)
    if (n_points < static_cast<std::size_t>(order) + 2)
      raise(Errc::TooFewPoints, "n_points too small for order " + std::to_string(order));
  std::vector<EfficiencyPoint> curve;
  curve.reserve(orders.size());
  for (int order : orders) {
    const CoefficientSet cset = equidistant_coefficients(order);
    std::vector<double> rho(static_cast<std::size_t>(order) + 1);
    for (int s = 1; s <= order + 1; ++s) rho[static_cast<std::size_t>(s - 1)] = lag_correlations(cset, s);
    EfficiencyPoint point;
    point.order = order;
    point.shifted = 3.0 / (2.0 * detail::correlation_factor(rho));
    point.independent = 3.0 / (2.0 * static_cast<double>(order + 2));
    curve.push_back(point);
  }
  return curve;
}

}  // namespace betasigma
