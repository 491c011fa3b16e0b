#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "betasigma/beta_sample.hpp"
#include "betasigma/detail.hpp"
#include "betasigma/errors.hpp"

namespace betasigma {

/// Scale estimators for a beta sample. MV variants are the minimum-variance
/// quadratic estimators; Robust variants use the scaled median absolute
/// deviation.
enum class Estimator { MV, MVMean, Robust, RobustMedianCentered };

/// Centering convention: KnownZero exploits that the weighted sums have zero
/// mean by construction; Sample estimates the center from the data (the mean
/// for MV estimation, the median for robust estimation).
enum class Center { KnownZero, Sample };

/// Scales the median absolute deviation to the standard deviation of a
/// normal distribution: 1 / quantile(3/4).
inline constexpr double kMadScale = 1.4826022185056;

/// Variance penalty of the robust estimator relative to the minimum-variance
/// one on normal samples; used to approximate robust standard errors.
inline constexpr double kRobustVariancePenalty = 2.7;

inline const char* estimator_name(Estimator e) {
  switch (e) {
    case Estimator::MV: return "mv";
    case Estimator::MVMean: return "mv_mean";
    case Estimator::Robust: return "robust";
    case Estimator::RobustMedianCentered: return "robust_median_centered";
  }
  return "unknown";
}

inline const char* mode_name(SampleMode m) {
  return m == SampleMode::Independent ? "independent" : "shifted";
}

struct EstimateFlags {
  /// The sample carried no spread; sigma_hat and stderr are both zero.
  bool degenerate = false;
  /// Standard error approximated by scaling the MV error by the robust
  /// variance penalty.
  bool robust_stderr_scaled = false;
  /// Standard error omits the lag-correlation correction because the sample
  /// correlations were unknown.
  bool stderr_uncorrected = false;
};

/// A noise-scale estimate with its standard error and the configuration it
/// came from.
struct NoiseEstimate {
  double sigma_hat = 0.0;
  double std_error = 0.0;
  Estimator estimator = Estimator::MV;
  int order = 0;
  int jump = 1;
  SampleMode mode = SampleMode::Independent;
  std::size_t n_beta = 0;
  EstimateFlags flags;
};

namespace detail {

/// 1 + 2 sum rho_s^2, the large-sample variance inflation of the squared
/// scale estimate on a correlated sample.
inline double correlation_factor(std::span<const double> rho) {
  CompensatedSum acc;
  for (double r : rho) acc.add(r * r);
  return 1.0 + 2.0 * acc.value();
}

inline NoiseEstimate finish_estimate(const BetaSample& sample, double sigma, Estimator kind,
                                     double variance_scale) {
  NoiseEstimate est;
  est.sigma_hat = sigma;
  est.estimator = kind;
  est.order = sample.scheme.order;
  est.jump = sample.scheme.jump;
  est.mode = sample.scheme.mode;
  est.n_beta = sample.values.size();
  est.flags.stderr_uncorrected = sample.stderr_uncorrected;
  if (sigma == 0.0) {
    est.flags.degenerate = true;
    est.std_error = 0.0;
    return est;
  }
  // stderr = sqrt(V(s^2) / (4 s^2)) with V(s^2) = 2 s^4 corr / n.
  const double corr = correlation_factor(sample.rho);
  est.std_error =
      sigma * std::sqrt(variance_scale * corr / (2.0 * static_cast<double>(est.n_beta)));
  return est;
}

}  // namespace detail

/// Minimum-variance estimate of the noise scale. KnownZero divides the sum
/// of squares by n; Sample centers on the mean and divides by n-1. Samples
/// without spread collapse to zero with the degenerate flag set.
inline NoiseEstimate mv_estimate(const BetaSample& sample, Center center) {
  const std::size_t n = sample.values.size();
  if (n < 2) raise(Errc::EmptySample, "minimum-variance estimation needs at least 2 values");
  double s2 = 0.0;
  if (center == Center::KnownZero) {
    s2 = detail::sum_squares(sample.values) / static_cast<double>(n);
  } else {
    const double mean = detail::sum(sample.values) / static_cast<double>(n);
    detail::CompensatedSum acc;
    for (double b : sample.values) acc.add((b - mean) * (b - mean));
    s2 = acc.value() / static_cast<double>(n - 1);
  }
  const Estimator kind = center == Center::KnownZero ? Estimator::MV : Estimator::MVMean;
  return detail::finish_estimate(sample, std::sqrt(std::max(s2, 0.0)), kind, 1.0);
}

/// Robust estimate via the scaled median absolute deviation. KnownZero takes
/// the median of |beta|; Sample first subtracts the sample median. The
/// standard error is the MV one inflated by the robust variance penalty.
inline NoiseEstimate robust_estimate(const BetaSample& sample, Center center) {
  const std::size_t n = sample.values.size();
  if (n < 1) raise(Errc::EmptySample, "robust estimation needs at least 1 value");
  std::vector<double> deviations(sample.values);
  if (center == Center::Sample) {
    const double med = detail::median(sample.values);
    for (double& d : deviations) d = std::abs(d - med);
  } else {
    for (double& d : deviations) d = std::abs(d);
  }
  const double sigma = kMadScale * detail::median_inplace(deviations);
  const Estimator kind =
      center == Center::KnownZero ? Estimator::Robust : Estimator::RobustMedianCentered;
  NoiseEstimate est = detail::finish_estimate(sample, sigma, kind, kRobustVariancePenalty);
  est.flags.robust_stderr_scaled = true;
  return est;
}

/// Dispatch on the estimator tag.
inline NoiseEstimate estimate(const BetaSample& sample, Estimator kind) {
  switch (kind) {
    case Estimator::MV: return mv_estimate(sample, Center::KnownZero);
    case Estimator::MVMean: return mv_estimate(sample, Center::Sample);
    case Estimator::Robust: return robust_estimate(sample, Center::KnownZero);
    case Estimator::RobustMedianCentered: return robust_estimate(sample, Center::Sample);
  }
  raise(Errc::InvalidArgument, "unknown estimator");
}

/// Expected value of the zero-centered scale estimate relative to the true
/// scale on an independent normal sample of size n:
/// sqrt(2/n) Gamma(n/2) / Gamma((n-1)/2). Approaches 1 - 3/(4n) for large n.
inline double expected_small_sample_bias(std::size_t n) {
  if (n < 2) raise(Errc::InvalidArgument, "bias factor needs n >= 2");
  const double nd = static_cast<double>(n);
  return std::sqrt(2.0 / nd) * std::exp(std::lgamma(nd / 2.0) - std::lgamma((nd - 1.0) / 2.0));
}

/// Exact finite-sample variance of the squared scale estimate on a sample of
/// size n with lag correlations rho:
/// 2 sigma^4 / n + (4 sigma^4 / n^2) sum_s (n - s) rho_s^2.
inline double estimator_variance(double sigma, std::size_t n, std::span<const double> rho) {
  if (n < 1) raise(Errc::InvalidArgument, "sample size must be positive");
  const double nd = static_cast<double>(n);
  const double s4 = sigma * sigma * sigma * sigma;
  detail::CompensatedSum acc;
  for (std::size_t s = 1; s <= rho.size() && s < n; ++s)
    acc.add((nd - static_cast<double>(s)) * rho[s - 1] * rho[s - 1]);
  return 2.0 * s4 / nd + 4.0 * s4 / (nd * nd) * acc.value();
}

/// One-call convenience: subset scheme, weighted sums, and estimate in one
/// step. The defaults reproduce the DER_SNR configuration.
struct EstimateOptions {
  int order = 1;
  int jump = 2;
  SampleMode mode = SampleMode::Shifted;
  Estimator estimator = Estimator::Robust;
  Sampling sampling = Sampling::AssumeEquidistant;
};

inline NoiseEstimate estimate_noise(const SeriesData& data, const EstimateOptions& opt = {}) {
  const SubsetScheme scheme = opt.mode == SampleMode::Independent
                                  ? independent_scheme(data.size(), opt.order, opt.jump)
                                  : shifted_scheme(data.size(), opt.order, opt.jump);
  return estimate(build_beta(data, scheme, opt.sampling), opt.estimator);
}

}  // namespace betasigma
