#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "betasigma/detail.hpp"
#include "betasigma/errors.hpp"
#include "betasigma/estimators.hpp"

namespace betasigma {

/// DER_SNR noise estimate: the scaled median of the absolute second
/// differences at stride two,
///   sigma = (k / sqrt(6)) med_i | -y_{i-2} + 2 y_i - y_{i+2} |,
/// taken over every index where all three terms exist. Equals the general
/// procedure at order 1, jump 2, shifted subsets, zero-centered robust
/// estimation.
inline double der_snr_sigma(std::span<const double> y) {
  if (y.size() < 5)
    raise(Errc::TooFewPoints, "DER_SNR needs at least 5 points, have " + std::to_string(y.size()));
  std::vector<double> second_diff;
  second_diff.reserve(y.size() - 4);
  for (std::size_t i = 2; i + 2 < y.size(); ++i)
    second_diff.push_back(std::abs(-y[i - 2] + 2.0 * y[i] - y[i + 2]));
  return kMadScale / std::sqrt(6.0) * detail::median_inplace(second_diff);
}

/// Signal-to-noise figure of merit: median(y) divided by the DER_SNR noise
/// estimate.
inline double der_snr(std::span<const double> y) {
  const double sigma = der_snr_sigma(y);
  if (sigma == 0.0) raise(Errc::ZeroNoise, "noise estimate is zero");
  return detail::median(std::vector<double>(y.begin(), y.end())) / sigma;
}

}  // namespace betasigma
