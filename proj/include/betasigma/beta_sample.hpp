#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "betasigma/coefficients.hpp"
#include "betasigma/errors.hpp"
#include "betasigma/series.hpp"

namespace betasigma {

enum class SampleMode { Independent, Shifted };
enum class Sampling { AssumeEquidistant, UsePositions };

/// Index subsets of N+2 points each, all with constant stride `jump`.
/// Subset m covers the indices starts[m] + k*jump for 0 <= k < N+2.
struct SubsetScheme {
  SampleMode mode = SampleMode::Independent;
  int order = 0;
  int jump = 1;
  std::vector<std::size_t> starts;

  std::size_t count() const { return starts.size(); }
  int points_per_subset() const { return order + 2; }
  std::size_t index(std::size_t subset, int k) const {
    return starts[subset] + static_cast<std::size_t>(k) * static_cast<std::size_t>(jump);
  }
  /// Largest data index any subset touches; starts must not be empty.
  std::size_t max_index() const {
    std::size_t last = 0;
    for (std::size_t s : starts) last = std::max(last, s);
    return last + static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(jump);
  }
};

namespace detail {

inline void check_scheme_args(std::size_t n_d, int order, int jump) {
  if (order < 0) raise(Errc::InvalidArgument, "order must be non-negative");
  if (jump < 1) raise(Errc::InvalidArgument, "jump must be at least 1");
  (void)n_d;
}

}  // namespace detail

/// Disjoint subsets: consecutive chunks of (N+2)*jump points are interleaved
/// into `jump` subsets by index residue. Incomplete subsets in the trailing
/// chunk are discarded. Yields roughly n_d / (N+2) mutually independent
/// weighted sums.
inline SubsetScheme independent_scheme(std::size_t n_d, int order, int jump) {
  detail::check_scheme_args(n_d, order, jump);
  const std::size_t per = static_cast<std::size_t>(order) + 2;
  const std::size_t chunk = per * static_cast<std::size_t>(jump);
  if (n_d < chunk)
    raise(Errc::TooFewPoints, "need at least " + std::to_string(chunk) + " points, have " +
                                  std::to_string(n_d));
  SubsetScheme scheme;
  scheme.mode = SampleMode::Independent;
  scheme.order = order;
  scheme.jump = jump;
  const std::size_t reach = static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(jump);
  for (std::size_t chunk_start = 0; chunk_start < n_d; chunk_start += chunk)
    for (int residue = 0; residue < jump; ++residue) {
      const std::size_t start = chunk_start + static_cast<std::size_t>(residue);
      if (start + reach < n_d) scheme.starts.push_back(start);
    }
  return scheme;
}

/// Overlapping subsets obtained by sliding the start index one point at a
/// time; produces exactly n_d - jump*(N+1) subsets.
inline SubsetScheme shifted_scheme(std::size_t n_d, int order, int jump) {
  detail::check_scheme_args(n_d, order, jump);
  const std::size_t reach = static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(jump);
  if (n_d <= reach)
    raise(Errc::TooFewPoints, "need more than " + std::to_string(reach) + " points, have " +
                                  std::to_string(n_d));
  SubsetScheme scheme;
  scheme.mode = SampleMode::Shifted;
  scheme.order = order;
  scheme.jump = jump;
  scheme.starts.resize(n_d - reach);
  for (std::size_t m = 0; m < scheme.starts.size(); ++m) scheme.starts[m] = m;
  return scheme;
}

/// Normalized weighted sums over the scheme's subsets. Under valid local
/// polynomial approximation the values are noise draws with the variance of
/// the measurement noise.
struct BetaSample {
  std::vector<double> values;
  SubsetScheme scheme;
  CoefficientKind coefficient_kind = CoefficientKind::Equidistant;
  /// Correlation at each value-index lag, nonzero only for shifted schemes
  /// with shared equidistant coefficients. rho[s-1] is the lag-s correlation.
  std::vector<double> rho;
  /// Subsets whose per-subset coefficient solve failed and were skipped.
  std::size_t dropped = 0;
  /// Set when lag correlations are unknown (shifted mode with per-subset
  /// coefficients); standard errors then omit the correlation correction.
  bool stderr_uncorrected = false;
};

/// Evaluates the weighted sums for `scheme` over `data`. AssumeEquidistant
/// shares one binomial coefficient set across subsets; UsePositions solves
/// for fresh coefficients from each subset's positions and requires data.t.
inline BetaSample build_beta(const SeriesData& data, const SubsetScheme& scheme,
                             Sampling sampling) {
  BetaSample sample;
  sample.scheme = scheme;
  if (scheme.starts.empty()) return sample;
  if (scheme.max_index() >= data.size())
    raise(Errc::InvalidArgument, "scheme does not fit the series");

  const int per = scheme.points_per_subset();
  sample.values.reserve(scheme.count());

  if (sampling == Sampling::AssumeEquidistant) {
    const CoefficientSet cset = equidistant_coefficients(scheme.order);
    const double inv_norm = 1.0 / std::sqrt(cset.normalization);
    for (std::size_t m = 0; m < scheme.count(); ++m) {
      double acc = 0.0;
      for (int k = 0; k < per; ++k)
        acc += cset.coeffs[static_cast<std::size_t>(k)] * data.y[scheme.index(m, k)];
      sample.values.push_back(acc * inv_norm);
    }
    sample.coefficient_kind = CoefficientKind::Equidistant;
    if (scheme.mode == SampleMode::Shifted) {
      // Subsets offset by s data points overlap only when s is a multiple of
      // the jump; the overlap then spans s/jump coefficient slots.
      const std::size_t max_lag =
          static_cast<std::size_t>(scheme.jump) * static_cast<std::size_t>(scheme.order + 1);
      sample.rho.assign(max_lag, 0.0);
      for (int sub_lag = 1; sub_lag <= scheme.order + 1; ++sub_lag)
        sample.rho[static_cast<std::size_t>(sub_lag) * static_cast<std::size_t>(scheme.jump) - 1] =
            lag_correlations(cset, sub_lag);
    }
    return sample;
  }

  if (!data.has_positions())
    raise(Errc::MissingPositions, "UsePositions requires explicit sample positions");
  const std::vector<double>& t = *data.t;
  std::vector<double> subset_positions(static_cast<std::size_t>(per));
  for (std::size_t m = 0; m < scheme.count(); ++m) {
    for (int k = 0; k < per; ++k) subset_positions[static_cast<std::size_t>(k)] = t[scheme.index(m, k)];
    CoefficientSet cset;
    try {
      cset = arbitrary_coefficients(subset_positions, scheme.order);
    } catch (const Error&) {
      ++sample.dropped;
      continue;
    }
    double acc = 0.0;
    for (int k = 0; k < per; ++k)
      acc += cset.coeffs[static_cast<std::size_t>(k)] * data.y[scheme.index(m, k)];
    sample.values.push_back(acc / std::sqrt(cset.normalization));
  }
  sample.coefficient_kind = CoefficientKind::Arbitrary;
  sample.stderr_uncorrected = (scheme.mode == SampleMode::Shifted);
  return sample;
}

}  // namespace betasigma
