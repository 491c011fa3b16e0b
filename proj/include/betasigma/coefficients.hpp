#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "betasigma/detail.hpp"
#include "betasigma/errors.hpp"

namespace betasigma {

enum class CoefficientKind { Equidistant, Arbitrary };

/// Largest supported annihilation order. The weights and their normalization
/// are built from exact 128-bit integer binomials, which covers orders well
/// beyond practical use.
inline constexpr int kMaxOrder = 62;

/// Weights a_0..a_{N+1} whose weighted sum cancels every polynomial of degree
/// at most N sampled at the subset positions. A subset of order N therefore
/// always holds N+2 points. `normalization` is f = sum a_k^2, the variance
/// scale of the weighted sum under unit noise.
struct CoefficientSet {
  int order = 0;
  std::vector<double> coeffs;
  double normalization = 0.0;
  CoefficientKind kind = CoefficientKind::Equidistant;
  std::optional<std::vector<double>> positions;  // Arbitrary kind only
};

/// Weights for an equidistant subset: a_k = (-1)^k C(N+1, k), with
/// normalization f = C(2N+2, N+1). Exact for every supported order.
inline CoefficientSet equidistant_coefficients(int order) {
  if (order < 0) raise(Errc::InvalidArgument, "order must be non-negative");
  if (order > kMaxOrder)
    raise(Errc::OrderTooLarge,
          "order " + std::to_string(order) + " exceeds the exact-binomial cap of " +
              std::to_string(kMaxOrder));
  CoefficientSet set;
  set.order = order;
  set.kind = CoefficientKind::Equidistant;
  set.coeffs.resize(static_cast<std::size_t>(order) + 2);
  for (int k = 0; k <= order + 1; ++k) {
    double c = detail::binomial(order + 1, k);
    set.coeffs[static_cast<std::size_t>(k)] = (k % 2 == 0) ? c : -c;
  }
  set.normalization = detail::binomial(2 * order + 2, order + 1);
  return set;
}

/// Weights for a subset at arbitrary strictly increasing positions, gauged by
/// a_0 = 1. The remaining weights solve the Vandermonde system built from the
/// positions shifted to the first point and rescaled by the subset span,
/// which keeps the solve well conditioned. Solutions whose residual exceeds
/// 1e-6 * max|a_k| are rejected as singular (positions that collapse after
/// shifting trip this).
inline CoefficientSet arbitrary_coefficients(std::span<const double> positions, int order) {
  if (order < 0) raise(Errc::InvalidArgument, "order must be non-negative");
  if (order > kMaxOrder)
    raise(Errc::OrderTooLarge, "order " + std::to_string(order) + " exceeds the cap of " +
                                   std::to_string(kMaxOrder));
  const std::size_t m = static_cast<std::size_t>(order) + 2;
  if (positions.size() != m)
    raise(Errc::InvalidArgument, "expected " + std::to_string(m) + " positions, got " +
                                     std::to_string(positions.size()));
  for (std::size_t k = 0; k + 1 < m; ++k)
    if (!(positions[k + 1] > positions[k]))
      raise(Errc::NonMonotonicPositions,
            "positions must be strictly increasing (index " + std::to_string(k + 1) + ")");

  // Shift to t_0 and rescale by the span before building the system.
  const double t0 = positions[0];
  const double span = positions[m - 1] - t0;
  std::vector<double> u(m);
  for (std::size_t k = 0; k < m; ++k) u[k] = (positions[k] - t0) / span;

  const int n = order + 1;  // unknowns a_1..a_{N+1}
  std::vector<double> matrix(static_cast<std::size_t>(n) * n);
  std::vector<double> rhs(static_cast<std::size_t>(n), 0.0);
  rhs[0] = -1.0;  // a_0 = 1 moved to the right-hand side
  for (int k = 1; k <= n; ++k) {
    double power = 1.0;
    for (int row = 0; row < n; ++row) {
      matrix[static_cast<std::size_t>(row) * n + (k - 1)] = power;
      power *= u[static_cast<std::size_t>(k)];
    }
  }

  std::vector<double> solution;
  const bool solved = detail::lu_solve_refined(matrix, rhs, solution, n);

  CoefficientSet set;
  set.order = order;
  set.kind = CoefficientKind::Arbitrary;
  set.positions = std::vector<double>(positions.begin(), positions.end());
  set.coeffs.resize(m);
  set.coeffs[0] = 1.0;
  if (solved)
    for (int k = 1; k <= n; ++k) set.coeffs[static_cast<std::size_t>(k)] = solution[static_cast<std::size_t>(k - 1)];

  double max_coeff = 0.0;
  for (double a : set.coeffs) max_coeff = std::max(max_coeff, std::abs(a));
  double max_residual = 0.0;
  for (int row = 0; row <= order; ++row) {
    detail::CompensatedSum acc;
    for (std::size_t k = 0; k < m; ++k)
      acc.add(set.coeffs[k] * std::pow(u[k], static_cast<double>(row)));
    max_residual = std::max(max_residual, std::abs(acc.value()));
  }
  if (!solved || !(max_residual <= 1e-6 * max_coeff))
    raise(Errc::SingularSystem, "coefficient solve failed (residual " +
                                    std::to_string(max_residual) + ")");

  detail::CompensatedSum f;
  for (double a : set.coeffs) f.add(a * a);
  set.normalization = f.value();
  return set;
}

/// Correlation between weighted sums built from the same coefficients whose
/// index sets are offset by `shift` subset slots:
/// rho_s = sum_{k>=s} a_k a_{k-s} / f. Zero once the subsets no longer
/// overlap (shift >= N+2).
inline double lag_correlations(const CoefficientSet& set, int shift) {
  if (shift < 1) raise(Errc::InvalidArgument, "shift must be at least 1");
  const int m = static_cast<int>(set.coeffs.size());
  if (shift >= m) return 0.0;
  detail::CompensatedSum acc;
  for (int k = shift; k < m; ++k)
    acc.add(set.coeffs[static_cast<std::size_t>(k)] * set.coeffs[static_cast<std::size_t>(k - shift)]);
  return acc.value() / set.normalization;
}

}  // namespace betasigma
