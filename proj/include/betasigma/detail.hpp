#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "betasigma/errors.hpp"

namespace betasigma::detail {

/// Neumaier-compensated accumulator. Keeps long reductions accurate to a few
/// ulps regardless of length, so results do not drift with summation order.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double sum(std::span<const double> v) {
  CompensatedSum acc;
  for (double x : v) acc.add(x);
  return acc.value();
}

inline double sum_squares(std::span<const double> v) {
  CompensatedSum acc;
  for (double x : v) acc.add(x * x);
  return acc.value();
}

/// Median with even-length samples averaged between the two central order
/// statistics. Consumes its argument.
inline double median_inplace(std::vector<double>& v) {
  if (v.empty()) raise(Errc::EmptySample, "median of an empty sample");
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  double upper = *mid;
  if (v.size() % 2 == 1) return upper;
  double lower = *std::max_element(v.begin(), mid);
  return 0.5 * (lower + upper);
}

inline double median(std::vector<double> v) { return median_inplace(v); }

/// Exact binomial coefficient via Pascal's rule in 128-bit integers, rounded
/// once on conversion to double. Valid for n <= 126.
inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::vector<unsigned __int128> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j > 0; --j) row[j] += row[j - 1];
  return static_cast<double>(row[static_cast<std::size_t>(k)]);
}

/// Dense LU factorization with partial pivoting, stored in place together
/// with the row permutation.
struct LuFactors {
  std::vector<double> lu;  // row-major, L below the diagonal, U on and above
  std::vector<int> perm;
  int n = 0;
  bool ok = false;
};

inline LuFactors lu_factor(std::vector<double> a, int n) {
  LuFactors f;
  f.lu = std::move(a);
  f.n = n;
  f.perm.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) f.perm[static_cast<std::size_t>(i)] = i;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    double best = std::abs(f.lu[static_cast<std::size_t>(col) * n + col]);
    for (int r = col + 1; r < n; ++r) {
      double v = std::abs(f.lu[static_cast<std::size_t>(r) * n + col]);
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) return f;
    if (pivot != col) {
      for (int c = 0; c < n; ++c)
        std::swap(f.lu[static_cast<std::size_t>(pivot) * n + c],
                  f.lu[static_cast<std::size_t>(col) * n + c]);
      std::swap(f.perm[static_cast<std::size_t>(pivot)], f.perm[static_cast<std::size_t>(col)]);
    }
    const double inv = 1.0 / f.lu[static_cast<std::size_t>(col) * n + col];
    for (int r = col + 1; r < n; ++r) {
      const double m = f.lu[static_cast<std::size_t>(r) * n + col] * inv;
      f.lu[static_cast<std::size_t>(r) * n + col] = m;
      if (m == 0.0) continue;
      for (int c = col + 1; c < n; ++c)
        f.lu[static_cast<std::size_t>(r) * n + c] -= m * f.lu[static_cast<std::size_t>(col) * n + c];
    }
  }
  f.ok = true;
  return f;
}

/// Solves with the stored factors; returns false when the result is not
/// finite.
inline bool lu_apply(const LuFactors& f, const std::vector<double>& b, std::vector<double>& x) {
  const int n = f.n;
  x.resize(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) x[static_cast<std::size_t>(r)] = b[static_cast<std::size_t>(f.perm[static_cast<std::size_t>(r)])];
  for (int r = 1; r < n; ++r) {
    double acc = x[static_cast<std::size_t>(r)];
    for (int c = 0; c < r; ++c)
      acc -= f.lu[static_cast<std::size_t>(r) * n + c] * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc;
  }
  for (int r = n - 1; r >= 0; --r) {
    double acc = x[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < n; ++c)
      acc -= f.lu[static_cast<std::size_t>(r) * n + c] * x[static_cast<std::size_t>(c)];
    x[static_cast<std::size_t>(r)] = acc / f.lu[static_cast<std::size_t>(r) * n + r];
  }
  for (int r = 0; r < n; ++r)
    if (!std::isfinite(x[static_cast<std::size_t>(r)])) return false;
  return true;
}

/// Solves A x = b by LU with partial pivoting plus two rounds of iterative
/// refinement with extended-precision residuals. Vandermonde systems are
/// ill-conditioned enough that plain LU loses several digits; refinement
/// restores them.
inline bool lu_solve_refined(const std::vector<double>& a, const std::vector<double>& b,
                             std::vector<double>& x, int n) {
  const LuFactors f = lu_factor(a, n);
  if (!f.ok) return false;
  if (!lu_apply(f, b, x)) return false;
  std::vector<double> residual(static_cast<std::size_t>(n));
  std::vector<double> correction;
  for (int round = 0; round < 2; ++round) {
    for (int r = 0; r < n; ++r) {
      long double acc = b[static_cast<std::size_t>(r)];
      for (int c = 0; c < n; ++c)
        acc -= static_cast<long double>(a[static_cast<std::size_t>(r) * n + c]) *
               static_cast<long double>(x[static_cast<std::size_t>(c)]);
      residual[static_cast<std::size_t>(r)] = static_cast<double>(acc);
    }
    if (!lu_apply(f, residual, correction)) return false;
    for (int r = 0; r < n; ++r) x[static_cast<std::size_t>(r)] += correction[static_cast<std::size_t>(r)];
  }
  for (int r = 0; r < n; ++r)
    if (!std::isfinite(x[static_cast<std::size_t>(r)])) return false;
  return true;
}

}  // namespace betasigma::detail
