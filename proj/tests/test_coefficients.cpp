#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "betasigma/coefficients.hpp"
#include "betasigma/rng.hpp"

using namespace betasigma;
using Catch::Approx;

namespace {

// Independent binomial oracle: plain double Pascal triangle.
double pascal(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  std::vector<std::vector<double>> rows(n + 1);
  for (int i = 0; i <= n; ++i) {
    rows[i].assign(i + 1, 1.0);
    for (int j = 1; j < i; ++j) rows[i][j] = rows[i - 1][j - 1] + rows[i - 1][j];
  }
  return rows[n][k];
}

double beta_of(const std::vector<double>& coeffs, const std::vector<double>& y) {
  double num = 0.0, f = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    num += coeffs[k] * y[k];
    f += coeffs[k] * coeffs[k];
  }
  return num / std::sqrt(f);
}

}  // namespace

TEST_CASE("equidistant weights are alternating binomials") {
  SECTION("first differences") {
    const CoefficientSet set = equidistant_coefficients(0);
    REQUIRE(set.coeffs == std::vector<double>{1.0, -1.0});
    REQUIRE(set.normalization == 2.0);
  }
  SECTION("second-difference weights and their normalization") {
    const CoefficientSet set = equidistant_coefficients(1);
    REQUIRE(set.coeffs == std::vector<double>{1.0, -2.0, 1.0});
    REQUIRE(set.normalization == 6.0);
  }
  SECTION("third differences") {
    const CoefficientSet set = equidistant_coefficients(2);
    REQUIRE(set.coeffs == std::vector<double>{1.0, -3.0, 3.0, -1.0});
    REQUIRE(set.normalization == 20.0);
  }
  SECTION("orders up to ten match the Pascal oracle exactly") {
    for (int order = 0; order <= 10; ++order) {
      const CoefficientSet set = equidistant_coefficients(order);
      REQUIRE(set.coeffs.size() == static_cast<std::size_t>(order) + 2);
      for (int k = 0; k <= order + 1; ++k) {
        const double expected = (k % 2 == 0 ? 1.0 : -1.0) * pascal(order + 1, k);
        REQUIRE(set.coeffs[k] == expected);
      }
      REQUIRE(set.normalization == pascal(2 * order + 2, order + 1));
    }
  }
}

TEST_CASE("equidistant weights annihilate low-order monomials") {
  for (int order = 0; order <= 10; ++order) {
    const CoefficientSet set = equidistant_coefficients(order);
    double max_abs_coeff = 0.0;
    for (double a : set.coeffs) max_abs_coeff = std::max(max_abs_coeff, std::abs(a));
    for (int power = 0; power <= order; ++power) {
      double acc = 0.0;
      double max_term = 0.0;
      for (int k = 0; k <= order + 1; ++k) {
        const double value = std::pow(static_cast<double>(k), static_cast<double>(power));
        acc += set.coeffs[k] * value;
        max_term = std::max(max_term, value);
      }
      REQUIRE(std::abs(acc) <= 1e-9 * max_abs_coeff * std::max(max_term, 1.0));
    }
  }
}

TEST_CASE("order cap") {
  REQUIRE(equidistant_coefficients(62).coeffs.size() == 64);
  REQUIRE_THROWS_MATCHES(equidistant_coefficients(63), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::OrderTooLarge; }));
  REQUIRE_THROWS_MATCHES(equidistant_coefficients(-1), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::InvalidArgument; }));
}

TEST_CASE("irregular-grid weights solve small systems exactly") {
  SECTION("integer grid at order one") {
    const std::vector<double> pos{0.0, 1.0, 2.0};
    const CoefficientSet set = arbitrary_coefficients(pos, 1);
    REQUIRE(set.coeffs[0] == 1.0);
    REQUIRE(set.coeffs[1] == Approx(-2.0).margin(1e-12));
    REQUIRE(set.coeffs[2] == Approx(1.0).margin(1e-12));
  }
  SECTION("order zero is sampling independent") {
    const std::vector<double> pos{0.0, 1.0};
    const CoefficientSet set = arbitrary_coefficients(pos, 0);
    REQUIRE(set.coeffs[0] == 1.0);
    REQUIRE(set.coeffs[1] == Approx(-1.0).margin(1e-14));
  }
  SECTION("a gapped triple") {
    const std::vector<double> pos{0.0, 1.0, 3.0};
    const CoefficientSet set = arbitrary_coefficients(pos, 1);
    REQUIRE(set.coeffs[0] == 1.0);
    REQUIRE(set.coeffs[1] == Approx(-1.5).margin(1e-12));
    REQUIRE(set.coeffs[2] == Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("irregular path reduces to the binomial weights on an integer grid") {
  for (int order = 0; order <= 10; ++order) {
    std::vector<double> pos(order + 2);
    for (int k = 0; k <= order + 1; ++k) pos[k] = static_cast<double>(k);
    const CoefficientSet reference = equidistant_coefficients(order);
    const CoefficientSet solved = arbitrary_coefficients(pos, order);
    for (std::size_t k = 0; k < reference.coeffs.size(); ++k)
      REQUIRE(solved.coeffs[k] == Approx(reference.coeffs[k]).margin(1e-10 * std::abs(reference.coeffs[k]) + 1e-10));
  }
}

TEST_CASE("irregular weights annihilate polynomials at random positions") {
  rng::Xoshiro256pp gen(2024);
  for (int order = 0; order <= 5; ++order) {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> pos(order + 2);
      for (double& p : pos) p = 100.0 * gen.uniform();
      std::sort(pos.begin(), pos.end());
      if (std::adjacent_find(pos.begin(), pos.end(),
                             [](double a, double b) { return b <= a; }) != pos.end())
        continue;
      const CoefficientSet set = arbitrary_coefficients(pos, order);

      // Random polynomial of matching degree on the rescaled variable.
      std::vector<double> poly(order + 1);
      for (double& c : poly) c = 2.0 * gen.uniform() - 1.0;
      double acc = 0.0;
      double sum_abs = 0.0;
      double max_val = 0.0;
      for (int k = 0; k <= order + 1; ++k) {
        const double x = (pos[k] - pos[0]) / 100.0;
        double value = 0.0;
        for (int d = order; d >= 0; --d) value = value * x + poly[d];
        acc += set.coeffs[k] * value;
        sum_abs += std::abs(set.coeffs[k]);
        max_val = std::max(max_val, std::abs(value));
      }
      REQUIRE(std::abs(acc) <= 1e-9 * sum_abs * std::max(max_val, 1e-30));
    }
  }
}

TEST_CASE("invalid positions are rejected") {
  SECTION("non-monotonic") {
    const std::vector<double> pos{0.0, 2.0, 1.0};
    REQUIRE_THROWS_MATCHES(arbitrary_coefficients(pos, 1), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::NonMonotonicPositions;
                           }));
  }
  SECTION("duplicate") {
    const std::vector<double> pos{0.0, 1.0, 1.0};
    REQUIRE_THROWS_AS(arbitrary_coefficients(pos, 1), Error);
  }
  SECTION("wrong length") {
    const std::vector<double> pos{0.0, 1.0, 2.0};
    REQUIRE_THROWS_MATCHES(arbitrary_coefficients(pos, 2), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::InvalidArgument;
                           }));
  }
  SECTION("positions that collapse after shifting are singular") {
    // Distinct as written, but both differences to the first point round to
    // the same double.
    const std::vector<double> pos{1.0, 1e16, 1e16 + 2.0};
    REQUIRE((1e16 - 1.0) == (1e16 + 2.0 - 1.0));
    REQUIRE_THROWS_MATCHES(arbitrary_coefficients(pos, 1), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.code() == Errc::SingularSystem;
                           }));
  }
}

TEST_CASE("rescaling the weights leaves the normalized sums unchanged") {
  const CoefficientSet set = equidistant_coefficients(1);
  std::vector<double> scaled(set.coeffs);
  for (double& a : scaled) a *= 3.0;
  rng::Gaussian noise(77);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<double> y{noise(), noise(), noise()};
    const double base = beta_of(set.coeffs, y);
    const double rescaled = beta_of(scaled, y);
    REQUIRE(rescaled == Approx(base).epsilon(1e-12));
  }
}

TEST_CASE("lag correlations of shared weights") {
  SECTION("order zero, shift one") {
    REQUIRE(lag_correlations(equidistant_coefficients(0), 1) == Approx(-0.5));
  }
  SECTION("no overlap beyond the subset length") {
    REQUIRE(lag_correlations(equidistant_coefficients(1), 3) == 0.0);
    REQUIRE(lag_correlations(equidistant_coefficients(0), 2) == 0.0);
  }
  SECTION("order one values") {
    const CoefficientSet set = equidistant_coefficients(1);
    REQUIRE(lag_correlations(set, 1) == Approx(-2.0 / 3.0));
    REQUIRE(lag_correlations(set, 2) == Approx(1.0 / 6.0));
  }
  SECTION("signs alternate with the shift on equidistant weights") {
    const CoefficientSet set = equidistant_coefficients(4);
    for (int shift = 1; shift <= 5; ++shift) {
      const double rho = lag_correlations(set, shift);
      if (shift % 2 == 1)
        REQUIRE(rho < 0.0);
      else
        REQUIRE(rho > 0.0);
    }
  }
  SECTION("order-zero correlation sum gives the 3/n variance law") {
    const double rho1 = lag_correlations(equidistant_coefficients(0), 1);
    REQUIRE(2.0 * rho1 * rho1 == Approx(0.5));
  }
}

TEST_CASE("overlapping subsets have the predicted covariance") {
  // Index sets {5,6,7} and {7,8,9} with order-one weights share one point;
  // analytic covariance under unit noise is a_2 a_0 / f = 1/6.
  const CoefficientSet set = equidistant_coefficients(1);
  const double expected = set.coeffs[2] * set.coeffs[0] / set.normalization;
  REQUIRE(expected == Approx(1.0 / 6.0));

  rng::Gaussian noise(1234);
  const std::size_t draws = 1'000'000;
  double sum_prod = 0.0;
  double sum_prod2 = 0.0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double e5 = noise(), e6 = noise(), e7 = noise(), e8 = noise(), e9 = noise();
    const double beta_k = (e5 - 2.0 * e6 + e7) / std::sqrt(6.0);
    const double beta_j = (e7 - 2.0 * e8 + e9) / std::sqrt(6.0);
    const double prod = beta_k * beta_j;
    sum_prod += prod;
    sum_prod2 += prod * prod;
  }
  const double mean = sum_prod / static_cast<double>(draws);
  const double var = sum_prod2 / static_cast<double>(draws) - mean * mean;
  const double stderr_mc = std::sqrt(var / static_cast<double>(draws));
  REQUIRE(std::abs(mean - expected) <= 3.0 * stderr_mc);
}
