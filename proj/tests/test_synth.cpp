#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "betasigma/synth.hpp"

using namespace betasigma;
using Catch::Approx;

TEST_CASE("sine generation") {
  SECTION("noise-free values follow the sine") {
    SineSpec spec;
    spec.period = 0.4;  // four samples per oscillation
    spec.delta_t = 0.1;
    spec.n_points = 8;
    spec.sigma0 = 0.0;
    const SeriesData data = generate_sine(spec);
    REQUIRE(data.y[0] == Approx(0.0).margin(1e-15));
    REQUIRE(data.y[1] == Approx(1.0));
    REQUIRE((*data.t)[3] == Approx(0.3));
  }
  SECTION("seeding is deterministic") {
    SineSpec spec;
    spec.period = 2.0;
    spec.n_points = 500;
    spec.seed = 99;
    const SeriesData a = generate_sine(spec);
    const SeriesData b = generate_sine(spec);
    REQUIRE(a.y == b.y);
    spec.seed = 100;
    REQUIRE(generate_sine(spec).y != a.y);
  }
  SECTION("noise scale is honored") {
    SineSpec spec;
    spec.period = 1e9;  // effectively flat
    spec.amplitude = 0.0;
    spec.n_points = 100000;
    spec.sigma0 = 0.5;
    spec.seed = 4;
    const SeriesData data = generate_sine(spec);
    double acc = 0.0;
    for (double v : data.y) acc += v * v;
    REQUIRE(std::sqrt(acc / static_cast<double>(data.size())) == Approx(0.5).epsilon(0.01));
  }
  SECTION("invalid specs are rejected") {
    SineSpec bad;
    bad.period = 0.0;
    REQUIRE_THROWS_AS(generate_sine(bad), Error);
  }
}

TEST_CASE("deviation grid flags undersampled oscillations") {
  const DeviationReport report =
      sine_deviation_table({200.0, 6.0}, {0, 5}, 40, 606);
  REQUIRE(report.deviation.size() == 2);
  REQUIRE(std::abs(report.deviation[0][0]) < 2.0);   // well sampled, order 0 suffices
  REQUIRE(std::abs(report.deviation[0][1]) < 2.0);
  REQUIRE(report.deviation[1][0] >= 2.0);            // six samples per cycle at order 0

  const DeviationReport again = sine_deviation_table({200.0, 6.0}, {0, 5}, 40, 606);
  REQUIRE(again.deviation == report.deviation);
}

TEST_CASE("order correlation matrix") {
  const std::vector<int> orders{0, 1, 4};
  const auto corr = order_correlation_matrix(1000, orders, 600, 11);
  REQUIRE(corr.size() == 3);
  for (std::size_t a = 0; a < 3; ++a) {
    REQUIRE(corr[a][a] == 1.0);
    for (std::size_t b = 0; b < 3; ++b) REQUIRE(corr[a][b] == corr[b][a]);
  }
  REQUIRE(corr[0][1] > 0.95);
  REQUIRE(corr[0][1] < 1.0);
  REQUIRE(corr[0][2] > 0.80);
  REQUIRE(corr[0][2] < 0.95);
  REQUIRE(corr[0][2] < corr[0][1]);
}

TEST_CASE("alternating series generation") {
  const SeriesData data = pathological_series(4);
  REQUIRE(data.y == std::vector<double>{1.0, -1.0, 1.0, -1.0});
  REQUIRE_FALSE(data.has_positions());
  REQUIRE_THROWS_AS(pathological_series(1), Error);
}

TEST_CASE("efficiency curve") {
  std::vector<int> orders;
  for (int n = 0; n <= 10; ++n) orders.push_back(n);
  const auto curve = efficiency_curve(orders, 1000);

  SECTION("order zero is the reference for shifted subsets") {
    REQUIRE(curve[0].shifted == 1.0);
    REQUIRE(curve[0].independent == Approx(0.75));
  }
  SECTION("independent mode follows the (N+2)/2 sample-size law") {
    REQUIRE(curve[0].independent / curve[2].independent == Approx(2.0));
    const double variance_ratio = curve[2].independent / curve[0].independent;
    REQUIRE(variance_ratio == Approx(0.5));
  }
  SECTION("higher orders always cost efficiency, shifted always wins") {
    for (std::size_t i = 0; i < curve.size(); ++i) {
      if (i > 0) {
        REQUIRE(curve[i].shifted < curve[i - 1].shifted);
        REQUIRE(curve[i].independent < curve[i - 1].independent);
      }
      REQUIRE(curve[i].shifted > curve[i].independent);
    }
  }
  SECTION("input validation") {
    REQUIRE_THROWS_AS(efficiency_curve({}, 1000), Error);
    REQUIRE_THROWS_AS(efficiency_curve({5}, 4), Error);
  }
}

TEST_CASE("random streams are reproducible and well separated") {
  rng::Gaussian a(123), b(123), c(124);
  for (int i = 0; i < 100; ++i) REQUIRE(a() == b());
  bool differs = false;
  rng::Gaussian a2(123);
  for (int i = 0; i < 100; ++i) differs |= (a2() != c());
  REQUIRE(differs);

  REQUIRE(rng::derive_seed(1, 0) != rng::derive_seed(1, 1));
  REQUIRE(rng::derive_seed(1, 0) != rng::derive_seed(2, 0));

  rng::Gaussian moments(31415);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = moments();
    sum += x;
    sum2 += x * x;
  }
  REQUIRE(sum / n == Approx(0.0).margin(0.01));
  REQUIRE(sum2 / n == Approx(1.0).epsilon(0.01));
}
