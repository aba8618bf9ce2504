#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Core>
#include <cmath>

#include "locsur/targets.hpp"

using namespace locsur;

TEST_CASE("fixed 2D targets reproduce hand-computed values") {
  const TargetFunction comb("combined_osc", 0);
  // 0.05*0 - 0.10*0 + 0.60*cos 0 - 0.40*sin 0 + 0.35*cos 0 + 0.20*sin 0
  REQUIRE(comb(0.0, 0.0) == Catch::Approx(0.95).margin(1e-15));

  const TargetFunction poly("polynomial", 0);
  // 0.10 - 0.20 + 0.30 - 0.40 + 2.0
  REQUIRE(poly(1.0, 1.0) == Catch::Approx(1.8).margin(1e-15));

  const TargetFunction sinc("sinc", 0);
  REQUIRE(sinc(0.0, 0.0) == Catch::Approx(1.0).margin(1e-8));  // sin(eps)/eps
}

TEST_CASE("every catalogued target is constructible and bounded on the grid") {
  SampleGrid grid{{AxisSpec{-kPi, kPi, 22, true}, AxisSpec{-kPi, kPi, 22, true}}};
  for (const auto& name : TargetFunction::all_names()) {
    const TargetFunction t(name, 99);
    const GridSamples gs = grid_sample(t, grid);
    REQUIRE(gs.X.rows() == 484);
    REQUIRE(gs.y.size() == 484);
    REQUIRE(gs.y.allFinite());
  }
  REQUIRE_THROWS_AS(TargetFunction("no_such_target", 0), std::invalid_argument);
}

TEST_CASE("seeded random targets are reproducible and seed-sensitive") {
  for (const std::string name : {"random_trig", "random_trig2", "random_fourier"}) {
    const TargetFunction a(name, 7), b(name, 7), c(name, 8);
    bool any_diff = false;
    for (double x = -3.0; x <= 3.0; x += 0.7)
      for (double y = -3.0; y <= 3.0; y += 0.9) {
        REQUIRE(a(x, y) == b(x, y));
        if (a(x, y) != c(x, y)) any_diff = true;
      }
    REQUIRE(any_diff);
  }
}

TEST_CASE("the 1D series target sums its coefficients at zero") {
  // c0 + sum_n 2*Re(c_n) = 0.1 + 3 * 2 * 0.15
  REQUIRE(fourier1d_target(0.0) == Catch::Approx(1.0).margin(1e-15));
}

TEST_CASE("the 1D series target has period pi") {
  for (double x = -6.0; x <= 6.0; x += 0.37)
    REQUIRE(fourier1d_target(x + kPi) == Catch::Approx(fourier1d_target(x)).margin(1e-12));
}

TEST_CASE("the 1D series target has mean equal to its constant term") {
  // Equispaced sums are exact for trigonometric polynomials once the node
  // count clears the bandwidth, so 64 points integrate the series exactly.
  const int n = 64;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) acc += fourier1d_target(kPi * i / n);
  REQUIRE(acc / n == Catch::Approx(0.1).margin(1e-12));
}

TEST_CASE("axis_points spacing follows the endpoint flag") {
  const Eigen::VectorXd closed = axis_points(AxisSpec{0.0, 1.0, 5, true});
  REQUIRE(closed.size() == 5);
  REQUIRE(closed[0] == 0.0);
  REQUIRE(closed[4] == 1.0);
  REQUIRE(closed[1] == Catch::Approx(0.25));

  const Eigen::VectorXd open = axis_points(AxisSpec{-6.0, 6.0, 120, false});
  REQUIRE(open.size() == 120);
  REQUIRE(open[0] == -6.0);
  REQUIRE(open[1] == Catch::Approx(-5.9));
  REQUIRE(open[119] == Catch::Approx(5.9));
}

TEST_CASE("grid_sample is row-major with the first axis outermost") {
  const TargetFunction t("polynomial", 0);
  SampleGrid grid{{AxisSpec{0.0, 1.0, 2, true}, AxisSpec{0.0, 1.0, 2, true}}};
  const GridSamples gs = grid_sample(t, grid);
  REQUIRE(gs.X.rows() == 4);
  REQUIRE(gs.X(0, 0) == 0.0);
  REQUIRE(gs.X(0, 1) == 0.0);
  REQUIRE(gs.X(1, 0) == 0.0);  // second axis varies fastest
  REQUIRE(gs.X(1, 1) == 1.0);
  REQUIRE(gs.X(2, 0) == 1.0);
  REQUIRE(gs.X(2, 1) == 0.0);
  for (int i = 0; i < 4; ++i)
    REQUIRE(gs.y[i] == t(gs.X(i, 0), gs.X(i, 1)));
}

TEST_CASE("grid_sample_1d pairs samples with target values") {
  const GridSamples gs = grid_sample_1d(fourier1d_target, AxisSpec{-6.0, 6.0, 120, false});
  REQUIRE(gs.X.rows() == 120);
  REQUIRE(gs.X.cols() == 1);
  for (int i = 0; i < 120; i += 17)
    REQUIRE(gs.y[i] == fourier1d_target(gs.X(i, 0)));
}
