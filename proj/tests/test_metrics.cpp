#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Core>
#include <cmath>

#include "locsur/metrics.hpp"
#include "locsur/rng.hpp"

using namespace locsur;

TEST_CASE("r_squared on the worked three-point example") {
  Eigen::VectorXd y(3), yhat(3);
  y << 1, 2, 3;
  yhat << 1, 2, 2;
  const auto r2 = r_squared(y, yhat);
  REQUIRE(r2.has_value());
  REQUIRE(*r2 == Catch::Approx(0.5).margin(1e-15));  // SS_res 1, SS_tot 2
}

TEST_CASE("r_squared endpoints: perfect fit and mean predictor") {
  Eigen::VectorXd y(4);
  y << 0.3, -1.2, 2.0, 0.9;
  REQUIRE(*r_squared(y, y) == 1.0);

  const Eigen::VectorXd mean_pred = Eigen::VectorXd::Constant(4, y.mean());
  REQUIRE(*r_squared(y, mean_pred) == Catch::Approx(0.0).margin(1e-12));

  // Worse than the mean predictor goes negative.
  Eigen::VectorXd bad(4);
  bad << -2, 4, -5, 6;
  REQUIRE(*r_squared(y, bad) < 0.0);
}

TEST_CASE("r_squared is undefined for constant truth, not NaN") {
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(5, 1.5);
  Eigen::VectorXd yhat(5);
  yhat << 1, 2, 3, 4, 5;
  const auto r2 = r_squared(y, yhat);
  REQUIRE_FALSE(r2.has_value());
}

TEST_CASE("r_squared validates lengths") {
  Eigen::VectorXd a(2), b(3), one(1), one2(1);
  a << 1, 2;
  b << 1, 2, 3;
  one << 1;
  one2 << 1;
  REQUIRE_THROWS_AS(r_squared(a, b), std::invalid_argument);
  REQUIRE_THROWS_AS(r_squared(one, one2), std::invalid_argument);
}

TEST_CASE("r_squared is invariant to a shared constant shift") {
  Rng rng(12);
  Eigen::VectorXd y(20), yhat(20);
  for (int i = 0; i < 20; ++i) {
    y[i] = rng.normal(0.0, 1.0);
    yhat[i] = y[i] + rng.normal(0.0, 0.3);
  }
  const double base = *r_squared(y, yhat);
  const Eigen::VectorXd ys = y.array() + 7.5;
  const Eigen::VectorXd yhats = yhat.array() + 7.5;
  REQUIRE(*r_squared(ys, yhats) == Catch::Approx(base).margin(1e-12));
}

TEST_CASE("mean_squared_error basics") {
  Eigen::VectorXd y(2), yhat(2);
  y << 1, -1;
  yhat << 1, -1;
  REQUIRE(mean_squared_error(y, yhat) == 0.0);
  yhat << -1, 1;
  REQUIRE(mean_squared_error(y, yhat) == 4.0);
  Eigen::VectorXd a(1), b(1);
  a << 0.0;
  b << 0.5;
  REQUIRE(mean_squared_error(a, b) == 0.25);
}

TEST_CASE("accuracy counts matching signs") {
  Eigen::VectorXd y(4), p(4);
  y << 1, 1, -1, -1;
  p << 1, 1, -1, -1;
  REQUIRE(accuracy(y, p) == 1.0);
  p << -1, -1, 1, 1;
  REQUIRE(accuracy(y, p) == 0.0);

  Eigen::VectorXd y100(100), p100(100);
  for (int i = 0; i < 100; ++i) {
    y100[i] = 1.0;
    p100[i] = i < 85 ? 1.0 : -1.0;
  }
  REQUIRE(accuracy(y100, p100) == 0.85);
}

TEST_CASE("relative_error applies the small-denominator guard") {
  Eigen::VectorXd y(3), yhat(3);
  y << 2.0, 1.0, 0.0;
  yhat << 1.0, 1.0, 1.0;
  const Eigen::VectorXd e = relative_error(y, yhat);
  REQUIRE(e[0] == 0.5);
  REQUIRE(e[1] == 0.0);
  REQUIRE(e[2] == 1e8);  // |0-1| / max(|0|, 1e-8)
  REQUIRE((e.array() >= 0.0).all());
}
