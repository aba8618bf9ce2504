#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <map>
#include <vector>

#include "locsur/regions.hpp"
#include "locsur/reupload.hpp"
#include "locsur/rng.hpp"
#include "locsur/surrogate.hpp"
#include "locsur/targets.hpp"

using namespace locsur;

namespace {

// Independent least-squares reference over the full complex lattice basis,
// used to bound what any sub-basis fit can achieve on the same samples.
double full_lattice_lsq_mse(const Eigen::VectorXd& values, const Eigen::MatrixXd& X, int L) {
  const FrequencyLattice lat = full_lattice(L, static_cast<int>(X.cols()));
  Eigen::MatrixXcd Phi(X.rows(), lat.vectors.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    for (Eigen::Index k = 0; k < lat.vectors.rows(); ++k) {
      double dot = 0.0;
      for (Eigen::Index j = 0; j < X.cols(); ++j) dot += lat.vectors(k, j) * X(i, j);
      Phi(i, k) = std::polar(1.0, dot);
    }
  const Eigen::VectorXcd beta =
      Phi.colPivHouseholderQr().solve(values.cast<std::complex<double>>().eval());
  const Eigen::VectorXd pred = (Phi * beta).real();
  return (pred - values).squaredNorm() / static_cast<double>(values.size());
}

}  // namespace

TEST_CASE("full lattices enumerate the hypercube of frequencies") {
  const FrequencyLattice l32 = full_lattice(3, 2);
  REQUIRE(l32.vectors.rows() == 49);
  REQUIRE(l32.vectors.cols() == 2);

  const FrequencyLattice l05 = full_lattice(0, 5);
  REQUIRE(l05.vectors.rows() == 1);
  REQUIRE(l05.vectors.row(0).isZero());

  const FrequencyLattice l36 = full_lattice(3, 6);
  REQUIRE(l36.vectors.rows() == 117649);

  // Lexicographic, unique, max-norm bounded.
  std::map<std::vector<int>, int> seen;
  for (Eigen::Index i = 0; i < l32.vectors.rows(); ++i) {
    std::vector<int> row{l32.vectors(i, 0), l32.vectors(i, 1)};
    REQUIRE(std::abs(row[0]) <= 3);
    REQUIRE(std::abs(row[1]) <= 3);
    seen[row] += 1;
  }
  REQUIRE(seen.size() == 49);
  REQUIRE(l32.vectors(0, 0) == -3);
  REQUIRE(l32.vectors(0, 1) == -3);
  REQUIRE(l32.vectors(48, 0) == 3);
  REQUIRE(l32.vectors(48, 1) == 3);
}

TEST_CASE("separable lattices hold the axis frequencies plus the constant") {
  const FrequencyLattice s = separable_lattice(2, 2);
  REQUIRE(s.vectors.rows() == 5);  // {0,0} and k e_j for k=1,2, j=1,2
  int zero_rows = 0, axis_rows = 0;
  for (Eigen::Index i = 0; i < s.vectors.rows(); ++i) {
    const int a = s.vectors(i, 0), b = s.vectors(i, 1);
    if (a == 0 && b == 0) ++zero_rows;
    if ((a == 0) != (b == 0)) ++axis_rows;
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
  }
  REQUIRE(zero_rows == 1);
  REQUIRE(axis_rows == 4);
}

TEST_CASE("unique coefficient counts follow the half-lattice formula") {
  REQUIRE(coefficient_count(3, 1) == 4);
  REQUIRE(coefficient_count(0, 9) == 1);
  REQUIRE(coefficient_count(3, 2) == 25);
  REQUIRE(coefficient_count(3, 6) == 58825);
}

TEST_CASE("1D interval nodes are the equispaced lattice, verbatim") {
  const Eigen::MatrixXd nodes =
      chebyshev_nodes_in_patch(Region{Interval1D{0.0, 2.0 * kPi}}, 1, 1);
  REQUIRE(nodes.rows() == 3);
  REQUIRE(nodes(0, 0) == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(nodes(1, 0) == Catch::Approx(2.0 * kPi / 3.0).margin(1e-14));
  REQUIRE(nodes(2, 0) == Catch::Approx(4.0 * kPi / 3.0).margin(1e-14));
}

TEST_CASE("2D patch nodes form an interior Cartesian lattice") {
  const Region square = HyperCube{1.0, 2};
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(square, 1, 2);
  REQUIRE(nodes.rows() == 9);
  for (Eigen::Index i = 0; i < nodes.rows(); ++i)
    REQUIRE(contains(square, nodes.row(i).transpose()));  // half-step inset

  REQUIRE(chebyshev_nodes_in_patch(square, 3, 2).rows() == 49);

  // The same region always produces the same nodes.
  const Eigen::MatrixXd again = chebyshev_nodes_in_patch(square, 1, 2);
  REQUIRE((nodes - again).norm() == 0.0);
}

TEST_CASE("ball patches inscribe their node lattice") {
  Eigen::VectorXd center(2);
  center << 0.5, -0.25;
  const Region ball = Ball{center, 1.2};
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(ball, 2, 2);
  REQUIRE(nodes.rows() == 25);
  for (Eigen::Index i = 0; i < nodes.rows(); ++i)
    REQUIRE((nodes.row(i).transpose() - center).norm() < 1.2);
}

TEST_CASE("degenerate regions cannot host nodes") {
  REQUIRE_THROWS_AS(chebyshev_nodes_in_patch(Region{Interval1D{0.0, 0.0}}, 1, 1),
                    std::invalid_argument);
}

TEST_CASE("fit_exact recovers cosine coefficients at the three-node lattice") {
  const FrequencyLattice lat = full_lattice(1, 1);
  const Eigen::MatrixXd nodes =
      chebyshev_nodes_in_patch(Region{Interval1D{0.0, 2.0 * kPi}}, 1, 1);
  Eigen::VectorXd values(3);
  for (int i = 0; i < 3; ++i) values[i] = std::cos(nodes(i, 0));
  const ExactFitResult fit = fit_exact(values, lat, nodes);

  // Lattice order is -1, 0, +1; cos x = (e^{-ix} + e^{ix}) / 2.
  REQUIRE(std::abs(fit.surrogate.coefficients[0] - std::complex<double>{0.5, 0.0}) < 1e-12);
  REQUIRE(std::abs(fit.surrogate.coefficients[1]) < 1e-12);
  REQUIRE(std::abs(fit.surrogate.coefficients[2] - std::complex<double>{0.5, 0.0}) < 1e-12);
  REQUIRE(fit.quantum_calls == 3);
  REQUIRE(fit.max_residual < 1e-9);
}

TEST_CASE("fit_exact maps constants to the zero frequency") {
  const FrequencyLattice lat = full_lattice(1, 2);
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(Region{HyperCube{kPi, 2}}, 1, 2);
  const Eigen::VectorXd values = Eigen::VectorXd::Constant(nodes.rows(), 0.37);
  const ExactFitResult fit = fit_exact(values, lat, nodes);
  for (Eigen::Index k = 0; k < lat.vectors.rows(); ++k) {
    if (lat.vectors.row(k).isZero())
      REQUIRE(std::abs(fit.surrogate.coefficients[k] - std::complex<double>{0.37, 0.0}) < 1e-12);
    else
      REQUIRE(std::abs(fit.surrogate.coefficients[k]) < 1e-12);
  }
  REQUIRE(fit.quantum_calls == 9);
}

TEST_CASE("an exact fit of a 2-feature model holds across the whole patch") {
  ReuploadModel m = make_model(AnsatzKind::LineAnsatz, 2, 1, 2);
  Rng rng(7);
  init_theta(m, rng, 1.0);
  const Region patch = HyperCube{kPi, 2};
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(patch, 2, 2);
  REQUIRE(nodes.rows() == 25);
  const ExactFitResult fit = fit_exact(forward_many(m, nodes), spectrum(m), nodes);
  REQUIRE(fit.quantum_calls == 25);
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd x(2);
    x << rng.uniform(-kPi, kPi), rng.uniform(-kPi, kPi);
    REQUIRE(std::abs(evaluate(fit.surrogate, x) - forward(m, x)) < 1e-8);
  }
}

TEST_CASE("real samples give Hermitian coefficient pairs") {
  ReuploadModel m = make_model(AnsatzKind::LineAnsatz, 2, 1, 2);
  Rng rng(19);
  init_theta(m, rng, 1.0);
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(Region{HyperCube{kPi, 2}}, 2, 2);
  const ExactFitResult fit = fit_exact(forward_many(m, nodes), spectrum(m), nodes);

  const auto& vec = fit.surrogate.lattice.vectors;
  std::map<std::vector<int>, std::complex<double>> by_freq;
  for (Eigen::Index k = 0; k < vec.rows(); ++k)
    by_freq[{vec(k, 0), vec(k, 1)}] = fit.surrogate.coefficients[k];
  double max_imag = 0.0;
  for (const auto& [freq, coef] : by_freq) {
    const auto mirror = by_freq.at({-freq[0], -freq[1]});
    REQUIRE(std::abs(coef - std::conj(mirror)) < 1e-9);
    // The imaginary parts cancel pairwise, so evaluate() may truncate them.
    max_imag = std::max(max_imag, std::abs((coef + mirror).imag()));
  }
  REQUIRE(max_imag < 1e-9);
}

TEST_CASE("singular node sets are a hard failure with a condition estimate") {
  const FrequencyLattice lat = full_lattice(1, 1);
  Eigen::MatrixXd nodes(3, 1);
  nodes << 0.0, 0.0, 1.0;  // duplicated node row
  Eigen::VectorXd values(3);
  values << 1.0, 1.0, 0.5;
  try {
    fit_exact(values, lat, nodes);
    FAIL("expected FitError");
  } catch (const FitError& e) {
    REQUIRE(e.condition > 1e12);
  }
}

TEST_CASE("separable design widths track k_max and dimension") {
  Rng rng(5);
  auto random_samples = [&rng](int n, int d) {
    Eigen::MatrixXd X(n, d);
    for (Eigen::Index i = 0; i < X.size(); ++i)
      X.data()[i] = rng.uniform(0.0, 2.0 * kPi);
    return X;
  };

  const Eigen::MatrixXd X6 = random_samples(50, 6);
  Eigen::VectorXd y6(50);
  for (int i = 0; i < 50; ++i) y6[i] = std::sin(X6(i, 0)) + 0.2 * std::cos(2.0 * X6(i, 3));
  const SeparableFitResult r6 = fit_separable(y6, X6, 3);
  REQUIRE(r6.columns == 37);  // 1 + 2*3*6

  const Eigen::MatrixXd X2 = random_samples(20, 2);
  Eigen::VectorXd y2(20);
  for (int i = 0; i < 20; ++i) y2[i] = std::cos(X2(i, 1));
  REQUIRE(fit_separable(y2, X2, 2).columns == 9);  // 1 + 4*k_max in 2D
}

TEST_CASE("a separable target is fit to machine precision") {
  Rng rng(8);
  Eigen::MatrixXd X(12, 2);
  for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = rng.uniform(0.0, 2.0 * kPi);
  Eigen::VectorXd y(12);
  for (int i = 0; i < 12; ++i) y[i] = std::sin(2.0 * X(i, 0));
  const SeparableFitResult fit = fit_separable(y, X, 2);
  REQUIRE(fit.patch_mse < 1e-12);
  for (int i = 0; i < 12; ++i)
    REQUIRE(std::abs(evaluate(fit.surrogate, X.row(i).transpose()) - y[i]) < 1e-6);
}

TEST_CASE("underdetermined and rank-deficient separable fits are typed errors") {
  Rng rng(9);
  Eigen::MatrixXd small(5, 2);
  for (Eigen::Index i = 0; i < small.size(); ++i) small.data()[i] = rng.uniform(0.0, 2.0 * kPi);
  REQUIRE_THROWS_AS(fit_separable(Eigen::VectorXd::Ones(5), small, 2), std::invalid_argument);

  // Axis-aligned grid samples span too few separable directions: on a w x w
  // grid the basis functions satisfy linear dependences, so the normal system
  // is rank deficient even with enough rows.
  Eigen::MatrixXd grid(9, 2);
  int r = 0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) grid.row(r++) << 0.5 + a, 0.25 + b;
  REQUIRE_THROWS_AS(fit_separable(Eigen::VectorXd::Ones(9), grid, 2), FitError);
}

TEST_CASE("the separable basis never beats the full lattice it sits inside") {
  Rng rng(10);
  const TargetFunction t("big_trig", 0);
  for (int rep = 0; rep < 5; ++rep) {
    Eigen::MatrixXd X(30, 2);
    Eigen::VectorXd y(30);
    for (int i = 0; i < 30; ++i) {
      X(i, 0) = rng.uniform(-kPi, kPi);
      X(i, 1) = rng.uniform(-kPi, kPi);
      y[i] = t(X(i, 0), X(i, 1));
    }
    const SeparableFitResult sep = fit_separable(y, X, 2);
    const double full_mse = full_lattice_lsq_mse(y, X, 2);
    REQUIRE(sep.patch_mse >= full_mse - 1e-12);
  }
}

TEST_CASE("series evaluation on hand-built coefficient sets") {
  FourierSurrogate s;
  s.lattice = full_lattice(1, 1);
  s.coefficients = Eigen::VectorXcd::Zero(3);
  Eigen::VectorXd x(1);
  x << 0.7;
  REQUIRE(evaluate(s, x) == 0.0);

  s.coefficients[1] = std::complex<double>{0.5, 0.0};  // the zero-frequency slot
  REQUIRE(evaluate(s, x) == Catch::Approx(0.5).margin(1e-15));

  s.coefficients[1] = {0.0, 0.0};
  s.coefficients[0] = {0.5, 0.0};
  s.coefficients[2] = {0.5, 0.0};
  x << 0.0;
  REQUIRE(evaluate(s, x) == Catch::Approx(1.0).margin(1e-15));  // cos(0)

  REQUIRE_THROWS_AS(evaluate(s, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("the invocation bound follows its closed form") {
  const double direct = invocation_bound(117649, 1.0, 0.1, 0.01);
  const double expected =
      2.0 * 117649.0 * 1.0 / (0.1 * 0.1) * (std::log(1.0 / 0.01) + 117649.0 * std::log(2.0));
  REQUIRE(direct == Catch::Approx(expected).epsilon(1e-14));

  REQUIRE(invocation_bound(10, 1.0, 1e9, 0.01) < 1e-6);  // loose epsilon kills the bound
  const double t1 = invocation_bound(100, 1.0, 0.1, 0.01);
  const double t2 = invocation_bound(200, 1.0, 0.1, 0.01);
  REQUIRE(t2 > 2.0 * t1);  // T appears in both factors
}
