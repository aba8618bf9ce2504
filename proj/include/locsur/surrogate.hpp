#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "locsur/regions.hpp"

namespace locsur {

enum class LatticeKind { FullSquare, Separable };

// Finite set of integer frequency vectors, unique and lexicographically
// ordered. FullSquare(L) is {-L..L}^d; Separable(k_max) is {0} plus the
// positive multiples k*e_j, k = 1..k_max (negative multiples are implied by
// the real-series evaluation).
struct FrequencyLattice {
  int d = 1;
  LatticeKind kind = LatticeKind::FullSquare;
  int order = 0;  // L for FullSquare, k_max for Separable
  Eigen::MatrixXi vectors;  // one frequency vector per row
};

namespace detail {
inline void sort_rows_lex(Eigen::MatrixXi& m) {
  std::vector<Eigen::Index> idx(static_cast<size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) idx[static_cast<size_t>(i)] = i;
  std::sort(idx.begin(), idx.end(), [&m](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (m(a, c) != m(b, c)) return m(a, c) < m(b, c);
    }
    return false;
  });
  Eigen::MatrixXi sorted(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) sorted.row(i) = m.row(idx[static_cast<size_t>(i)]);
  m = sorted;
}
}  // namespace detail

inline FrequencyLattice full_lattice(int L, int d) {
  if (L < 0 || d < 1) throw std::invalid_argument("full_lattice: need L >= 0, d >= 1");
  const int side = 2 * L + 1;
  Eigen::Index count = 1;
  for (int j = 0; j < d; ++j) count *= side;
  FrequencyLattice lat;
  lat.d = d;
  lat.kind = LatticeKind::FullSquare;
  lat.order = L;
  lat.vectors.resize(count, d);
  std::vector<int> v(static_cast<size_t>(d), -L);
  for (Eigen::Index r = 0; r < count; ++r) {
    for (int j = 0; j < d; ++j) lat.vectors(r, j) = v[static_cast<size_t>(j)];
    for (int j = d - 1; j >= 0; --j) {  // odometer, last axis fastest = lex order
      if (++v[static_cast<size_t>(j)] <= L) break;
      v[static_cast<size_t>(j)] = -L;
    }
  }
  return lat;
}

inline FrequencyLattice separable_lattice(int k_max, int d) {
  if (k_max < 1 || d < 1)
    throw std::invalid_argument("separable_lattice: need k_max >= 1, d >= 1");
  FrequencyLattice lat;
  lat.d = d;
  lat.kind = LatticeKind::Separable;
  lat.order = k_max;
  lat.vectors = Eigen::MatrixXi::Zero(1 + k_max * d, d);
  Eigen::Index r = 1;
  for (int j = 0; j < d; ++j)
    for (int k = 1; k <= k_max; ++k, ++r) lat.vectors(r, j) = k;
  detail::sort_rows_lex(lat.vectors);
  return lat;
}

// N_c = ((2D+1)^M - 1)/2 + 1: distinct coefficients of a real series with
// per-feature degree D in M features, after Hermitian pairing.
inline int64_t coefficient_count(int D, int M) {
  if (D < 0 || M < 1) throw std::invalid_argument("coefficient_count: need D >= 0, M >= 1");
  int64_t p = 1;
  for (int j = 0; j < M; ++j) p *= 2 * D + 1;
  return (p - 1) / 2 + 1;
}

// Truncated Fourier series g(x) = Re sum_k alpha_k e^{i k.x}.
struct FourierSurrogate {
  FrequencyLattice lattice;
  Eigen::VectorXcd coefficients;
};

inline double evaluate(const FourierSurrogate& s, const Eigen::VectorXd& x) {
  if (x.size() != s.lattice.d)
    throw std::invalid_argument("evaluate: dimension mismatch");
  if (s.coefficients.size() != s.lattice.vectors.rows())
    throw std::invalid_argument("evaluate: coefficient/lattice size mismatch");
  std::complex<double> acc(0.0, 0.0);
  for (Eigen::Index r = 0; r < s.lattice.vectors.rows(); ++r) {
    double phase = 0.0;
    for (int j = 0; j < s.lattice.d; ++j)
      phase += static_cast<double>(s.lattice.vectors(r, j)) * x[j];
    acc += s.coefficients[r] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc.real();
}

inline Eigen::VectorXd evaluate_many(const FourierSurrogate& s, const Eigen::MatrixXd& X) {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = evaluate(s, X.row(i).transpose());
  return out;
}

// Interpolation nodes: the canonical (2L+1)-per-axis lattice, equispaced in
// angle over [0, 2pi) (the trigonometric analogue of Chebyshev spacing),
// affinely rescaled into the region. A half-open Interval1D takes the lattice
// verbatim (left edge included, missing right edge never hit); all other
// region kinds get a half-step inset so no node touches their boundary.
inline Eigen::MatrixXd chebyshev_nodes_in_patch(const Region& region, int L, int d) {
  if (L < 0 || d < 1)
    throw std::invalid_argument("chebyshev_nodes_in_patch: need L >= 0, d >= 1");
  if (region_dim(region) != d)
    throw std::invalid_argument("chebyshev_nodes_in_patch: region dimension mismatch");
  const BoundingBox box = region_box(region);
  for (int j = 0; j < d; ++j)
    if (!(box.hi[j] > box.lo[j]))
      throw std::invalid_argument("chebyshev_nodes_in_patch: degenerate region extent");
  const bool inset = !std::holds_alternative<Interval1D>(region);
  const int side = 2 * L + 1;
  Eigen::MatrixXd axes(side, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < side; ++i) {
      const double u = (static_cast<double>(i) + (inset ? 0.5 : 0.0)) /
                       static_cast<double>(side);
      axes(i, j) = box.lo[j] + u * (box.hi[j] - box.lo[j]);
    }
  Eigen::Index count = 1;
  for (int j = 0; j < d; ++j) count *= side;
  Eigen::MatrixXd nodes(count, d);
  std::vector<int> v(static_cast<size_t>(d), 0);
  for (Eigen::Index r = 0; r < count; ++r) {
    for (int j = 0; j < d; ++j) nodes(r, j) = axes(v[static_cast<size_t>(j)], j);
    for (int j = d - 1; j >= 0; --j) {
      if (++v[static_cast<size_t>(j)] < side) break;
      v[static_cast<size_t>(j)] = 0;
    }
  }
  return nodes;
}

// Raised when a coefficient solve is numerically untrustworthy; carries the
// condition estimate so callers can log it.
struct FitError : std::runtime_error {
  double condition;
  explicit FitError(const std::string& msg, double cond)
      : std::runtime_error(msg), condition(cond) {}
};

struct ExactFitResult {
  FourierSurrogate surrogate;
  double condition = 0.0;
  double max_residual = 0.0;
  int64_t quantum_calls = 0;  // one model query per node
};

// Square interpolation solve Phi alpha = y with Phi_ij = e^{i k_j . X_i}.
// Uses column-pivoted QR; a condition number above 1e12 or a residual above
// 1e-9 is a hard failure rather than a silently bad surrogate.
inline ExactFitResult fit_exact(const Eigen::VectorXd& values,
                                const FrequencyLattice& lattice,
                                const Eigen::MatrixXd& nodes) {
  const Eigen::Index n = lattice.vectors.rows();
  if (values.size() != n || nodes.rows() != n)
    throw std::invalid_argument("fit_exact: need exactly one value per lattice vector per node");
  if (nodes.cols() != lattice.d) throw std::invalid_argument("fit_exact: node dimension mismatch");

  Eigen::MatrixXcd phi(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double phase = 0.0;
      for (int c = 0; c < lattice.d; ++c)
        phase += static_cast<double>(lattice.vectors(j, c)) * nodes(i, c);
      phi(i, j) = std::complex<double>(std::cos(phase), std::sin(phase));
    }

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(phi);
  const double smin = svd.singularValues()[n - 1];
  const double cond = smin > 0.0 ? svd.singularValues()[0] / smin
                                 : std::numeric_limits<double>::infinity();
  if (!(cond <= 1e12))
    throw FitError("fit_exact: design matrix condition number exceeds 1e12", cond);

  const Eigen::VectorXcd y = values.cast<std::complex<double>>();
  Eigen::VectorXcd alpha = phi.colPivHouseholderQr().solve(y);
  const double resid = (phi * alpha - y).cwiseAbs().maxCoeff();
  if (!(resid < 1e-9))
    throw FitError("fit_exact: interpolation residual exceeds 1e-9", cond);

  ExactFitResult out;
  out.surrogate.lattice = lattice;
  out.surrogate.coefficients = alpha;
  out.condition = cond;
  out.max_residual = resid;
  out.quantum_calls = n;
  return out;
}

struct SeparableFitResult {
  FourierSurrogate surrogate;
  int columns = 0;
  double patch_mse = 0.0;
};

// Least-squares fit over the separable real basis {1, cos(k x_j), sin(k x_j)},
// 1 + 2*k_max*d columns. The solved real pair (c, s) per frequency k*e_j is
// stored as the single complex coefficient c - i s, so evaluation shares the
// e^{i k.x} code path.
inline SeparableFitResult fit_separable(const Eigen::VectorXd& values,
                                        const Eigen::MatrixXd& X, int k_max) {
  if (k_max < 1) throw std::invalid_argument("fit_separable: need k_max >= 1");
  if (values.size() != X.rows()) throw std::invalid_argument("fit_separable: length mismatch");
  const int d = static_cast<int>(X.cols());
  const int cols = 1 + 2 * k_max * d;
  if (X.rows() < cols)
    throw std::invalid_argument("fit_separable: underdetermined (" + std::to_string(X.rows()) +
                                " samples for " + std::to_string(cols) + " columns)");

  Eigen::MatrixXd psi(X.rows(), cols);
  psi.col(0).setOnes();
  int c = 1;
  for (int j = 0; j < d; ++j)
    for (int k = 1; k <= k_max; ++k) {
      psi.col(c++) = (static_cast<double>(k) * X.col(j)).array().cos();
      psi.col(c++) = (static_cast<double>(k) * X.col(j)).array().sin();
    }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(psi);
  if (qr.rank() < cols) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(psi);
    const double smin = svd.singularValues()[cols - 1];
    throw FitError("fit_separable: rank-deficient design matrix",
                   smin > 0.0 ? svd.singularValues()[0] / smin
                              : std::numeric_limits<double>::infinity());
  }
  const Eigen::VectorXd beta = qr.solve(values);

  SeparableFitResult out;
  out.columns = cols;
  out.patch_mse = (psi * beta - values).squaredNorm() / static_cast<double>(values.size());
  out.surrogate.lattice = separable_lattice(k_max, d);

  // place beta onto the lexicographically sorted lattice rows
  const auto& vecs = out.surrogate.lattice.vectors;
  out.surrogate.coefficients.resize(vecs.rows());
  for (Eigen::Index r = 0; r < vecs.rows(); ++r) {
    int j = -1, k = 0;
    for (int col = 0; col < d; ++col)
      if (vecs(r, col) != 0) {
        j = col;
        k = vecs(r, col);
      }
    if (j < 0) {
      out.surrogate.coefficients[r] = std::complex<double>(beta[0], 0.0);
    } else {
      const int base = 1 + 2 * (j * k_max + (k - 1));
      out.surrogate.coefficients[r] = std::complex<double>(beta[base], -beta[base + 1]);
    }
  }
  return out;
}

// Worst-case model invocations for coefficient estimation to accuracy eps
// with confidence 1-delta: N = 2 T M^2 / eps^2 (ln(1/delta) + T ln 2).
// Reported analytically; nothing is sampled.
inline double invocation_bound(int64_t T, double M_norm, double epsilon, double delta) {
  if (T < 1 || !(M_norm > 0.0) || !(epsilon > 0.0) || !(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("invocation_bound: invalid arguments");
  const double t = static_cast<double>(T);
  return 2.0 * t * M_norm * M_norm / (epsilon * epsilon) *
         (std::log(1.0 / delta) + t * std::log(2.0));
}

}  // namespace locsur
