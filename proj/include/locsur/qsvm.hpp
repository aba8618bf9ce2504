#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "locsur/qstate.hpp"

namespace locsur {

// Two-qubit feature embedding behind the quantum kernel: RY(x_m) on qubit m,
// then one layer of nearest-neighbour CNOTs.
inline StateVector kernel_embed(const Eigen::VectorXd& x) {
  if (x.size() != 2) throw std::invalid_argument("kernel_embed: expects 2 features");
  StateVector st = init_zero(2);
  apply_ry(st, 0, x[0]);
  apply_ry(st, 1, x[1]);
  apply_cnot(st, 0, 1);
  return st;
}

// K(x,x') = |<0|U+(x')U(x)|0>|^2, evaluated by statevector overlap.
inline double kernel_value(const Eigen::VectorXd& x, const Eigen::VectorXd& xp) {
  return overlap_probability(kernel_embed(x), kernel_embed(xp));
}

namespace detail {
inline std::vector<StateVector> embed_rows(const Eigen::MatrixXd& X) {
  std::vector<StateVector> states;
  states.reserve(static_cast<size_t>(X.rows()));
  for (Eigen::Index i = 0; i < X.rows(); ++i)
    states.push_back(kernel_embed(X.row(i).transpose()));
  return states;
}
}  // namespace detail

inline Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& X) {
  const auto states = detail::embed_rows(X);
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd K(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const double v = overlap_probability(states[static_cast<size_t>(i)],
                                           states[static_cast<size_t>(j)]);
      K(i, j) = v;
      K(j, i) = v;
    }
  }
  return K;
}

// Cross-kernel rows: K(i, j) = kernel(A_i, B_j). Embeds each point once.
inline Eigen::MatrixXd kernel_cross(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const auto sa = detail::embed_rows(A);
  const auto sb = detail::embed_rows(B);
  Eigen::MatrixXd K(A.rows(), B.rows());
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < B.rows(); ++j)
      K(i, j) = overlap_probability(sa[static_cast<size_t>(i)], sb[static_cast<size_t>(j)]);
  return K;
}

struct SvmModel {
  Eigen::VectorXd alpha;      // box-constrained duals, 0 <= alpha_i <= C
  Eigen::VectorXd dual_coef;  // alpha_i * y_i
  double bias = 0.0;
  std::vector<Eigen::Index> support;  // indices with alpha_i > 0
  double C = 1.0;
  double platt_a = 0.0;
  double platt_b = 0.0;
  bool platt_fitted = false;
};

// Decision value f(x) = sum_i alpha_i y_i K(x_i, x) + b given the kernel row
// against the training set.
inline double decision_from_krow(const SvmModel& model, const Eigen::VectorXd& krow) {
  if (krow.size() != model.dual_coef.size())
    throw std::invalid_argument("decision_from_krow: kernel row length mismatch");
  return model.dual_coef.dot(krow) + model.bias;
}

// Sequential minimal optimization on the dual with maximal-violating-pair
// working-set selection (ties break to the lowest index), stopping when the
// KKT gap m - M drops below tol.
inline SvmModel smo_train(const Eigen::MatrixXd& K, const Eigen::VectorXd& y, double C,
                          double tol = 1e-3) {
  const Eigen::Index n = K.rows();
  if (K.cols() != n || y.size() != n || n < 2)
    throw std::invalid_argument("smo_train: need square kernel and matching labels");
  if (!(C > 0.0)) throw std::invalid_argument("smo_train: C must be positive");
  bool has_pos = false, has_neg = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (y[i] == 1.0) has_pos = true;
    else if (y[i] == -1.0) has_neg = true;
    else throw std::invalid_argument("smo_train: labels must be exactly +1 or -1");
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("smo_train: both classes required");

  Eigen::VectorXd alpha = Eigen::VectorXd::Zero(n);
  // gradient of the dual objective: G_i = sum_j y_i y_j K_ij alpha_j - 1
  Eigen::VectorXd G = Eigen::VectorXd::Constant(n, -1.0);

  double m_val = 0.0, M_val = 0.0;
  const long max_iter = 1000000;
  for (long iter = 0;; ++iter) {
    if (iter >= max_iter) throw std::runtime_error("smo_train: iteration cap reached");
    Eigen::Index i_sel = -1, j_sel = -1;
    m_val = -std::numeric_limits<double>::infinity();
    M_val = std::numeric_limits<double>::infinity();
    for (Eigen::Index t = 0; t < n; ++t) {
      const double v = -y[t] * G[t];
      const bool in_up = (y[t] == 1.0 && alpha[t] < C) || (y[t] == -1.0 && alpha[t] > 0.0);
      const bool in_low = (y[t] == -1.0 && alpha[t] < C) || (y[t] == 1.0 && alpha[t] > 0.0);
      if (in_up && v > m_val) {
        m_val = v;
        i_sel = t;
      }
      if (in_low && v < M_val) {
        M_val = v;
        j_sel = t;
      }
    }
    if (i_sel < 0 || j_sel < 0 || m_val - M_val < tol) break;

    const Eigen::Index i = i_sel, j = j_sel;
    double quad = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (quad <= 0.0) quad = 1e-12;
    // move along alpha_i += y_i t, alpha_j -= y_j t (preserves sum y.alpha)
    double t_step = (m_val - M_val) / quad;
    auto clamp_t = [C](double yk, double ak, bool plus, double t_in) {
      // bounds keeping ak + (plus ? +yk : -yk) * t inside [0, C]
      const double s = plus ? yk : -yk;
      const double t_lo = s > 0 ? -ak / s : (C - ak) / s;
      const double t_hi = s > 0 ? (C - ak) / s : -ak / s;
      return std::min(std::max(t_in, t_lo), t_hi);
    };
    t_step = clamp_t(y[i], alpha[i], true, t_step);
    t_step = clamp_t(y[j], alpha[j], false, t_step);
    const double dai = y[i] * t_step;
    const double daj = -y[j] * t_step;
    alpha[i] += dai;
    alpha[j] += daj;
    for (Eigen::Index k = 0; k < n; ++k)
      G[k] += y[k] * (y[i] * K(k, i) * dai + y[j] * K(k, j) * daj);
  }

  SvmModel model;
  model.alpha = alpha;
  model.C = C;
  model.dual_coef = alpha.cwiseProduct(y);
  for (Eigen::Index i = 0; i < n; ++i)
    if (alpha[i] > 0.0) model.support.push_back(i);

  // bias from free support vectors (y_i - f_no_bias(x_i)); fall back to the
  // KKT-gap midpoint when every dual sits on the box
  const Eigen::VectorXd u = K * model.dual_coef;
  double acc = 0.0;
  int free_count = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (alpha[i] > 1e-8 && alpha[i] < C - 1e-8) {
      acc += y[i] - u[i];
      ++free_count;
    }
  model.bias = free_count > 0 ? acc / free_count : (m_val + M_val) / 2.0;
  return model;
}

// Platt-scaling sigmoid fit p(y=1|f) = 1/(1+exp(A f + B)) by regularized
// maximum likelihood with prior-corrected targets, Newton iterations with
// backtracking line search. Fit directly on the training decision values.
inline void platt_fit(SvmModel& model, const Eigen::VectorXd& decisions,
                      const Eigen::VectorXd& y, int max_iter = 100) {
  const Eigen::Index n = decisions.size();
  if (y.size() != n || n < 2) throw std::invalid_argument("platt_fit: length mismatch");
  double prior1 = 0.0, prior0 = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) (y[i] == 1.0 ? prior1 : prior0) += 1.0;
  const double hi_t = (prior1 + 1.0) / (prior1 + 2.0);
  const double lo_t = 1.0 / (prior0 + 2.0);
  Eigen::VectorXd t(n);
  for (Eigen::Index i = 0; i < n; ++i) t[i] = y[i] == 1.0 ? hi_t : lo_t;

  double A = 0.0;
  double B = std::log((prior0 + 1.0) / (prior1 + 1.0));
  auto nll = [&](double a, double b) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = decisions[i] * a + b;
      s += f >= 0 ? t[i] * f + std::log1p(std::exp(-f))
                  : (t[i] - 1.0) * f + std::log1p(std::exp(f));
    }
    return s;
  };
  double fval = nll(A, B);
  for (int it = 0; it < max_iter; ++it) {
    double h11 = 1e-12, h22 = 1e-12, h21 = 0.0, g1 = 0.0, g2 = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double f = decisions[i] * A + B;
      const double p = f >= 0 ? std::exp(-f) / (1.0 + std::exp(-f)) : 1.0 / (1.0 + std::exp(f));
      const double q = 1.0 - p;
      h11 += decisions[i] * decisions[i] * p * q;
      h22 += p * q;
      h21 += decisions[i] * p * q;
      g1 += decisions[i] * (t[i] - p);
      g2 += t[i] - p;
    }
    if (std::abs(g1) < 1e-5 && std::abs(g2) < 1e-5) break;
    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;
    double step = 1.0;
    while (step >= 1e-10) {
      const double nA = A + step * dA, nB = B + step * dB;
      const double nf = nll(nA, nB);
      if (nf < fval + 1e-4 * step * gd) {
        A = nA;
        B = nB;
        fval = nf;
        break;
      }
      step /= 2.0;
    }
    if (step < 1e-10) break;  // line search failed; keep current point
  }
  model.platt_a = A;
  model.platt_b = B;
  model.platt_fitted = true;
}

// p(y=1|x) from a decision value. A is negative after fitting on data where
// larger decisions mean the positive class, so p increases with f.
inline double posterior_from_decision(const SvmModel& model, double decision) {
  if (!model.platt_fitted) throw std::logic_error("posterior_from_decision: Platt not fitted");
  const double f = decision * model.platt_a + model.platt_b;
  return f >= 0 ? std::exp(-f) / (1.0 + std::exp(-f)) : 1.0 / (1.0 + std::exp(f));
}

// Linear rescale of a posterior to the Pauli-Z range: p=1 -> +1, p=0 -> -1.
inline double posterior_to_z(double p) { return 2.0 * p - 1.0; }

}  // namespace locsur
