#pragma once

#include <Eigen/Core>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace locsur {

// 1 - SS_res/SS_tot; nullopt when the truth is constant (SS_tot = 0), so an
// undefined score can never masquerade as a valid one downstream.
inline std::optional<double> r_squared(const Eigen::VectorXd& y_true,
                                       const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("r_squared: length mismatch");
  if (y_true.size() < 2) throw std::invalid_argument("r_squared: need at least 2 samples");
  const double mean = y_true.mean();
  const double ss_tot = (y_true.array() - mean).square().sum();
  if (ss_tot == 0.0) return std::nullopt;
  const double ss_res = (y_true - y_pred).array().square().sum();
  return 1.0 - ss_res / ss_tot;
}

inline double mean_squared_error(const Eigen::VectorXd& y_true,
                                 const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("mean_squared_error: length mismatch");
  if (y_true.size() == 0) throw std::invalid_argument("mean_squared_error: empty input");
  return (y_true - y_pred).array().square().mean();
}

// fraction of matching entries; inputs are +-1 labels
inline double accuracy(const Eigen::VectorXd& y_true, const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("accuracy: length mismatch");
  if (y_true.size() == 0) throw std::invalid_argument("accuracy: empty input");
  Eigen::Index hits = 0;
  for (Eigen::Index i = 0; i < y_true.size(); ++i)
    if (y_true[i] == y_pred[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

// |y - yhat| / max(|y|, 1e-8), elementwise; the guard keeps near-zero truths
// from dividing out to infinity
inline Eigen::VectorXd relative_error(const Eigen::VectorXd& y_true,
                                      const Eigen::VectorXd& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("relative_error: length mismatch");
  Eigen::VectorXd out(y_true.size());
  for (Eigen::Index i = 0; i < y_true.size(); ++i) {
    const double denom = std::max(std::abs(y_true[i]), 1e-8);
    out[i] = std::abs(y_true[i] - y_pred[i]) / denom;
  }
  return out;
}

}  // namespace locsur
