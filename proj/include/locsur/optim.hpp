#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "locsur/reupload.hpp"
#include "locsur/rng.hpp"

namespace locsur {

enum class OptimizerKind { Adam, Nesterov, NelderMead };

inline std::string optimizer_name(OptimizerKind k) {
  switch (k) {
    case OptimizerKind::Adam: return "adam";
    case OptimizerKind::Nesterov: return "nesterov";
    case OptimizerKind::NelderMead: return "nelder_mead";
  }
  throw std::logic_error("optimizer_name: unreachable");
}

inline OptimizerKind optimizer_from_name(const std::string& s) {
  if (s == "adam") return OptimizerKind::Adam;
  if (s == "nesterov") return OptimizerKind::Nesterov;
  if (s == "nelder_mead") return OptimizerKind::NelderMead;
  throw std::invalid_argument("optimizer_from_name: unknown optimizer '" + s + "'");
}

constexpr int kFullBatch = -1;

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::Adam;
  int steps = 60;
  double learning_rate = 0.3;
  int batch_size = kFullBatch;  // kFullBatch = use every sample each step
  uint64_t seed = 0;            // drives minibatch shuffling only
  double momentum = 0.9;        // Nesterov only
};

struct TrainReport {
  std::vector<double> loss_trace;  // full-data MSE after each step
  Eigen::VectorXd final_theta;
  int steps_run = 0;
  double initial_loss = 0.0;  // full-data MSE before the first update
};

struct DivergenceError : std::runtime_error {
  int step;
  DivergenceError(int step_, double loss)
      : std::runtime_error("training diverged at step " + std::to_string(step_) +
                           " (loss " + std::to_string(loss) + ")"),
        step(step_) {}
};

inline double mse_loss(const ReuploadModel& model, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& y) {
  if (X.rows() != y.size() || y.size() == 0)
    throw std::invalid_argument("mse_loss: need matching, non-empty samples");
  return (forward_many(model, X) - y).squaredNorm() / static_cast<double>(y.size());
}

// Exact MSE gradient via the two-point parameter-shift rule. Valid because
// every trainable angle generates a Pauli-half rotation:
//   d f / d theta_j = (f(theta_j + pi/2) - f(theta_j - pi/2)) / 2.
inline Eigen::VectorXd parameter_shift_grad(const ReuploadModel& model,
                                            const Eigen::MatrixXd& X,
                                            const Eigen::VectorXd& y) {
  if (X.rows() != y.size() || y.size() == 0)
    throw std::invalid_argument("parameter_shift_grad: need matching, non-empty samples");
  const double inv_n = 1.0 / static_cast<double>(y.size());
  const Eigen::VectorXd resid = 2.0 * inv_n * (forward_many(model, X) - y);
  ReuploadModel shifted = model;
  Eigen::VectorXd grad(model.theta.size());
  constexpr double kHalfPi = 1.57079632679489661923;
  for (Eigen::Index j = 0; j < model.theta.size(); ++j) {
    const double old = shifted.theta[j];
    shifted.theta[j] = old + kHalfPi;
    const Eigen::VectorXd fp = forward_many(shifted, X);
    shifted.theta[j] = old - kHalfPi;
    const Eigen::VectorXd fm = forward_many(shifted, X);
    shifted.theta[j] = old;
    grad[j] = resid.dot((fp - fm) * 0.5);
  }
  return grad;
}

namespace detail {

inline void check_divergence(double loss, int step) {
  if (!std::isfinite(loss) || loss > 1e6) throw DivergenceError(step, loss);
}

// Epoch-wise sampling without replacement: hands out the shuffled order in
// batch-size chunks and reshuffles whenever fewer than one chunk remains.
class BatchSampler {
 public:
  BatchSampler(Eigen::Index n, int batch_size, uint64_t seed)
      : n_(n), rng_(seed), order_(static_cast<size_t>(n)) {
    batch_ = batch_size == kFullBatch
                 ? n
                 : std::min<Eigen::Index>(batch_size, n);
    std::iota(order_.begin(), order_.end(), Eigen::Index{0});
    pos_ = n_;  // force an initial shuffle unless the batch is the full set
  }

  bool full_batch() const { return batch_ == n_; }

  std::vector<Eigen::Index> next() {
    if (full_batch()) {
      std::vector<Eigen::Index> all(static_cast<size_t>(n_));
      std::iota(all.begin(), all.end(), Eigen::Index{0});
      return all;
    }
    if (pos_ + batch_ > n_) {
      rng_.shuffle(order_);
      pos_ = 0;
    }
    std::vector<Eigen::Index> idx(order_.begin() + pos_, order_.begin() + pos_ + batch_);
    pos_ += batch_;
    return idx;
  }

 private:
  Eigen::Index n_;
  Eigen::Index batch_ = 1;
  Rng rng_;
  std::vector<Eigen::Index> order_;
  Eigen::Index pos_ = 0;
};

inline void take_rows(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                      const std::vector<Eigen::Index>& idx, Eigen::MatrixXd& Xb,
                      Eigen::VectorXd& yb) {
  Xb.resize(static_cast<Eigen::Index>(idx.size()), X.cols());
  yb.resize(static_cast<Eigen::Index>(idx.size()));
  for (size_t i = 0; i < idx.size(); ++i) {
    Xb.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
    yb[static_cast<Eigen::Index>(i)] = y[idx[i]];
  }
}

// Bias-corrected Adam update (beta1 0.9, beta2 0.999, eps 1e-8), kept as a
// standalone stepper so it can be exercised on analytic gradients directly.
struct AdamState {
  Eigen::VectorXd m, v;
  int t = 0;

  explicit AdamState(Eigen::Index n)
      : m(Eigen::VectorXd::Zero(n)), v(Eigen::VectorXd::Zero(n)) {}

  void apply(Eigen::VectorXd& theta, const Eigen::VectorXd& g, double learning_rate) {
    constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
    ++t;
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseProduct(g);
    const double bc1 = 1.0 - std::pow(kBeta1, t);
    const double bc2 = 1.0 - std::pow(kBeta2, t);
    theta -= learning_rate *
             (m / bc1).cwiseQuotient(((v / bc2).cwiseSqrt().array() + kEps).matrix());
  }
};

inline TrainReport train_adam(ReuploadModel model, const Eigen::MatrixXd& X,
                              const Eigen::VectorXd& y, const TrainConfig& cfg) {
  AdamState adam(model.theta.size());
  BatchSampler sampler(X.rows(), cfg.batch_size, cfg.seed);
  TrainReport report;
  report.initial_loss = mse_loss(model, X, y);
  Eigen::MatrixXd Xb;
  Eigen::VectorXd yb;
  for (int t = 1; t <= cfg.steps; ++t) {
    take_rows(X, y, sampler.next(), Xb, yb);
    const Eigen::VectorXd g = parameter_shift_grad(model, Xb, yb);
    adam.apply(model.theta, g, cfg.learning_rate);
    const double loss = mse_loss(model, X, y);
    check_divergence(loss, t);
    report.loss_trace.push_back(loss);
  }
  report.final_theta = model.theta;
  report.steps_run = cfg.steps;
  return report;
}

inline TrainReport train_nesterov(ReuploadModel model, const Eigen::MatrixXd& X,
                                  const Eigen::VectorXd& y, const TrainConfig& cfg) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(model.theta.size());
  BatchSampler sampler(X.rows(), cfg.batch_size, cfg.seed);
  TrainReport report;
  report.initial_loss = mse_loss(model, X, y);
  ReuploadModel lookahead = model;
  Eigen::MatrixXd Xb;
  Eigen::VectorXd yb;
  for (int t = 1; t <= cfg.steps; ++t) {
    take_rows(X, y, sampler.next(), Xb, yb);
    lookahead.theta = model.theta - cfg.momentum * v;
    const Eigen::VectorXd g = parameter_shift_grad(lookahead, Xb, yb);
    v = cfg.momentum * v + cfg.learning_rate * g;
    model.theta -= v;
    const double loss = mse_loss(model, X, y);
    check_divergence(loss, t);
    report.loss_trace.push_back(loss);
  }
  report.final_theta = model.theta;
  report.steps_run = cfg.steps;
  return report;
}

inline TrainReport train_nelder_mead(ReuploadModel model, const Eigen::MatrixXd& X,
                                     const Eigen::VectorXd& y, const TrainConfig& cfg) {
  if (cfg.batch_size != kFullBatch)
    throw std::invalid_argument("train: NelderMead requires full-batch evaluation");
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
  constexpr double kInitStep = 0.1, kDiamTol = 1e-6;

  const Eigen::Index n = model.theta.size();
  auto objective = [&](const Eigen::VectorXd& th) {
    ReuploadModel probe = model;
    probe.theta = th;
    return mse_loss(probe, X, y);
  };

  std::vector<Eigen::VectorXd> simplex;
  simplex.reserve(static_cast<size_t>(n) + 1);
  simplex.push_back(model.theta);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::VectorXd p = model.theta;
    p[i] += kInitStep;
    simplex.push_back(p);
  }
  std::vector<double> fv(simplex.size());
  for (size_t i = 0; i < simplex.size(); ++i) fv[i] = objective(simplex[i]);

  auto order_simplex = [&]() {
    std::vector<size_t> idx(simplex.size());
    std::iota(idx.begin(), idx.end(), size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&fv](size_t a, size_t b) { return fv[a] < fv[b]; });
    std::vector<Eigen::VectorXd> s2(simplex.size());
    std::vector<double> f2(simplex.size());
    for (size_t i = 0; i < idx.size(); ++i) {
      s2[i] = simplex[idx[i]];
      f2[i] = fv[idx[i]];
    }
    simplex.swap(s2);
    fv.swap(f2);
  };

  TrainReport report;
  report.initial_loss = fv[0];  // loss at theta0, before any simplex move
  order_simplex();

  const size_t last = simplex.size() - 1;
  for (int it = 1; it <= cfg.steps; ++it) {
    double diam = 0.0;
    for (size_t i = 1; i < simplex.size(); ++i)
      diam = std::max(diam, (simplex[i] - simplex[0]).norm());
    if (diam < kDiamTol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (size_t i = 0; i < last; ++i) centroid += simplex[i];
    centroid /= static_cast<double>(last);

    const Eigen::VectorXd xr = centroid + kReflect * (centroid - simplex[last]);
    const double fr = objective(xr);
    if (fr < fv[0]) {
      const Eigen::VectorXd xe = centroid + kExpand * (xr - centroid);
      const double fe = objective(xe);
      if (fe < fr) {
        simplex[last] = xe;
        fv[last] = fe;
      } else {
        simplex[last] = xr;
        fv[last] = fr;
      }
    } else if (fr < fv[last - 1]) {
      simplex[last] = xr;
      fv[last] = fr;
    } else {
      const Eigen::VectorXd xc = fr < fv[last] ? centroid + kContract * (xr - centroid)
                                               : centroid + kContract * (simplex[last] - centroid);
      const double fc = objective(xc);
      if (fc < std::min(fr, fv[last])) {
        simplex[last] = xc;
        fv[last] = fc;
      } else {
        for (size_t i = 1; i < simplex.size(); ++i) {
          simplex[i] = simplex[0] + kShrink * (simplex[i] - simplex[0]);
          fv[i] = objective(simplex[i]);
        }
      }
    }
    order_simplex();
    check_divergence(fv[0], it);
    report.loss_trace.push_back(fv[0]);
    report.steps_run = it;
  }

  report.final_theta = simplex[0];
  return report;
}

}  // namespace detail

// Trains a copy of the model; deterministic given (model, data, config).
inline TrainReport train(const ReuploadModel& model, const Eigen::MatrixXd& X,
                         const Eigen::VectorXd& y, const TrainConfig& cfg) {
  if (cfg.steps <= 0) throw std::invalid_argument("train: steps must be positive");
  if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("train: learning_rate must be positive");
  if (cfg.batch_size != kFullBatch && cfg.batch_size < 1)
    throw std::invalid_argument("train: batch_size must be >= 1 or full");
  if (X.rows() != y.size() || y.size() == 0)
    throw std::invalid_argument("train: need matching, non-empty samples");
  switch (cfg.optimizer) {
    case OptimizerKind::Adam: return detail::train_adam(model, X, y, cfg);
    case OptimizerKind::Nesterov: return detail::train_nesterov(model, X, y, cfg);
    case OptimizerKind::NelderMead: return detail::train_nelder_mead(model, X, y, cfg);
  }
  throw std::logic_error("train: unreachable");
}

}  // namespace locsur
