#pragma once

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "locsur/rng.hpp"

namespace locsur {

inline constexpr double kPi = 3.14159265358979323846;

// Analytic regression targets: one fixed 1D truncated Fourier series and a
// thirteen-function 2D suite (ten fixed closed forms, three with seeded
// random coefficients drawn once at construction).
class TargetFunction {
 public:
  // Recognized names (2D suite):
  //   default, polynomial, sinc, random_trig, big_trig, combined_osc,
  //   random_trig2, freq_soup, peaks_trig, spiral_mix, random_fourier,
  //   large_amp, cross_terms
  // Random coefficients are drawn from Rng(seed) in a fixed documented order,
  // so (name, seed) pins the function exactly.
  TargetFunction(const std::string& name, uint64_t seed) : name_(name) {
    Rng rng(seed);
    if (name == "random_trig") {
      // a1,a2,a3 then b1,b2,b3, all U(-1,1)
      for (auto& c : rt_a_) c = rng.uniform(-1.0, 1.0);
      for (auto& c : rt_b_) c = rng.uniform(-1.0, 1.0);
    } else if (name == "random_trig2") {
      // amplitudes alpha_1..3, beta_1..3 (U(-1,1)); then per term i the
      // frequencies wx,wy,wtx,wty (U(0.5,2.5)); then the cosine's +- sign
      // per term (fair coin, heads -> +)
      for (auto& c : rt2_alpha_) c = rng.uniform(-1.0, 1.0);
      for (auto& c : rt2_beta_) c = rng.uniform(-1.0, 1.0);
      for (int i = 0; i < 3; ++i) {
        rt2_wx_[i] = rng.uniform(0.5, 2.5);
        rt2_wy_[i] = rng.uniform(0.5, 2.5);
        rt2_wtx_[i] = rng.uniform(0.5, 2.5);
        rt2_wty_[i] = rng.uniform(0.5, 2.5);
      }
      for (auto& s : rt2_sign_) s = rng.uniform01() < 0.5 ? 1.0 : -1.0;
    } else if (name == "random_fourier") {
      // K=3; A then B (U(-0.5,0.5)), then phases phi (U(0,2pi)), each block
      // row-major over (kx, ky)
      for (auto& c : rf_a_) c = rng.uniform(-0.5, 0.5);
      for (auto& c : rf_b_) c = rng.uniform(-0.5, 0.5);
      for (auto& c : rf_phi_) c = rng.uniform(0.0, 2.0 * kPi);
    } else if (!is_fixed_name(name)) {
      throw std::invalid_argument("TargetFunction: unknown name '" + name + "'");
    }
  }

  const std::string& name() const { return name_; }
  int dim() const { return 2; }

  double operator()(double x, double y) const {
    if (name_ == "default")
      return -0.02 + 0.04 * std::cos(2 * x + y) + 0.25 * std::sin(x) -
             0.30 * std::cos(2 * y) - 0.10 * std::sin(x - y);
    if (name_ == "polynomial")
      return 0.10 * x * x - 0.20 * y + 0.30 * x * y - 0.40 * x + 2.0;
    if (name_ == "sinc") {
      const double r = std::sqrt(x * x + y * y) + 1e-9;
      return std::sin(r) / r;
    }
    if (name_ == "random_trig")
      return rt_a_[0] * std::sin(x) + rt_a_[1] * std::cos(y) +
             rt_b_[0] * std::sin(2 * x + 0.5 * y) + rt_b_[1] * std::cos(2 * y - 0.3 * x) +
             rt_a_[2] * x + rt_b_[2] * y;
    if (name_ == "big_trig")
      return 0.70 * std::sin(0.5 * x) + 0.40 * std::sin(2.2 * y) -
             0.30 * std::cos(2.0 * x + 1.3 * y) + 0.25 * std::sin(1.5 * x - 0.8 * y) +
             0.15 * std::cos(0.9 * x + 2.1 * y) + 0.05 * std::sin(3.0 * x + 0.2 * y);
    if (name_ == "combined_osc")
      return 0.05 * x * x - 0.10 * y + 0.60 * std::cos(1.2 * x + 0.5 * y) -
             0.40 * std::sin(0.8 * x - 1.3 * y) + 0.35 * std::cos(2 * x) +
             0.20 * std::sin(2 * y);
    if (name_ == "random_trig2") {
      double v = 0.0;
      for (int i = 0; i < 3; ++i)
        v += rt2_alpha_[i] * std::sin(rt2_wx_[i] * x + rt2_wy_[i] * y) +
             rt2_beta_[i] * std::cos(rt2_wtx_[i] * x + rt2_sign_[i] * rt2_wty_[i] * y);
      return v;
    }
    if (name_ == "freq_soup")
      return 0.30 * std::sin(x + 2 * y) + 0.20 * std::cos(2 * x + y) +
             0.15 * std::sin(3 * x + 3 * y) + 0.10 * std::cos(x - 3 * y) +
             0.05 * std::sin(2 * x - 2 * y);
    if (name_ == "peaks_trig")
      return 0.50 * std::cos(1.3 * x - 0.5 * y) + 0.40 * std::sin(2.1 * x + 0.7 * y) -
             0.30 * std::cos(3.0 * x - 2.2 * y) + 0.20 * std::sin(1.1 * x - 3.0 * y) +
             0.10 * std::cos(0.6 * x + 0.3 * y);
    if (name_ == "spiral_mix") {
      const double r = std::sqrt(x * x + y * y);
      const double th = std::atan2(y, x);  // theta in (-pi, pi]
      return 0.10 * r + 0.50 * std::sin(2 * th) + 0.25 * std::cos(3 * th) -
             0.20 * std::sin(0.5 * x - 0.8 * y) + 0.05 * r * std::cos(5 * th);
    }
    if (name_ == "random_fourier") {
      double v = 0.0;
      for (int kx = 1; kx <= 3; ++kx)
        for (int ky = 1; ky <= 3; ++ky) {
          const int i = (kx - 1) * 3 + (ky - 1);
          v += rf_a_[i] * std::cos(kx * x + ky * y + rf_phi_[i]) +
               rf_b_[i] * std::sin(kx * x + ky * y - rf_phi_[i]);
        }
      return v;
    }
    if (name_ == "large_amp")
      return 2.5 * std::sin(1.2 * x + 0.7 * y) - 2.0 * std::cos(0.6 * x - 1.1 * y) +
             1.5 * std::sin(2.0 * x - 2.5 * y) + 0.8 * std::cos(3.0 * x + 2.0 * y) -
             0.3 * std::sin(4.0 * x - 0.2 * y);
    if (name_ == "cross_terms")
      return std::sin(x + y) + 0.5 * std::cos(2 * x - y) - 0.4 * std::sin(3 * y + 2.1 * x) +
             0.3 * std::cos(1.2 * x - 2.5 * y) + 0.2 * x * std::sin(y);
    throw std::logic_error("TargetFunction: unreachable");
  }

  double operator()(const Eigen::VectorXd& x) const {
    if (x.size() != 2) throw std::invalid_argument("TargetFunction: expects 2D input");
    return (*this)(x[0], x[1]);
  }

  static const std::vector<std::string>& all_names() {
    static const std::vector<std::string> names = {
        "default",      "polynomial", "sinc",        "random_trig", "big_trig",
        "combined_osc", "random_trig2", "freq_soup", "peaks_trig",  "spiral_mix",
        "random_fourier", "large_amp", "cross_terms"};
    return names;
  }

 private:
  static bool is_fixed_name(const std::string& n) {
    for (const auto& name : all_names())
      if (name == n) return true;
    return false;
  }

  std::string name_;
  std::array<double, 3> rt_a_{}, rt_b_{};
  std::array<double, 3> rt2_alpha_{}, rt2_beta_{}, rt2_sign_{};
  std::array<double, 3> rt2_wx_{}, rt2_wy_{}, rt2_wtx_{}, rt2_wty_{};
  std::array<double, 9> rf_a_{}, rf_b_{}, rf_phi_{};
};

// Degree-3 even-frequency series: c0 = 0.1, c_n = 0.15+0.15i for n = 1..3 on
// e^{2inx}, completed to a real function by c_{-n} = conj(c_n). Period pi.
inline double fourier1d_target(double x) {
  double g = 0.1;
  for (int n = 1; n <= 3; ++n)
    g += 2.0 * (0.15 * std::cos(2.0 * n * x) - 0.15 * std::sin(2.0 * n * x));
  return g;
}

// One sampling axis: `count` points from lo, spaced (hi-lo)/(count-1) when the
// upper endpoint is included, (hi-lo)/count when it is not.
struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;
  bool endpoint = true;
};

struct SampleGrid {
  std::vector<AxisSpec> axes;
};

inline Eigen::VectorXd axis_points(const AxisSpec& a) {
  if (a.count < 2) throw std::invalid_argument("axis_points: count must be at least 2");
  if (!(a.hi > a.lo)) throw std::invalid_argument("axis_points: empty range");
  const double step = (a.hi - a.lo) / static_cast<double>(a.endpoint ? a.count - 1 : a.count);
  Eigen::VectorXd pts(a.count);
  for (int i = 0; i < a.count; ++i) pts[i] = a.lo + step * static_cast<double>(i);
  return pts;
}

struct GridSamples {
  Eigen::MatrixXd X;  // row-major point list: first axis outermost
  Eigen::VectorXd y;
};

inline GridSamples grid_sample(const TargetFunction& t, const SampleGrid& grid) {
  if (grid.axes.size() != 2)
    throw std::invalid_argument("grid_sample: TargetFunction overload expects 2 axes");
  const Eigen::VectorXd ax0 = axis_points(grid.axes[0]);
  const Eigen::VectorXd ax1 = axis_points(grid.axes[1]);
  GridSamples out;
  out.X.resize(ax0.size() * ax1.size(), 2);
  out.y.resize(out.X.rows());
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < ax0.size(); ++i)
    for (Eigen::Index j = 0; j < ax1.size(); ++j, ++r) {
      out.X(r, 0) = ax0[i];
      out.X(r, 1) = ax1[j];
      out.y[r] = t(ax0[i], ax1[j]);
    }
  return out;
}

inline GridSamples grid_sample_1d(double (*f)(double), const AxisSpec& axis) {
  const Eigen::VectorXd ax = axis_points(axis);
  GridSamples out;
  out.X.resize(ax.size(), 1);
  out.y.resize(ax.size());
  for (Eigen::Index i = 0; i < ax.size(); ++i) {
    out.X(i, 0) = ax[i];
    out.y[i] = f(ax[i]);
  }
  return out;
}

}  // namespace locsur
