#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "locsur/iris_data.hpp"

namespace locsur {

struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXi y;
  std::vector<std::string> feature_names;
  std::string provenance;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  fields.push_back(cur);
  return fields;
}

inline double parse_double_field(const std::string& s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || !std::isfinite(v))
    throw std::runtime_error(context + ": unparseable number '" + s + "'");
  return v;
}

}  // namespace detail

// First two iris classes (setosa = 0, versicolor = 1) with the first two
// features (sepal length and width): 100 samples x 2 features.
inline Dataset load_iris_2c2f() {
  std::istringstream in(kIrisCsv);
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line).size() != 5)
    throw std::runtime_error("load_iris_2c2f: corrupted embedded header");
  std::vector<std::array<double, 2>> rows;
  std::vector<int> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 5)
      throw std::runtime_error("load_iris_2c2f: corrupted embedded row at line " +
                               std::to_string(line_no));
    const std::string& species = fields[4];
    if (species != "setosa" && species != "versicolor") continue;
    const std::string ctx = "load_iris_2c2f: line " + std::to_string(line_no);
    rows.push_back({detail::parse_double_field(fields[0], ctx),
                    detail::parse_double_field(fields[1], ctx)});
    labels.push_back(species == "setosa" ? 0 : 1);
  }
  if (rows.size() != 100)
    throw std::runtime_error("load_iris_2c2f: expected 100 samples, found " +
                             std::to_string(rows.size()));
  Dataset ds;
  ds.X.resize(100, 2);
  ds.y.resize(100);
  for (int i = 0; i < 100; ++i) {
    ds.X(i, 0) = rows[static_cast<size_t>(i)][0];
    ds.X(i, 1) = rows[static_cast<size_t>(i)][1];
    ds.y[i] = labels[static_cast<size_t>(i)];
  }
  ds.feature_names = {"sepal_length", "sepal_width"};
  ds.provenance = "embedded iris subset: classes setosa/versicolor, sepal features";
  return ds;
}

// Breast Cancer Wisconsin (Diagnostic) file: one sample per line,
// comma-separated ID, diagnosis (M/B), then 30 reals. M maps to 1, B to 0.
inline Dataset load_wdbc(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_wdbc: cannot open '" + path + "'");
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 32)
      throw std::runtime_error("load_wdbc: line " + std::to_string(line_no) + " has " +
                               std::to_string(fields.size()) + " fields, expected 32");
    const std::string& diag = fields[1];
    if (diag != "M" && diag != "B")
      throw std::runtime_error("load_wdbc: line " + std::to_string(line_no) +
                               " has diagnosis '" + diag + "', expected M or B");
    std::vector<double> vals(30);
    const std::string ctx = "load_wdbc: line " + std::to_string(line_no);
    for (int j = 0; j < 30; ++j) vals[static_cast<size_t>(j)] = detail::parse_double_field(fields[static_cast<size_t>(j) + 2], ctx);
    rows.push_back(std::move(vals));
    labels.push_back(diag == "M" ? 1 : 0);
  }
  if (rows.empty()) throw std::runtime_error("load_wdbc: no samples in '" + path + "'");
  Dataset ds;
  ds.X.resize(static_cast<Eigen::Index>(rows.size()), 30);
  ds.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < 30; ++j) ds.X(static_cast<Eigen::Index>(i), j) = rows[i][static_cast<size_t>(j)];
    ds.y[static_cast<Eigen::Index>(i)] = labels[i];
  }
  ds.provenance = "wdbc file: " + path;
  return ds;
}

struct Standardizer {
  Eigen::VectorXd mean;
  Eigen::VectorXd stddev;
  bool population = true;

  Eigen::MatrixXd transform(const Eigen::MatrixXd& X) const {
    if (X.cols() != mean.size()) throw std::invalid_argument("Standardizer: column mismatch");
    return (X.rowwise() - mean.transpose()).array().rowwise() / stddev.transpose().array();
  }
};

// Column-wise zero-mean unit-variance scaling. Population (1/N) variance by
// default; the sample (1/(N-1)) estimator is exposed because the two give
// slightly different downstream patch counts.
inline std::pair<Standardizer, Eigen::MatrixXd> standardize_fit_transform(
    const Eigen::MatrixXd& X, bool population = true) {
  if (X.rows() < 2) throw std::invalid_argument("standardize_fit_transform: need >= 2 rows");
  Standardizer st;
  st.population = population;
  st.mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - st.mean.transpose();
  const double denom = static_cast<double>(population ? X.rows() : X.rows() - 1);
  st.stddev = (centered.array().square().colwise().sum() / denom).sqrt();
  for (Eigen::Index j = 0; j < st.stddev.size(); ++j)
    if (!(st.stddev[j] > 0.0))
      throw std::invalid_argument("standardize_fit_transform: column " + std::to_string(j) +
                                  " has zero variance");
  return {st, st.transform(X)};
}

struct PcaModel {
  Eigen::MatrixXd components;  // retained x cols, orthonormal rows
  Eigen::VectorXd explained_variance_ratio;
  Eigen::VectorXd mean;
  int retained = 0;

  Eigen::MatrixXd inverse_transform(const Eigen::MatrixXd& scores) const {
    return (scores * components).rowwise() + mean.transpose();
  }
};

// PCA via SVD of the centered matrix. Each component's largest-magnitude
// entry is made positive so the decomposition does not depend on backend
// sign choices.
inline std::pair<PcaModel, Eigen::MatrixXd> pca_fit_transform(const Eigen::MatrixXd& X, int d) {
  const Eigen::Index max_d = std::min<Eigen::Index>(X.rows() - 1, X.cols());
  if (d < 1 || d > max_d)
    throw std::invalid_argument("pca_fit_transform: d out of range [1, " +
                                std::to_string(max_d) + "]");
  PcaModel model;
  model.mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - model.mean.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double total = sv.array().square().sum();

  model.retained = d;
  model.components.resize(d, X.cols());
  model.explained_variance_ratio.resize(d);
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd comp = svd.matrixV().col(i);
    Eigen::Index arg = 0;
    comp.cwiseAbs().maxCoeff(&arg);
    if (comp[arg] < 0.0) comp = -comp;
    model.components.row(i) = comp.transpose();
    model.explained_variance_ratio[i] = sv[i] * sv[i] / total;
  }
  const Eigen::MatrixXd scores = centered * model.components.transpose();
  return {model, scores};
}

// Affine per-column map: min -> 0, max -> the largest double below 2*pi, so
// the image stays strictly inside the half-open encoding interval [0, 2pi).
inline Eigen::MatrixXd map_to_0_2pi(const Eigen::MatrixXd& X) {
  constexpr double kTwoPi = 6.28318530717958647692;
  const double top = std::nextafter(kTwoPi, 0.0);
  Eigen::MatrixXd out(X.rows(), X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double lo = X.col(j).minCoeff();
    const double hi = X.col(j).maxCoeff();
    if (!(hi > lo))
      throw std::invalid_argument("map_to_0_2pi: column " + std::to_string(j) +
                                  " has zero range");
    out.col(j) = (X.col(j).array() - lo) / (hi - lo) * top;
  }
  return out;
}

// {0,1} labels to {-1,+1} regression targets.
inline Eigen::VectorXd labels_to_pm1(const Eigen::VectorXi& y01) {
  Eigen::VectorXd out(y01.size());
  for (Eigen::Index i = 0; i < y01.size(); ++i) {
    if (y01[i] != 0 && y01[i] != 1)
      throw std::invalid_argument("labels_to_pm1: labels must be 0/1");
    out[i] = y01[i] == 1 ? 1.0 : -1.0;
  }
  return out;
}

}  // namespace locsur
