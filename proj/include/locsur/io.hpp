#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "locsur/qsvm.hpp"
#include "locsur/reupload.hpp"
#include "locsur/surrogate.hpp"

namespace locsur {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form; identical bytes on every rerun, which the
// output CSVs are required to guarantee.
inline std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw std::runtime_error("fmt_double: conversion failed");
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open '" + path.string() + "'");
    write_row(header);
  }

  void write_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::invalid_argument("CsvWriter: wrong cell count");
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

  static std::string cell(double v) { return fmt_double(v); }
  static std::string cell(int64_t v) { return std::to_string(v); }
  static std::string cell(uint64_t v) { return std::to_string(v); }
  static std::string cell(int v) { return std::to_string(v); }

 private:
  std::ofstream out_;
  size_t columns_;
};

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_json_file: cannot open '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("read_json_file: cannot open '" + path.string() + "'");
  return Json::parse(in);
}

inline Json model_to_json(const ReuploadModel& m) {
  Json j;
  j["ansatz"] = ansatz_name(m.kind);
  j["n_qubits"] = m.n_qubits;
  j["layers"] = m.layers;
  j["n_features"] = m.n_features;
  j["theta"] = std::vector<double>(m.theta.data(), m.theta.data() + m.theta.size());
  return j;
}

inline ReuploadModel model_from_json(const Json& j) {
  ReuploadModel m = make_model(ansatz_from_name(j.at("ansatz").get<std::string>()),
                               j.at("layers").get<int>(), j.at("n_qubits").get<int>(),
                               j.at("n_features").get<int>());
  const auto theta = j.at("theta").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(theta.size()) != m.theta.size())
    throw std::invalid_argument("model_from_json: theta length mismatch");
  for (Eigen::Index i = 0; i < m.theta.size(); ++i) m.theta[i] = theta[static_cast<size_t>(i)];
  return m;
}

inline Json surrogate_to_json(const FourierSurrogate& s) {
  Json j;
  j["kind"] = s.lattice.kind == LatticeKind::FullSquare ? "full_square" : "separable";
  j["d"] = s.lattice.d;
  j["order"] = s.lattice.order;
  std::vector<double> interleaved;
  interleaved.reserve(static_cast<size_t>(2 * s.coefficients.size()));
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i) {
    interleaved.push_back(s.coefficients[i].real());
    interleaved.push_back(s.coefficients[i].imag());
  }
  j["coefficients"] = interleaved;
  return j;
}

inline FourierSurrogate surrogate_from_json(const Json& j) {
  FourierSurrogate s;
  const std::string kind = j.at("kind").get<std::string>();
  const int d = j.at("d").get<int>();
  const int order = j.at("order").get<int>();
  if (kind == "full_square")
    s.lattice = full_lattice(order, d);
  else if (kind == "separable")
    s.lattice = separable_lattice(order, d);
  else
    throw std::invalid_argument("surrogate_from_json: unknown lattice kind '" + kind + "'");
  const auto interleaved = j.at("coefficients").get<std::vector<double>>();
  if (static_cast<Eigen::Index>(interleaved.size()) != 2 * s.lattice.vectors.rows())
    throw std::invalid_argument("surrogate_from_json: coefficient length mismatch");
  s.coefficients.resize(s.lattice.vectors.rows());
  for (Eigen::Index i = 0; i < s.coefficients.size(); ++i)
    s.coefficients[i] = {interleaved[static_cast<size_t>(2 * i)],
                         interleaved[static_cast<size_t>(2 * i + 1)]};
  return s;
}

inline Json svm_to_json(const SvmModel& m) {
  Json j;
  j["alpha"] = std::vector<double>(m.alpha.data(), m.alpha.data() + m.alpha.size());
  j["bias"] = m.bias;
  std::vector<int64_t> support(m.support.size());
  for (size_t i = 0; i < m.support.size(); ++i) support[i] = static_cast<int64_t>(m.support[i]);
  j["support"] = support;
  j["C"] = m.C;
  j["platt_a"] = m.platt_a;
  j["platt_b"] = m.platt_b;
  j["platt_fitted"] = m.platt_fitted;
  return j;
}

}  // namespace locsur
