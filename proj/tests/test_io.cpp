#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "locsur/io.hpp"
#include "locsur/regions.hpp"
#include "locsur/rng.hpp"

using namespace locsur;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("/tmp/locsur_io_" + name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("fmt_double emits shortest forms that parse back bit-exactly") {
  REQUIRE(fmt_double(0.1) == "0.1");
  REQUIRE(fmt_double(0.0) == "0");
  REQUIRE(fmt_double(-0.5) == "-0.5");
  REQUIRE(fmt_double(1.0) == "1");

  Rng rng(11);
  for (int rep = 0; rep < 500; ++rep) {
    // Spread mantissas over a wide exponent range, signs included.
    const double mag = std::ldexp(rng.uniform(0.5, 1.0), static_cast<int>(rng.below(1200)) - 600);
    const double v = rng.uniform01() < 0.5 ? mag : -mag;
    const std::string s = fmt_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    REQUIRE(back == v);
  }
}

TEST_CASE("csv writer produces exact bytes and enforces the column count") {
  const TempPath tmp("writer.csv");
  {
    CsvWriter w(tmp.path, {"name", "value"});
    w.write_row({"x", CsvWriter::cell(2.5)});
    w.write_row({CsvWriter::cell(7), CsvWriter::cell(int64_t{-3})});
    REQUIRE_THROWS_AS(w.write_row({"only_one"}), std::invalid_argument);
  }
  REQUIRE(slurp(tmp.path) == "name,value\nx,2.5\n7,-3\n");

  REQUIRE_THROWS_AS(CsvWriter("/nonexistent_dir_locsur/out.csv", {"a"}), std::runtime_error);
}

TEST_CASE("json files survive a write and read cycle in key order") {
  const TempPath tmp("round.json");
  Json j;
  j["zeta"] = 1;
  j["alpha"] = {1.5, -2.25};
  j["nested"]["flag"] = true;
  write_json_file(tmp.path, j);

  const Json back = read_json_file(tmp.path);
  REQUIRE(back == j);

  // ordered_json keeps insertion order, so "zeta" must precede "alpha".
  const std::string text = slurp(tmp.path);
  REQUIRE(text.find("zeta") < text.find("alpha"));

  REQUIRE_THROWS_AS(read_json_file("/tmp/locsur_io_definitely_absent.json"),
                    std::runtime_error);
}

TEST_CASE("reuploading models serialize losslessly") {
  Rng rng(13);
  for (const AnsatzKind kind : {AnsatzKind::Basic1D, AnsatzKind::LineAnsatz,
                                AnsatzKind::StronglyEntanglingReupload}) {
    const int d = kind == AnsatzKind::Basic1D ? 1 : 2;
    const int q = kind == AnsatzKind::StronglyEntanglingReupload ? 2
                  : kind == AnsatzKind::Basic1D                  ? 2
                                                                 : 1;
    ReuploadModel m = make_model(kind, 2, q, d);
    for (Eigen::Index i = 0; i < m.theta.size(); ++i) m.theta[i] = rng.uniform(-3.0, 3.0);

    const Json j = model_to_json(m);
    REQUIRE(j.at("ansatz").get<std::string>() == ansatz_name(kind));
    const ReuploadModel back = model_from_json(j);
    REQUIRE(back.kind == m.kind);
    REQUIRE(back.n_qubits == m.n_qubits);
    REQUIRE(back.layers == m.layers);
    REQUIRE(back.n_features == m.n_features);
    REQUIRE((back.theta - m.theta).lpNorm<Eigen::Infinity>() == 0.0);

    Eigen::VectorXd x(d);
    for (int k = 0; k < d; ++k) x[k] = rng.uniform(0.0, 6.0);
    REQUIRE(forward(back, x) == forward(m, x));
  }

  Json bad = model_to_json(make_model(AnsatzKind::Basic1D, 1, 1, 1));
  bad["theta"] = std::vector<double>{1.0};  // wrong length
  REQUIRE_THROWS_AS(model_from_json(bad), std::invalid_argument);
  bad["ansatz"] = "unheard_of";
  REQUIRE_THROWS_AS(model_from_json(bad), std::invalid_argument);
}

TEST_CASE("fourier surrogates serialize losslessly for both lattice kinds") {
  Rng rng(17);

  ReuploadModel m = make_model(AnsatzKind::LineAnsatz, 1, 1, 2);
  for (Eigen::Index i = 0; i < m.theta.size(); ++i) m.theta[i] = rng.uniform(-2.0, 2.0);
  const Region patch{HyperCube{3.0, 2}};
  const Eigen::MatrixXd nodes = chebyshev_nodes_in_patch(patch, 1, 2);
  Eigen::VectorXd vals(nodes.rows());
  for (Eigen::Index i = 0; i < nodes.rows(); ++i)
    vals[i] = forward(m, nodes.row(i).transpose());
  const ExactFitResult fit = fit_exact(vals, full_lattice(1, 2), nodes);

  const Json j = surrogate_to_json(fit.surrogate);
  const FourierSurrogate back = surrogate_from_json(j);
  REQUIRE(back.lattice.kind == fit.surrogate.lattice.kind);
  REQUIRE(back.lattice.vectors == fit.surrogate.lattice.vectors);
  REQUIRE((back.coefficients - fit.surrogate.coefficients).lpNorm<Eigen::Infinity>() == 0.0);
  Eigen::VectorXd x(2);
  x << 0.7, -1.2;
  REQUIRE(evaluate(back, x) == evaluate(fit.surrogate, x));

  // Separable kind: build one directly and round-trip it.
  FourierSurrogate sep;
  sep.lattice = separable_lattice(2, 3);
  sep.coefficients.resize(sep.lattice.vectors.rows());
  for (Eigen::Index i = 0; i < sep.coefficients.size(); ++i)
    sep.coefficients[i] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  const FourierSurrogate sep_back = surrogate_from_json(surrogate_to_json(sep));
  REQUIRE(sep_back.lattice.kind == LatticeKind::Separable);
  REQUIRE((sep_back.coefficients - sep.coefficients).lpNorm<Eigen::Infinity>() == 0.0);

  Json bad = surrogate_to_json(sep);
  bad["kind"] = "triangular";
  REQUIRE_THROWS_AS(surrogate_from_json(bad), std::invalid_argument);
  bad["kind"] = "separable";
  bad["coefficients"] = std::vector<double>{1.0, 2.0};
  REQUIRE_THROWS_AS(surrogate_from_json(bad), std::invalid_argument);
}

TEST_CASE("svm models export every calibration field") {
  SvmModel m;
  m.alpha = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  m.dual_coef = m.alpha;
  m.bias = -0.25;
  m.support = {1, 2};
  m.C = 2.0;
  m.platt_a = -1.5;
  m.platt_b = 0.125;
  m.platt_fitted = true;

  const Json j = svm_to_json(m);
  REQUIRE(j.at("alpha").size() == 3);
  REQUIRE(j.at("bias").get<double>() == -0.25);
  REQUIRE(j.at("support").get<std::vector<int64_t>>() == std::vector<int64_t>{1, 2});
  REQUIRE(j.at("C").get<double>() == 2.0);
  REQUIRE(j.at("platt_a").get<double>() == -1.5);
  REQUIRE(j.at("platt_b").get<double>() == 0.125);
  REQUIRE(j.at("platt_fitted").get<bool>());
}
