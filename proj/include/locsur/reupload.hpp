#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

#include "locsur/qstate.hpp"
#include "locsur/rng.hpp"
#include "locsur/surrogate.hpp"

namespace locsur {

enum class AnsatzKind { Basic1D, LineAnsatz, StronglyEntanglingReupload };

inline std::string ansatz_name(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::Basic1D: return "basic1d";
    case AnsatzKind::LineAnsatz: return "line_ansatz";
    case AnsatzKind::StronglyEntanglingReupload: return "strongly_entangling";
  }
  throw std::logic_error("ansatz_name: unreachable");
}

inline AnsatzKind ansatz_from_name(const std::string& s) {
  if (s == "basic1d") return AnsatzKind::Basic1D;
  if (s == "line_ansatz") return AnsatzKind::LineAnsatz;
  if (s == "strongly_entangling") return AnsatzKind::StronglyEntanglingReupload;
  throw std::invalid_argument("ansatz_from_name: unknown ansatz '" + s + "'");
}

// Data-reuploading circuit f(x) = <0|U+(x,theta) Z_0 U(x,theta)|0>.
//
// Layouts (theta stored row-major as [block][slot][euler angle]):
//   Basic1D (d = 1, blocks = L+1, slots = n_qubits): each of the L layers is
//     a Rot per qubit, a CNOT ring when n_qubits > 1, then RX(x) on every
//     qubit in parallel; one trailing Rot-per-qubit block plus ring closes
//     the circuit. Parallel encodings raise the frequency span to q*L.
//   LineAnsatz (1 qubit, blocks = L, slots = d): each layer uploads the
//     features sequentially, RX(x_m) then Rot(theta[l][m]); no trailing
//     block, so the parameter count is exactly 3*L*d.
//   StronglyEntanglingReupload (2 qubits, blocks = L, slots = 2): each layer
//     uploads features in pairs, RY(x_m) on qubit 0 and RY(x_{m+1}) on qubit
//     1 followed by a CNOT ring per pair, then one Rot per qubit plus ring
//     (6 trainable angles per layer).
struct ReuploadModel {
  AnsatzKind kind = AnsatzKind::Basic1D;
  int n_qubits = 1;
  int layers = 1;
  int n_features = 1;
  Eigen::VectorXd theta;

  int blocks() const { return kind == AnsatzKind::Basic1D ? layers + 1 : layers; }
  int slots() const { return kind == AnsatzKind::LineAnsatz ? n_features : n_qubits; }
  double angle(int block, int slot, int euler) const {
    return theta[(static_cast<Eigen::Index>(block) * slots() + slot) * 3 + euler];
  }
};

inline Eigen::Index theta_size(AnsatzKind kind, int layers, int n_qubits, int n_features) {
  switch (kind) {
    case AnsatzKind::Basic1D:
      return static_cast<Eigen::Index>(layers + 1) * n_qubits * 3;
    case AnsatzKind::LineAnsatz:
      return static_cast<Eigen::Index>(layers) * n_features * 3;
    case AnsatzKind::StronglyEntanglingReupload:
      return static_cast<Eigen::Index>(layers) * 2 * 3;
  }
  throw std::logic_error("theta_size: unreachable");
}

inline ReuploadModel make_model(AnsatzKind kind, int layers, int n_qubits, int n_features) {
  if (layers < 1) throw std::invalid_argument("make_model: layers must be >= 1");
  if (n_features < 1) throw std::invalid_argument("make_model: n_features must be >= 1");
  switch (kind) {
    case AnsatzKind::Basic1D:
      if (n_features != 1)
        throw std::invalid_argument("make_model: Basic1D is a single-feature ansatz");
      if (n_qubits < 1 || n_qubits > 12)
        throw std::invalid_argument("make_model: Basic1D qubit count out of range");
      break;
    case AnsatzKind::LineAnsatz:
      if (n_qubits != 1)
        throw std::invalid_argument("make_model: LineAnsatz runs on exactly 1 qubit");
      break;
    case AnsatzKind::StronglyEntanglingReupload:
      if (n_qubits != 2)
        throw std::invalid_argument("make_model: StronglyEntanglingReupload runs on exactly 2 qubits");
      break;
  }
  ReuploadModel m;
  m.kind = kind;
  m.n_qubits = n_qubits;
  m.layers = layers;
  m.n_features = n_features;
  m.theta = Eigen::VectorXd::Zero(theta_size(kind, layers, n_qubits, n_features));
  return m;
}

inline Eigen::Index parameter_count(const ReuploadModel& m) { return m.theta.size(); }

inline void init_theta(ReuploadModel& m, Rng& rng, double stddev) {
  for (Eigen::Index i = 0; i < m.theta.size(); ++i) m.theta[i] = rng.normal(0.0, stddev);
}

inline double forward(const ReuploadModel& m, const Eigen::VectorXd& x) {
  if (x.size() != m.n_features) throw std::invalid_argument("forward: feature count mismatch");
  if (m.theta.size() != theta_size(m.kind, m.layers, m.n_qubits, m.n_features))
    throw std::invalid_argument("forward: theta size does not match the ansatz");
  StateVector st = init_zero(m.n_qubits);
  const int q = m.n_qubits;
  switch (m.kind) {
    case AnsatzKind::Basic1D: {
      for (int l = 0; l < m.layers; ++l) {
        for (int k = 0; k < q; ++k)
          apply_rot(st, k, m.angle(l, k, 0), m.angle(l, k, 1), m.angle(l, k, 2));
        if (q > 1) apply_cnot_ring(st);
        for (int k = 0; k < q; ++k) apply_rx(st, k, x[0]);
      }
      for (int k = 0; k < q; ++k)
        apply_rot(st, k, m.angle(m.layers, k, 0), m.angle(m.layers, k, 1),
                  m.angle(m.layers, k, 2));
      if (q > 1) apply_cnot_ring(st);
      break;
    }
    case AnsatzKind::LineAnsatz: {
      for (int l = 0; l < m.layers; ++l)
        for (int f = 0; f < m.n_features; ++f) {
          apply_rx(st, 0, x[f]);
          apply_rot(st, 0, m.angle(l, f, 0), m.angle(l, f, 1), m.angle(l, f, 2));
        }
      break;
    }
    case AnsatzKind::StronglyEntanglingReupload: {
      for (int l = 0; l < m.layers; ++l) {
        for (int f = 0; f < m.n_features; f += 2) {
          apply_ry(st, 0, x[f]);
          if (f + 1 < m.n_features) apply_ry(st, 1, x[f + 1]);
          apply_cnot_ring(st);
        }
        for (int k = 0; k < 2; ++k)
          apply_rot(st, k, m.angle(l, k, 0), m.angle(l, k, 1), m.angle(l, k, 2));
        apply_cnot_ring(st);
      }
      break;
    }
  }
  return expectation_z(st, 0);
}

inline Eigen::VectorXd forward_many(const ReuploadModel& m, const Eigen::MatrixXd& X) {
  Eigen::VectorXd out(X.rows());
  for (Eigen::Index i = 0; i < X.rows(); ++i) out[i] = forward(m, X.row(i).transpose());
  return out;
}

// Accessible spectrum under Pauli-half encodings: every per-feature frequency
// is an integer, bounded by the number of times that feature is uploaded
// (times the qubit count for Basic1D's parallel uploads).
inline FrequencyLattice spectrum(const ReuploadModel& m) {
  switch (m.kind) {
    case AnsatzKind::Basic1D:
      return full_lattice(m.n_qubits * m.layers, 1);
    case AnsatzKind::LineAnsatz:
    case AnsatzKind::StronglyEntanglingReupload:
      return full_lattice(m.layers, m.n_features);
  }
  throw std::logic_error("spectrum: unreachable");
}

}  // namespace locsur
