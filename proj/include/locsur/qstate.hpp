#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace locsur {

using cplx = std::complex<double>;

// Dense statevector over n_qubits, little-endian: qubit 0 is the least
// significant bit of the amplitude index.
struct StateVector {
  int n_qubits = 0;
  std::vector<cplx> amp;
};

enum class GateKind { RX, RY, RZ, Rot, CNOT };

// Rotation convention: R_P(theta) = exp(-i * theta * P / 2).
// Rot(phi, theta, omega) = RZ(phi) * RY(theta) * RZ(omega); RZ(omega) acts first.
struct Gate {
  GateKind kind;
  std::array<double, 3> angles{};  // RX/RY/RZ use angles[0]; Rot uses all three
  int target = 0;
  int control = -1;  // CNOT only
};

inline StateVector init_zero(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 12)
    throw std::invalid_argument("init_zero: n_qubits must be in [1, 12]");
  StateVector s;
  s.n_qubits = n_qubits;
  s.amp.assign(std::size_t{1} << n_qubits, cplx{0.0, 0.0});
  s.amp[0] = cplx{1.0, 0.0};
  return s;
}

namespace detail {

// applies a 2x2 unitary [[u00,u01],[u10,u11]] to qubit q, in place
inline void apply_1q(StateVector& s, int q, cplx u00, cplx u01, cplx u10, cplx u11) {
  const std::size_t stride = std::size_t{1} << q;
  const std::size_t dim = s.amp.size();
  for (std::size_t base = 0; base < dim; base += 2 * stride) {
    for (std::size_t low = 0; low < stride; ++low) {
      const std::size_t i0 = base + low;
      const std::size_t i1 = i0 + stride;
      const cplx a0 = s.amp[i0];
      const cplx a1 = s.amp[i1];
      s.amp[i0] = u00 * a0 + u01 * a1;
      s.amp[i1] = u10 * a0 + u11 * a1;
    }
  }
}

}  // namespace detail

// In-place gate application; used by the model forward passes.
inline void apply_rx(StateVector& s, int q, double theta) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  detail::apply_1q(s, q, {c, 0}, {0, -sn}, {0, -sn}, {c, 0});
}

inline void apply_ry(StateVector& s, int q, double theta) {
  const double c = std::cos(theta / 2), sn = std::sin(theta / 2);
  detail::apply_1q(s, q, {c, 0}, {-sn, 0}, {sn, 0}, {c, 0});
}

inline void apply_rz(StateVector& s, int q, double theta) {
  const cplx e = std::polar(1.0, -theta / 2);
  detail::apply_1q(s, q, e, {0, 0}, {0, 0}, std::conj(e));
}

inline void apply_rot(StateVector& s, int q, double phi, double theta, double omega) {
  apply_rz(s, q, omega);
  apply_ry(s, q, theta);
  apply_rz(s, q, phi);
}

inline void apply_cnot(StateVector& s, int control, int target) {
  if (control == target) throw std::invalid_argument("apply_cnot: control == target");
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  const std::size_t dim = s.amp.size();
  for (std::size_t i = 0; i < dim; ++i)
    if ((i & cbit) && !(i & tbit)) std::swap(s.amp[i], s.amp[i | tbit]);
}

// CNOT(i, i+1 mod n) for every qubit i; no-op on a single qubit
inline void apply_cnot_ring(StateVector& s) {
  if (s.n_qubits < 2) return;
  for (int i = 0; i < s.n_qubits; ++i) apply_cnot(s, i, (i + 1) % s.n_qubits);
}

// Pure variant of the operation set: returns the gated copy.
inline StateVector apply_gate(const StateVector& state, const Gate& g) {
  if (g.target < 0 || g.target >= state.n_qubits)
    throw std::invalid_argument("apply_gate: target qubit out of range");
  StateVector s = state;
  switch (g.kind) {
    case GateKind::RX: apply_rx(s, g.target, g.angles[0]); break;
    case GateKind::RY: apply_ry(s, g.target, g.angles[0]); break;
    case GateKind::RZ: apply_rz(s, g.target, g.angles[0]); break;
    case GateKind::Rot: apply_rot(s, g.target, g.angles[0], g.angles[1], g.angles[2]); break;
    case GateKind::CNOT:
      if (g.control < 0 || g.control >= state.n_qubits)
        throw std::invalid_argument("apply_gate: control qubit out of range");
      apply_cnot(s, g.control, g.target);
      break;
  }
  return s;
}

inline double expectation_z(const StateVector& s, int qubit) {
  if (qubit < 0 || qubit >= s.n_qubits)
    throw std::invalid_argument("expectation_z: qubit out of range");
  const std::size_t bit = std::size_t{1} << qubit;
  double acc = 0.0;
  for (std::size_t i = 0; i < s.amp.size(); ++i) {
    const double p = std::norm(s.amp[i]);
    acc += (i & bit) ? -p : p;
  }
  return acc;
}

inline double overlap_probability(const StateVector& a, const StateVector& b) {
  if (a.n_qubits != b.n_qubits)
    throw std::invalid_argument("overlap_probability: qubit counts differ");
  cplx ip{0.0, 0.0};
  for (std::size_t i = 0; i < a.amp.size(); ++i) ip += std::conj(a.amp[i]) * b.amp[i];
  return std::norm(ip);
}

inline double norm_l2(const StateVector& s) {
  double acc = 0.0;
  for (const cplx& a : s.amp) acc += std::norm(a);
  return std::sqrt(acc);
}

}  // namespace locsur
