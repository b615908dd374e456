#include "vqsim/gate.hpp"

#include <cmath>
#include <map>

namespace vqsim {

namespace {

const std::map<GateKind, std::string>& names() {
  static const std::map<GateKind, std::string> m{
      {GateKind::Hadamard, "h"},         {GateKind::PauliX, "x"},
      {GateKind::PauliY, "y"},           {GateKind::PauliZ, "z"},
      {GateKind::PhaseRot, "phase"},     {GateKind::FlipRot, "flip"},
      {GateKind::YRot, "yrot"},          {GateKind::ZZRot, "zz"},
      {GateKind::ControlledPhase, "cz"}, {GateKind::ControlledNot, "cnot"},
      {GateKind::ControlledPauli, "cpauli"}};
  return m;
}

CMatrix rotation(Pauli p, double angle) {
  return std::cos(angle) * CMatrix::Identity(2, 2) + kI * std::sin(angle) * pauli_matrix(p);
}

CMatrix controlled(const CMatrix& u) {
  // Local bit 0 is the control.
  CMatrix m = CMatrix::Zero(4, 4);
  m(0, 0) = 1.0;
  m(2, 2) = 1.0;
  m(1, 1) = u(0, 0);
  m(1, 3) = u(0, 1);
  m(3, 1) = u(1, 0);
  m(3, 3) = u(1, 1);
  return m;
}

}  // namespace

std::string gate_name(GateKind kind) { return names().at(kind); }

GateKind gate_kind_from_name(const std::string& name) {
  for (const auto& [k, v] : names()) {
    if (v == name) return k;
  }
  throw ConfigError("unknown gate kind '" + name + "'");
}

int expected_arity(GateKind kind) {
  switch (kind) {
    case GateKind::ZZRot:
    case GateKind::ControlledPhase:
    case GateKind::ControlledNot:
    case GateKind::ControlledPauli:
      return 2;
    default:
      return 1;
  }
}

bool GateInstance::is_parameterized() const {
  return kind == GateKind::PhaseRot || kind == GateKind::FlipRot || kind == GateKind::YRot ||
         kind == GateKind::ZZRot;
}

CMatrix GateInstance::matrix() const {
  switch (kind) {
    case GateKind::Hadamard: {
      CMatrix h(2, 2);
      const double s = 1.0 / std::sqrt(2.0);
      h << s, s, s, -s;
      return h;
    }
    case GateKind::PauliX: return pauli_matrix(Pauli::X);
    case GateKind::PauliY: return pauli_matrix(Pauli::Y);
    case GateKind::PauliZ: return pauli_matrix(Pauli::Z);
    case GateKind::PhaseRot: return rotation(Pauli::Z, angle);
    case GateKind::FlipRot: return rotation(Pauli::X, angle);
    case GateKind::YRot: return rotation(Pauli::Y, angle);
    case GateKind::ZZRot: {
      CMatrix m = CMatrix::Zero(4, 4);
      const cplx plus = std::exp(kI * angle);
      const cplx minus = std::exp(-kI * angle);
      m(0, 0) = plus;
      m(1, 1) = minus;
      m(2, 2) = minus;
      m(3, 3) = plus;
      return m;
    }
    case GateKind::ControlledPhase: return controlled(pauli_matrix(Pauli::Z));
    case GateKind::ControlledNot: return controlled(pauli_matrix(Pauli::X));
    case GateKind::ControlledPauli: return controlled(pauli_matrix(pauli));
  }
  throw std::logic_error("unhandled gate kind");
}

GateInstance GateInstance::hadamard(int q) { return {GateKind::Hadamard, {q}}; }

GateInstance GateInstance::pauli_gate(int q, Pauli p) {
  switch (p) {
    case Pauli::X: return {GateKind::PauliX, {q}};
    case Pauli::Y: return {GateKind::PauliY, {q}};
    case Pauli::Z: return {GateKind::PauliZ, {q}};
    case Pauli::I: break;
  }
  throw std::invalid_argument("identity is not a gate");
}

GateInstance GateInstance::phase_rot(int q, double angle) { return {GateKind::PhaseRot, {q}, angle}; }
GateInstance GateInstance::flip_rot(int q, double angle) { return {GateKind::FlipRot, {q}, angle}; }
GateInstance GateInstance::y_rot(int q, double angle) { return {GateKind::YRot, {q}, angle}; }
GateInstance GateInstance::zz_rot(int a, int b, double angle) { return {GateKind::ZZRot, {a, b}, angle}; }
GateInstance GateInstance::controlled_phase(int c, int t) { return {GateKind::ControlledPhase, {c, t}}; }
GateInstance GateInstance::controlled_not(int c, int t) { return {GateKind::ControlledNot, {c, t}}; }

GateInstance GateInstance::controlled_pauli(int c, int t, Pauli p) {
  if (p == Pauli::I) throw std::invalid_argument("controlled identity is not a gate");
  return {GateKind::ControlledPauli, {c, t}, 0.0, p};
}

void validate_gate(const GateInstance& gate, int n_qubits) {
  if (gate.arity() != expected_arity(gate.kind)) {
    throw std::invalid_argument("gate '" + gate_name(gate.kind) + "' has wrong target count");
  }
  for (int t : gate.targets) {
    if (t < 0 || t >= n_qubits) {
      throw std::out_of_range("gate '" + gate_name(gate.kind) + "' target " + std::to_string(t) +
                              " out of range for " + std::to_string(n_qubits) + " qubits");
    }
  }
  if (gate.arity() == 2 && gate.targets[0] == gate.targets[1]) {
    throw std::invalid_argument("two-qubit gate needs distinct targets");
  }
}

}  // namespace vqsim
