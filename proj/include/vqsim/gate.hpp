#pragma once

#include <string>
#include <vector>

#include "vqsim/pauli.hpp"

namespace vqsim {

enum class GateKind {
  Hadamard,
  PauliX,
  PauliY,
  PauliZ,
  PhaseRot,        // exp(i angle Z)
  FlipRot,         // exp(i angle X)
  YRot,            // exp(i angle Y)
  ZZRot,           // exp(i angle Z (x) Z)
  ControlledPhase,
  ControlledNot,
  ControlledPauli  // control = targets[0], Pauli `pauli` on targets[1]
};

std::string gate_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

struct GateInstance {
  GateKind kind = GateKind::Hadamard;
  std::vector<int> targets;
  double angle = 0.0;
  Pauli pauli = Pauli::X;

  int arity() const { return static_cast<int>(targets.size()); }
  bool is_parameterized() const;
  bool is_two_qubit() const { return arity() == 2; }

  // Local unitary; bit b of the local index is qubit targets[b].
  CMatrix matrix() const;

  static GateInstance hadamard(int q);
  static GateInstance pauli_gate(int q, Pauli p);
  static GateInstance phase_rot(int q, double angle);
  static GateInstance flip_rot(int q, double angle);
  static GateInstance y_rot(int q, double angle);
  static GateInstance zz_rot(int a, int b, double angle);
  static GateInstance controlled_phase(int control, int target);
  static GateInstance controlled_not(int control, int target);
  static GateInstance controlled_pauli(int control, int target, Pauli p);
};

int expected_arity(GateKind kind);
void validate_gate(const GateInstance& gate, int n_qubits);

}  // namespace vqsim
