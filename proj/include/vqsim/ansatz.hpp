#pragma once

#include <vector>

#include "vqsim/gate.hpp"
#include "vqsim/state.hpp"

namespace vqsim {

// One gate of a parameter block, angle = offset + scale * lambda_k.
struct ParameterizedGate {
  GateInstance gate;
  double scale = 1.0;
  double offset = 0.0;
};

// dR_k/dlambda_k = sum_i f_i R_k sigma_i.
struct DerivativeTerm {
  cplx f;
  PauliString sigma;
};

// R_k(lambda_k): a block of commuting gates driven by one parameter, times an
// optional global phase exp(i phase_scale lambda_k).
struct AnsatzBlock {
  std::vector<ParameterizedGate> gates;
  std::vector<DerivativeTerm> derivative;
  double phase_scale = 0.0;
};

struct ParameterVector {
  RVector values;
  double time = 0.0;
};

// Trial state |Psi(lambda)> = R_{N_v} ... R_1 |0bar>, |0bar> = prefix |0...0>.
class Ansatz {
 public:
  Ansatz() = default;
  Ansatz(int n_qubits, std::vector<GateInstance> prefix, std::vector<AnsatzBlock> blocks);

  int n_qubits() const { return n_qubits_; }
  std::size_t n_parameters() const { return blocks_.size(); }
  const std::vector<GateInstance>& prefix() const { return prefix_; }
  const std::vector<AnsatzBlock>& blocks() const { return blocks_; }
  const AnsatzBlock& block(std::size_t k) const { return blocks_.at(k); }

  std::vector<GateInstance> block_gates(std::size_t k, double lambda) const;
  const PureState& reference_state() const { return reference_; }

  PureState prepare(const ParameterVector& params) const;
  // R with sigma applied right before block `position`; position == N_v puts it after R_{N_v}.
  CVector insert_state(const ParameterVector& params, std::size_t position, const PauliString& sigma) const;
  // d|Psi>/dlambda_k assembled from the derivative decomposition.
  CVector derivative(const ParameterVector& params, std::size_t k) const;
  std::vector<CVector> derivatives(const ParameterVector& params) const;

  // Dense R(lambda) without the prefix.
  CMatrix unitary(const ParameterVector& params) const;
  CMatrix block_unitary(std::size_t k, double lambda) const;
  // G_k = sum_i f_{k,i} sigma_{k,i}
  CMatrix generator(std::size_t k) const;

  // Appends a block exp(i lambda) with derivative term (i, identity).
  Ansatz with_global_phase() const;
  bool has_global_phase() const;

  std::size_t max_gates_per_block() const;
  std::size_t max_derivative_terms() const;

  void check_parameters(const ParameterVector& params) const;

 private:
  int n_qubits_ = 0;
  std::vector<GateInstance> prefix_;
  std::vector<AnsatzBlock> blocks_;
  PureState reference_;
};

}  // namespace vqsim
