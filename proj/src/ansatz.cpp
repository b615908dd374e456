#include "vqsim/ansatz.hpp"

#include <cmath>

namespace vqsim {

Ansatz::Ansatz(int n_qubits, std::vector<GateInstance> prefix, std::vector<AnsatzBlock> blocks)
    : n_qubits_(n_qubits), prefix_(std::move(prefix)), blocks_(std::move(blocks)) {
  if (n_qubits < 1) throw std::invalid_argument("ansatz needs at least one qubit");
  for (const auto& g : prefix_) validate_gate(g, n_qubits);
  for (const auto& b : blocks_) {
    for (const auto& pg : b.gates) {
      validate_gate(pg.gate, n_qubits);
      if (!pg.gate.is_parameterized()) throw std::invalid_argument("ansatz block gates must be rotation gates");
    }
    if (b.derivative.empty()) throw std::invalid_argument("every ansatz block needs a derivative decomposition");
    for (const auto& d : b.derivative) {
      if (d.sigma.n_qubits() != n_qubits) throw std::invalid_argument("derivative generator size mismatch");
      if (std::abs(d.sigma.coefficient() - cplx{1.0}) > 1e-12) {
        throw std::invalid_argument("derivative generators carry unit coefficients; put weights in f");
      }
    }
  }
  reference_ = apply_circuit(PureState::zero(n_qubits), prefix_);
}

void Ansatz::check_parameters(const ParameterVector& params) const {
  if (static_cast<std::size_t>(params.values.size()) != blocks_.size()) {
    throw std::invalid_argument("parameter count " + std::to_string(params.values.size()) + " does not match ansatz (" +
                                std::to_string(blocks_.size()) + ")");
  }
  if (!params.values.allFinite()) throw std::invalid_argument("parameters must be finite");
}

std::vector<GateInstance> Ansatz::block_gates(std::size_t k, double lambda) const {
  const auto& b = blocks_.at(k);
  std::vector<GateInstance> out;
  out.reserve(b.gates.size());
  for (const auto& pg : b.gates) {
    GateInstance g = pg.gate;
    g.angle = pg.offset + pg.scale * lambda;
    out.push_back(std::move(g));
  }
  return out;
}

namespace {

void apply_block(CVector& v, const Ansatz& a, std::size_t k, double lambda) {
  for (const auto& g : a.block_gates(k, lambda)) kernels::apply_unitary(v, g.matrix(), g.targets);
  const double ps = a.block(k).phase_scale;
  if (ps != 0.0) v *= std::exp(kI * ps * lambda);
}

}  // namespace

PureState Ansatz::prepare(const ParameterVector& params) const {
  check_parameters(params);
  CVector v = reference_.amplitudes();
  for (std::size_t k = 0; k < blocks_.size(); ++k) apply_block(v, *this, k, params.values(static_cast<Eigen::Index>(k)));
  return PureState(n_qubits_, std::move(v), 1e-10);
}

CVector Ansatz::insert_state(const ParameterVector& params, std::size_t position, const PauliString& sigma) const {
  check_parameters(params);
  if (position > blocks_.size()) throw std::out_of_range("insertion position past the end of the ansatz");
  CVector v = reference_.amplitudes();
  for (std::size_t k = 0; k <= blocks_.size(); ++k) {
    if (k == position) v = sigma.apply(v);
    if (k < blocks_.size()) apply_block(v, *this, k, params.values(static_cast<Eigen::Index>(k)));
  }
  return v;
}

CVector Ansatz::derivative(const ParameterVector& params, std::size_t k) const {
  CVector out = CVector::Zero(reference_.amplitudes().size());
  for (const auto& term : blocks_.at(k).derivative) out += term.f * insert_state(params, k, term.sigma);
  return out;
}

std::vector<CVector> Ansatz::derivatives(const ParameterVector& params) const {
  std::vector<CVector> out;
  out.reserve(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) out.push_back(derivative(params, k));
  return out;
}

CMatrix Ansatz::block_unitary(std::size_t k, double lambda) const {
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits_));
  const auto gates = block_gates(k, lambda);
  CMatrix u = CMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    CVector col = u.col(c);
    for (const auto& g : gates) kernels::apply_unitary(col, g.matrix(), g.targets);
    u.col(c) = col;
  }
  return u;
}

CMatrix Ansatz::unitary(const ParameterVector& params) const {
  check_parameters(params);
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits_));
  CMatrix u = CMatrix::Identity(d, d);
  for (std::size_t k = 0; k < blocks_.size(); ++k) {
    const double lambda = params.values(static_cast<Eigen::Index>(k));
    u = block_unitary(k, lambda) * u;
    const double ps = blocks_[k].phase_scale;
    if (ps != 0.0) u *= std::exp(kI * ps * lambda);
  }
  return u;
}

CMatrix Ansatz::generator(std::size_t k) const {
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits_));
  CMatrix g = CMatrix::Zero(d, d);
  for (const auto& term : blocks_.at(k).derivative) g += term.f * term.sigma.matrix();
  return g;
}

Ansatz Ansatz::with_global_phase() const {
  auto blocks = blocks_;
  AnsatzBlock phase;
  phase.phase_scale = 1.0;
  phase.derivative.push_back({kI, PauliString(n_qubits_)});
  blocks.push_back(std::move(phase));
  return Ansatz(n_qubits_, prefix_, std::move(blocks));
}

bool Ansatz::has_global_phase() const {
  for (const auto& b : blocks_) {
    if (b.gates.empty() && b.phase_scale != 0.0) return true;
  }
  return false;
}

std::size_t Ansatz::max_gates_per_block() const {
  std::size_t m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.gates.size());
  return m;
}

std::size_t Ansatz::max_derivative_terms() const {
  std::size_t m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.derivative.size());
  return m;
}

}  // namespace vqsim
