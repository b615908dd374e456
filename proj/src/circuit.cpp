#include "vqsim/circuit.hpp"

#include <cstring>

#include "vqsim/state.hpp"

namespace vqsim {

namespace {

constexpr std::size_t kMaxCacheEntries = 256;

std::string segment_key(const Circuit& c) {
  std::string key;
  key.reserve(c.shared_ops * 24 + 8);
  key.push_back(static_cast<char>(c.shared_qubits));
  for (std::size_t i = 0; i < c.shared_ops; ++i) {
    const auto& op = c.ops[i];
    key.push_back(static_cast<char>(op.gate.kind));
    key.push_back(static_cast<char>(op.role));
    key.push_back(static_cast<char>(op.gate.pauli));
    for (int t : op.gate.targets) key.push_back(static_cast<char>(t));
    char buf[sizeof(double)];
    std::memcpy(buf, &op.gate.angle, sizeof(double));
    key.append(buf, sizeof(double));
    key.push_back('|');
  }
  return key;
}

// rho_hi (x) rho_lo with rho_lo on the low qubits.
CMatrix kron(const CMatrix& hi, const CMatrix& lo) {
  const auto dl = lo.rows();
  CMatrix out(hi.rows() * dl, hi.cols() * dl);
  for (Eigen::Index i = 0; i < hi.rows(); ++i) {
    for (Eigen::Index j = 0; j < hi.cols(); ++j) out.block(i * dl, j * dl, dl, dl) = hi(i, j) * lo;
  }
  return out;
}

}  // namespace

std::size_t Circuit::count(OpRole role) const {
  std::size_t n = 0;
  for (const auto& op : ops) n += op.role == role ? 1 : 0;
  return n;
}

void Circuit::validate() const {
  if (n_qubits < 1 || n_qubits > 12) throw std::invalid_argument("circuit qubit count must be 1..12");
  for (const auto& op : ops) validate_gate(op.gate, n_qubits);
  if (readout_qubit >= n_qubits) throw std::out_of_range("readout qubit out of range");
  if (shared_ops > ops.size()) throw std::invalid_argument("shared segment longer than the circuit");
  if (shared_ops > 0) {
    if (shared_qubits < 1 || shared_qubits > n_qubits) throw std::invalid_argument("bad shared qubit count");
    for (std::size_t i = 0; i < shared_ops; ++i) {
      for (int t : ops[i].gate.targets) {
        if (t >= shared_qubits) throw std::invalid_argument("shared segment touches a qubit outside its register");
      }
    }
  }
}

CircuitExecutor::CircuitExecutor(const NoiseModel& nm) : noise_(compile_noise(nm)) {}

CMatrix CircuitExecutor::initial_state(int n_qubits) const {
  // product of per-qubit diag(1 - e, e) after the init flip
  const double e = noise_.init.probability(1);
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits));
  CMatrix rho = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    double p = 1.0;
    for (int q = 0; q < n_qubits; ++q) p *= ((k >> q) & 1) ? e : 1.0 - e;
    rho(k, k) = p;
  }
  return rho;
}

void CircuitExecutor::apply_op(CMatrix& rho, const CircuitOp& op) const {
  kernels::apply_unitary(rho, op.gate.matrix(), op.gate.targets);
  if (noise_.noiseless) return;
  if (op.role == OpRole::TwirlPauli && !noise_.noisy_twirl_gates) return;
  if (op.gate.arity() == 1) {
    kernels::apply_pauli_channel(rho, noise_.single, op.gate.targets);
  } else if (op.gate.arity() == 2) {
    kernels::apply_channel(rho, noise_.two, op.gate.targets);
  } else {
    throw std::invalid_argument("no noise channel for gates on more than two qubits");
  }
}

CMatrix CircuitExecutor::shared_segment(const Circuit& c) const {
  std::string key = segment_key(c);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  CMatrix rho = initial_state(c.shared_qubits);
  for (std::size_t i = 0; i < c.shared_ops; ++i) apply_op(rho, c.ops[i]);
  if (cache_.size() >= kMaxCacheEntries) cache_.clear();
  cache_.emplace(std::move(key), rho);
  return rho;
}

CMatrix CircuitExecutor::run(const Circuit& c) const {
  c.validate();
  CMatrix rho;
  std::size_t start = 0;
  if (c.shared_ops > 0) {
    const CMatrix reg = shared_segment(c);
    rho = c.shared_qubits == c.n_qubits ? reg : kron(initial_state(c.n_qubits - c.shared_qubits), reg);
    start = c.shared_ops;
  } else {
    rho = initial_state(c.n_qubits);
  }
  for (std::size_t i = start; i < c.ops.size(); ++i) apply_op(rho, c.ops[i]);
  return rho;
}

double CircuitExecutor::measure(const Circuit& c) const {
  if (c.readout_qubit < 0) throw std::invalid_argument("circuit has no readout qubit");
  return noise_.readout(z_expectation(run(c), c.readout_qubit));
}

CVector CircuitExecutor::run_pure(const Circuit& c) const {
  c.validate();
  CVector psi = CVector::Zero(static_cast<Eigen::Index>(dimension(c.n_qubits)));
  psi(0) = 1.0;
  for (const auto& op : c.ops) kernels::apply_unitary(psi, op.gate.matrix(), op.gate.targets);
  return psi;
}

double z_expectation(const CMatrix& rho, int qubit) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < rho.rows(); ++k) acc += (((k >> qubit) & 1) ? -1.0 : 1.0) * rho(k, k).real();
  return acc;
}

}  // namespace vqsim
