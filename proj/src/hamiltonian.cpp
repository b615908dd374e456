#include "vqsim/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace vqsim {

double TermCoefficient::operator()(double t) const {
  double v = constant;
  if (cos_amplitude != 0.0) v += cos_amplitude * std::cos(omega * t);
  if (sin_amplitude != 0.0) v += sin_amplitude * std::sin(omega * t);
  return v;
}

Hamiltonian::Hamiltonian(int n_qubits, std::vector<HamiltonianTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  if (n_qubits < 1) throw std::invalid_argument("Hamiltonian needs at least one qubit");
  for (auto& term : terms_) {
    if (term.pauli.n_qubits() != n_qubits) throw std::invalid_argument("Hamiltonian term size mismatch");
    if (std::abs(term.pauli.coefficient() - cplx{1.0}) > 1e-12) {
      throw std::invalid_argument("Hamiltonian Pauli words carry unit coefficients; put weights in h_i");
    }
  }
}

bool Hamiltonian::time_dependent() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.coefficient.time_dependent(); });
}

std::vector<int> Hamiltonian::groups() const {
  std::vector<int> g;
  for (const auto& t : terms_) {
    if (std::find(g.begin(), g.end(), t.group) == g.end()) g.push_back(t.group);
  }
  return g;
}

std::vector<double> Hamiltonian::coefficients(double t) const {
  std::vector<double> h;
  h.reserve(terms_.size());
  for (const auto& term : terms_) h.push_back(term.coefficient(t));
  return h;
}

CMatrix Hamiltonian::matrix(double t) const {
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits_));
  CMatrix m = CMatrix::Zero(d, d);
  for (const auto& term : terms_) m += term.coefficient(t) * term.pauli.matrix();
  return m;
}

CVector Hamiltonian::apply(const CVector& psi, double t) const {
  CVector out = CVector::Zero(psi.size());
  for (const auto& term : terms_) out += term.coefficient(t) * term.pauli.apply(psi);
  return out;
}

Hamiltonian Hamiltonian::group_part(int group) const {
  std::vector<HamiltonianTerm> sel;
  for (const auto& t : terms_) {
    if (t.group == group) sel.push_back(t);
  }
  return Hamiltonian(n_qubits_, std::move(sel));
}

}  // namespace vqsim
