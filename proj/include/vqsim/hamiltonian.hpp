#pragma once

#include <vector>

#include "vqsim/pauli.hpp"

namespace vqsim {

// h(t) = constant + cos_amplitude cos(omega t) + sin_amplitude sin(omega t)
struct TermCoefficient {
  double constant = 0.0;
  double cos_amplitude = 0.0;
  double sin_amplitude = 0.0;
  double omega = 1.0;

  static TermCoefficient fixed(double value) { return {value, 0.0, 0.0, 1.0}; }
  double operator()(double t) const;
  bool time_dependent() const { return cos_amplitude != 0.0 || sin_amplitude != 0.0; }
};

struct HamiltonianTerm {
  TermCoefficient coefficient;
  PauliString pauli;  // unit coefficient, unitary
  int group = 0;      // Trotter group label
};

// H(t) = sum_i h_i(t) sigma_i with Pauli words sigma_i.
class Hamiltonian {
 public:
  Hamiltonian() = default;
  Hamiltonian(int n_qubits, std::vector<HamiltonianTerm> terms);

  int n_qubits() const { return n_qubits_; }
  std::size_t size() const { return terms_.size(); }
  const std::vector<HamiltonianTerm>& terms() const { return terms_; }
  const HamiltonianTerm& term(std::size_t i) const { return terms_.at(i); }
  bool time_dependent() const;
  std::vector<int> groups() const;

  std::vector<double> coefficients(double t) const;
  CMatrix matrix(double t = 0.0) const;
  CVector apply(const CVector& psi, double t = 0.0) const;
  // Sum of the terms carrying `group`.
  Hamiltonian group_part(int group) const;

 private:
  int n_qubits_ = 0;
  std::vector<HamiltonianTerm> terms_;
};

}  // namespace vqsim
