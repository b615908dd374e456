#pragma once

#include <variant>
#include <vector>

#include "vqsim/pauli.hpp"

namespace vqsim {

class KrausChannel;

// Stochastic Pauli channel: rho -> sum_P p_P P rho P.
//
// Outcome index is sum_b code(p_b) 4^b over local qubits b. For a two-qubit
// channel on (control, target) that is a + 4 b with a on the control.
class PauliChannel {
 public:
  PauliChannel() : PauliChannel(identity(1)) {}

  static PauliChannel identity(int arity);
  static PauliChannel from_probabilities(int arity, std::vector<double> probabilities);
  // (1 - eps) [I] + eps / (4^k - 1) sum over non-identity Paulis.
  static PauliChannel depolarizing(int arity, double eps);
  static PauliChannel bit_flip(double probability);

  int arity() const { return arity_; }
  const std::vector<double>& probabilities() const { return probs_; }
  double probability(std::size_t index) const { return probs_.at(index); }
  double fidelity() const { return probs_[0]; }
  double error_probability() const { return 1.0 - probs_[0]; }

  // Channel applying *this first, then `next`.
  PauliChannel then(const PauliChannel& next) const;
  KrausChannel to_kraus() const;

 private:
  PauliChannel(int arity, std::vector<double> probs) : arity_(arity), probs_(std::move(probs)) {}
  int arity_ = 1;
  std::vector<double> probs_;
};

// General CPTP map in Kraus form, sum_h E_h^dag E_h = I.
class KrausChannel {
 public:
  static KrausChannel from_operators(std::vector<CMatrix> operators, double tol = 1e-10);
  static KrausChannel unitary(const CMatrix& u);

  int arity() const { return arity_; }
  const std::vector<CMatrix>& operators() const { return ops_; }

  // Channel applying *this first, then `next`.
  KrausChannel then(const KrausChannel& next) const;
  CMatrix apply(const CMatrix& rho) const;
  // R_ij = Tr(P_i N(P_j)) / 2^k in the Pauli index order of PauliChannel.
  RMatrix pauli_transfer_matrix() const;

 private:
  KrausChannel(int arity, std::vector<CMatrix> ops) : arity_(arity), ops_(std::move(ops)) {}
  int arity_ = 1;
  std::vector<CMatrix> ops_;
};

using NoiseChannel = std::variant<PauliChannel, KrausChannel>;

int channel_arity(const NoiseChannel& ch);

// Dense local matrix of the Pauli word with the given index.
CMatrix local_pauli_matrix(std::size_t index, int arity);

}  // namespace vqsim
