#pragma once

#include <span>
#include <vector>

#include "vqsim/channel.hpp"
#include "vqsim/gate.hpp"

namespace vqsim {

class PureState {
 public:
  PureState() = default;
  // Throws unless the vector has length 2^n and unit norm within `tol`.
  PureState(int n_qubits, CVector amplitudes, double tol = 1e-10);

  static PureState zero(int n_qubits);
  static PureState basis(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_qubits_; }
  const CVector& amplitudes() const { return amps_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  cplx inner(const PureState& other) const { return amps_.dot(other.amps_); }

 private:
  int n_qubits_ = 0;
  CVector amps_;
};

class DensityOperator {
 public:
  DensityOperator() = default;
  // Validates Hermiticity, unit trace and eigenvalues >= -1e-10.
  DensityOperator(int n_qubits, CMatrix matrix, double tol = 1e-10);

  static DensityOperator from_pure(const PureState& psi);
  static DensityOperator maximally_mixed(int n_qubits);
  static DensityOperator zero(int n_qubits);
  // Wraps a matrix produced by trusted trace-preserving kernels without the eigenvalue check.
  static DensityOperator trusted(int n_qubits, CMatrix matrix);

  int n_qubits() const { return n_qubits_; }
  const CMatrix& matrix() const { return rho_; }
  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  double trace() const { return rho_.trace().real(); }
  // Spectrum with roundoff negatives in [-1e-10, 0) clipped to zero.
  RVector eigenvalues() const;

 private:
  int n_qubits_ = 0;
  CMatrix rho_;
};

// In-place kernels used by the circuit executors. Local bit b of `u` acts on targets[b].
namespace kernels {
void apply_unitary(CVector& psi, const CMatrix& u, std::span<const int> targets);
void apply_unitary(CMatrix& rho, const CMatrix& u, std::span<const int> targets);
void apply_pauli_channel(CMatrix& rho, const PauliChannel& ch, std::span<const int> targets);
void apply_kraus_channel(CMatrix& rho, const KrausChannel& ch, std::span<const int> targets);
void apply_channel(CMatrix& rho, const NoiseChannel& ch, std::span<const int> targets);
}  // namespace kernels

PureState apply_gate(const PureState& psi, const GateInstance& gate);
DensityOperator apply_gate(const DensityOperator& rho, const GateInstance& gate);
DensityOperator apply_channel(const DensityOperator& rho, const NoiseChannel& ch, const std::vector<int>& targets);

PureState apply_circuit(const PureState& psi, std::span<const GateInstance> gates);

// Expectation of a Hermitian Pauli observable (real coefficient).
double expectation(const PauliString& obs, const DensityOperator& rho);
double expectation(const PauliString& obs, const PureState& psi);

double trace_distance(const DensityOperator& a, const DensityOperator& b);
double trace_distance(const PureState& a, const DensityOperator& b);
double trace_distance(const PureState& a, const PureState& b);

}  // namespace vqsim
