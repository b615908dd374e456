#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vqsim/types.hpp"

namespace vqsim {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);
Pauli pauli_from_char(char c);
// Product sigma_a sigma_b = phase * sigma_c on one qubit.
Pauli pauli_product(Pauli a, Pauli b, cplx* phase = nullptr);
const CMatrix& pauli_matrix(Pauli p);

// n-qubit Pauli word with a complex coefficient.
//
// Label character i acts on qubit i. Qubit 0 is the least-significant bit of a
// basis-state index, so |k> has qubit q in state (k >> q) & 1.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(int n_qubits, cplx coefficient = 1.0);
  PauliString(std::vector<Pauli> labels, cplx coefficient = 1.0);

  static PauliString parse(std::string_view labels, cplx coefficient = 1.0);
  static PauliString single(int n_qubits, int qubit, Pauli p, cplx coefficient = 1.0);

  int n_qubits() const { return static_cast<int>(labels_.size()); }
  Pauli at(int qubit) const { return labels_.at(static_cast<std::size_t>(qubit)); }
  const std::vector<Pauli>& labels() const { return labels_; }
  cplx coefficient() const { return coefficient_; }
  PauliString with_coefficient(cplx c) const;

  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;
  int weight() const;
  std::vector<int> support() const;
  bool is_identity() const { return weight() == 0; }
  bool is_hermitian(double tol = 1e-12) const;
  bool is_unitary(double tol = 1e-12) const;

  bool commutes_with(const PauliString& other) const;
  PauliString operator*(const PauliString& other) const;

  // Amplitude factor such that P|k> = phase_on(k) |k ^ x_mask()>.
  cplx phase_on(std::uint64_t basis_index) const;

  CVector apply(const CVector& amplitudes) const;
  CMatrix matrix() const;

  // Pauli word restricted to the listed qubits, in the given order.
  PauliString restricted(const std::vector<int>& qubits) const;

  std::string label() const;

  bool operator==(const PauliString& other) const = default;

 private:
  std::vector<Pauli> labels_;
  cplx coefficient_{1.0, 0.0};
};

// Index of a k-qubit Pauli word as sum_b code(p_b) * 4^b.
std::size_t pauli_index(const std::vector<Pauli>& word);
std::vector<Pauli> pauli_word(std::size_t index, int n_qubits);

}  // namespace vqsim
