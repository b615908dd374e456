#include "vqsim/pauli.hpp"

#include <array>
#include <bit>

namespace vqsim {

char pauli_char(Pauli p) {
  static constexpr std::array<char, 4> chars{'I', 'X', 'Y', 'Z'};
  return chars[static_cast<std::size_t>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': case '_': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw ConfigError(std::string("invalid Pauli label '") + c + "'");
  }
}

Pauli pauli_product(Pauli a, Pauli b, cplx* phase) {
  const int ia = static_cast<int>(a);
  const int ib = static_cast<int>(b);
  cplx ph = 1.0;
  Pauli out;
  if (ia == 0) {
    out = b;
  } else if (ib == 0) {
    out = a;
  } else if (ia == ib) {
    out = Pauli::I;
  } else {
    const int ic = 6 - ia - ib;
    // XY = iZ, YZ = iX, ZX = iY; reversed order picks up -i.
    const bool cyclic = (ib - ia + 3) % 3 == 1;
    ph = cyclic ? kI : -kI;
    out = static_cast<Pauli>(ic);
  }
  if (phase != nullptr) *phase = ph;
  return out;
}

const CMatrix& pauli_matrix(Pauli p) {
  static const std::array<CMatrix, 4> mats = [] {
    std::array<CMatrix, 4> m;
    m[0] = CMatrix::Identity(2, 2);
    m[1] = CMatrix::Zero(2, 2);
    m[1](0, 1) = m[1](1, 0) = 1.0;
    m[2] = CMatrix::Zero(2, 2);
    m[2](0, 1) = -kI;
    m[2](1, 0) = kI;
    m[3] = CMatrix::Zero(2, 2);
    m[3](0, 0) = 1.0;
    m[3](1, 1) = -1.0;
    return m;
  }();
  return mats[static_cast<std::size_t>(p)];
}

PauliString::PauliString(int n_qubits, cplx coefficient)
    : labels_(static_cast<std::size_t>(n_qubits), Pauli::I), coefficient_(coefficient) {}

PauliString::PauliString(std::vector<Pauli> labels, cplx coefficient)
    : labels_(std::move(labels)), coefficient_(coefficient) {}

PauliString PauliString::parse(std::string_view labels, cplx coefficient) {
  std::vector<Pauli> out;
  out.reserve(labels.size());
  for (char c : labels) out.push_back(pauli_from_char(c));
  return PauliString(std::move(out), coefficient);
}

PauliString PauliString::single(int n_qubits, int qubit, Pauli p, cplx coefficient) {
  if (qubit < 0 || qubit >= n_qubits) throw std::out_of_range("Pauli qubit index out of range");
  PauliString s(n_qubits, coefficient);
  s.labels_[static_cast<std::size_t>(qubit)] = p;
  return s;
}

PauliString PauliString::with_coefficient(cplx c) const {
  PauliString s = *this;
  s.coefficient_ = c;
  return s;
}

std::uint64_t PauliString::x_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < labels_.size(); ++q) {
    if (labels_[q] == Pauli::X || labels_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
  }
  return m;
}

std::uint64_t PauliString::z_mask() const {
  std::uint64_t m = 0;
  for (std::size_t q = 0; q < labels_.size(); ++q) {
    if (labels_[q] == Pauli::Z || labels_[q] == Pauli::Y) m |= std::uint64_t{1} << q;
  }
  return m;
}

int PauliString::weight() const {
  int w = 0;
  for (Pauli p : labels_) w += p != Pauli::I;
  return w;
}

std::vector<int> PauliString::support() const {
  std::vector<int> s;
  for (std::size_t q = 0; q < labels_.size(); ++q) {
    if (labels_[q] != Pauli::I) s.push_back(static_cast<int>(q));
  }
  return s;
}

bool PauliString::is_hermitian(double tol) const { return std::abs(coefficient_.imag()) <= tol; }

bool PauliString::is_unitary(double tol) const { return std::abs(std::abs(coefficient_) - 1.0) <= tol; }

bool PauliString::commutes_with(const PauliString& other) const {
  const auto anti = std::popcount(x_mask() & other.z_mask()) + std::popcount(z_mask() & other.x_mask());
  return anti % 2 == 0;
}

PauliString PauliString::operator*(const PauliString& other) const {
  if (other.n_qubits() != n_qubits()) throw std::invalid_argument("Pauli product size mismatch");
  PauliString out(n_qubits(), coefficient_ * other.coefficient_);
  for (std::size_t q = 0; q < labels_.size(); ++q) {
    cplx ph;
    out.labels_[q] = pauli_product(labels_[q], other.labels_[q], &ph);
    out.coefficient_ *= ph;
  }
  return out;
}

cplx PauliString::phase_on(std::uint64_t basis_index) const {
  // Y = iXZ, so each Y contributes i on top of the Z sign.
  static constexpr std::array<cplx, 4> ipow{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};
  const std::uint64_t xm = x_mask();
  const std::uint64_t zm = z_mask();
  const int n_y = std::popcount(xm & zm);
  const int sign = std::popcount(basis_index & zm) & 1;
  cplx ph = coefficient_ * ipow[static_cast<std::size_t>(n_y & 3)];
  return sign ? -ph : ph;
}

CVector PauliString::apply(const CVector& amplitudes) const {
  const std::uint64_t xm = x_mask();
  CVector out(amplitudes.size());
  for (Eigen::Index k = 0; k < amplitudes.size(); ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    out(static_cast<Eigen::Index>(uk ^ xm)) = phase_on(uk) * amplitudes(k);
  }
  return out;
}

CMatrix PauliString::matrix() const {
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits()));
  const std::uint64_t xm = x_mask();
  CMatrix m = CMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    m(static_cast<Eigen::Index>(uk ^ xm), k) = phase_on(uk);
  }
  return m;
}

PauliString PauliString::restricted(const std::vector<int>& qubits) const {
  std::vector<Pauli> out;
  out.reserve(qubits.size());
  for (int q : qubits) out.push_back(at(q));
  return PauliString(std::move(out), coefficient_);
}

std::string PauliString::label() const {
  std::string s;
  s.reserve(labels_.size());
  for (Pauli p : labels_) s.push_back(pauli_char(p));
  return s;
}

std::size_t pauli_index(const std::vector<Pauli>& word) {
  std::size_t idx = 0;
  std::size_t base = 1;
  for (Pauli p : word) {
    idx += base * static_cast<std::size_t>(p);
    base *= 4;
  }
  return idx;
}

std::vector<Pauli> pauli_word(std::size_t index, int n_qubits) {
  std::vector<Pauli> word(static_cast<std::size_t>(n_qubits));
  for (auto& p : word) {
    p = static_cast<Pauli>(index % 4);
    index /= 4;
  }
  return word;
}

}  // namespace vqsim
