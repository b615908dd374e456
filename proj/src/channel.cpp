#include "vqsim/channel.hpp"

#include <cmath>
#include <numeric>

namespace vqsim {

namespace {

std::size_t n_paulis(int arity) { return std::size_t{1} << (2 * arity); }

std::size_t product_index(std::size_t a, std::size_t b, int arity) {
  std::size_t out = 0;
  std::size_t base = 1;
  for (int q = 0; q < arity; ++q) {
    const auto pa = static_cast<Pauli>(a % 4);
    const auto pb = static_cast<Pauli>(b % 4);
    out += base * static_cast<std::size_t>(pauli_product(pa, pb));
    a /= 4;
    b /= 4;
    base *= 4;
  }
  return out;
}

}  // namespace

CMatrix local_pauli_matrix(std::size_t index, int arity) {
  return PauliString(pauli_word(index, arity)).matrix();
}

PauliChannel PauliChannel::identity(int arity) {
  std::vector<double> p(n_paulis(arity), 0.0);
  p[0] = 1.0;
  return PauliChannel(arity, std::move(p));
}

PauliChannel PauliChannel::from_probabilities(int arity, std::vector<double> probabilities) {
  if (arity < 1 || arity > 4) throw std::invalid_argument("Pauli channel arity must be 1..4");
  if (probabilities.size() != n_paulis(arity)) {
    throw std::invalid_argument("Pauli channel needs 4^arity probabilities");
  }
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= -1e-15) || p > 1.0 + 1e-12) throw std::invalid_argument("Pauli channel probability outside [0,1]");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("Pauli channel probabilities must sum to 1");
  for (double& p : probabilities) p = std::max(p, 0.0);
  return PauliChannel(arity, std::move(probabilities));
}

PauliChannel PauliChannel::depolarizing(int arity, double eps) {
  const std::size_t n = n_paulis(arity);
  if (eps < 0.0 || eps > 1.0) throw std::invalid_argument("depolarizing rate outside [0,1]");
  std::vector<double> p(n, eps / static_cast<double>(n - 1));
  p[0] = 1.0 - eps;
  return from_probabilities(arity, std::move(p));
}

PauliChannel PauliChannel::bit_flip(double probability) {
  if (probability < 0.0 || probability > 1.0) throw std::invalid_argument("flip probability outside [0,1]");
  return from_probabilities(1, {1.0 - probability, probability, 0.0, 0.0});
}

PauliChannel PauliChannel::then(const PauliChannel& next) const {
  if (next.arity_ != arity_) throw std::invalid_argument("composing Pauli channels of different arity");
  const std::size_t n = probs_.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    if (probs_[a] == 0.0) continue;
    for (std::size_t b = 0; b < n; ++b) {
      out[product_index(a, b, arity_)] += probs_[a] * next.probs_[b];
    }
  }
  return PauliChannel(arity_, std::move(out));
}

KrausChannel PauliChannel::to_kraus() const {
  std::vector<CMatrix> ops;
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    if (probs_[i] > 0.0) ops.push_back(std::sqrt(probs_[i]) * local_pauli_matrix(i, arity_));
  }
  return KrausChannel::from_operators(std::move(ops));
}

KrausChannel KrausChannel::from_operators(std::vector<CMatrix> operators, double tol) {
  if (operators.empty()) throw std::invalid_argument("Kraus channel needs at least one operator");
  const Eigen::Index d = operators.front().rows();
  int arity = 0;
  while ((Eigen::Index{1} << arity) < d) ++arity;
  if ((Eigen::Index{1} << arity) != d) throw std::invalid_argument("Kraus operator dimension is not a power of 2");
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& e : operators) {
    if (e.rows() != d || e.cols() != d) throw std::invalid_argument("Kraus operators must share one square shape");
    sum += e.adjoint() * e;
  }
  if ((sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("Kraus operators are not trace preserving (sum E^dag E != I)");
  }
  return KrausChannel(arity, std::move(operators));
}

KrausChannel KrausChannel::unitary(const CMatrix& u) { return from_operators({u}); }

KrausChannel KrausChannel::then(const KrausChannel& next) const {
  if (next.arity_ != arity_) throw std::invalid_argument("composing Kraus channels of different arity");
  std::vector<CMatrix> ops;
  ops.reserve(ops_.size() * next.ops_.size());
  for (const auto& b : next.ops_) {
    for (const auto& a : ops_) ops.push_back(b * a);
  }
  return KrausChannel(arity_, std::move(ops));
}

CMatrix KrausChannel::apply(const CMatrix& rho) const {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : ops_) out.noalias() += e * rho * e.adjoint();
  return out;
}

RMatrix KrausChannel::pauli_transfer_matrix() const {
  const std::size_t n = n_paulis(arity_);
  const double d = static_cast<double>(std::size_t{1} << arity_);
  std::vector<CMatrix> paulis;
  paulis.reserve(n);
  for (std::size_t i = 0; i < n; ++i) paulis.push_back(local_pauli_matrix(i, arity_));
  RMatrix r(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    const CMatrix image = apply(paulis[j]);
    for (std::size_t i = 0; i < n; ++i) {
      r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (paulis[i] * image).trace().real() / d;
    }
  }
  return r;
}

int channel_arity(const NoiseChannel& ch) {
  return std::visit([](const auto& c) { return c.arity(); }, ch);
}

}  // namespace vqsim
