#include "vqsim/state.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <vector>

namespace vqsim {

namespace {

constexpr double kNegativeEigenTol = 1e-10;

std::uint64_t target_mask(std::span<const int> targets) {
  std::uint64_t m = 0;
  for (int t : targets) m |= std::uint64_t{1} << t;
  return m;
}

std::array<std::uint64_t, 16> local_offsets(std::span<const int> targets) {
  std::array<std::uint64_t, 16> off{};
  const std::size_t m = std::size_t{1} << targets.size();
  for (std::size_t l = 0; l < m; ++l) {
    std::uint64_t o = 0;
    for (std::size_t b = 0; b < targets.size(); ++b) {
      if ((l >> b) & 1U) o |= std::uint64_t{1} << targets[b];
    }
    off[l] = o;
  }
  return off;
}

// Local operator with its index layout resolved once per application.
struct LocalOp {
  std::size_t m = 0;
  std::uint64_t mask = 0;
  std::array<std::uint64_t, 16> off{};
  std::array<cplx, 256> u{};  // row-major
  bool diagonal = true;
};

LocalOp make_local_op(const CMatrix& u, std::span<const int> targets, bool conjugate) {
  LocalOp op;
  op.m = static_cast<std::size_t>(u.rows());
  op.mask = target_mask(targets);
  op.off = local_offsets(targets);
  for (std::size_t r = 0; r < op.m; ++r) {
    for (std::size_t c = 0; c < op.m; ++c) {
      const cplx v = u(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      op.u[r * op.m + c] = conjugate ? std::conj(v) : v;
      if (r != c && v != cplx{0.0}) op.diagonal = false;
    }
  }
  return op;
}

// data[i * stride] for i in [0, dim) is one vector; applies op on its targets.
template <std::size_t M>
void apply_strided_fixed(cplx* data, Eigen::Index stride, std::size_t dim, const LocalOp& op) {
  std::array<cplx, M> in{};
  for (std::uint64_t base = 0; base < dim; ++base) {
    if (base & op.mask) continue;
    for (std::size_t l = 0; l < M; ++l) in[l] = data[static_cast<Eigen::Index>(base | op.off[l]) * stride];
    for (std::size_t r = 0; r < M; ++r) {
      cplx acc = 0.0;
      const cplx* row = op.u.data() + r * M;
      for (std::size_t c = 0; c < M; ++c) acc += row[c] * in[c];
      data[static_cast<Eigen::Index>(base | op.off[r]) * stride] = acc;
    }
  }
}

void apply_strided(cplx* data, Eigen::Index stride, std::size_t dim, const LocalOp& op) {
  switch (op.m) {
    case 1: apply_strided_fixed<1>(data, stride, dim, op); break;
    case 2: apply_strided_fixed<2>(data, stride, dim, op); break;
    case 4: apply_strided_fixed<4>(data, stride, dim, op); break;
    case 8: apply_strided_fixed<8>(data, stride, dim, op); break;
    default: apply_strided_fixed<16>(data, stride, dim, op); break;
  }
}

// One nonzero per row: row r holds u[r][perm[r]].
bool monomial_pattern(const LocalOp& op, std::array<std::size_t, 16>& perm) {
  for (std::size_t r = 0; r < op.m; ++r) {
    std::size_t hits = 0;
    for (std::size_t c = 0; c < op.m; ++c) {
      if (op.u[r * op.m + c] != cplx{0.0}) {
        perm[r] = c;
        ++hits;
      }
    }
    if (hits != 1) return false;
  }
  return true;
}

std::size_t local_index(std::uint64_t i, std::span<const int> targets) {
  std::size_t l = 0;
  for (std::size_t b = 0; b < targets.size(); ++b) l |= ((i >> targets[b]) & 1U) << b;
  return l;
}

// Diagonal entries of op spread over the full index range.
CVector diagonal_factors(const LocalOp& op, std::span<const int> targets, std::size_t dim) {
  CVector f(static_cast<Eigen::Index>(dim));
  for (std::uint64_t i = 0; i < dim; ++i) {
    const std::size_t l = local_index(i, targets);
    f(static_cast<Eigen::Index>(i)) = op.u[l * op.m + l];
  }
  return f;
}

// rho -> E rho E^dag
void conjugate_density(CMatrix& rho, const CMatrix& e, std::span<const int> targets) {
  const auto d = rho.rows();
  const LocalOp op = make_local_op(e, targets, false);
  if (op.diagonal) {
    const CVector f = diagonal_factors(op, targets, static_cast<std::size_t>(d));
    rho.array() *= (f * f.adjoint()).array();
    return;
  }
  std::array<std::size_t, 16> perm{};
  if (monomial_pattern(op, perm)) {
    // (E rho E^dag)(i, j) = f_i conj(f_j) rho(P i, P j)
    std::vector<std::uint64_t> src(static_cast<std::size_t>(d));
    CVector f(d);
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(d); ++i) {
      const std::size_t l = local_index(i, targets);
      src[i] = (i & ~op.mask) | op.off[perm[l]];
      f(static_cast<Eigen::Index>(i)) = op.u[l * op.m + perm[l]];
    }
    CMatrix out(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const auto sj = static_cast<Eigen::Index>(src[static_cast<std::size_t>(j)]);
      const cplx fj = std::conj(f(j));
      for (Eigen::Index i = 0; i < d; ++i) out(i, j) = f(i) * fj * rho(static_cast<Eigen::Index>(src[static_cast<std::size_t>(i)]), sj);
    }
    rho = std::move(out);
    return;
  }
  const LocalOp opc = make_local_op(e, targets, true);
  // E rho: columns are contiguous in column-major storage.
  for (Eigen::Index c = 0; c < d; ++c) apply_strided(rho.data() + c * d, 1, static_cast<std::size_t>(d), op);
  // (E rho) E^dag: each row transforms by conj(E).
  for (Eigen::Index r = 0; r < d; ++r) apply_strided(rho.data() + r, d, static_cast<std::size_t>(d), opc);
}

void check_targets(std::span<const int> targets, int n_qubits, Eigen::Index local_dim) {
  if ((Eigen::Index{1} << targets.size()) != local_dim) throw std::invalid_argument("operator arity does not match targets");
  if (targets.size() > 4) throw std::invalid_argument("at most 4-qubit local operators are supported");
  std::uint64_t seen = 0;
  for (int t : targets) {
    if (t < 0 || t >= n_qubits) throw std::out_of_range("target qubit " + std::to_string(t) + " out of range");
    if (seen & (std::uint64_t{1} << t)) throw std::invalid_argument("repeated target qubit");
    seen |= std::uint64_t{1} << t;
  }
}

bool is_uniform_depolarizing(const std::vector<double>& probs) {
  for (std::size_t i = 2; i < probs.size(); ++i) {
    if (std::abs(probs[i] - probs[1]) > 1e-15 * std::max(1.0, probs[1])) return false;
  }
  return true;
}

int qubits_for_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  return n;
}

}  // namespace

PureState::PureState(int n_qubits, CVector amplitudes, double tol) : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amps_.size()) != dimension(n_qubits)) {
    throw std::invalid_argument("state vector length must be 2^n");
  }
  if (std::abs(amps_.squaredNorm() - 1.0) > tol) throw std::invalid_argument("state vector is not normalised");
}

PureState PureState::zero(int n_qubits) { return basis(n_qubits, 0); }

PureState PureState::basis(int n_qubits, std::uint64_t index) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(dimension(n_qubits)));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return PureState(n_qubits, std::move(v));
}

DensityOperator::DensityOperator(int n_qubits, CMatrix matrix, double tol) : n_qubits_(n_qubits), rho_(std::move(matrix)) {
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits));
  if (rho_.rows() != d || rho_.cols() != d) throw std::invalid_argument("density matrix must be 2^n x 2^n");
  if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) throw std::invalid_argument("density matrix is not Hermitian");
  if (std::abs(rho_.trace() - cplx{1.0}) > tol) throw std::invalid_argument("density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kNegativeEigenTol) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return trusted(psi.n_qubits(), psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityOperator DensityOperator::maximally_mixed(int n_qubits) {
  const auto d = static_cast<Eigen::Index>(dimension(n_qubits));
  return trusted(n_qubits, CMatrix::Identity(d, d) / static_cast<double>(d));
}

DensityOperator DensityOperator::zero(int n_qubits) { return from_pure(PureState::zero(n_qubits)); }

DensityOperator DensityOperator::trusted(int n_qubits, CMatrix matrix) {
  DensityOperator r;
  r.n_qubits_ = n_qubits;
  r.rho_ = std::move(matrix);
  return r;
}

RVector DensityOperator::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_, Eigen::EigenvaluesOnly);
  RVector ev = es.eigenvalues();
  for (auto& e : ev) {
    if (e < -kNegativeEigenTol) throw std::runtime_error("density matrix eigenvalue below -1e-10");
    if (e < 0.0) e = 0.0;
  }
  return ev;
}

namespace kernels {

void apply_unitary(CVector& psi, const CMatrix& u, std::span<const int> targets) {
  check_targets(targets, qubits_for_dim(psi.size()), u.rows());
  apply_strided(psi.data(), 1, static_cast<std::size_t>(psi.size()), make_local_op(u, targets, false));
}

void apply_unitary(CMatrix& rho, const CMatrix& u, std::span<const int> targets) {
  check_targets(targets, qubits_for_dim(rho.rows()), u.rows());
  conjugate_density(rho, u, targets);
}

void apply_pauli_channel(CMatrix& rho, const PauliChannel& ch, std::span<const int> targets) {
  check_targets(targets, qubits_for_dim(rho.rows()), Eigen::Index{1} << ch.arity());
  const auto& probs = ch.probabilities();
  if (probs[0] == 1.0) return;
  const auto d = static_cast<std::uint64_t>(rho.rows());
  if (is_uniform_depolarizing(probs)) {
    // rho -> (1 - q) rho + q Tr_T(rho) (x) I / 2^k with q = 4^k (1 - p_0) / (4^k - 1)
    const std::size_t m = std::size_t{1} << targets.size();
    const double q = static_cast<double>(probs.size()) * probs[1];
    const std::uint64_t tmask = target_mask(targets);
    const auto off = local_offsets(targets);
    for (std::uint64_t j0 = 0; j0 < d; ++j0) {
      if (j0 & tmask) continue;
      for (std::uint64_t i0 = 0; i0 < d; ++i0) {
        if (i0 & tmask) continue;
        // the block (i0 | off[a], j0 | off[b]) only mixes with itself
        cplx s = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
          s += rho(static_cast<Eigen::Index>(i0 | off[l]), static_cast<Eigen::Index>(j0 | off[l]));
        }
        for (std::size_t bl = 0; bl < m; ++bl) {
          for (std::size_t al = 0; al < m; ++al) {
            cplx& v = rho(static_cast<Eigen::Index>(i0 | off[al]), static_cast<Eigen::Index>(j0 | off[bl]));
            v *= (1.0 - q);
            if (al == bl) v += q * s / static_cast<double>(m);
          }
        }
      }
    }
    return;
  }
  CMatrix out = probs[0] * rho;
  for (std::size_t idx = 1; idx < probs.size(); ++idx) {
    const double p = probs[idx];
    if (p == 0.0) continue;
    std::uint64_t xm = 0;
    std::uint64_t zm = 0;
    std::size_t code = idx;
    for (int t : targets) {
      const auto q = static_cast<Pauli>(code % 4);
      code /= 4;
      if (q == Pauli::X || q == Pauli::Y) xm |= std::uint64_t{1} << t;
      if (q == Pauli::Z || q == Pauli::Y) zm |= std::uint64_t{1} << t;
    }
    // (P rho P)_{ij} = (-1)^{|(i^j) & z|} rho_{i^x, j^x}; the Y phases cancel.
    for (std::uint64_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j ^ xm);
      for (std::uint64_t i = 0; i < d; ++i) {
        const cplx v = rho(static_cast<Eigen::Index>(i ^ xm), jj);
        const bool neg = std::popcount((i ^ j) & zm) & 1;
        out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += neg ? -p * v : p * v;
      }
    }
  }
  rho = std::move(out);
}

void apply_kraus_channel(CMatrix& rho, const KrausChannel& ch, std::span<const int> targets) {
  CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
  for (const auto& e : ch.operators()) {
    // Kraus operators need not be unitary; the strided kernel only assumes linearity.
    CMatrix term = rho;
    check_targets(targets, qubits_for_dim(rho.rows()), e.rows());
    conjugate_density(term, e, targets);
    out += term;
  }
  rho = std::move(out);
}

void apply_channel(CMatrix& rho, const NoiseChannel& ch, std::span<const int> targets) {
  if (const auto* p = std::get_if<PauliChannel>(&ch)) {
    apply_pauli_channel(rho, *p, targets);
  } else {
    apply_kraus_channel(rho, std::get<KrausChannel>(ch), targets);
  }
}

}  // namespace kernels

PureState apply_gate(const PureState& psi, const GateInstance& gate) {
  validate_gate(gate, psi.n_qubits());
  CVector v = psi.amplitudes();
  kernels::apply_unitary(v, gate.matrix(), gate.targets);
  return PureState(psi.n_qubits(), std::move(v), 1e-12);
}

DensityOperator apply_gate(const DensityOperator& rho, const GateInstance& gate) {
  validate_gate(gate, rho.n_qubits());
  CMatrix m = rho.matrix();
  kernels::apply_unitary(m, gate.matrix(), gate.targets);
  return DensityOperator::trusted(rho.n_qubits(), std::move(m));
}

DensityOperator apply_channel(const DensityOperator& rho, const NoiseChannel& ch, const std::vector<int>& targets) {
  if (channel_arity(ch) != static_cast<int>(targets.size())) {
    throw std::invalid_argument("channel arity does not match target count");
  }
  CMatrix m = rho.matrix();
  kernels::apply_channel(m, ch, targets);
  return DensityOperator::trusted(rho.n_qubits(), std::move(m));
}

PureState apply_circuit(const PureState& psi, std::span<const GateInstance> gates) {
  CVector v = psi.amplitudes();
  for (const auto& g : gates) {
    validate_gate(g, psi.n_qubits());
    kernels::apply_unitary(v, g.matrix(), g.targets);
  }
  return PureState(psi.n_qubits(), std::move(v), 1e-10);
}

double expectation(const PauliString& obs, const DensityOperator& rho) {
  if (!obs.is_hermitian(1e-12)) throw std::invalid_argument("observable must have a real coefficient");
  if (obs.n_qubits() != rho.n_qubits()) throw std::invalid_argument("observable size does not match state");
  // Tr(P rho) = sum_k rho_{k, k^x} * phase(k^x)
  const std::uint64_t xm = obs.x_mask();
  const auto& m = rho.matrix();
  cplx acc = 0.0;
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const auto src = static_cast<std::uint64_t>(k) ^ xm;
    acc += obs.phase_on(src) * m(static_cast<Eigen::Index>(src), k);
  }
  if (std::abs(acc.imag()) > 1e-10) throw std::runtime_error("expectation has a non-negligible imaginary part");
  return acc.real();
}

double expectation(const PauliString& obs, const PureState& psi) {
  if (!obs.is_hermitian(1e-12)) throw std::invalid_argument("observable must have a real coefficient");
  if (obs.n_qubits() != psi.n_qubits()) throw std::invalid_argument("observable size does not match state");
  const cplx v = psi.amplitudes().dot(obs.apply(psi.amplitudes()));
  if (std::abs(v.imag()) > 1e-10) throw std::runtime_error("expectation has a non-negligible imaginary part");
  return v.real();
}

double trace_distance(const DensityOperator& a, const DensityOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace distance of operators with different dimensions");
  CMatrix diff = a.matrix() - b.matrix();
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return std::min(1.0, 0.5 * es.eigenvalues().cwiseAbs().sum());
}

double trace_distance(const PureState& a, const DensityOperator& b) {
  return trace_distance(DensityOperator::from_pure(a), b);
}

double trace_distance(const PureState& a, const PureState& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("trace distance of states with different dimensions");
  // 1 - |<a|b>|^2 = d (1 - d/4) with d = ||a - e^{i phi} b||^2 at the aligning phase;
  // no cancellation for nearby states
  const cplx ov = b.inner(a);
  const double mag = std::abs(ov);
  const cplx phase = mag > 0.0 ? ov / mag : cplx{1.0};
  const double d = (a.amplitudes() - phase * b.amplitudes()).squaredNorm();
  return std::min(1.0, std::sqrt(std::max(0.0, d * (1.0 - d / 4.0))));
}

}  // namespace vqsim
