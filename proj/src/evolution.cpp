#include "vqsim/evolution.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace vqsim {

namespace {

void check_time(double t) {
  if (!std::isfinite(t) || t < 0.0) throw std::invalid_argument("evolution time must be finite and >= 0");
}

template <class Block>
void rk4_advance(const Hamiltonian& h, Block& y, double t0, double t1, double max_step) {
  if (t1 <= t0) return;
  const auto n = static_cast<long>(std::ceil((t1 - t0) / max_step - 1e-9));
  const double dt = (t1 - t0) / static_cast<double>(std::max(n, 1L));
  auto deriv = [&](const Block& v, double t) -> Block {
    const CMatrix hm = h.matrix(t);
    return Block(-kI * (hm * v));
  };
  double t = t0;
  for (long s = 0; s < std::max(n, 1L); ++s) {
    const Block k1 = deriv(y, t);
    const Block k2 = deriv(Block(y + 0.5 * dt * k1), t + 0.5 * dt);
    const Block k3 = deriv(Block(y + 0.5 * dt * k2), t + 0.5 * dt);
    const Block k4 = deriv(Block(y + dt * k3), t + dt);
    y += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = t0 + static_cast<double>(s + 1) * dt;
  }
}

}  // namespace

CMatrix propagator(const Hamiltonian& h, double t) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h.matrix(0.0));
  const RVector& w = es.eigenvalues();
  CVector phases(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) phases(i) = std::exp(-kI * w(i) * t);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix evolution_operator(const Hamiltonian& h, double t0, double t1, double max_step) {
  if (t1 < t0) throw std::invalid_argument("evolution_operator needs t1 >= t0");
  if (!h.time_dependent()) return propagator(h, t1 - t0);
  const auto d = static_cast<Eigen::Index>(dimension(h.n_qubits()));
  CMatrix u = CMatrix::Identity(d, d);
  rk4_advance(h, u, t0, t1, max_step);
  return u;
}

PureState exact_evolution(const Hamiltonian& h, const PureState& initial, double t, double max_step) {
  check_time(t);
  if (initial.n_qubits() != h.n_qubits()) throw std::invalid_argument("state and Hamiltonian sizes differ");
  if (t == 0.0) return initial;
  if (!h.time_dependent()) return PureState(h.n_qubits(), propagator(h, t) * initial.amplitudes(), 1e-9);
  CVector psi = initial.amplitudes();
  rk4_advance(h, psi, 0.0, t, max_step);
  return PureState(h.n_qubits(), psi, 1e-8);
}

ExactEvolution::ExactEvolution(const Hamiltonian& h, PureState initial, double max_step)
    : h_(h), initial_(std::move(initial)), max_step_(max_step), static_(!h.time_dependent()) {
  if (initial_.n_qubits() != h_.n_qubits()) throw std::invalid_argument("state and Hamiltonian sizes differ");
  if (static_) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h_.matrix(0.0));
    eigvecs_ = es.eigenvectors();
    eigvals_ = es.eigenvalues();
    coeffs_ = eigvecs_.adjoint() * initial_.amplitudes();
  } else {
    psi_ = initial_.amplitudes();
  }
}

PureState ExactEvolution::state_at(double t) {
  check_time(t);
  if (static_) {
    CVector c = coeffs_;
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-kI * eigvals_(i) * t);
    return PureState(h_.n_qubits(), eigvecs_ * c, 1e-9);
  }
  if (t < t_ - 1e-12) throw std::invalid_argument("ExactEvolution requests must be non-decreasing in time");
  // integrate on a grid anchored at 0 so results do not depend on the request pattern
  const auto target_steps = static_cast<long>(std::floor(t / max_step_ + 1e-9));
  const double grid_t = static_cast<double>(target_steps) * max_step_;
  if (grid_t > t_) {
    rk4_advance(h_, psi_, t_, grid_t, max_step_ * (1.0 + 1e-12));
    t_ = grid_t;
  }
  CVector out = psi_;
  rk4_advance(h_, out, t_, t, max_step_);
  return PureState(h_.n_qubits(), out, 1e-8);
}

}  // namespace vqsim
