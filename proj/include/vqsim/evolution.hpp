#pragma once

#include "vqsim/hamiltonian.hpp"
#include "vqsim/state.hpp"

namespace vqsim {

inline constexpr double kDefaultOracleStep = 1e-5 * 2.0 * kPi;

// exp(-i H t) for time-independent H, via the eigendecomposition.
CMatrix propagator(const Hamiltonian& h, double t);

// Ordered evolution from t0 to t1; RK4 with step <= max_step when H depends on time.
CMatrix evolution_operator(const Hamiltonian& h, double t0, double t1, double max_step = kDefaultOracleStep);

PureState exact_evolution(const Hamiltonian& h, const PureState& initial, double t,
                          double max_step = kDefaultOracleStep);

// Incremental oracle for checkpoint sweeps. Requests must be non-decreasing in t
// when H is time dependent; static Hamiltonians accept any t >= 0.
class ExactEvolution {
 public:
  ExactEvolution(const Hamiltonian& h, PureState initial, double max_step = kDefaultOracleStep);
  PureState state_at(double t);

 private:
  Hamiltonian h_;
  PureState initial_;
  double max_step_;
  bool static_{true};
  // static path
  CMatrix eigvecs_;
  RVector eigvals_;
  CVector coeffs_;
  // time-dependent path
  double t_ = 0.0;
  CVector psi_;
};

}  // namespace vqsim
