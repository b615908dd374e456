#pragma once

#include <functional>
#include <string>
#include <vector>

#include "vqsim/estimator.hpp"

namespace vqsim {

enum class Method { Euler, RK4 };
std::string method_name(Method m);
Method method_from_name(const std::string& name);

struct IntegratorConfig {
  Method method = Method::RK4;
  double dt = 2.0 * kPi * 1e-3;
  double horizon = 4.0 * kPi;
  double cutoff = 1e-8;  // relative to the largest singular value
  // Steps taken with the bootstrap right-hand side (if one is given), used where the
  // main equations are degenerate at the initial point.
  std::size_t bootstrap_steps = 0;

  // Throws ConfigError unless dt > 0, dt <= T (T > 0) and T/dt is an integer within 1e-9.
  std::size_t steps() const;
};

struct SolveInfo {
  RVector singular_values;
  std::size_t rank = 0;
  double condition = 0.0;  // largest / smallest kept singular value
};

// Minimum-norm least-squares solution of M x = V with singular values below
// max(cutoff * sigma_max, floor) discarded.
RVector solve_lambda_dot(const RMatrix& M, const RVector& V, double cutoff, SolveInfo* info = nullptr, double floor = 0.0);

// Absolute floor used by the right-hand sides: M entries are O(1) products of
// Hamiltonian and ansatz coefficients, anything this small is roundoff.
inline constexpr double kSingularFloor = 1e-12;

struct StepRecord {
  std::size_t n = 0;
  double t = 0.0;
  RVector lambda;
  RVector lambda_dot;  // from the first-stage evaluation at (lambda, t)
  RMatrix M;
  RVector V;
  SolveInfo solve;
};

struct Trajectory {
  std::vector<StepRecord> records;
};

// Right-hand side of the parameter ODE: lambda_dot at (params) for the given
// (step, stage); fills M, V and the solve info when `rec` is set.
using ParameterRhs = std::function<RVector(const ParameterVector&, std::size_t step, std::size_t stage, StepRecord* rec)>;

// One step from params; `first` is the stage-0 derivative if already known.
ParameterVector integrate_step(const ParameterVector& params, const IntegratorConfig& cfg, std::size_t step,
                               const ParameterRhs& rhs, const RVector* first = nullptr);

ParameterRhs estimator_rhs(const CoefficientEstimator& est, const IntegratorConfig& cfg, std::uint64_t master,
                           std::uint64_t trial);
// Noiseless M, V from the derivative states; the reference lambda_dot^(0).
ParameterRhs exact_rhs(const Ansatz& ansatz, const Hamiltonian& h, Principle principle, double cutoff);

using RecordCallback = std::function<void(const StepRecord&)>;

// Wraps a right-hand side for the ansatz with an extra global-phase parameter so it
// can drive the original parameters: the phase is held at 0 and its rate dropped.
ParameterRhs drop_phase_rhs(ParameterRhs with_phase);

// Records at t_0 .. t_N (N + 1 entries).
Trajectory run_simulation(const ParameterVector& initial, const IntegratorConfig& cfg, const ParameterRhs& rhs,
                          const RecordCallback& on_record = {}, const ParameterRhs& bootstrap = {});
Trajectory run_simulation(const CoefficientEstimator& est, const ParameterVector& initial, const IntegratorConfig& cfg,
                          std::uint64_t master, std::uint64_t trial, const RecordCallback& on_record = {});

}  // namespace vqsim
