#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "vqsim/integrator.hpp"

namespace vqsim {

// Delta^(2) = <dPsi|dPsi> - |<dPsi|Psi>|^2 with |dPsi> = -iH|Psi> - sum_k ldot_k d_k|Psi>.
double delta2(const Ansatz& ansatz, const ParameterVector& params, const RVector& lambda_dot, const Hamiltonian& h);
// Same quantity assembled from overlap-circuit estimates on `exec`.
double delta2_by_circuit(const Ansatz& ansatz, const ParameterVector& params, const RVector& lambda_dot,
                         const Hamiltonian& h, const CircuitExecutor& exec);

// A_kq = <d_q Psi|d_k Psi> - <d_q Psi|Psi><Psi|d_k Psi> (Hermitian, PSD).
CMatrix a_matrix(const Ansatz& ansatz, const ParameterVector& params);

// d^m R/dt^m for m = 0..order along lambda(t) = lambda + t lambda_dot (dense, no prefix).
std::vector<CMatrix> trial_time_derivatives(const Ansatz& ansatz, const ParameterVector& params,
                                            const RVector& lambda_dot, int order = 3);

double spectral_norm(const CMatrix& m);

struct Delta3Terms {
  double h1 = 0, h2 = 0, h3 = 0;  // ||H||, ||H^2||, ||H^3||
  double r1 = 0, r2 = 0, r3 = 0;  // ||dR/dt||, ||d2R/dt2||, ||d3R/dt3||
  double value = 0;
};
Delta3Terms delta3_terms(const Hamiltonian& h, const Ansatz& ansatz, const ParameterVector& params,
                         const RVector& lambda_dot);
double delta3_bound(const Hamiltonian& h, const Ansatz& ansatz, const ParameterVector& params, const RVector& lambda_dot);

// Residuals of Re<0|dR^dag/dt|Psi> = 0 and Re<0|d2R^dag/dt2|Psi> + ||dR/dt|0>||^2 = 0.
std::pair<double, double> taylor_identity_residuals(const Ansatz& ansatz, const ParameterVector& params,
                                                    const RVector& lambda_dot);

// Shot-noise sensitivity constants from the task prefactors.
struct ShotConstants {
  double theta_m = 0.0;
  double theta_v = 0.0;
};
ShotConstants shot_constants(const Ansatz& ansatz, const Hamiltonian& h, double t);

struct BudgetStep {
  std::size_t n = 0;
  double t = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double a_norm = 0.0;
  double dldot = 0.0;        // ||lambda_dot - lambda_dot^(0)||
  double dldot_bound = 0.0;  // ||M0^-1||^2 ||V0|| ||dM|| + ||M0^-1|| ||dV||
  double shot_delta = 0.0;   // ||M0^-1||^2 ||V0|| Theta_M + ||M0^-1|| Theta_V
  double d_algorithm = 0.0;  // D(U_n Psi_{n-1}, Psi^(0)_n)
  double d_implementation = 0.0;  // D(Psi^(0)_n, Psi_n)
  double distance = 0.0;     // D(Phi_n, Psi_n)
};

struct ErrorBudget {
  std::vector<BudgetStep> steps;
  double d_initial = 0.0;  // D(Phi_0, Psi_0)
  double d_preparation = 0.0;  // D(Psi_N, rho_N)
  double d_a = 0.0;  // D(Phi_0, Psi_0) + sum d_algorithm
  double d_i = 0.0;  // sum d_implementation + D(Psi_N, rho_N)
  double d_a_bound = 0.0;  // D(Phi_0, Psi_0) + sqrt(D2max) T + sqrt(D3max dt) T
  double d_i_bound = 0.0;  // sqrt(|A|max) |dldot|max T + D(Psi_N, rho_N)
  double realized = 0.0;   // D(Phi_N, rho_N), or D(Phi_N, Psi_N) without rho_N
  double delta2_max = 0.0, delta3_max = 0.0, a_norm_max = 0.0, dldot_max = 0.0, shot_delta_max = 0.0;
  double horizon = 0.0, dt = 0.0;
};

struct BudgetInputs {
  const Ansatz* ansatz = nullptr;
  const Hamiltonian* hamiltonian = nullptr;
  IntegratorConfig integrator;
  ParameterRhs reference;            // noiseless lambda_dot^(0)
  ParameterRhs reference_bootstrap;  // used for n < integrator.bootstrap_steps when set
  std::optional<CMatrix> final_state;  // rho_N prepared by the machine
  std::optional<PureState> phi0;       // true initial state; Psi(lambda_0) when unset
};

// Walks a complete trajectory against the exact evolution of phi0.
ErrorBudget error_budget(const Trajectory& traj, const BudgetInputs& in);

void write_budget_csv(std::ostream& os, const ErrorBudget& b);
std::string budget_json(const ErrorBudget& b);

struct CostEstimate {
  std::uint64_t circuits = 0;       // N_c
  std::uint64_t gates_per_circuit = 0;  // N_g
  std::uint64_t total_gates = 0;    // N N_c N_g N_r
};
CostEstimate cost_estimate(std::uint64_t n_v, std::uint64_t n_d, std::uint64_t n_h, std::uint64_t n_r_gates,
                           std::uint64_t k, std::uint64_t n_steps, std::uint64_t shots);

}  // namespace vqsim
