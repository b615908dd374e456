#pragma once

#include <cmath>
#include <vector>

#include "vqsim/circuit.hpp"
#include "vqsim/hamiltonian.hpp"
#include "vqsim/state.hpp"

namespace vqsim {

struct TrotterConfig {
  double dt = 2.0 * kPi * std::pow(10.0, -1.4);
  bool symmetric = false;
  NoiseModel noise;
  std::vector<int> group_order;  // empty: ascending group labels

  void validate() const;
};

// exp(-i h tau sigma) for one term as a native rotation. Only Z, X, Y and ZZ words.
GateInstance term_exponential(const HamiltonianTerm& term, double h, double tau);

// Gates of one Trotter step of length tau starting at time t.
std::vector<GateInstance> trotter_step_gates(const Hamiltonian& h, double t, double tau, const TrotterConfig& cfg);

// Noisy state after preparing with `prep` and running ceil(t/dt) steps, the last of
// length t - (N_t - 1) dt.
DensityOperator trotter_evolve(const Hamiltonian& h, const std::vector<GateInstance>& prep, double t,
                               const TrotterConfig& cfg);

// Same run observed at every entry of `times` (non-decreasing), sharing the full steps.
std::vector<CMatrix> trotter_states(const Hamiltonian& h, const std::vector<GateInstance>& prep,
                                    const std::vector<double>& times, const TrotterConfig& cfg);

// 2 pi 10^e for e = -2.2, -2.1, ..., -0.6
std::vector<double> default_trotter_grid();

struct TrotterScanRow {
  double dt = 0.0;
  std::size_t steps = 0;  // N_t at the horizon
  double average_distance = 0.0;
  double final_distance = 0.0;
};

struct TrotterScan {
  std::vector<TrotterScanRow> rows;
  std::size_t best = 0;
  double horizon = 0.0;
  const TrotterScanRow& optimum() const { return rows.at(best); }
};

// Time-averaged trace distance to the exact evolution of `phi0` (trapezoid rule over
// n_eval + 1 evenly spaced times) for each dt in the grid.
TrotterScan scan_trotter_dt(const Hamiltonian& h, const std::vector<GateInstance>& prep, const PureState& phi0,
                            double horizon, const std::vector<double>& grid, const TrotterConfig& base,
                            std::size_t n_eval = 200);

// Evenly spaced times 0 .. horizon.
std::vector<double> evaluation_times(double horizon, std::size_t n_eval);
double trapezoid_average(const std::vector<double>& times, const std::vector<double>& values);

}  // namespace vqsim
