#pragma once

#include <string>
#include <vector>

#include "vqsim/ansatz.hpp"
#include "vqsim/hamiltonian.hpp"

namespace vqsim {

struct VariationalSystem {
  std::string name;
  Hamiltonian hamiltonian;
  Ansatz ansatz;
  ParameterVector initial;
  double horizon = 0.0;
  std::vector<PauliString> stabilizers;  // empty when the system has none
};

// Ring of n_s spins: H = -J sum Z_j Z_{j+1} - B sum X_j (group 0 = H_Z, group 1 = H_X),
// trial exp(i lambda_2 H_X) exp(i lambda_1 H_Z) |cluster>.
VariationalSystem build_ising(int n_s, double J, double B);

// One qubit, H(t) = -(Y + Z cos t - Y sin t)/2, trial exp(i pi/2 lambda_2 Z) exp(i pi/2 lambda_1 Y)|0>.
VariationalSystem build_qubit_demo();

// Hadamards then CZ on each ring bond.
std::vector<GateInstance> cluster_prefix(int n_s);
// S_j = Z_{j-1} X_j Z_{j+1} (periodic)
std::vector<PauliString> cluster_stabilizers(int n_s);
std::vector<std::pair<int, int>> ring_bonds(int n_s);

}  // namespace vqsim
