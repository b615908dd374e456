#pragma once

#include <random>
#include <utility>
#include <vector>

#include "vqsim/channel.hpp"
#include "vqsim/circuit.hpp"

namespace vqsim {

// CZ (s_a x s_b) CZ = s_c x s_d up to phase; a acts on the first target.
std::pair<int, int> cz_conjugation_map(int a, int b);

struct PauliTransferRecord {
  RMatrix transfer;                  // 16 x 16, index a + 4 b
  double fidelity = 1.0;             // = error_probabilities[0]
  std::vector<double> error_probabilities;
};

struct TwirlResult {
  PauliChannel channel;
  PauliTransferRecord record;
};

// eps_{ab} = sum_h |Tr(P_ab^dag E_h) / 4|^2
std::vector<double> pauli_twirl_weights(const KrausChannel& raw);
TwirlResult twirl_channel(const NoiseChannel& raw);

// Wraps every CZ with a random (s_a x s_b) before and the mapped (s_c x s_d) after.
Circuit randomized_twirl_wrap(const Circuit& circuit, std::mt19937_64& rng);
// Deterministic wrap with the given (a, b) pair on every CZ.
Circuit twirl_wrap(const Circuit& circuit, int a, int b);

}  // namespace vqsim
