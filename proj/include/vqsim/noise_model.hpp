#pragma once

#include <optional>

#include "vqsim/channel.hpp"

namespace vqsim {

// Gate-level noise of the emulated machine. Rates are the r = 1 values; `boost`
// scales every stochastic error (init, gates, readout) by composition.
struct NoiseModel {
  double eps_init = 0.0;
  double p0 = 0.0;  // reported 1 when the ancilla is in 0
  double p1 = 0.0;  // reported 0 when the ancilla is in 1
  double eps1 = 0.0;
  double eps2 = 0.0;
  double boost = 1.0;
  // Non-stochastic two-qubit gate noise; replaces the depolarizing two-qubit channel when set.
  std::optional<KrausChannel> two_qubit_raw;
  // Use the twirled Pauli form of two_qubit_raw instead of the raw map.
  bool twirl_raw = false;
  // Attach eps1 noise to the Pauli gates inserted by randomized_twirl_wrap.
  bool noisy_twirl_gates = false;

  // eps_init = p0 = p1 = eps1 = eps2 / 10.
  static NoiseModel from_two_qubit_rate(double eps2);
  static NoiseModel noiseless() { return {}; }

  void validate() const;
  bool is_noiseless() const;
  NoiseModel scaled(double factor) const;  // all base rates times factor, boost kept
};

NoiseModel boost_noise(const NoiseModel& nm, double r);

// Channels after boosting, ready for the executor.
struct CompiledNoise {
  PauliChannel init;  // X flip
  PauliChannel single;
  NoiseChannel two;
  double p0 = 0.0;
  double p1 = 0.0;
  bool noisy_twirl_gates = false;
  bool noiseless = true;

  // Reported <Z> for a true ancilla value x: (p1 - p0) + (1 - p0 - p1) x.
  double readout(double x) const { return (p1 - p0) + (1.0 - p0 - p1) * x; }
};

CompiledNoise compile_noise(const NoiseModel& nm);

}  // namespace vqsim
