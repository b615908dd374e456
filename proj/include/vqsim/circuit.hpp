#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "vqsim/gate.hpp"
#include "vqsim/noise_model.hpp"

namespace vqsim {

enum class OpRole { Gate, TwirlPauli };

struct CircuitOp {
  GateInstance gate;
  OpRole role = OpRole::Gate;
};

// Gate list on n_qubits, all starting in |0>. Noise is attached by the executor:
// init flips first, one channel after every gate, readout error on `readout_qubit`.
struct Circuit {
  int n_qubits = 0;
  std::vector<CircuitOp> ops;
  int readout_qubit = -1;
  // ops[0, shared_ops) only touch qubits < shared_qubits, so their result can be cached
  // and reused by circuits with the same leading segment.
  std::size_t shared_ops = 0;
  int shared_qubits = 0;

  void add(GateInstance g, OpRole role = OpRole::Gate) { ops.push_back({std::move(g), role}); }
  std::size_t gate_count() const { return ops.size(); }
  std::size_t count(OpRole role) const;
  void validate() const;
};

class CircuitExecutor {
 public:
  explicit CircuitExecutor(const NoiseModel& nm = {});

  const CompiledNoise& noise() const { return noise_; }
  // Final density matrix (readout error is classical and not included).
  CMatrix run(const Circuit& c) const;
  // Reported <Z> of the readout qubit, readout error folded in.
  double measure(const Circuit& c) const;
  // Noiseless state vector.
  CVector run_pure(const Circuit& c) const;
  void clear_cache() const { cache_.clear(); }
  std::size_t cache_size() const { return cache_.size(); }

  // |0..0> after the init flips.
  CMatrix initial_state(int n_qubits) const;
  // Gate followed by its noise channel.
  void apply_op(CMatrix& rho, const CircuitOp& op) const;

 private:
  CMatrix shared_segment(const Circuit& c) const;

  CompiledNoise noise_;
  mutable std::unordered_map<std::string, CMatrix> cache_;
};

double z_expectation(const CMatrix& rho, int qubit);

}  // namespace vqsim
