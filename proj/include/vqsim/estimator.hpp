#pragma once

#include <functional>
#include <random>
#include <vector>

#include "vqsim/coefficients.hpp"
#include "vqsim/extrapolation.hpp"
#include "vqsim/rng.hpp"

namespace vqsim {

struct MitigationConfig {
  bool enabled = false;
  std::vector<double> r_grid{1.0, 2.0};
  int order = 1;
  bool correct_readout = false;  // undo the affine readout map at each r before fitting

  void validate() const;
};

struct EstimatorConfig {
  Principle principle = Principle::McLachlan;
  EvaluationMode mode;
  MitigationConfig mitigation;
};

struct MVEvaluation {
  MVSystem system;
  std::vector<CoefficientTask> tasks;
  std::vector<double> values;  // per-task <X> estimates fed to assembly
};

// Turns (lambda, t) into M and V through the configured evaluation mode. Every
// <X> is boosted and extrapolated on its own when mitigation is on.
// Holds executor caches, so one instance must not be shared between threads.
class CoefficientEstimator {
 public:
  CoefficientEstimator(Ansatz ansatz, Hamiltonian h, EstimatorConfig config);

  const Ansatz& ansatz() const { return ansatz_; }
  const Hamiltonian& hamiltonian() const { return h_; }
  const EstimatorConfig& config() const { return config_; }
  bool mitigated() const;

  MVEvaluation evaluate(const ParameterVector& params, const StreamKey& key) const;

  // Estimate of one measured quantity; `measure` returns the noisy expectation for an
  // executor. Streams are keyed by (key, tag, level). `readout` marks ancilla readouts,
  // the only values the readout correction applies to.
  double estimate(const std::function<double(const CircuitExecutor&)>& measure, const StreamKey& key,
                  std::uint64_t tag, bool readout = true, std::vector<ExtrapolationPoint>* points = nullptr,
                  ExtrapolationFit* fit = nullptr) const;

  // Density matrix the noisy machine prepares for |Psi(lambda)> at r = 1.
  CMatrix noisy_trial_state(const ParameterVector& params) const;
  CMatrix noisy_trial_state(const ParameterVector& params, const CircuitExecutor& exec) const;
  // Tr(P rho) of the prepared trial state, mitigated and shot-sampled as configured.
  double observable(const PauliString& p, const ParameterVector& params, const StreamKey& key, std::uint64_t tag) const;

  const CircuitExecutor& base_executor() const { return base_; }
  const std::vector<CircuitExecutor>& boosted_executors() const { return boosted_; }

 private:
  double measured_value(double x_noisy, const CircuitExecutor& exec, std::mt19937_64* rng, bool readout,
                        double* err) const;

  Ansatz ansatz_;
  Hamiltonian h_;
  EstimatorConfig config_;
  CircuitExecutor base_;
  std::vector<CircuitExecutor> boosted_;
};

Circuit trial_state_circuit(const Ansatz& ansatz, const ParameterVector& params);

}  // namespace vqsim
