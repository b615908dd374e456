#include "vqsim/estimator.hpp"

#include <cmath>

namespace vqsim {

void MitigationConfig::validate() const {
  if (!enabled) return;
  if (order != 1 && order != 2) throw ConfigError("mitigation.order must be 1 or 2");
  if (r_grid.size() < static_cast<std::size_t>(order + 1)) throw ConfigError("mitigation.r_grid needs order + 1 values");
  for (double r : r_grid) {
    if (!(r >= 1.0)) throw ConfigError("mitigation.r_grid values must be >= 1");
  }
}

CoefficientEstimator::CoefficientEstimator(Ansatz ansatz, Hamiltonian h, EstimatorConfig config)
    : ansatz_(std::move(ansatz)), h_(std::move(h)), config_(std::move(config)), base_(config_.mode.noise) {
  config_.mitigation.validate();
  if (config_.mode.kind == EvaluationKind::NoisyShots && config_.mode.shots < 1) {
    throw ConfigError("shot-noise mode needs shots >= 1");
  }
  if (h_.n_qubits() != ansatz_.n_qubits()) throw ConfigError("Hamiltonian and ansatz sizes differ");
  if (mitigated()) {
    for (double r : config_.mitigation.r_grid) boosted_.emplace_back(boost_noise(config_.mode.noise, r));
  }
}

bool CoefficientEstimator::mitigated() const {
  return config_.mitigation.enabled && config_.mode.kind != EvaluationKind::Exact;
}

double CoefficientEstimator::measured_value(double x_noisy, const CircuitExecutor& exec, std::mt19937_64* rng,
                                            bool readout, double* err) const {
  double x = x_noisy;
  *err = 0.0;
  if (config_.mode.kind == EvaluationKind::NoisyShots) {
    x = sample_shot_noise(std::clamp(x_noisy, -1.0, 1.0), config_.mode.shots, *rng);
    *err = shot_stderr(x, config_.mode.shots);
    if (*err == 0.0) *err = 1.0 / static_cast<double>(config_.mode.shots);  // keeps the weighted fit defined at |x| = 1
  }
  if (readout && config_.mitigation.correct_readout) {
    const double scale = 1.0 - exec.noise().p0 - exec.noise().p1;
    x = correct_measurement_bias(x, exec.noise().p0, exec.noise().p1);
    *err /= scale;
  }
  return x;
}

double CoefficientEstimator::estimate(const std::function<double(const CircuitExecutor&)>& measure,
                                      const StreamKey& key, std::uint64_t tag, bool readout,
                                      std::vector<ExtrapolationPoint>* points, ExtrapolationFit* fit) const {
  if (!mitigated()) {
    auto rng = make_stream(key.master, {key.trial, key.step, key.stage, tag, 0});
    double err = 0.0;
    const double x = measured_value(measure(base_), base_, &rng, readout, &err);
    if (points) *points = {{1.0, x, err}};
    return x;
  }
  std::vector<ExtrapolationPoint> pts;
  for (std::size_t l = 0; l < boosted_.size(); ++l) {
    auto rng = make_stream(key.master, {key.trial, key.step, key.stage, tag, l + 1});
    double err = 0.0;
    const double x = measured_value(measure(boosted_[l]), boosted_[l], &rng, readout, &err);
    pts.push_back({config_.mitigation.r_grid[l], x, err});
  }
  const ExtrapolationFit f = extrapolate_zero_noise(pts, config_.mitigation.order);
  if (points) *points = pts;
  if (fit) *fit = f;
  return f.intercept;
}

MVEvaluation CoefficientEstimator::evaluate(const ParameterVector& params, const StreamKey& key) const {
  MVEvaluation out;
  out.tasks = build_mv_tasks(ansatz_, h_, params, config_.principle);
  out.values.resize(out.tasks.size(), 0.0);
  for (std::size_t n = 0; n < out.tasks.size(); ++n) {
    const auto& t = out.tasks[n];
    if (t.amplitude == 0.0) continue;  // contributes nothing whatever is measured
    if (config_.mode.kind == EvaluationKind::Exact) {
      out.values[n] = evaluate_task_oracle(t, ansatz_, params);
    } else {
      out.values[n] = estimate([&](const CircuitExecutor& ex) { return ex.measure(t.circuit); }, key, t.index);
    }
  }
  out.system = assemble_mv(out.tasks, out.values, ansatz_.n_parameters(), config_.principle);
  return out;
}

Circuit trial_state_circuit(const Ansatz& ansatz, const ParameterVector& params) {
  ansatz.check_parameters(params);
  Circuit c;
  c.n_qubits = ansatz.n_qubits();
  for (const auto& g : ansatz.prefix()) c.add(g);
  c.shared_ops = c.ops.size();
  c.shared_qubits = c.shared_ops ? c.n_qubits : 0;
  for (std::size_t k = 0; k < ansatz.n_parameters(); ++k) {
    for (auto& g : ansatz.block_gates(k, params.values(static_cast<Eigen::Index>(k)))) c.add(std::move(g));
  }
  return c;
}

CMatrix CoefficientEstimator::noisy_trial_state(const ParameterVector& params) const {
  return noisy_trial_state(params, base_);
}

CMatrix CoefficientEstimator::noisy_trial_state(const ParameterVector& params, const CircuitExecutor& exec) const {
  return exec.run(trial_state_circuit(ansatz_, params));
}

double CoefficientEstimator::observable(const PauliString& p, const ParameterVector& params, const StreamKey& key,
                                        std::uint64_t tag) const {
  const auto dm = [&](const CircuitExecutor& ex) {
    return expectation(p, DensityOperator::trusted(ansatz_.n_qubits(), noisy_trial_state(params, ex)));
  };
  if (config_.mode.kind == EvaluationKind::Exact) return expectation(p, ansatz_.prepare(params));
  // state quantity: no ancilla readout map to undo
  return estimate(dm, key, tag, false);
}

}  // namespace vqsim
