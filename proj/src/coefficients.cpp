#include "vqsim/coefficients.hpp"

#include <cmath>
#include <ostream>

#include "vqsim/io.hpp"

namespace vqsim {

cplx eta(Principle p) { return p == Principle::Dirac ? cplx{1.0, 0.0} : cplx{0.0, -1.0}; }

std::string principle_name(Principle p) { return p == Principle::Dirac ? "dirac" : "mclachlan"; }

Principle principle_from_name(const std::string& name) {
  if (name == "dirac" || name == "eta1") return Principle::Dirac;
  if (name == "mclachlan") return Principle::McLachlan;
  throw ConfigError("unknown variational principle '" + name + "' (dirac | mclachlan)");
}

std::string evaluation_name(EvaluationKind k) {
  switch (k) {
    case EvaluationKind::Exact: return "exact";
    case EvaluationKind::NoisyExact: return "noisy";
    case EvaluationKind::NoisyShots: return "shots";
  }
  return "?";
}

EvaluationKind evaluation_from_name(const std::string& name) {
  if (name == "exact") return EvaluationKind::Exact;
  if (name == "noisy") return EvaluationKind::NoisyExact;
  if (name == "shots") return EvaluationKind::NoisyShots;
  throw ConfigError("unknown evaluation mode '" + name + "' (exact | noisy | shots)");
}

namespace {

void add_controlled(Circuit& c, int anc, const PauliString& sigma, std::size_t& counted) {
  if (std::abs(sigma.coefficient() - cplx{1.0}) > 1e-12) {
    throw std::invalid_argument("controlled Pauli words must carry unit coefficient");
  }
  for (int t = 0; t < sigma.n_qubits(); ++t) {
    const Pauli p = sigma.at(t);
    if (p == Pauli::I) continue;
    c.add(GateInstance::controlled_pauli(anc, t, p));
    ++counted;
  }
}

}  // namespace

Circuit build_overlap_circuit(const Ansatz& ansatz, const ParameterVector& params, std::size_t pos_a,
                              const PauliString& sigma_a, std::size_t pos_b, const PauliString& sigma_b,
                              double theta, std::size_t* counted_gates) {
  ansatz.check_parameters(params);
  if (pos_a > pos_b) throw std::invalid_argument("overlap circuit needs pos_a <= pos_b");
  if (pos_b > ansatz.n_parameters()) throw std::out_of_range("insertion position past the end of the ansatz");
  const int n = ansatz.n_qubits();
  const int anc = n;
  Circuit c;
  c.n_qubits = n + 1;
  c.readout_qubit = anc;
  std::size_t counted = 0;
  for (const auto& g : ansatz.prefix()) c.add(g);
  for (std::size_t k = 0; k < pos_a; ++k) {
    for (auto& g : ansatz.block_gates(k, params.values(static_cast<Eigen::Index>(k)))) {
      c.add(std::move(g));
      ++counted;
    }
  }
  c.shared_ops = c.ops.size();
  c.shared_qubits = n;
  // (|0> + e^{i theta}|1>)/sqrt2
  c.add(GateInstance::hadamard(anc));
  c.add(GateInstance::phase_rot(anc, -theta / 2.0));
  counted += 2;  // this Hadamard and the final one; phase and X flips are not counted
  // sigma_a acts on the ancilla-0 branch
  c.add(GateInstance::pauli_gate(anc, Pauli::X));
  add_controlled(c, anc, sigma_a, counted);
  c.add(GateInstance::pauli_gate(anc, Pauli::X));
  for (std::size_t k = pos_a; k < pos_b; ++k) {
    for (auto& g : ansatz.block_gates(k, params.values(static_cast<Eigen::Index>(k)))) {
      c.add(std::move(g));
      ++counted;
    }
  }
  add_controlled(c, anc, sigma_b, counted);
  c.add(GateInstance::hadamard(anc));
  if (counted_gates) *counted_gates = counted;
  if (c.shared_ops == 0) c.shared_qubits = 0;
  return c;
}

double overlap_oracle(const Ansatz& ansatz, const ParameterVector& params, std::size_t pos_a,
                      const PauliString& sigma_a, std::size_t pos_b, const PauliString& sigma_b, double theta) {
  const CVector a = ansatz.insert_state(params, pos_a, sigma_a);
  const CVector b = ansatz.insert_state(params, pos_b, sigma_b);
  return (std::exp(kI * theta) * a.dot(b)).real();
}

cplx overlap_by_circuit(const Ansatz& ansatz, const ParameterVector& params, std::size_t pos_a,
                        const PauliString& sigma_a, std::size_t pos_b, const PauliString& sigma_b,
                        const CircuitExecutor& exec) {
  bool swapped = pos_a > pos_b;
  const std::size_t pa = swapped ? pos_b : pos_a;
  const std::size_t pb = swapped ? pos_a : pos_b;
  const PauliString& sa = swapped ? sigma_b : sigma_a;
  const PauliString& sb = swapped ? sigma_a : sigma_b;
  const double re = exec.measure(build_overlap_circuit(ansatz, params, pa, sa, pb, sb, 0.0));
  const double im = exec.measure(build_overlap_circuit(ansatz, params, pa, sa, pb, sb, -kPi / 2.0));
  const cplx z{re, im};
  return swapped ? std::conj(z) : z;
}

std::vector<CoefficientTask> build_mv_tasks(const Ansatz& ansatz, const Hamiltonian& h, const ParameterVector& params,
                                            Principle principle) {
  ansatz.check_parameters(params);
  if (h.n_qubits() != ansatz.n_qubits()) throw std::invalid_argument("Hamiltonian and ansatz sizes differ");
  const cplx e = eta(principle);
  const std::size_t nv = ansatz.n_parameters();
  const auto hcoef = h.coefficients(params.time);
  std::vector<CoefficientTask> tasks;

  auto finish = [&](CoefficientTask t) {
    t.amplitude = std::abs(t.prefactor);
    t.theta = t.amplitude == 0.0 ? 0.0 : std::arg(t.prefactor);
    t.circuit_theta = t.theta;
    if (t.pos_a > t.pos_b) {
      // Re(e^{i theta} <A|B>) = Re(e^{-i theta} <B|A>)
      std::swap(t.pos_a, t.pos_b);
      std::swap(t.sigma_a, t.sigma_b);
      t.circuit_theta = -t.theta;
    }
    t.circuit = build_overlap_circuit(ansatz, params, t.pos_a, t.sigma_a, t.pos_b, t.sigma_b, t.circuit_theta,
                                      &t.counted_gates);
    t.index = tasks.size();
    tasks.push_back(std::move(t));
  };

  for (std::size_t k = 0; k < nv; ++k) {
    const auto& dk = ansatz.block(k).derivative;
    for (std::size_t i = 0; i < dk.size(); ++i) {
      for (std::size_t q = (principle == Principle::Dirac ? k + 1 : k); q < nv; ++q) {
        const auto& dq = ansatz.block(q).derivative;
        for (std::size_t j = 0; j < dq.size(); ++j) {
          CoefficientTask t;
          t.kind = TaskKind::M;
          t.k = k;
          t.i = i;
          t.q = q;
          t.j = j;
          t.prefactor = kI * e * std::conj(dk[i].f) * dq[j].f;
          t.pos_a = k;
          t.sigma_a = dk[i].sigma;
          t.pos_b = q;
          t.sigma_b = dq[j].sigma;
          finish(std::move(t));
        }
      }
    }
  }
  for (std::size_t k = 0; k < nv; ++k) {
    const auto& dk = ansatz.block(k).derivative;
    for (std::size_t i = 0; i < dk.size(); ++i) {
      for (std::size_t j = 0; j < h.size(); ++j) {
        CoefficientTask t;
        t.kind = TaskKind::V;
        t.k = k;
        t.i = i;
        t.q = k;
        t.j = j;
        t.prefactor = e * std::conj(dk[i].f) * hcoef[j];
        t.pos_a = k;
        t.sigma_a = dk[i].sigma;
        t.pos_b = nv;
        t.sigma_b = h.term(j).pauli;
        finish(std::move(t));
      }
    }
  }
  return tasks;
}

double evaluate_task_oracle(const CoefficientTask& task, const Ansatz& ansatz, const ParameterVector& params) {
  return overlap_oracle(ansatz, params, task.pos_a, task.sigma_a, task.pos_b, task.sigma_b, task.circuit_theta);
}

double evaluate_task_circuit(const CoefficientTask& task, const CircuitExecutor& exec) {
  return exec.measure(task.circuit);
}

double evaluate_task(const CoefficientTask& task, const Ansatz& ansatz, const ParameterVector& params,
                     const EvaluationMode& mode, const CircuitExecutor& exec, std::mt19937_64* rng) {
  switch (mode.kind) {
    case EvaluationKind::Exact:
      return evaluate_task_oracle(task, ansatz, params);
    case EvaluationKind::NoisyExact:
      return evaluate_task_circuit(task, exec);
    case EvaluationKind::NoisyShots: {
      if (!rng) throw std::invalid_argument("shot-noise evaluation needs an RNG stream");
      const double x = evaluate_task_circuit(task, exec);
      return sample_shot_noise(std::clamp(x, -1.0, 1.0), mode.shots, *rng);
    }
  }
  throw std::logic_error("unhandled evaluation mode");
}

double sample_shot_noise(double x_true, std::uint64_t n_r, std::mt19937_64& rng) {
  if (n_r < 1) throw std::invalid_argument("shot count must be >= 1");
  if (!(std::abs(x_true) <= 1.0 + 1e-12)) throw std::invalid_argument("expectation value outside [-1, 1]");
  const double x = std::clamp(x_true, -1.0, 1.0);
  const double p0 = (1.0 - x) / 2.0;
  const double sd = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(n_r));
  if (sd == 0.0) return x;
  std::normal_distribution<double> dist(p0, sd);
  return 1.0 - 2.0 * dist(rng);
}

double shot_stderr(double x, std::uint64_t n_r) {
  const double c = std::clamp(x, -1.0, 1.0);
  return std::sqrt(std::max(0.0, 1.0 - c * c) / static_cast<double>(n_r));
}

MVSystem assemble_mv(const std::vector<CoefficientTask>& tasks, const std::vector<double>& values, std::size_t n_params,
                     Principle principle) {
  if (values.size() != tasks.size()) throw std::invalid_argument("missing task results");
  const auto nv = static_cast<Eigen::Index>(n_params);
  MVSystem out{RMatrix::Zero(nv, nv), RVector::Zero(nv)};
  for (std::size_t n = 0; n < tasks.size(); ++n) {
    const auto& t = tasks[n];
    if (!std::isfinite(values[n])) throw std::invalid_argument("non-finite task result");
    const double v = t.contribution(values[n]);
    const auto k = static_cast<Eigen::Index>(t.k);
    const auto q = static_cast<Eigen::Index>(t.q);
    if (k >= nv || q >= nv) throw std::out_of_range("task index outside the parameter range");
    if (t.kind == TaskKind::V) {
      out.V(k) += v;
    } else {
      out.M(k, q) += v;
    }
  }
  for (Eigen::Index k = 0; k < nv; ++k) {
    for (Eigen::Index q = k + 1; q < nv; ++q) {
      out.M(q, k) = principle == Principle::Dirac ? -out.M(k, q) : out.M(k, q);
    }
  }
  return out;
}

MVSystem direct_mv(const Ansatz& ansatz, const Hamiltonian& h, const ParameterVector& params, Principle principle) {
  const auto psi = ansatz.prepare(params);
  const auto d = ansatz.derivatives(params);
  const CVector hpsi = h.apply(psi.amplitudes(), params.time);
  const auto nv = static_cast<Eigen::Index>(ansatz.n_parameters());
  const cplx e = eta(principle);
  MVSystem out{RMatrix(nv, nv), RVector(nv)};
  for (Eigen::Index k = 0; k < nv; ++k) {
    for (Eigen::Index q = 0; q < nv; ++q) {
      out.M(k, q) = 2.0 * (kI * e * d[static_cast<std::size_t>(k)].dot(d[static_cast<std::size_t>(q)])).real();
    }
    out.V(k) = 2.0 * (e * d[static_cast<std::size_t>(k)].dot(hpsi)).real();
  }
  return out;
}

void write_task_dump(std::ostream& os, const std::vector<TaskDumpRow>& rows) {
  os << "index,kind,k,i,q,j,amplitude,theta,pos_a,pos_b,sigma_a,sigma_b,gate_count,counted_gates,exact,circuit_exact,"
        "noisy,shots\n";
  for (const auto& r : rows) {
    const auto& t = *r.task;
    os << csv_join({std::to_string(t.index), t.kind == TaskKind::M ? "M" : "V", std::to_string(t.k),
                    std::to_string(t.i), std::to_string(t.q), std::to_string(t.j), format_double(t.amplitude),
                    format_double(t.theta), std::to_string(t.pos_a), std::to_string(t.pos_b), t.sigma_a.label(),
                    t.sigma_b.label(), std::to_string(t.circuit.gate_count()), std::to_string(t.counted_gates),
                    format_double(r.exact), format_double(r.circuit_exact), format_double(r.noisy),
                    format_double(r.shots)})
       << '\n';
  }
}

}  // namespace vqsim
