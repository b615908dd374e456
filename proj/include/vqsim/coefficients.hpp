#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "vqsim/ansatz.hpp"
#include "vqsim/circuit.hpp"
#include "vqsim/hamiltonian.hpp"

namespace vqsim {

// eta = 1 (time-dependent variational principle) or eta = -i (McLachlan).
enum class Principle { Dirac, McLachlan };
cplx eta(Principle p);
std::string principle_name(Principle p);
Principle principle_from_name(const std::string& name);

enum class TaskKind { M, V };

// One term of M or V: value 2 a Re(e^{i theta} <A|B>) with branch A = R with sigma_a
// inserted before block pos_a and branch B = R with sigma_b before block pos_b.
struct CoefficientTask {
  std::size_t index = 0;
  TaskKind kind = TaskKind::M;
  std::size_t k = 0, i = 0, q = 0, j = 0;  // V tasks: q == k, j = Hamiltonian term
  cplx prefactor{0.0};
  double amplitude = 0.0;
  double theta = 0.0;
  std::size_t pos_a = 0, pos_b = 0;  // pos_a <= pos_b after the branch swap
  PauliString sigma_a, sigma_b;
  double circuit_theta = 0.0;  // theta, negated when the branches were swapped
  Circuit circuit;
  std::size_t counted_gates = 0;  // block gates + controlled gates + the two ancilla Hadamards

  double contribution(double x) const { return 2.0 * amplitude * x; }
};

// Circuit whose ancilla <Z> equals Re(e^{i theta} <A|B>); requires pos_a <= pos_b.
Circuit build_overlap_circuit(const Ansatz& ansatz, const ParameterVector& params, std::size_t pos_a,
                              const PauliString& sigma_a, std::size_t pos_b, const PauliString& sigma_b,
                              double theta, std::size_t* counted_gates = nullptr);
// Same quantity from the two branch state vectors.
double overlap_oracle(const Ansatz& ansatz, const ParameterVector& params, std::size_t pos_a,
                      const PauliString& sigma_a, std::size_t pos_b, const PauliString& sigma_b, double theta);
// Complex <A|B> measured with two circuits (theta = 0 and -pi/2).
cplx overlap_by_circuit(const Ansatz& ansatz, const ParameterVector& params, std::size_t pos_a,
                        const PauliString& sigma_a, std::size_t pos_b, const PauliString& sigma_b,
                        const CircuitExecutor& exec);

// M tasks over k < q (Dirac) or k <= q (McLachlan), then V tasks; (k,i,q,j) lexicographic.
std::vector<CoefficientTask> build_mv_tasks(const Ansatz& ansatz, const Hamiltonian& h, const ParameterVector& params,
                                            Principle principle);

enum class EvaluationKind { Exact, NoisyExact, NoisyShots };
std::string evaluation_name(EvaluationKind k);
EvaluationKind evaluation_from_name(const std::string& name);

struct EvaluationMode {
  EvaluationKind kind = EvaluationKind::Exact;
  NoiseModel noise;
  std::uint64_t shots = 0;
};

double evaluate_task_oracle(const CoefficientTask& task, const Ansatz& ansatz, const ParameterVector& params);
double evaluate_task_circuit(const CoefficientTask& task, const CircuitExecutor& exec);
// Exact: inner-product path. NoisyExact: circuit under exec's noise. NoisyShots: plus one shot-noise draw.
double evaluate_task(const CoefficientTask& task, const Ansatz& ansatz, const ParameterVector& params,
                     const EvaluationMode& mode, const CircuitExecutor& exec, std::mt19937_64* rng);

// x = 1 - 2p, p ~ Normal((1 - x)/2, sqrt(p (1 - p) / N_r))
double sample_shot_noise(double x_true, std::uint64_t n_r, std::mt19937_64& rng);
double shot_stderr(double x, std::uint64_t n_r);

struct MVSystem {
  RMatrix M;
  RVector V;
};

MVSystem assemble_mv(const std::vector<CoefficientTask>& tasks, const std::vector<double>& values,
                     std::size_t n_params, Principle principle);

// M, V from the derivative states directly (no task decomposition).
MVSystem direct_mv(const Ansatz& ansatz, const Hamiltonian& h, const ParameterVector& params, Principle principle);

struct TaskDumpRow {
  const CoefficientTask* task;
  double exact = 0.0;
  double circuit_exact = 0.0;
  double noisy = 0.0;
  double shots = 0.0;
};
void write_task_dump(std::ostream& os, const std::vector<TaskDumpRow>& rows);

}  // namespace vqsim
