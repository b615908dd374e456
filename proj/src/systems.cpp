#include "vqsim/systems.hpp"

namespace vqsim {

std::vector<std::pair<int, int>> ring_bonds(int n_s) {
  std::vector<std::pair<int, int>> bonds;
  if (n_s == 2) {
    bonds.emplace_back(0, 1);  // a 2-ring has a single distinct bond
    return bonds;
  }
  for (int j = 0; j < n_s; ++j) bonds.emplace_back(j, (j + 1) % n_s);
  return bonds;
}

std::vector<GateInstance> cluster_prefix(int n_s) {
  std::vector<GateInstance> gates;
  for (int j = 0; j < n_s; ++j) gates.push_back(GateInstance::hadamard(j));
  for (auto [a, b] : ring_bonds(n_s)) gates.push_back(GateInstance::controlled_phase(a, b));
  return gates;
}

std::vector<PauliString> cluster_stabilizers(int n_s) {
  std::vector<PauliString> out;
  for (int j = 0; j < n_s; ++j) {
    const int left = (j + n_s - 1) % n_s;
    const int right = (j + 1) % n_s;
    PauliString s = PauliString::single(n_s, left, Pauli::Z) * PauliString::single(n_s, j, Pauli::X) *
                    PauliString::single(n_s, right, Pauli::Z);
    out.push_back(s);
  }
  return out;
}

VariationalSystem build_ising(int n_s, double J, double B) {
  if (n_s < 2) throw std::invalid_argument("Ising ring needs n_s >= 2");
  const auto bonds = ring_bonds(n_s);

  std::vector<HamiltonianTerm> terms;
  AnsatzBlock zz, x;
  for (auto [a, b] : bonds) {
    PauliString zz_word = PauliString::single(n_s, a, Pauli::Z) * PauliString::single(n_s, b, Pauli::Z);
    terms.push_back({TermCoefficient::fixed(-J), zz_word, 0});
    zz.gates.push_back({GateInstance::zz_rot(a, b, 0.0), -J, 0.0});
    zz.derivative.push_back({cplx{0.0, -J}, zz_word});
  }
  for (int j = 0; j < n_s; ++j) {
    PauliString x_word = PauliString::single(n_s, j, Pauli::X);
    terms.push_back({TermCoefficient::fixed(-B), x_word, 1});
    x.gates.push_back({GateInstance::flip_rot(j, 0.0), -B, 0.0});
    x.derivative.push_back({cplx{0.0, -B}, x_word});
  }

  VariationalSystem sys;
  sys.name = "ising";
  sys.hamiltonian = Hamiltonian(n_s, std::move(terms));
  sys.ansatz = Ansatz(n_s, cluster_prefix(n_s), {zz, x});
  sys.initial = {RVector::Zero(2), 0.0};
  sys.horizon = 4.0 * kPi;
  sys.stabilizers = cluster_stabilizers(n_s);
  return sys;
}

VariationalSystem build_qubit_demo() {
  std::vector<HamiltonianTerm> terms;
  terms.push_back({TermCoefficient{-0.5, 0.0, 0.5, 1.0}, PauliString::parse("Y"), 0});
  terms.push_back({TermCoefficient{0.0, -0.5, 0.0, 1.0}, PauliString::parse("Z"), 1});

  const double half_pi = kPi / 2.0;
  AnsatzBlock ry, rz;
  ry.gates.push_back({GateInstance::y_rot(0, 0.0), half_pi, 0.0});
  ry.derivative.push_back({cplx{0.0, half_pi}, PauliString::parse("Y")});
  rz.gates.push_back({GateInstance::phase_rot(0, 0.0), half_pi, 0.0});
  rz.derivative.push_back({cplx{0.0, half_pi}, PauliString::parse("Z")});

  VariationalSystem sys;
  sys.name = "qubit-demo";
  sys.hamiltonian = Hamiltonian(1, std::move(terms));
  sys.ansatz = Ansatz(1, {}, {ry, rz});
  sys.initial.values = RVector(2);
  sys.initial.values << 0.75, -0.5;
  sys.initial.time = 0.0;
  sys.horizon = 2.0 * kPi;
  return sys;
}

}  // namespace vqsim
