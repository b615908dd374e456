#include "vqsim/twirl.hpp"

namespace vqsim {

std::pair<int, int> cz_conjugation_map(int a, int b) {
  if (a < 0 || a > 3 || b < 0 || b > 3) throw std::out_of_range("Pauli codes must be 0..3");
  const int c = a + b * (3 - b) * (3 - 2 * a) / 2;
  const int d = b + a * (3 - a) * (3 - 2 * b) / 2;
  return {c, d};
}

std::vector<double> pauli_twirl_weights(const KrausChannel& raw) {
  if (raw.arity() != 2) throw std::invalid_argument("twirl expects a two-qubit channel");
  std::vector<double> w(16, 0.0);
  for (std::size_t idx = 0; idx < 16; ++idx) {
    const CMatrix p = local_pauli_matrix(idx, 2);
    for (const auto& e : raw.operators()) w[idx] += std::norm((p.adjoint() * e).trace() / 4.0);
  }
  return w;
}

TwirlResult twirl_channel(const NoiseChannel& raw) {
  if (channel_arity(raw) != 2) throw std::invalid_argument("twirl expects a two-qubit channel");
  std::vector<double> weights;
  if (const auto* p = std::get_if<PauliChannel>(&raw)) {
    weights = p->probabilities();
  } else {
    weights = pauli_twirl_weights(std::get<KrausChannel>(raw));
    double total = 0.0;
    for (double v : weights) total += v;
    for (double& v : weights) v /= total;  // removes roundoff only; total is 1 for CPTP input
  }
  TwirlResult out{PauliChannel::from_probabilities(2, weights), {}};
  out.record.transfer = out.channel.to_kraus().pauli_transfer_matrix();
  out.record.fidelity = weights[0];
  out.record.error_probabilities = weights;
  return out;
}

namespace {

GateInstance wrap_gate(int q, int code) {
  if (code == 0) return GateInstance::phase_rot(q, 0.0);  // identity slot
  return GateInstance::pauli_gate(q, static_cast<Pauli>(code));
}

template <class Pick>
Circuit wrap_impl(const Circuit& circuit, Pick pick) {
  Circuit out = circuit;
  out.ops.clear();
  std::size_t shared = 0;
  for (std::size_t i = 0; i < circuit.ops.size(); ++i) {
    const auto& op = circuit.ops[i];
    if (op.gate.kind != GateKind::ControlledPhase) {
      out.ops.push_back(op);
    } else {
      const auto [a, b] = pick();
      const auto [c, d] = cz_conjugation_map(a, b);
      const int q0 = op.gate.targets[0];
      const int q1 = op.gate.targets[1];
      out.add(wrap_gate(q0, a), OpRole::TwirlPauli);
      out.add(wrap_gate(q1, b), OpRole::TwirlPauli);
      out.ops.push_back(op);
      out.add(wrap_gate(q0, c), OpRole::TwirlPauli);
      out.add(wrap_gate(q1, d), OpRole::TwirlPauli);
    }
    if (i + 1 == circuit.shared_ops) shared = out.ops.size();
  }
  out.shared_ops = circuit.shared_ops == 0 ? 0 : shared;
  return out;
}

}  // namespace

Circuit randomized_twirl_wrap(const Circuit& circuit, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dist(0, 3);
  return wrap_impl(circuit, [&] {
    const int a = dist(rng);
    const int b = dist(rng);
    return std::pair<int, int>{a, b};
  });
}

Circuit twirl_wrap(const Circuit& circuit, int a, int b) {
  if (a < 0 || a > 3 || b < 0 || b > 3) throw std::out_of_range("Pauli codes must be 0..3");
  return wrap_impl(circuit, [&] { return std::pair<int, int>{a, b}; });
}

}  // namespace vqsim
