#include "vqsim/noise_model.hpp"

#include "vqsim/twirl.hpp"

namespace vqsim {

namespace {

void check_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string("noise rate ") + name + " outside [0,1]");
}

PauliChannel boosted_depolarizing(int arity, double eps, double r) {
  return PauliChannel::depolarizing(arity, eps).then(PauliChannel::depolarizing(arity, (r - 1.0) * eps));
}

PauliChannel extra_pauli(const std::vector<double>& weights, double r) {
  std::vector<double> p(weights.size(), 0.0);
  double err = 0.0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    p[i] = (r - 1.0) * weights[i];
    err += p[i];
  }
  if (err > 1.0 + 1e-12) throw std::invalid_argument("boosted error probability exceeds 1");
  p[0] = 1.0 - err;
  return PauliChannel::from_probabilities(2, std::move(p));
}

}  // namespace

NoiseModel NoiseModel::from_two_qubit_rate(double eps2) {
  NoiseModel nm;
  nm.eps2 = eps2;
  nm.eps1 = nm.eps_init = nm.p0 = nm.p1 = eps2 / 10.0;
  return nm;
}

void NoiseModel::validate() const {
  check_rate(eps_init, "eps_init");
  check_rate(p0, "p0");
  check_rate(p1, "p1");
  check_rate(eps1, "eps1");
  check_rate(eps2, "eps2");
  if (!(boost >= 1.0)) throw std::invalid_argument("boost factor must be >= 1");
  for (double e : {eps_init, p0, p1, eps1, eps2}) {
    if (boost * e > 1.0) throw std::invalid_argument("boosted error probability exceeds 1");
  }
  if (p0 + p1 >= 1.0) throw std::invalid_argument("readout error p0 + p1 must be < 1");
  if (two_qubit_raw && two_qubit_raw->arity() != 2) throw std::invalid_argument("raw two-qubit noise must act on 2 qubits");
}

bool NoiseModel::is_noiseless() const {
  return eps_init == 0.0 && p0 == 0.0 && p1 == 0.0 && eps1 == 0.0 && eps2 == 0.0 && !two_qubit_raw;
}

NoiseModel NoiseModel::scaled(double factor) const {
  NoiseModel nm = *this;
  nm.eps_init *= factor;
  nm.p0 *= factor;
  nm.p1 *= factor;
  nm.eps1 *= factor;
  nm.eps2 *= factor;
  return nm;
}

NoiseModel boost_noise(const NoiseModel& nm, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("boost factor r must be >= 1");
  NoiseModel out = nm;
  out.boost = nm.boost * r;
  out.validate();
  return out;
}

CompiledNoise compile_noise(const NoiseModel& nm) {
  nm.validate();
  const double r = nm.boost;
  CompiledNoise c;
  c.noiseless = nm.is_noiseless();
  c.noisy_twirl_gates = nm.noisy_twirl_gates;
  c.init = PauliChannel::bit_flip(nm.eps_init).then(PauliChannel::bit_flip((r - 1.0) * nm.eps_init));
  c.single = boosted_depolarizing(1, nm.eps1, r);
  if (nm.two_qubit_raw) {
    const auto weights = pauli_twirl_weights(*nm.two_qubit_raw);
    const PauliChannel extra = extra_pauli(weights, r);
    if (nm.twirl_raw) {
      c.two = twirl_channel(*nm.two_qubit_raw).channel.then(extra);
    } else {
      c.two = nm.two_qubit_raw->then(extra.to_kraus());
    }
  } else {
    c.two = boosted_depolarizing(2, nm.eps2, r);
  }
  // readout flips: base then extra, as 2x2 stochastic matrices (column = true outcome)
  auto flip = [](double a, double b) {
    RMatrix m(2, 2);
    m << 1.0 - a, b, a, 1.0 - b;
    return m;
  };
  const RMatrix eff = flip((r - 1.0) * nm.p0, (r - 1.0) * nm.p1) * flip(nm.p0, nm.p1);
  c.p0 = eff(1, 0);
  c.p1 = eff(0, 1);
  return c;
}

}  // namespace vqsim
