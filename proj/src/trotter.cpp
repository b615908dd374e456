#include "vqsim/trotter.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vqsim/evolution.hpp"

namespace vqsim {

void TrotterConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("trotter dt must be positive");
  noise.validate();
}

GateInstance term_exponential(const HamiltonianTerm& term, double h, double tau) {
  std::vector<int> support;
  std::vector<Pauli> ps;
  for (int q = 0; q < term.pauli.n_qubits(); ++q) {
    if (term.pauli.at(q) != Pauli::I) {
      support.push_back(q);
      ps.push_back(term.pauli.at(q));
    }
  }
  const double angle = -h * tau;
  if (support.size() == 1) {
    switch (ps[0]) {
      case Pauli::Z: return GateInstance::phase_rot(support[0], angle);
      case Pauli::X: return GateInstance::flip_rot(support[0], angle);
      case Pauli::Y: return GateInstance::y_rot(support[0], angle);
      default: break;
    }
  }
  if (support.size() == 2 && ps[0] == Pauli::Z && ps[1] == Pauli::Z) return GateInstance::zz_rot(support[0], support[1], angle);
  throw std::invalid_argument("no native gate for term " + term.pauli.label());
}

namespace {

std::vector<int> ordered_groups(const Hamiltonian& h, const TrotterConfig& cfg) {
  if (cfg.group_order.empty()) return h.groups();
  auto all = h.groups();
  for (int g : cfg.group_order) {
    if (std::find(all.begin(), all.end(), g) == all.end()) throw ConfigError("trotter group order names an unknown group");
  }
  return cfg.group_order;
}

void append_group(std::vector<GateInstance>& out, const Hamiltonian& h, int group, double t, double tau) {
  const auto coeffs = h.coefficients(t);
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.term(i).group == group) out.push_back(term_exponential(h.term(i), coeffs[i], tau));
  }
}

}  // namespace

std::vector<GateInstance> trotter_step_gates(const Hamiltonian& h, double t, double tau, const TrotterConfig& cfg) {
  const auto groups = ordered_groups(h, cfg);
  // coefficients at the midpoint for time-dependent H
  const double tm = t + 0.5 * tau;
  std::vector<GateInstance> out;
  if (!cfg.symmetric) {
    for (int g : groups) append_group(out, h, g, tm, tau);
  } else {
    for (int g : groups) append_group(out, h, g, tm, 0.5 * tau);
    for (auto it = groups.rbegin(); it != groups.rend(); ++it) append_group(out, h, *it, tm, 0.5 * tau);
  }
  return out;
}

namespace {

void apply_gates(const CircuitExecutor& ex, CMatrix& rho, const std::vector<GateInstance>& gates) {
  for (const auto& g : gates) ex.apply_op(rho, {g, OpRole::Gate});
}

std::size_t step_count(double t, double dt) {
  if (t <= 0.0) return 0;
  // guard against t/dt landing a hair above an integer
  const double r = t / dt;
  const double nearest = std::round(r);
  if (std::abs(r - nearest) < 1e-9 * std::max(1.0, r)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(r));
}

}  // namespace

std::vector<CMatrix> trotter_states(const Hamiltonian& h, const std::vector<GateInstance>& prep,
                                    const std::vector<double>& times, const TrotterConfig& cfg) {
  cfg.validate();
  if (!std::is_sorted(times.begin(), times.end())) throw std::invalid_argument("trotter times must be non-decreasing");
  const CircuitExecutor ex(cfg.noise);
  CMatrix rho = ex.initial_state(h.n_qubits());
  apply_gates(ex, rho, prep);
  std::size_t done = 0;  // full steps applied to rho
  std::vector<CMatrix> out;
  out.reserve(times.size());
  for (double t : times) {
    if (t < 0.0) throw std::invalid_argument("trotter time must be nonnegative");
    const std::size_t nt = step_count(t, cfg.dt);
    if (nt == 0) {
      out.push_back(rho);
      continue;
    }
    while (done + 1 < nt) {
      apply_gates(ex, rho, trotter_step_gates(h, done * cfg.dt, cfg.dt, cfg));
      ++done;
    }
    const double t_last = (nt - 1) * cfg.dt;
    CMatrix r = rho;
    apply_gates(ex, r, trotter_step_gates(h, t_last, t - t_last, cfg));
    out.push_back(std::move(r));
  }
  return out;
}

DensityOperator trotter_evolve(const Hamiltonian& h, const std::vector<GateInstance>& prep, double t,
                               const TrotterConfig& cfg) {
  auto states = trotter_states(h, prep, {t}, cfg);
  return DensityOperator::trusted(h.n_qubits(), std::move(states[0]));
}

std::vector<double> default_trotter_grid() {
  std::vector<double> out;
  for (int k = -22; k <= -6; ++k) out.push_back(2.0 * kPi * std::pow(10.0, k / 10.0));
  return out;
}

std::vector<double> evaluation_times(double horizon, std::size_t n_eval) {
  if (n_eval == 0) throw std::invalid_argument("need at least one evaluation interval");
  std::vector<double> out(n_eval + 1);
  for (std::size_t i = 0; i <= n_eval; ++i) out[i] = horizon * static_cast<double>(i) / static_cast<double>(n_eval);
  return out;
}

double trapezoid_average(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size() || times.empty()) throw std::invalid_argument("trapezoid: size mismatch");
  if (times.size() == 1) return values[0];
  double acc = 0.0;
  for (std::size_t i = 1; i < times.size(); ++i) acc += 0.5 * (values[i] + values[i - 1]) * (times[i] - times[i - 1]);
  const double span = times.back() - times.front();
  if (!(span > 0.0)) throw std::invalid_argument("trapezoid: empty interval");
  return acc / span;
}

TrotterScan scan_trotter_dt(const Hamiltonian& h, const std::vector<GateInstance>& prep, const PureState& phi0,
                            double horizon, const std::vector<double>& grid, const TrotterConfig& base,
                            std::size_t n_eval) {
  if (grid.empty()) throw ConfigError("trotter scan grid is empty");
  if (!(horizon > 0.0)) throw ConfigError("trotter scan horizon must be positive");
  const auto times = evaluation_times(horizon, n_eval);
  std::vector<PureState> exact;
  exact.reserve(times.size());
  ExactEvolution ev(h, phi0);
  for (double t : times) exact.push_back(ev.state_at(t));

  TrotterScan scan;
  scan.horizon = horizon;
  for (double dt : grid) {
    TrotterConfig cfg = base;
    cfg.dt = dt;
    const auto states = trotter_states(h, prep, times, cfg);
    std::vector<double> d(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
      d[i] = trace_distance(exact[i], DensityOperator::trusted(h.n_qubits(), states[i]));
    scan.rows.push_back({dt, step_count(horizon, dt), trapezoid_average(times, d), d.back()});
  }
  for (std::size_t i = 1; i < scan.rows.size(); ++i) {
    if (scan.rows[i].average_distance < scan.rows[scan.best].average_distance) scan.best = i;
  }
  return scan;
}

}  // namespace vqsim
