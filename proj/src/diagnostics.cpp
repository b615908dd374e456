#include "vqsim/diagnostics.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

#include "vqsim/evolution.hpp"
#include "vqsim/io.hpp"

namespace vqsim {

namespace {

double binomial(int m, int a) {
  double r = 1.0;
  for (int i = 1; i <= a; ++i) r = r * (m - a + i) / i;
  return r;
}

double real_spectral_norm(const RMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<RMatrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

double delta2(const Ansatz& ansatz, const ParameterVector& params, const RVector& lambda_dot, const Hamiltonian& h) {
  if (lambda_dot.size() != static_cast<Eigen::Index>(ansatz.n_parameters()))
    throw std::invalid_argument("delta2: lambda_dot size mismatch");
  const CVector psi = ansatz.prepare(params).amplitudes();
  CVector d = -kI * h.apply(psi, params.time);
  const auto der = ansatz.derivatives(params);
  for (std::size_t k = 0; k < der.size(); ++k) d -= lambda_dot(static_cast<Eigen::Index>(k)) * der[k];
  return d.squaredNorm() - std::norm(d.dot(psi));
}

double delta2_by_circuit(const Ansatz& ansatz, const ParameterVector& params, const RVector& lambda_dot,
                         const Hamiltonian& h, const CircuitExecutor& exec) {
  const std::size_t nv = ansatz.n_parameters();
  const int n = ansatz.n_qubits();
  if (lambda_dot.size() != static_cast<Eigen::Index>(nv)) throw std::invalid_argument("delta2: lambda_dot size mismatch");
  const PauliString id(n);
  const auto hc = h.coefficients(params.time);
  auto ov = [&](std::size_t pa, const PauliString& sa, std::size_t pb, const PauliString& sb) {
    return overlap_by_circuit(ansatz, params, pa, sa, pb, sb, exec);
  };
  // <H^2> and <H>
  cplx hh = 0.0, hm = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    hm += hc[i] * ov(nv, id, nv, h.term(i).pauli);
    for (std::size_t j = 0; j < h.size(); ++j) hh += hc[i] * hc[j] * ov(nv, h.term(i).pauli, nv, h.term(j).pauli);
  }
  // <D|D>, <HPsi|D>, <D|Psi> with D = sum_k ldot_k d_k Psi
  cplx dd = 0.0, hd = 0.0, dpsi = 0.0;
  for (std::size_t k = 0; k < nv; ++k) {
    const double lk = lambda_dot(static_cast<Eigen::Index>(k));
    for (const auto& tk : ansatz.block(k).derivative) {
      dpsi += lk * std::conj(tk.f) * ov(k, tk.sigma, nv, id);
      for (std::size_t j = 0; j < h.size(); ++j) hd += lk * tk.f * hc[j] * std::conj(ov(k, tk.sigma, nv, h.term(j).pauli));
      for (std::size_t q = 0; q < nv; ++q) {
        const double lq = lambda_dot(static_cast<Eigen::Index>(q));
        for (const auto& tq : ansatz.block(q).derivative) dd += lk * lq * std::conj(tk.f) * tq.f * ov(k, tk.sigma, q, tq.sigma);
      }
    }
  }
  const double norm2 = hh.real() + dd.real() - 2.0 * (kI * hd).real();
  const cplx proj = kI * std::conj(hm) - dpsi;
  return norm2 - std::norm(proj);
}

CMatrix a_matrix(const Ansatz& ansatz, const ParameterVector& params) {
  const CVector psi = ansatz.prepare(params).amplitudes();
  const auto d = ansatz.derivatives(params);
  const auto nv = static_cast<Eigen::Index>(d.size());
  CMatrix a(nv, nv);
  for (Eigen::Index k = 0; k < nv; ++k) {
    for (Eigen::Index q = 0; q < nv; ++q) {
      const auto& dk = d[static_cast<std::size_t>(k)];
      const auto& dq = d[static_cast<std::size_t>(q)];
      a(k, q) = dq.dot(dk) - dq.dot(psi) * psi.dot(dk);
    }
  }
  return a;
}

std::vector<CMatrix> trial_time_derivatives(const Ansatz& ansatz, const ParameterVector& params,
                                            const RVector& lambda_dot, int order) {
  ansatz.check_parameters(params);
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  if (lambda_dot.size() != params.values.size()) throw std::invalid_argument("lambda_dot size mismatch");
  const auto dim = static_cast<Eigen::Index>(dimension(ansatz.n_qubits()));
  // P^(m) for the product of the blocks so far
  std::vector<CMatrix> p(static_cast<std::size_t>(order + 1), CMatrix::Zero(dim, dim));
  p[0] = CMatrix::Identity(dim, dim);
  for (std::size_t k = 0; k < ansatz.n_parameters(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    const CMatrix b = ansatz.block_unitary(k, params.values(kk));
    const CMatrix g = lambda_dot(kk) * ansatz.generator(k);
    std::vector<CMatrix> db{b};
    for (int a = 1; a <= order; ++a) db.push_back(db.back() * g);
    std::vector<CMatrix> next(p.size(), CMatrix::Zero(dim, dim));
    for (int m = 0; m <= order; ++m) {
      for (int a = 0; a <= m; ++a) next[static_cast<std::size_t>(m)] += binomial(m, a) * db[static_cast<std::size_t>(a)] * p[static_cast<std::size_t>(m - a)];
    }
    p = std::move(next);
  }
  return p;
}

Delta3Terms delta3_terms(const Hamiltonian& h, const Ansatz& ansatz, const ParameterVector& params,
                         const RVector& lambda_dot) {
  const CMatrix hm = h.matrix(params.time);
  const CMatrix h2 = hm * hm;
  const auto r = trial_time_derivatives(ansatz, params, lambda_dot, 3);
  Delta3Terms d;
  d.h1 = spectral_norm(hm);
  d.h2 = spectral_norm(h2);
  d.h3 = spectral_norm(h2 * hm);
  d.r1 = spectral_norm(r[1]);
  d.r2 = spectral_norm(r[2]);
  d.r3 = spectral_norm(r[3]);
  d.value = d.h1 * d.h2 + d.h3 / 3.0 + d.r1 * d.r2 + d.r3 / 3.0 + d.h1 * (d.r1 * d.r1 + d.r2) +
            (d.h1 * d.h1 + d.h2) * d.r1;
  return d;
}

double delta3_bound(const Hamiltonian& h, const Ansatz& ansatz, const ParameterVector& params, const RVector& lambda_dot) {
  return delta3_terms(h, ansatz, params, lambda_dot).value;
}

std::pair<double, double> taylor_identity_residuals(const Ansatz& ansatz, const ParameterVector& params,
                                                    const RVector& lambda_dot) {
  const auto r = trial_time_derivatives(ansatz, params, lambda_dot, 2);
  const CVector& zero = ansatz.reference_state().amplitudes();
  const CVector psi = r[0] * zero;
  const CVector r1 = r[1] * zero;
  const CVector r2 = r[2] * zero;
  // <0|dR^dag|Psi> = (dR|0>)^dag Psi
  const double first = r1.dot(psi).real();
  const double second = r2.dot(psi).real() + r1.squaredNorm();
  return {first, second};
}

ShotConstants shot_constants(const Ansatz& ansatz, const Hamiltonian& h, double t) {
  const auto hc = h.coefficients(t);
  double sm = 0.0, sv = 0.0;
  for (const auto& bk : ansatz.blocks()) {
    for (const auto& bq : ansatz.blocks()) {
      double s = 0.0;
      for (const auto& a : bk.derivative)
        for (const auto& b : bq.derivative) s += std::abs(a.f) * std::abs(b.f);
      sm += s * s;
    }
    double s = 0.0;
    for (const auto& a : bk.derivative)
      for (double c : hc) s += std::abs(a.f) * std::abs(c);
    sv += s * s;
  }
  return {2.0 * std::sqrt(sm), 2.0 * std::sqrt(sv)};
}

ErrorBudget error_budget(const Trajectory& traj, const BudgetInputs& in) {
  if (!in.ansatz || !in.hamiltonian) throw std::invalid_argument("error budget needs the ansatz and Hamiltonian");
  if (!in.reference) throw std::invalid_argument("error budget needs a reference right-hand side");
  if (traj.records.empty()) throw std::invalid_argument("error budget needs a trajectory");
  const Ansatz& ans = *in.ansatz;
  const Hamiltonian& h = *in.hamiltonian;
  const auto& recs = traj.records;
  ErrorBudget b;
  b.dt = in.integrator.dt;
  b.horizon = recs.back().t - recs.front().t;

  const PureState phi0 = in.phi0 ? *in.phi0 : ans.prepare({recs.front().lambda, recs.front().t});
  ExactEvolution oracle(h, phi0);
  const bool fixed_h = !h.time_dependent();
  const CMatrix u_step = fixed_h ? propagator(h, in.integrator.dt) : CMatrix();

  PureState psi_prev;
  for (std::size_t n = 0; n < recs.size(); ++n) {
    const auto& rec = recs[n];
    const ParameterVector p{rec.lambda, rec.t};
    const PureState psi = ans.prepare(p);
    const PureState phi = oracle.state_at(rec.t);
    BudgetStep s;
    s.n = rec.n;
    s.t = rec.t;
    s.distance = trace_distance(phi, psi);
    const bool boot = in.reference_bootstrap && n < in.integrator.bootstrap_steps;
    const ParameterRhs& ref = boot ? in.reference_bootstrap : in.reference;
    if (n == 0) {
      b.d_initial = s.distance;
    } else {
      const auto& prev = recs[n - 1];
      const bool prev_boot = in.reference_bootstrap && n - 1 < in.integrator.bootstrap_steps;
      const ParameterVector pp{prev.lambda, prev.t};
      const ParameterVector p0 =
          integrate_step(pp, in.integrator, n - 1, prev_boot ? in.reference_bootstrap : in.reference);
      const PureState psi0 = ans.prepare(p0);
      const CMatrix u = fixed_h ? CMatrix(u_step) : evolution_operator(h, prev.t, rec.t);
      const PureState moved(h.n_qubits(), u * psi_prev.amplitudes(), 1e-8);
      s.d_algorithm = trace_distance(moved, psi0);
      s.d_implementation = trace_distance(psi0, psi);
    }
    if (rec.lambda_dot.size() == rec.lambda.size()) {
      s.delta2 = std::max(0.0, delta2(ans, p, rec.lambda_dot, h));
      s.delta3 = delta3_bound(h, ans, p, rec.lambda_dot);
      s.a_norm = spectral_norm(a_matrix(ans, p));
      StepRecord r0;
      const RVector l0 = ref(p, rec.n, 0, &r0);
      s.dldot = (rec.lambda_dot - l0).norm();
      if (r0.solve.rank > 0 && r0.M.rows() == rec.M.rows() && r0.V.size() == rec.V.size()) {
        const double inv = 1.0 / r0.solve.singular_values(static_cast<Eigen::Index>(r0.solve.rank - 1));
        const double v0 = r0.V.norm();
        s.dldot_bound = inv * inv * v0 * real_spectral_norm(rec.M - r0.M) + inv * (rec.V - r0.V).norm();
        const auto sc = shot_constants(ans, h, rec.t);
        s.shot_delta = inv * inv * v0 * sc.theta_m + inv * sc.theta_v;
      }
    }
    b.delta2_max = std::max(b.delta2_max, s.delta2);
    b.delta3_max = std::max(b.delta3_max, s.delta3);
    b.a_norm_max = std::max(b.a_norm_max, s.a_norm);
    b.dldot_max = std::max(b.dldot_max, s.dldot);
    b.shot_delta_max = std::max(b.shot_delta_max, s.shot_delta);
    b.d_a += s.d_algorithm;
    b.d_i += s.d_implementation;
    b.steps.push_back(s);
    psi_prev = psi;
  }
  b.d_a += b.d_initial;
  const PureState& psi_n = psi_prev;
  if (in.final_state) {
    const DensityOperator rho = DensityOperator::trusted(h.n_qubits(), *in.final_state);
    b.d_preparation = trace_distance(psi_n, rho);
    b.realized = trace_distance(oracle.state_at(recs.back().t), rho);
  } else {
    b.realized = b.steps.back().distance;
  }
  b.d_i += b.d_preparation;
  b.d_a_bound = b.d_initial + std::sqrt(b.delta2_max) * b.horizon + std::sqrt(b.delta3_max * b.dt) * b.horizon;
  b.d_i_bound = std::sqrt(b.a_norm_max) * b.dldot_max * b.horizon + b.d_preparation;
  return b;
}

void write_budget_csv(std::ostream& os, const ErrorBudget& b) {
  os << "n,t,delta2,delta3,a_norm,dldot,dldot_bound,shot_delta,d_algorithm,d_implementation,distance\n";
  for (const auto& s : b.steps) {
    os << csv_join({std::to_string(s.n), format_double(s.t), format_double(s.delta2), format_double(s.delta3),
                    format_double(s.a_norm), format_double(s.dldot), format_double(s.dldot_bound),
                    format_double(s.shot_delta), format_double(s.d_algorithm), format_double(s.d_implementation),
                    format_double(s.distance)})
       << '\n';
  }
}

std::string budget_json(const ErrorBudget& b) {
  nlohmann::ordered_json j;
  j["horizon"] = b.horizon;
  j["dt"] = b.dt;
  j["steps"] = b.steps.size();
  j["d_initial"] = b.d_initial;
  j["d_preparation"] = b.d_preparation;
  j["d_a"] = b.d_a;
  j["d_i"] = b.d_i;
  j["d_a_bound"] = b.d_a_bound;
  j["d_i_bound"] = b.d_i_bound;
  j["realized"] = b.realized;
  j["bound_holds"] = b.realized <= b.d_a + b.d_i + 1e-12;
  j["delta2_max"] = b.delta2_max;
  j["delta3_max"] = b.delta3_max;
  j["a_norm_max"] = b.a_norm_max;
  j["dldot_max"] = b.dldot_max;
  j["shot_delta_max"] = b.shot_delta_max;
  return j.dump(2);
}

CostEstimate cost_estimate(std::uint64_t n_v, std::uint64_t n_d, std::uint64_t n_h, std::uint64_t n_r_gates,
                           std::uint64_t k, std::uint64_t n_steps, std::uint64_t shots) {
  for (auto v : {n_v, n_d, n_h, n_r_gates, k, n_steps, shots}) {
    if (v < 1) throw std::invalid_argument("cost estimate counts must be >= 1");
  }
  CostEstimate c;
  c.circuits = n_v * n_v * n_d * n_d + n_v * n_d * n_h;
  c.gates_per_circuit = n_v * n_r_gates + 2 * (k + 1);
  c.total_gates = n_steps * c.circuits * c.gates_per_circuit * shots;
  return c;
}

}  // namespace vqsim
