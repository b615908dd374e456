#include "vqsim/integrator.hpp"

#include <cmath>
#include <sstream>

namespace vqsim {

std::string method_name(Method m) { return m == Method::Euler ? "euler" : "rk4"; }

Method method_from_name(const std::string& name) {
  if (name == "euler") return Method::Euler;
  if (name == "rk4") return Method::RK4;
  throw ConfigError("unknown integration method '" + name + "' (euler | rk4)");
}

std::size_t IntegratorConfig::steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integrator.dt must be > 0");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw ConfigError("integrator.T must be >= 0");
  if (!(cutoff >= 0.0)) throw ConfigError("integrator.cutoff must be >= 0");
  if (horizon == 0.0) return 0;
  if (dt > horizon * (1.0 + 1e-12)) throw ConfigError("integrator.dt must not exceed T");
  const double ratio = horizon / dt;
  const double n = std::round(ratio);
  if (std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) throw ConfigError("integrator.T / dt must be an integer");
  return static_cast<std::size_t>(n);
}

RVector solve_lambda_dot(const RMatrix& M, const RVector& V, double cutoff, SolveInfo* info, double floor) {
  if (M.rows() != M.cols()) throw std::invalid_argument("M must be square");
  if (V.size() != M.rows()) throw std::invalid_argument("V does not match M");
  if (!M.allFinite() || !V.allFinite()) throw DegenerateSystemError("M or V has non-finite entries");
  Eigen::JacobiSVD<RMatrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  std::size_t rank = 0;
  RVector x = RVector::Zero(M.cols());
  double smin_kept = 0.0;
  if (smax > 0.0) {
    const RVector ut_v = svd.matrixU().transpose() * V;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) < cutoff * smax || s(i) <= floor || s(i) == 0.0) continue;
      x += (ut_v(i) / s(i)) * svd.matrixV().col(i);
      smin_kept = s(i);
      ++rank;
    }
  }
  if (rank == 0) {
    std::ostringstream os;
    os << "degenerate linear system: no singular value above cutoff " << cutoff << " (sigma_max = " << smax << ")";
    throw DegenerateSystemError(os.str());
  }
  if (info) {
    info->singular_values = s;
    info->rank = rank;
    info->condition = smax / smin_kept;
  }
  return x;
}

ParameterVector integrate_step(const ParameterVector& params, const IntegratorConfig& cfg, std::size_t step,
                               const ParameterRhs& rhs, const RVector* first) {
  const double h = cfg.dt;
  const RVector k1 = first ? *first : rhs(params, step, 0, nullptr);
  ParameterVector out{params.values, params.time + h};
  if (cfg.method == Method::Euler) {
    out.values = params.values + h * k1;
    return out;
  }
  const RVector k2 = rhs({params.values + 0.5 * h * k1, params.time + 0.5 * h}, step, 1, nullptr);
  const RVector k3 = rhs({params.values + 0.5 * h * k2, params.time + 0.5 * h}, step, 2, nullptr);
  const RVector k4 = rhs({params.values + h * k3, params.time + h}, step, 3, nullptr);
  out.values = params.values + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return out;
}

ParameterRhs estimator_rhs(const CoefficientEstimator& est, const IntegratorConfig& cfg, std::uint64_t master,
                           std::uint64_t trial) {
  return [&est, cutoff = cfg.cutoff, master, trial](const ParameterVector& p, std::size_t step, std::size_t stage,
                                                     StepRecord* rec) {
    const auto ev = est.evaluate(p, StreamKey{master, trial, step, stage});
    SolveInfo info;
    RVector x = solve_lambda_dot(ev.system.M, ev.system.V, cutoff, &info, kSingularFloor);
    if (rec) {
      rec->M = ev.system.M;
      rec->V = ev.system.V;
      rec->solve = info;
    }
    return x;
  };
}

ParameterRhs exact_rhs(const Ansatz& ansatz, const Hamiltonian& h, Principle principle, double cutoff) {
  return [&ansatz, &h, principle, cutoff](const ParameterVector& p, std::size_t, std::size_t, StepRecord* rec) {
    const auto mv = direct_mv(ansatz, h, p, principle);
    SolveInfo info;
    RVector x = solve_lambda_dot(mv.M, mv.V, cutoff, &info, kSingularFloor);
    if (rec) {
      rec->M = mv.M;
      rec->V = mv.V;
      rec->solve = info;
    }
    return x;
  };
}

ParameterRhs drop_phase_rhs(ParameterRhs with_phase) {
  return [inner = std::move(with_phase)](const ParameterVector& p, std::size_t step, std::size_t stage,
                                         StepRecord* rec) {
    ParameterVector ext{RVector::Zero(p.values.size() + 1), p.time};
    ext.values.head(p.values.size()) = p.values;
    const RVector x = inner(ext, step, stage, rec);
    const auto n = p.values.size();
    if (rec) {
      rec->M = RMatrix(rec->M.topLeftCorner(n, n));
      rec->V = RVector(rec->V.head(n));
    }
    return RVector(x.head(n));
  };
}

Trajectory run_simulation(const ParameterVector& initial, const IntegratorConfig& cfg, const ParameterRhs& rhs,
                          const RecordCallback& on_record, const ParameterRhs& bootstrap) {
  const std::size_t n_steps = cfg.steps();
  Trajectory traj;
  traj.records.reserve(n_steps + 1);
  ParameterVector p = initial;
  for (std::size_t n = 0; n <= n_steps; ++n) {
    StepRecord rec;
    rec.n = n;
    rec.t = initial.time + static_cast<double>(n) * cfg.dt;
    p.time = rec.t;  // no drift from repeated addition
    rec.lambda = p.values;
    const ParameterRhs& f = (bootstrap && n < cfg.bootstrap_steps) ? bootstrap : rhs;
    if (n_steps > 0) rec.lambda_dot = f(p, n, 0, &rec);
    if (!rec.lambda.allFinite()) throw DegenerateSystemError("parameters became non-finite at step " + std::to_string(n));
    traj.records.push_back(rec);
    if (on_record) on_record(traj.records.back());
    if (n < n_steps) p = integrate_step(p, cfg, n, f, &traj.records.back().lambda_dot);
  }
  return traj;
}

Trajectory run_simulation(const CoefficientEstimator& est, const ParameterVector& initial, const IntegratorConfig& cfg,
                          std::uint64_t master, std::uint64_t trial, const RecordCallback& on_record) {
  return run_simulation(initial, cfg, estimator_rhs(est, cfg, master, trial), on_record);
}

}  // namespace vqsim
