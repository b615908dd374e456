#include "vqsim/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "vqsim/evolution.hpp"
#include "vqsim/io.hpp"

namespace vqsim {

namespace fs = std::filesystem;

std::vector<double> stabilizer_report(const DensityOperator& rho, const std::vector<PauliString>& stabilizers) {
  std::vector<double> out;
  for (const auto& s : stabilizers) {
    if (!s.is_hermitian(1e-12)) throw std::invalid_argument("stabilizer " + s.label() + " is not Hermitian");
    out.push_back(expectation(s, rho));
  }
  return out;
}

std::vector<double> stabilizer_report(const PureState& psi, const std::vector<PauliString>& stabilizers) {
  return stabilizer_report(DensityOperator::from_pure(psi), stabilizers);
}

VariationalSystem make_system(const RunConfig& cfg) {
  if (cfg.scenario == Scenario::QubitDemo) return build_qubit_demo();
  if (!cfg.system.custom.is_null()) return system_from_json(cfg.system.custom);
  return build_ising(cfg.system.n_s, cfg.system.J, cfg.system.B);
}

void CsvSink::header(const std::vector<std::string>& columns) {
  if (!os_) return;
  std::vector<std::string> c = columns;
  *os_ << csv_join(c) << '\n';
}

void CsvSink::row(const std::vector<double>& values) {
  if (!os_) return;
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_double(v));
  *os_ << csv_join(cells) << '\n';
}

namespace {

constexpr std::uint64_t kObservableStage = 16;

std::vector<std::string> hybrid_columns(std::size_t nv, std::size_t ns) {
  std::vector<std::string> c{"t"};
  for (std::size_t k = 0; k < nv; ++k) c.push_back("lambda_" + std::to_string(k + 1));
  c.push_back("trace_distance");
  for (std::size_t j = 0; j < ns; ++j) c.push_back("S_" + std::to_string(j + 1));
  for (std::size_t j = 0; j < ns; ++j) c.push_back("dS_" + std::to_string(j + 1));
  c.push_back("delta2");
  c.push_back("flags");
  return c;
}

std::string trial_name(std::uint64_t trial) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "trial_%03llu.csv", static_cast<unsigned long long>(trial));
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write '" + p.string() + "'");
  return os;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
}

// The equations for the configured principle, driving the ansatz parameters.
// McLachlan always runs on the ansatz with the global phase attached.
struct RhsBundle {
  std::unique_ptr<CoefficientEstimator> main;
  std::unique_ptr<CoefficientEstimator> phase;
  ParameterRhs rhs;
  ParameterRhs bootstrap;
};

RhsBundle make_rhs(const VariationalSystem& sys, const RunConfig& cfg, std::uint64_t trial) {
  RhsBundle b;
  EstimatorConfig ec{cfg.principle, cfg.evaluation, cfg.mitigation};
  EstimatorConfig pc = ec;
  pc.principle = Principle::McLachlan;
  const bool need_phase = cfg.principle == Principle::McLachlan || cfg.integrator.bootstrap_steps > 0;
  if (need_phase) b.phase = std::make_unique<CoefficientEstimator>(sys.ansatz.with_global_phase(), sys.hamiltonian, pc);
  if (cfg.principle == Principle::Dirac) {
    b.main = std::make_unique<CoefficientEstimator>(sys.ansatz, sys.hamiltonian, ec);
    b.rhs = estimator_rhs(*b.main, cfg.integrator, cfg.seed, trial);
    if (cfg.integrator.bootstrap_steps > 0) b.bootstrap = drop_phase_rhs(estimator_rhs(*b.phase, cfg.integrator, cfg.seed, trial));
  } else {
    b.rhs = drop_phase_rhs(estimator_rhs(*b.phase, cfg.integrator, cfg.seed, trial));
  }
  return b;
}

struct ReferenceRhs {
  Ansatz phase_ansatz;
  ParameterRhs rhs;
  ParameterRhs bootstrap;
};

std::unique_ptr<ReferenceRhs> make_reference(const VariationalSystem& sys, const RunConfig& cfg) {
  auto r = std::make_unique<ReferenceRhs>();
  r->phase_ansatz = sys.ansatz.with_global_phase();
  auto phase_rhs = drop_phase_rhs(exact_rhs(r->phase_ansatz, sys.hamiltonian, Principle::McLachlan, cfg.integrator.cutoff));
  if (cfg.principle == Principle::Dirac) {
    r->rhs = exact_rhs(sys.ansatz, sys.hamiltonian, Principle::Dirac, cfg.integrator.cutoff);
    if (cfg.integrator.bootstrap_steps > 0) r->bootstrap = phase_rhs;
  } else {
    r->rhs = phase_rhs;
  }
  return r;
}

}  // namespace

HybridTrial run_hybrid_trial(const RunConfig& cfg, std::uint64_t trial, std::ostream* csv) {
  if (cfg.scenario != Scenario::IsingHybrid && cfg.scenario != Scenario::QubitDemo)
    throw ConfigError("scenario: " + scenario_name(cfg.scenario) + " is not a hybrid run");
  VariationalSystem sys = make_system(cfg);
  IntegratorConfig ic = cfg.integrator;
  if (!cfg.horizon_set) ic.horizon = sys.horizon;
  const std::size_t n_steps = ic.steps();
  const bool exact = cfg.evaluation.kind == EvaluationKind::Exact;

  RhsBundle eqs = make_rhs(sys, cfg, trial);
  // trial-state quantities always refer to the plain ansatz
  const CoefficientEstimator states(sys.ansatz, sys.hamiltonian, EstimatorConfig{cfg.principle, cfg.evaluation, cfg.mitigation});
  const PureState phi0 = sys.ansatz.prepare(sys.initial);
  ExactEvolution oracle(sys.hamiltonian, phi0);

  HybridTrial out;
  const std::size_t nv = sys.ansatz.n_parameters();
  const std::size_t ns = sys.stabilizers.size();
  out.table.columns = hybrid_columns(nv, ns);
  CsvSink sink(csv);
  sink.header(out.table.columns);

  const std::size_t stride = cfg.record_every > 0 ? cfg.record_every : std::max<std::size_t>(1, n_steps / 200);
  auto on_record = [&](const StepRecord& rec) {
    if (rec.n % stride != 0 && rec.n != n_steps) return;
    const ParameterVector p{rec.lambda, rec.t};
    const PureState phi = oracle.state_at(rec.t);
    const PureState psi = sys.ansatz.prepare(p);
    std::vector<double> row{rec.t};
    for (std::size_t k = 0; k < nv; ++k) row.push_back(rec.lambda(static_cast<Eigen::Index>(k)));
    double dist = 0.0;
    if (exact) {
      dist = trace_distance(phi, psi);
    } else {
      dist = trace_distance(phi, DensityOperator::trusted(sys.ansatz.n_qubits(), states.noisy_trial_state(p)));
    }
    row.push_back(dist);
    const auto truth = stabilizer_report(phi, sys.stabilizers);
    std::vector<double> s(ns);
    for (std::size_t j = 0; j < ns; ++j) {
      s[j] = states.observable(sys.stabilizers[j], p, StreamKey{cfg.seed, trial, rec.n, kObservableStage}, j);
      row.push_back(s[j]);
    }
    for (std::size_t j = 0; j < ns; ++j) row.push_back(std::abs(s[j] - truth[j]));
    const bool have_rate = rec.lambda_dot.size() == static_cast<Eigen::Index>(nv);
    row.push_back(have_rate ? std::max(0.0, delta2(sys.ansatz, p, rec.lambda_dot, sys.hamiltonian)) : 0.0);
    int flags = 0;
    if (eqs.bootstrap && rec.n < ic.bootstrap_steps) flags |= kFlagBootstrap;
    if (rec.solve.singular_values.size() > 0 && rec.solve.rank < static_cast<std::size_t>(rec.solve.singular_values.size()))
      flags |= kFlagRankDeficient;
    row.push_back(flags);
    sink.row(row);
    out.table.rows.push_back(std::move(row));
  };

  out.trajectory = run_simulation(sys.initial, ic, eqs.rhs, on_record, eqs.bootstrap);

  if (cfg.budget) {
    auto ref = make_reference(sys, cfg);
    BudgetInputs in{&sys.ansatz, &sys.hamiltonian, ic, ref->rhs, ref->bootstrap, std::nullopt, phi0};
    if (!exact) {
      const auto& last = out.trajectory.records.back();
      in.final_state = states.noisy_trial_state({last.lambda, last.t});
    }
    out.budget = error_budget(out.trajectory, in);
  }
  return out;
}

SeriesTable run_trotter_series(const RunConfig& cfg, std::ostream* csv) {
  const VariationalSystem sys = make_system(cfg);
  const double horizon = cfg.horizon_set ? cfg.integrator.horizon : sys.horizon;
  TrotterConfig tc;
  tc.dt = cfg.trotter.dt;
  tc.symmetric = cfg.trotter.symmetric;
  tc.noise = cfg.noise;
  const auto times = evaluation_times(horizon, cfg.trotter.samples);
  const auto states = trotter_states(sys.hamiltonian, sys.ansatz.prefix(), times, tc);
  ExactEvolution oracle(sys.hamiltonian, sys.ansatz.reference_state());
  SeriesTable t;
  t.columns = {"t", "trace_distance"};
  const std::size_t ns = sys.stabilizers.size();
  for (std::size_t j = 0; j < ns; ++j) t.columns.push_back("S_" + std::to_string(j + 1));
  for (std::size_t j = 0; j < ns; ++j) t.columns.push_back("dS_" + std::to_string(j + 1));
  CsvSink sink(csv);
  sink.header(t.columns);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const PureState phi = oracle.state_at(times[i]);
    const DensityOperator rho = DensityOperator::trusted(sys.ansatz.n_qubits(), states[i]);
    std::vector<double> row{times[i], trace_distance(phi, rho)};
    const auto s = stabilizer_report(rho, sys.stabilizers);
    const auto truth = stabilizer_report(phi, sys.stabilizers);
    for (double v : s) row.push_back(v);
    for (std::size_t j = 0; j < ns; ++j) row.push_back(std::abs(s[j] - truth[j]));
    sink.row(row);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<ScanVariant> run_trotter_scan(const RunConfig& cfg) {
  const VariationalSystem sys = make_system(cfg);
  const double horizon = cfg.horizon_set ? cfg.integrator.horizon : sys.horizon;
  const auto grid = cfg.trotter.grid.empty() ? default_trotter_grid() : cfg.trotter.grid;
  std::vector<ScanVariant> out;
  for (const auto& v : cfg.trotter.variants) {
    TrotterConfig tc;
    tc.symmetric = v == "symmetric";
    tc.noise = cfg.noise;
    out.push_back({v, scan_trotter_dt(sys.hamiltonian, sys.ansatz.prefix(), sys.ansatz.reference_state(), horizon, grid,
                                      tc, cfg.trotter.samples)});
  }
  return out;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanVariant>& scans) {
  os << "variant,dt,dt_exponent,steps,average_distance,final_distance\n";
  for (const auto& v : scans) {
    for (const auto& r : v.scan.rows) {
      os << csv_join({v.name, format_double(r.dt), format_double(std::log10(r.dt / (2.0 * kPi))), std::to_string(r.steps),
                      format_double(r.average_distance), format_double(r.final_distance)})
         << '\n';
    }
  }
}

std::string scan_json(const std::vector<ScanVariant>& scans) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& v : scans) {
    const auto& o = v.scan.optimum();
    j[v.name] = {{"horizon", v.scan.horizon},
                 {"optimal_dt", o.dt},
                 {"optimal_dt_exponent", std::log10(o.dt / (2.0 * kPi))},
                 {"optimal_steps", o.steps},
                 {"average_distance", o.average_distance},
                 {"final_distance", o.final_distance}};
  }
  return j.dump(2);
}

TaskDump run_coefficient_dump(const RunConfig& cfg) {
  const VariationalSystem sys = make_system(cfg);
  ParameterVector p = sys.initial;
  if (!cfg.parameters.empty()) {
    if (cfg.parameters.size() != sys.ansatz.n_parameters())
      throw ConfigError("parameters: expected " + std::to_string(sys.ansatz.n_parameters()) + " values");
    p.values = Eigen::Map<const RVector>(cfg.parameters.data(), static_cast<Eigen::Index>(cfg.parameters.size()));
  }
  p.time = cfg.time;
  const Ansatz& ansatz = cfg.principle == Principle::McLachlan ? sys.ansatz.with_global_phase() : sys.ansatz;
  if (cfg.principle == Principle::McLachlan) {
    RVector v(p.values.size() + 1);
    v << p.values, 0.0;
    p.values = v;
  }
  TaskDump d;
  d.tasks = build_mv_tasks(ansatz, sys.hamiltonian, p, cfg.principle);
  const CircuitExecutor clean;
  const CircuitExecutor noisy(cfg.noise);
  EvaluationMode shot_mode = cfg.evaluation;
  if (shot_mode.kind != EvaluationKind::NoisyShots) {
    shot_mode.kind = EvaluationKind::NoisyShots;
    shot_mode.shots = 10000;
  }
  MitigationConfig mit = cfg.mitigation;
  mit.enabled = true;
  EvaluationMode fit_mode = cfg.evaluation;
  if (fit_mode.kind == EvaluationKind::Exact) fit_mode.kind = EvaluationKind::NoisyExact;
  const CoefficientEstimator shots_est(ansatz, sys.hamiltonian, EstimatorConfig{cfg.principle, shot_mode, {}});
  const CoefficientEstimator fit_est(ansatz, sys.hamiltonian, EstimatorConfig{cfg.principle, fit_mode, mit});
  const StreamKey key{cfg.seed, 0, 0, 0};
  for (const auto& t : d.tasks) {
    TaskDumpRow r{&t};
    r.exact = evaluate_task_oracle(t, ansatz, p);
    r.circuit_exact = clean.measure(t.circuit);
    r.noisy = noisy.measure(t.circuit);
    const auto m = [&](const CircuitExecutor& ex) { return ex.measure(t.circuit); };
    r.shots = shots_est.estimate(m, key, t.index);
    std::vector<ExtrapolationPoint> pts;
    ExtrapolationFit fit;
    fit_est.estimate(m, key, t.index, true, &pts, &fit);
    d.rows.push_back(r);
    d.points.push_back(std::move(pts));
    d.fits.push_back(fit);
  }
  return d;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[hi] * w;
}

void write_aggregate(std::ostream& os, const std::vector<SeriesTable>& trials, const std::vector<std::string>& skip) {
  if (trials.empty()) throw std::invalid_argument("no trials to aggregate");
  const auto& cols = trials[0].columns;
  const std::size_t n_rows = trials[0].rows.size();
  for (const auto& t : trials) {
    if (t.columns != cols || t.rows.size() != n_rows) throw std::runtime_error("trial tables differ in shape");
  }
  std::vector<std::size_t> keep;
  std::vector<std::string> header{cols.at(0), "trials"};
  for (std::size_t c = 1; c < cols.size(); ++c) {
    if (std::find(skip.begin(), skip.end(), cols[c]) != skip.end()) continue;
    keep.push_back(c);
    for (const char* s : {"_mean", "_p16", "_p84"}) header.push_back(cols[c] + s);
  }
  os << csv_join(header) << '\n';
  std::vector<double> v(trials.size());
  for (std::size_t r = 0; r < n_rows; ++r) {
    std::vector<std::string> cells{format_double(trials[0].rows[r][0]), std::to_string(trials.size())};
    for (std::size_t c : keep) {
      double sum = 0.0;
      for (std::size_t k = 0; k < trials.size(); ++k) {
        v[k] = trials[k].rows[r][c];
        sum += v[k];
      }
      const double mean = sum / static_cast<double>(trials.size());
      double lo = percentile(v, 0.16);
      double hi = percentile(v, 0.84);
      // the band always brackets the mean; skewed samples can leave the mean outside
      lo = std::min(lo, mean);
      hi = std::max(hi, mean);
      cells.push_back(format_double(mean));
      cells.push_back(format_double(lo));
      cells.push_back(format_double(hi));
    }
    os << csv_join(cells) << '\n';
  }
}

namespace {

class Manifest {
 public:
  Manifest(const RunConfig& cfg, fs::path dir, std::string command)
      : dir_(std::move(dir)), start_(std::chrono::steady_clock::now()) {
    j_["vqsim_version"] = kVersion;
    j_["csv_schema"] = kCsvSchemaVersion;
    j_["command"] = std::move(command);
    j_["seed"] = cfg.seed;
    j_["config"] = cfg.to_json();
    j_["status"] = "running";
    j_["files"] = nlohmann::ordered_json::array();
    write();
  }
  void add(const fs::path& p) {
    std::lock_guard lock(mu_);
    j_["files"].push_back(p.filename().string());
  }
  void finish(const std::string& status) {
    j_["status"] = status;
    j_["wall_clock_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write();
  }
  fs::path path() const { return dir_ / "manifest.json"; }

 private:
  void write() {
    auto os = open_out(path());
    os << j_.dump(2) << '\n';
  }
  fs::path dir_;
  std::chrono::steady_clock::time_point start_;
  nlohmann::ordered_json j_;
  std::mutex mu_;
};

template <typename F>
std::vector<fs::path> with_manifest(const RunConfig& cfg, const std::string& command, F&& body) {
  const fs::path dir(cfg.output);
  ensure_dir(dir);
  Manifest m(cfg, dir, command);
  std::vector<fs::path> files;
  try {
    files = body(dir, m);
  } catch (...) {
    m.finish("failed");
    throw;
  }
  m.finish("complete");
  files.push_back(m.path());
  return files;
}

std::vector<fs::path> hybrid_outputs(const RunConfig& cfg, const fs::path& dir, Manifest& m) {
  std::vector<SeriesTable> tables(cfg.trials);
  std::vector<std::exception_ptr> errors(cfg.trials);
  std::optional<ErrorBudget> budget;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cfg.trials; k = next++) {
      try {
        auto os = open_out(dir / trial_name(k));
        RunConfig c = cfg;
        c.budget = cfg.budget && k == 0;
        auto res = run_hybrid_trial(c, k, &os);
        if (!os) throw std::runtime_error("write failed for " + trial_name(k));
        tables[k] = std::move(res.table);
        if (k == 0) budget = std::move(res.budget);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = cfg.threads ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, cfg.trials);
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < n_threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<fs::path> files;
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    files.push_back(dir / trial_name(k));
    m.add(files.back());
  }
  {
    auto os = open_out(dir / "aggregate.csv");
    write_aggregate(os, tables);
    files.push_back(dir / "aggregate.csv");
    m.add(files.back());
  }
  if (budget) {
    auto c = open_out(dir / "budget.csv");
    write_budget_csv(c, *budget);
    auto j = open_out(dir / "budget.json");
    j << budget_json(*budget) << '\n';
    for (const char* f : {"budget.csv", "budget.json"}) {
      files.push_back(dir / f);
      m.add(files.back());
    }
  }
  return files;
}

}  // namespace

std::vector<fs::path> run_scan_command(const RunConfig& cfg) {
  if (cfg.scenario == Scenario::QubitDemo) throw ConfigError("scenario: scan-trotter needs an Ising configuration");
  return with_manifest(cfg, "scan-trotter", [&](const fs::path& dir, Manifest& m) {
    const auto scans = run_trotter_scan(cfg);
    auto c = open_out(dir / "scan.csv");
    write_scan_csv(c, scans);
    auto j = open_out(dir / "scan.json");
    j << scan_json(scans) << '\n';
    std::vector<fs::path> files{dir / "scan.csv", dir / "scan.json"};
    for (const auto& f : files) m.add(f);
    return files;
  });
}

std::vector<fs::path> run_dump_command(const RunConfig& cfg) {
  return with_manifest(cfg, "dump-tasks", [&](const fs::path& dir, Manifest& m) {
    const auto d = run_coefficient_dump(cfg);
    auto c = open_out(dir / "tasks.csv");
    write_task_dump(c, d.rows);
    std::vector<std::string> labels;
    for (const auto& t : d.tasks) labels.push_back(std::string(t.kind == TaskKind::M ? "M" : "V") + "_" + std::to_string(t.index));
    auto j = open_out(dir / "extrapolation.json");
    j << extrapolation_report_json(labels, d.points, d.fits) << '\n';
    std::vector<fs::path> files{dir / "tasks.csv", dir / "extrapolation.json"};
    for (const auto& f : files) m.add(f);
    return files;
  });
}

std::vector<fs::path> run_scenario(const RunConfig& cfg) {
  switch (cfg.scenario) {
    case Scenario::TrotterScan: return run_scan_command(cfg);
    case Scenario::CoefficientDump: return run_dump_command(cfg);
    case Scenario::IsingTrotter:
      return with_manifest(cfg, "simulate", [&](const fs::path& dir, Manifest& m) {
        auto os = open_out(dir / "trotter.csv");
        run_trotter_series(cfg, &os);
        m.add(dir / "trotter.csv");
        return std::vector<fs::path>{dir / "trotter.csv"};
      });
    case Scenario::IsingHybrid:
    case Scenario::QubitDemo:
      return with_manifest(cfg, "simulate", [&](const fs::path& dir, Manifest& m) { return hybrid_outputs(cfg, dir, m); });
  }
  throw ConfigError("scenario: unsupported");
}

}  // namespace vqsim
