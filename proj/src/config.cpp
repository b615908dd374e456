#include "vqsim/config.hpp"

#include <fstream>
#include <set>

#include "vqsim/systems.hpp"

namespace vqsim {

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::IsingHybrid: return "ising-hybrid";
    case Scenario::IsingTrotter: return "ising-trotter";
    case Scenario::TrotterScan: return "trotter-scan";
    case Scenario::QubitDemo: return "qubit-demo";
    case Scenario::CoefficientDump: return "coefficient-dump";
  }
  return "?";
}

Scenario scenario_from_name(const std::string& name) {
  for (auto s : {Scenario::IsingHybrid, Scenario::IsingTrotter, Scenario::TrotterScan, Scenario::QubitDemo,
                 Scenario::CoefficientDump}) {
    if (scenario_name(s) == name) return s;
  }
  throw ConfigError("scenario: unknown value '" + name + "'");
}

namespace {

using json = nlohmann::json;

void check_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError((where.empty() ? "" : where + ".") + k + ": unknown field");
  }
}

std::string path(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }

double get_real(const json& obj, const std::string& where, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path(where, key) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path(where, key) + ": must be finite");
  return x;
}

std::uint64_t get_count(const json& obj, const std::string& where, const std::string& key, std::uint64_t fallback,
                        std::uint64_t min_value) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ConfigError(path(where, key) + ": expected a nonnegative integer");
  const auto x = v.get<std::uint64_t>();
  if (x < min_value) throw ConfigError(path(where, key) + ": must be >= " + std::to_string(min_value));
  return x;
}

bool get_flag(const json& obj, const std::string& where, const std::string& key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_boolean()) throw ConfigError(path(where, key) + ": expected true or false");
  return obj.at(key).get<bool>();
}

std::string get_string(const json& obj, const std::string& where, const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_string()) throw ConfigError(path(where, key) + ": expected a string");
  return obj.at(key).get<std::string>();
}

std::vector<double> get_reals(const json& obj, const std::string& where, const std::string& key) {
  std::vector<double> out;
  if (!obj.contains(key)) return out;
  const auto& v = obj.at(key);
  if (!v.is_array()) throw ConfigError(path(where, key) + ": expected an array of numbers");
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(path(where, key) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

// "dt" directly or "dt_exponent" e meaning 2 pi 10^e
double get_step(const json& obj, const std::string& where, double fallback) {
  const bool a = obj.contains("dt");
  const bool b = obj.contains("dt_exponent");
  if (a && b) throw ConfigError(path(where, "dt") + ": give dt or dt_exponent, not both");
  if (b) return 2.0 * kPi * std::pow(10.0, get_real(obj, where, "dt_exponent", 0.0));
  const double dt = get_real(obj, where, "dt", fallback);
  if (!(dt > 0.0)) throw ConfigError(path(where, "dt") + ": must be positive");
  return dt;
}

template <typename F>
auto rethrow_as(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(field + ": " + e.what());
  }
}

void parse_noise(const json& obj, RunConfig& cfg) {
  check_keys(obj, "noise", {"eps2", "eps1", "eps_init", "p0", "p1"});
  const double eps2 = get_real(obj, "noise", "eps2", 0.0);
  NoiseModel nm = NoiseModel::from_two_qubit_rate(eps2);
  nm.eps1 = get_real(obj, "noise", "eps1", nm.eps1);
  nm.eps_init = get_real(obj, "noise", "eps_init", nm.eps_init);
  nm.p0 = get_real(obj, "noise", "p0", nm.p0);
  nm.p1 = get_real(obj, "noise", "p1", nm.p1);
  for (auto [k, v] : {std::pair{"eps2", nm.eps2}, {"eps1", nm.eps1}, {"eps_init", nm.eps_init}, {"p0", nm.p0}, {"p1", nm.p1}}) {
    if (v < 0.0 || v > 1.0) throw ConfigError(std::string("noise.") + k + ": must lie in [0, 1]");
  }
  rethrow_as("noise", [&] { nm.validate(); return 0; });
  cfg.noise = nm;
}

void parse_integrator(const json& obj, RunConfig& cfg) {
  check_keys(obj, "integrator", {"method", "dt", "dt_exponent", "horizon", "horizon_over_pi", "cutoff", "bootstrap_steps"});
  auto& ic = cfg.integrator;
  ic.method = rethrow_as("integrator.method", [&] { return method_from_name(get_string(obj, "integrator", "method", method_name(ic.method))); });
  ic.dt = get_step(obj, "integrator", ic.dt);
  if (obj.contains("horizon") && obj.contains("horizon_over_pi"))
    throw ConfigError("integrator.horizon: give horizon or horizon_over_pi, not both");
  if (obj.contains("horizon")) {
    ic.horizon = get_real(obj, "integrator", "horizon", ic.horizon);
    cfg.horizon_set = true;
  } else if (obj.contains("horizon_over_pi")) {
    ic.horizon = kPi * get_real(obj, "integrator", "horizon_over_pi", 0.0);
    cfg.horizon_set = true;
  }
  if (!(ic.horizon > 0.0)) throw ConfigError("integrator.horizon: must be positive");
  ic.cutoff = get_real(obj, "integrator", "cutoff", ic.cutoff);
  if (!(ic.cutoff > 0.0) || ic.cutoff >= 1.0) throw ConfigError("integrator.cutoff: must lie in (0, 1)");
  ic.bootstrap_steps = get_count(obj, "integrator", "bootstrap_steps", ic.bootstrap_steps, 0);
}

void parse_mitigation(const json& obj, RunConfig& cfg) {
  check_keys(obj, "mitigation", {"enabled", "r_grid", "order", "correct_readout"});
  auto& m = cfg.mitigation;
  m.enabled = get_flag(obj, "mitigation", "enabled", m.enabled);
  if (obj.contains("r_grid")) m.r_grid = get_reals(obj, "mitigation", "r_grid");
  m.order = static_cast<int>(get_count(obj, "mitigation", "order", static_cast<std::uint64_t>(m.order), 1));
  m.correct_readout = get_flag(obj, "mitigation", "correct_readout", m.correct_readout);
  rethrow_as("mitigation", [&] { m.validate(); return 0; });
}

void parse_trotter(const json& obj, RunConfig& cfg) {
  check_keys(obj, "trotter", {"dt", "dt_exponent", "symmetric", "grid", "grid_exponents", "variants", "samples"});
  auto& t = cfg.trotter;
  t.dt = get_step(obj, "trotter", t.dt);
  t.symmetric = get_flag(obj, "trotter", "symmetric", t.symmetric);
  if (obj.contains("grid") && obj.contains("grid_exponents"))
    throw ConfigError("trotter.grid: give grid or grid_exponents, not both");
  t.grid = get_reals(obj, "trotter", "grid");
  for (double e : get_reals(obj, "trotter", "grid_exponents")) t.grid.push_back(2.0 * kPi * std::pow(10.0, e));
  if ((obj.contains("grid") || obj.contains("grid_exponents")) && t.grid.empty())
    throw ConfigError("trotter.grid: must not be empty");
  for (double dt : t.grid) {
    if (!(dt > 0.0)) throw ConfigError("trotter.grid: entries must be positive");
  }
  if (obj.contains("variants")) {
    if (!obj.at("variants").is_array() || obj.at("variants").empty())
      throw ConfigError("trotter.variants: expected a nonempty array of strings");
    t.variants.clear();
    for (const auto& v : obj.at("variants")) {
      if (!v.is_string() || (v != "plain" && v != "symmetric"))
        throw ConfigError("trotter.variants: entries must be \"plain\" or \"symmetric\"");
      t.variants.push_back(v.get<std::string>());
    }
  }
  t.samples = get_count(obj, "trotter", "samples", t.samples, 1);
}

std::set<std::string> allowed_top(Scenario s) {
  std::set<std::string> common{"scenario", "noise", "seed", "output", "threads"};
  switch (s) {
    case Scenario::IsingHybrid:
      common.insert({"system", "evaluation", "shots", "principle", "integrator", "mitigation", "trials", "record_every", "budget"});
      break;
    case Scenario::QubitDemo:
      common.insert({"evaluation", "shots", "principle", "integrator", "mitigation", "trials", "record_every", "budget"});
      break;
    case Scenario::IsingTrotter:
    case Scenario::TrotterScan:
      common.insert({"system", "trotter", "integrator"});
      break;
    case Scenario::CoefficientDump:
      common.insert({"system", "evaluation", "shots", "principle", "mitigation", "parameters", "time"});
      break;
  }
  return common;
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  if (!doc.contains("scenario")) throw ConfigError("scenario: missing required field");
  RunConfig cfg;
  cfg.scenario = scenario_from_name(get_string(doc, "", "scenario", ""));
  check_keys(doc, "", allowed_top(cfg.scenario));

  if (cfg.scenario == Scenario::QubitDemo) {
    cfg.integrator.horizon = 2.0 * kPi;
    cfg.principle = Principle::McLachlan;
  } else {
    cfg.integrator.bootstrap_steps = 1;
  }
  if (doc.contains("system") && doc.at("system").is_object() && doc.at("system").contains("hamiltonian")) {
    cfg.system.custom = doc.at("system");
    system_from_json(cfg.system.custom);
  } else if (doc.contains("system")) {
    const auto& s = doc.at("system");
    check_keys(s, "system", {"n_s", "J", "B"});
    cfg.system.n_s = static_cast<int>(get_count(s, "system", "n_s", 3, 2));
    if (cfg.system.n_s > 10) throw ConfigError("system.n_s: at most 10 spins");
    cfg.system.J = get_real(s, "system", "J", cfg.system.J);
    cfg.system.B = get_real(s, "system", "B", cfg.system.B);
  }
  if (doc.contains("noise")) parse_noise(doc.at("noise"), cfg);
  cfg.evaluation.noise = cfg.noise;
  const std::string eval_default = cfg.noise.is_noiseless() ? "exact" : "noisy";
  cfg.evaluation.kind = rethrow_as("evaluation", [&] { return evaluation_from_name(get_string(doc, "", "evaluation", eval_default)); });
  cfg.evaluation.shots = get_count(doc, "", "shots", cfg.evaluation.kind == EvaluationKind::NoisyShots ? 10000 : 0, 0);
  if (cfg.evaluation.kind == EvaluationKind::NoisyShots && cfg.evaluation.shots < 1)
    throw ConfigError("shots: must be >= 1 in shots mode");
  if (cfg.evaluation.kind != EvaluationKind::NoisyShots && doc.contains("shots") && cfg.evaluation.shots != 0)
    throw ConfigError("shots: only used with evaluation \"shots\"");
  if (doc.contains("principle"))
    cfg.principle = rethrow_as("principle", [&] { return principle_from_name(get_string(doc, "", "principle", "")); });
  if (doc.contains("integrator")) parse_integrator(doc.at("integrator"), cfg);
  if (doc.contains("mitigation")) parse_mitigation(doc.at("mitigation"), cfg);
  if (cfg.mitigation.enabled && cfg.evaluation.kind == EvaluationKind::Exact)
    throw ConfigError("mitigation.enabled: needs evaluation \"noisy\" or \"shots\"");
  if (doc.contains("trotter")) parse_trotter(doc.at("trotter"), cfg);
  cfg.parameters = get_reals(doc, "", "parameters");
  cfg.time = get_real(doc, "", "time", 0.0);
  cfg.trials = get_count(doc, "", "trials", 1, 1);
  cfg.seed = get_count(doc, "", "seed", 1, 0);
  cfg.output = get_string(doc, "", "output", "out/" + scenario_name(cfg.scenario));
  if (cfg.output.empty()) throw ConfigError("output: must not be empty");
  cfg.record_every = get_count(doc, "", "record_every", 0, 0);
  cfg.budget = get_flag(doc, "", "budget", false);
  cfg.threads = get_count(doc, "", "threads", 0, 0);

  if (cfg.scenario == Scenario::IsingHybrid || cfg.scenario == Scenario::QubitDemo)
    rethrow_as("integrator", [&] { return cfg.integrator.steps(); });
  if (cfg.scenario == Scenario::IsingTrotter || cfg.scenario == Scenario::TrotterScan) {
    if (!(cfg.trotter.dt > 0.0)) throw ConfigError("trotter.dt: must be positive");
    if (!cfg.system.custom.is_null()) {
      const auto sys = system_from_json(cfg.system.custom);
      for (std::size_t i = 0; i < sys.hamiltonian.terms().size(); ++i)
        rethrow_as("system.hamiltonian[" + std::to_string(i) + "]",
                   [&] { return term_exponential(sys.hamiltonian.term(i), 1.0, 1.0); });
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("config: cannot open '" + file + "'");
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + std::string(e.what()));
  }
  return parse_config(doc);
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_name(scenario);
  if (system.custom.is_null())
    j["system"] = {{"n_s", system.n_s}, {"J", system.J}, {"B", system.B}};
  else
    j["system"] = nlohmann::ordered_json::parse(system.custom.dump());
  j["noise"] = {{"eps2", noise.eps2}, {"eps1", noise.eps1}, {"eps_init", noise.eps_init}, {"p0", noise.p0}, {"p1", noise.p1}};
  j["evaluation"] = evaluation_name(evaluation.kind);
  j["shots"] = evaluation.shots;
  j["principle"] = principle_name(principle);
  j["integrator"] = {{"method", method_name(integrator.method)}, {"dt", integrator.dt}};
  if (horizon_set) j["integrator"]["horizon"] = integrator.horizon;
  j["integrator"]["cutoff"] = integrator.cutoff;
  j["integrator"]["bootstrap_steps"] = integrator.bootstrap_steps;
  j["mitigation"] = {{"enabled", mitigation.enabled},
                     {"r_grid", mitigation.r_grid},
                     {"order", mitigation.order},
                     {"correct_readout", mitigation.correct_readout}};
  j["trotter"] = {{"dt", trotter.dt},
                  {"symmetric", trotter.symmetric},
                  {"grid", trotter.grid.empty() ? default_trotter_grid() : trotter.grid},
                  {"variants", trotter.variants},
                  {"samples", trotter.samples}};
  j["parameters"] = parameters;
  j["time"] = time;
  j["trials"] = trials;
  j["seed"] = seed;
  j["output"] = output;
  j["record_every"] = record_every;
  j["budget"] = budget;
  j["threads"] = threads;
  // only what parse_config accepts for this scenario, so the dump re-parses
  const auto allowed = allowed_top(scenario);
  nlohmann::ordered_json out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (allowed.count(it.key())) out[it.key()] = it.value();
  }
  return out;
}


namespace {

PauliString word_of(const json& v, const std::string& where, int n) {
  if (!v.is_string()) throw ConfigError(where + ": expected a Pauli word string");
  const auto s = v.get<std::string>();
  if (static_cast<int>(s.size()) != n)
    throw ConfigError(where + ": word '" + s + "' must have " + std::to_string(n) + " letters");
  return rethrow_as(where, [&] { return PauliString::parse(s); });
}

TermCoefficient coefficient_of(const json& v, const std::string& where) {
  if (v.is_number()) return TermCoefficient::fixed(v.get<double>());
  check_keys(v, where, {"constant", "cos", "sin", "omega"});
  return {get_real(v, where, "constant", 0.0), get_real(v, where, "cos", 0.0), get_real(v, where, "sin", 0.0),
          get_real(v, where, "omega", 1.0)};
}

GateInstance gate_of(const json& v, const std::string& where, int n) {
  check_keys(v, where, {"gate", "targets", "angle", "pauli", "scale", "offset"});
  GateInstance g;
  g.kind = rethrow_as(where + ".gate", [&] { return gate_kind_from_name(get_string(v, where, "gate", "")); });
  if (!v.contains("targets") || !v.at("targets").is_array())
    throw ConfigError(where + ".targets: expected an array of qubit indices");
  for (const auto& t : v.at("targets")) {
    if (!t.is_number_integer()) throw ConfigError(where + ".targets: expected integers");
    g.targets.push_back(t.get<int>());
  }
  g.angle = get_real(v, where, "angle", 0.0);
  if (v.contains("pauli")) {
    const auto p = get_string(v, where, "pauli", "X");
    if (p.size() != 1) throw ConfigError(where + ".pauli: expected one letter");
    g.pauli = rethrow_as(where + ".pauli", [&] { return pauli_from_char(p[0]); });
  }
  rethrow_as(where, [&] {
    validate_gate(g, n);
    return 0;
  });
  return g;
}

// generator word G of exp(i angle G)
PauliString generator_word(const GateInstance& g, int n) {
  switch (g.kind) {
    case GateKind::PhaseRot:
      return PauliString::single(n, g.targets[0], Pauli::Z);
    case GateKind::FlipRot:
      return PauliString::single(n, g.targets[0], Pauli::X);
    case GateKind::YRot:
      return PauliString::single(n, g.targets[0], Pauli::Y);
    case GateKind::ZZRot:
      return PauliString::single(n, g.targets[0], Pauli::Z) * PauliString::single(n, g.targets[1], Pauli::Z);
    default:
      throw std::invalid_argument("gate '" + gate_name(g.kind) + "' has no Pauli generator");
  }
}

AnsatzBlock block_of(const json& v, const std::string& where, int n) {
  check_keys(v, where, {"gates", "derivative", "phase_scale"});
  AnsatzBlock b;
  b.phase_scale = get_real(v, where, "phase_scale", 0.0);
  if (v.contains("gates")) {
    if (!v.at("gates").is_array()) throw ConfigError(where + ".gates: expected an array");
    for (std::size_t i = 0; i < v.at("gates").size(); ++i) {
      const std::string w = where + ".gates[" + std::to_string(i) + "]";
      const auto& gv = v.at("gates")[i];
      ParameterizedGate pg{gate_of(gv, w, n), get_real(gv, w, "scale", 1.0), get_real(gv, w, "offset", 0.0)};
      if (!pg.gate.is_parameterized()) throw ConfigError(w + ".gate: block gates must be rotations");
      b.gates.push_back(std::move(pg));
    }
  }
  if (v.contains("derivative")) {
    const auto& d = v.at("derivative");
    if (!d.is_array() || d.empty()) throw ConfigError(where + ".derivative: expected a nonempty array");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const std::string w = where + ".derivative[" + std::to_string(i) + "]";
      check_keys(d[i], w, {"f", "pauli"});
      const auto f = get_reals(d[i], w, "f");
      if (f.size() != 2) throw ConfigError(w + ".f: expected [re, im]");
      if (!d[i].contains("pauli")) throw ConfigError(w + ".pauli: missing required field");
      b.derivative.push_back({cplx{f[0], f[1]}, word_of(d[i].at("pauli"), w + ".pauli", n)});
    }
    return b;
  }
  // exp(i (offset + scale lambda) G) contributes i scale G when the gates commute
  for (const auto& pg : b.gates) {
    const PauliString g = generator_word(pg.gate, n);
    for (const auto& other : b.derivative) {
      if (!g.commutes_with(other.sigma))
        throw ConfigError(where + ".derivative: gates do not commute, give the decomposition explicitly");
    }
    b.derivative.push_back({cplx{0.0, pg.scale}, g});
  }
  if (b.phase_scale != 0.0) b.derivative.push_back({cplx{0.0, b.phase_scale}, PauliString(n)});
  if (b.derivative.empty()) throw ConfigError(where + ": block has neither gates nor a phase");
  return b;
}

}  // namespace

VariationalSystem system_from_json(const json& doc) {
  const std::string where = "system";
  check_keys(doc, where, {"name", "n_qubits", "hamiltonian", "prefix", "blocks", "initial", "initial_time", "horizon",
                          "stabilizers"});
  if (!doc.contains("n_qubits")) throw ConfigError("system.n_qubits: missing required field");
  const int n = static_cast<int>(get_count(doc, where, "n_qubits", 1, 1));
  if (n > 10) throw ConfigError("system.n_qubits: at most 10 qubits");

  const auto& hv = doc.at("hamiltonian");
  if (!hv.is_array() || hv.empty()) throw ConfigError("system.hamiltonian: expected a nonempty array of terms");
  std::vector<HamiltonianTerm> terms;
  for (std::size_t i = 0; i < hv.size(); ++i) {
    const std::string w = "system.hamiltonian[" + std::to_string(i) + "]";
    check_keys(hv[i], w, {"pauli", "coefficient", "group"});
    if (!hv[i].contains("pauli") || !hv[i].contains("coefficient"))
      throw ConfigError(w + ": needs pauli and coefficient");
    terms.push_back({coefficient_of(hv[i].at("coefficient"), w + ".coefficient"), word_of(hv[i].at("pauli"), w + ".pauli", n),
                     static_cast<int>(get_count(hv[i], w, "group", 0, 0))});
  }

  std::vector<GateInstance> prefix;
  if (doc.contains("prefix")) {
    if (!doc.at("prefix").is_array()) throw ConfigError("system.prefix: expected an array of gates");
    for (std::size_t i = 0; i < doc.at("prefix").size(); ++i)
      prefix.push_back(gate_of(doc.at("prefix")[i], "system.prefix[" + std::to_string(i) + "]", n));
  }
  if (!doc.contains("blocks") || !doc.at("blocks").is_array() || doc.at("blocks").empty())
    throw ConfigError("system.blocks: expected a nonempty array");
  std::vector<AnsatzBlock> blocks;
  for (std::size_t i = 0; i < doc.at("blocks").size(); ++i)
    blocks.push_back(block_of(doc.at("blocks")[i], "system.blocks[" + std::to_string(i) + "]", n));

  VariationalSystem sys;
  sys.name = get_string(doc, where, "name", "custom");
  sys.hamiltonian = rethrow_as("system.hamiltonian", [&] { return Hamiltonian(n, std::move(terms)); });
  const std::size_t nv = blocks.size();
  sys.ansatz = rethrow_as("system.blocks", [&] { return Ansatz(n, std::move(prefix), std::move(blocks)); });
  const auto init = get_reals(doc, where, "initial");
  if (doc.contains("initial") && init.size() != nv)
    throw ConfigError("system.initial: expected " + std::to_string(nv) + " values");
  sys.initial.values = RVector::Zero(static_cast<Eigen::Index>(nv));
  for (std::size_t k = 0; k < init.size(); ++k) sys.initial.values(static_cast<Eigen::Index>(k)) = init[k];
  sys.initial.time = get_real(doc, where, "initial_time", 0.0);
  sys.horizon = get_real(doc, where, "horizon", 4.0 * kPi);
  if (!(sys.horizon > 0.0)) throw ConfigError("system.horizon: must be positive");
  if (doc.contains("stabilizers")) {
    if (!doc.at("stabilizers").is_array()) throw ConfigError("system.stabilizers: expected an array of words");
    for (std::size_t i = 0; i < doc.at("stabilizers").size(); ++i)
      sys.stabilizers.push_back(word_of(doc.at("stabilizers")[i], "system.stabilizers[" + std::to_string(i) + "]", n));
  }
  return sys;
}

}  // namespace vqsim
