#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "support.hpp"
#include "vqsim/scenario.hpp"

using namespace vqsim;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string error_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

json base_hybrid() {
  return json::parse(R"({
    "scenario": "ising-hybrid",
    "noise": {"eps2": 0.001},
    "integrator": {"dt_exponent": -2, "horizon_over_pi": 0.16, "bootstrap_steps": 1}
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vqsim_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(VQSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const json& doc) {
  const fs::path p = fs::temp_directory_path() / ("vqsim_cfg_" + name + ".json");
  std::ofstream(p) << doc.dump(2);
  return p;
}

}  // namespace

TEST(Config, DefaultsForHybrid) {
  const auto cfg = parse_config(base_hybrid());
  EXPECT_EQ(cfg.scenario, Scenario::IsingHybrid);
  EXPECT_EQ(cfg.evaluation.kind, EvaluationKind::NoisyExact);
  EXPECT_DOUBLE_EQ(cfg.noise.eps2, 1e-3);
  EXPECT_DOUBLE_EQ(cfg.noise.eps1, 1e-4);
  EXPECT_NEAR(cfg.integrator.dt, 2 * kPi * 1e-2, 1e-16);
  EXPECT_EQ(cfg.trials, 1u);
  EXPECT_EQ(cfg.principle, Principle::Dirac);
  const auto again = parse_config(cfg.to_json());
  EXPECT_EQ(again.to_json().dump(), cfg.to_json().dump());
}

TEST(Config, ErrorsNameTheField) {
  auto doc = base_hybrid();
  doc["noise"]["eps2"] = 1.5;
  EXPECT_NE(error_of(doc).find("noise.eps2"), std::string::npos);

  doc = base_hybrid();
  doc["integrator"]["dt"] = -1.0;
  doc["integrator"].erase("dt_exponent");
  EXPECT_NE(error_of(doc).find("integrator.dt"), std::string::npos);

  doc = base_hybrid();
  doc["integrator"]["horizon"] = 1.0;
  doc["integrator"]["dt"] = 0.3;
  doc["integrator"].erase("dt_exponent");
  EXPECT_NE(error_of(doc).find("integrator"), std::string::npos);

  doc = base_hybrid();
  doc["surprise"] = 1;
  EXPECT_NE(error_of(doc).find("surprise"), std::string::npos);

  doc = base_hybrid();
  doc["evaluation"] = "shots";
  doc["shots"] = 0;
  EXPECT_NE(error_of(doc).find("shots"), std::string::npos);

  doc = base_hybrid();
  doc["mitigation"] = {{"enabled", true}, {"r_grid", {1.0, 0.5}}};
  EXPECT_NE(error_of(doc).find("mitigation"), std::string::npos);

  doc = base_hybrid();
  doc["system"] = {{"n_s", 1}};
  EXPECT_NE(error_of(doc).find("system.n_s"), std::string::npos);

  EXPECT_NE(error_of(json::parse(R"({"scenario": "warp-drive"})")).find("scenario"), std::string::npos);
  EXPECT_NE(error_of(json::parse(R"({"noise": {}})")).find("scenario"), std::string::npos);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Stabilizers, ClusterStateReportsPlusOne) {
  const auto sys = build_ising(3, 0.5, 0.5);
  const auto phi0 = sys.ansatz.prepare(sys.initial);
  for (double s : stabilizer_report(phi0, sys.stabilizers)) EXPECT_NEAR(s, 1.0, 1e-14);
  for (double s : stabilizer_report(DensityOperator::maximally_mixed(3), sys.stabilizers)) EXPECT_NEAR(s, 0.0, 1e-15);
  EXPECT_THROW(stabilizer_report(phi0, {PauliString::parse("XII", kI)}), std::invalid_argument);
}

TEST(Stabilizers, NoisyPreparationMatchesChannelOracle) {
  // one depolarizing channel after the prep on qubit 0 only
  const auto sys = build_ising(3, 0.5, 0.5);
  const auto phi0 = sys.ansatz.prepare(sys.initial);
  const double eps = 0.03;
  auto rho = DensityOperator::from_pure(phi0);
  rho = apply_channel(rho, PauliChannel::depolarizing(1, eps), {0});
  // S_1 = X Z Z anticommutes with Y and Z on qubit 0, each weighted eps/3
  const auto s = stabilizer_report(rho, sys.stabilizers);
  EXPECT_NEAR(s[0], 1 - 4 * eps / 3, 1e-14);
}

TEST(Aggregate, PercentileInterpolates) {
  EXPECT_DOUBLE_EQ(percentile({3, 1, 2, 4}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile({3, 1, 2, 4}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile({3, 1, 2, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile({5}, 0.84), 5.0);
  EXPECT_THROW(percentile({}, 0.5), std::invalid_argument);
}

TEST(Aggregate, BandsContainMean) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g(0, 1);
  std::vector<SeriesTable> trials(20);
  for (auto& t : trials) {
    t.columns = {"t", "x", "flags"};
    for (int i = 0; i < 5; ++i) t.rows.push_back({0.1 * i, g(rng) + i, 0});
  }
  std::ostringstream os;
  write_aggregate(os, trials);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,trials,x_mean,x_p16,x_p84");
  int rows = 0;
  while (std::getline(in, line)) {
    double t, n, mean, lo, hi;
    char c;
    std::istringstream ls(line);
    ls >> t >> c >> n >> c >> mean >> c >> lo >> c >> hi;
    EXPECT_EQ(n, 20.0);
    EXPECT_LE(lo, mean);
    EXPECT_LE(mean, hi);
    ++rows;
  }
  EXPECT_EQ(rows, 5);
}

TEST(Scenario, SameSeedGivesIdenticalFiles) {
  auto doc = base_hybrid();
  doc["evaluation"] = "shots";
  doc["shots"] = 1000;
  doc["trials"] = 2;
  doc["threads"] = 2;
  auto cfg = parse_config(doc);
  cfg.output = scratch("det_a").string();
  run_scenario(cfg);
  cfg.output = scratch("det_b").string();
  run_scenario(cfg);
  for (const char* f : {"trial_000.csv", "trial_001.csv", "aggregate.csv"}) {
    const auto a = slurp(fs::path(scratch("x").parent_path()) / "vqsim_test_det_a" / f);
    EXPECT_FALSE(a.empty()) << f;
    EXPECT_EQ(a, slurp(fs::path(cfg.output) / f)) << f;
  }
  // a different trial stream differs
  EXPECT_NE(slurp(fs::path(cfg.output) / "trial_000.csv"), slurp(fs::path(cfg.output) / "trial_001.csv"));
}

TEST(Scenario, CsvUsesSeventeenDigits) {
  auto cfg = parse_config(base_hybrid());
  std::ostringstream os;
  run_hybrid_trial(cfg, 0, &os);
  std::istringstream in(os.str());
  std::string header, row;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("t,lambda_1,lambda_2,trace_distance", 0), 0u) << header;
  std::getline(in, row);
  std::getline(in, row);
  const std::string first = row.substr(0, row.find(','));
  // time 2 pi 10^-2 printed exactly enough to round-trip
  EXPECT_EQ(std::stod(first), 2 * kPi * 1e-2);
  EXPECT_GE(first.size(), 17u);
}

TEST(Scenario, ManifestAndOutputs) {
  auto cfg = parse_config(base_hybrid());
  cfg.output = scratch("manifest").string();
  cfg.budget = true;
  const auto files = run_scenario(cfg);
  const auto m = json::parse(slurp(fs::path(cfg.output) / "manifest.json"));
  EXPECT_EQ(m.at("status"), "complete");
  EXPECT_EQ(m.at("vqsim_version"), kVersion);
  EXPECT_EQ(m.at("csv_schema"), kCsvSchemaVersion);
  EXPECT_EQ(parse_config(m.at("config")).to_json().dump(), cfg.to_json().dump());
  for (const auto& f : files) EXPECT_TRUE(fs::exists(f)) << f;
  EXPECT_TRUE(fs::exists(fs::path(cfg.output) / "budget.json"));
}

TEST(Cli, ExitCodes) {
  const fs::path good = write_config("good", [] {
    auto d = base_hybrid();
    d["output"] = scratch("cli_good").string();
    return d;
  }());
  EXPECT_EQ(run_cli("simulate " + good.string()), 0);
  EXPECT_TRUE(fs::exists(scratch("none").parent_path() / "vqsim_test_cli_good" / "aggregate.csv"));

  auto bad = base_hybrid();
  bad["noise"]["eps2"] = -1;
  EXPECT_EQ(run_cli("simulate " + write_config("bad", bad).string()), 2);
  EXPECT_EQ(run_cli("simulate /nonexistent.json"), 2);
  EXPECT_EQ(run_cli("launch " + good.string()), 2);

  auto degenerate = base_hybrid();
  degenerate["integrator"]["bootstrap_steps"] = 0;
  degenerate["noise"] = json::object();
  degenerate["output"] = scratch("cli_degenerate").string();
  EXPECT_EQ(run_cli("simulate " + write_config("degenerate", degenerate).string()), 3);

  const fs::path scan = write_config("scan", json{{"scenario", "trotter-scan"},
                                                  {"trotter", {{"grid_exponents", {-1.0, -0.8}}, {"samples", 20}}},
                                                  {"output", scratch("cli_scan").string()}});
  EXPECT_EQ(run_cli("scan-trotter " + scan.string()), 0);
  EXPECT_TRUE(fs::exists(scratch("none").parent_path() / "vqsim_test_cli_scan" / "scan.csv"));

  const fs::path dump = write_config("dump", json{{"scenario", "coefficient-dump"},
                                                  {"noise", {{"eps2", 0.001}}},
                                                  {"mitigation", {{"enabled", true}}},
                                                  {"output", scratch("cli_dump").string()}});
  EXPECT_EQ(run_cli("dump-tasks " + dump.string()), 0);
  const auto tasks = slurp(scratch("none").parent_path() / "vqsim_test_cli_dump" / "tasks.csv");
  EXPECT_EQ(tasks.rfind("index,kind,k,i,q,j,amplitude,theta", 0), 0u);
}

TEST(DeclarativeSystem, RingDocumentMatchesBuiltIn) {
  std::ifstream in(std::string(VQSIM_CONFIG_DIR) + "/ising-declarative.json");
  const auto doc = json::parse(in);
  const auto cfg = parse_config(doc);
  const auto custom = make_system(cfg);
  const auto ref = build_ising(3, 0.5, 0.5);
  EXPECT_EQ(custom.ansatz.n_parameters(), 2u);
  EXPECT_EQ(custom.stabilizers.size(), 3u);
  // same Hamiltonian, same trial states, same derivative generators
  EXPECT_LT((custom.hamiltonian.matrix(0.0) - ref.hamiltonian.matrix(0.0)).norm(), 1e-14);
  const ParameterVector p{(RVector(2) << 0.3, -0.8).finished(), 0.0};
  EXPECT_LT((custom.ansatz.prepare(p).amplitudes() - ref.ansatz.prepare(p).amplitudes()).norm(), 1e-13);
  for (std::size_t k = 0; k < 2; ++k) {
    EXPECT_LT((custom.ansatz.derivative(p, k) - ref.ansatz.derivative(p, k)).norm(), 1e-13);
    EXPECT_LT((custom.ansatz.generator(k) - ref.ansatz.generator(k)).norm(), 1e-14);
  }
  const auto s_custom = stabilizer_report(custom.ansatz.prepare(custom.initial), custom.stabilizers);
  for (double s : s_custom) EXPECT_NEAR(s, 1.0, 1e-14);
  // resolved config carries the document and re-parses
  EXPECT_EQ(parse_config(cfg.to_json()).to_json().dump(), cfg.to_json().dump());
}

TEST(DeclarativeSystem, AutoDerivativeMatchesFiniteDifference) {
  const auto sys = system_from_json(json::parse(R"({
    "n_qubits": 2,
    "hamiltonian": [{"pauli": "YI", "coefficient": {"constant": 0.2, "cos": 0.4, "omega": 2}},
                    {"pauli": "ZZ", "coefficient": 0.7, "group": 1}],
    "blocks": [{"gates": [{"gate": "yrot", "targets": [0], "scale": 0.9, "offset": 0.1},
                          {"gate": "phase", "targets": [1], "scale": -1.3}], "phase_scale": 0.5},
               {"gates": [{"gate": "zz", "targets": [0, 1], "scale": 0.6}]}],
    "initial": [0.2, 0.4]
  })"));
  EXPECT_TRUE(sys.hamiltonian.time_dependent());
  EXPECT_NEAR(sys.hamiltonian.term(0).coefficient(0.5), 0.2 + 0.4 * std::cos(1.0), 1e-15);
  const double h = 1e-6;
  for (std::size_t k = 0; k < 2; ++k) {
    ParameterVector up = sys.initial, dn = sys.initial;
    up.values(static_cast<Eigen::Index>(k)) += h;
    dn.values(static_cast<Eigen::Index>(k)) -= h;
    const CVector fd = (sys.ansatz.prepare(up).amplitudes() - sys.ansatz.prepare(dn).amplitudes()) / (2 * h);
    EXPECT_LT((sys.ansatz.derivative(sys.initial, k) - fd).norm(), 1e-8) << k;
  }
}

TEST(DeclarativeSystem, ErrorsNameTheField) {
  auto err = [](const char* text) {
    try {
      system_from_json(json::parse(text));
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  EXPECT_NE(err(R"({"n_qubits": 2, "hamiltonian": [{"pauli": "Z", "coefficient": 1}], "blocks": [{}]})")
                .find("system.hamiltonian[0].pauli"), std::string::npos);
  EXPECT_NE(err(R"({"n_qubits": 1, "hamiltonian": [{"pauli": "Z", "coefficient": 1}],
                  "blocks": [{"gates": [{"gate": "h", "targets": [0]}]}]})")
                .find("system.blocks[0].gates[0]"), std::string::npos);
  EXPECT_NE(err(R"({"n_qubits": 1, "hamiltonian": [{"pauli": "Z", "coefficient": 1}],
                  "blocks": [{"gates": [{"gate": "phase", "targets": [3]}]}]})")
                .find("system.blocks[0].gates[0]"), std::string::npos);
  EXPECT_NE(err(R"({"n_qubits": 1, "hamiltonian": [{"pauli": "Z", "coefficient": 1}],
                  "blocks": [{"gates": [{"gate": "phase", "targets": [0]}, {"gate": "flip", "targets": [0]}]}]})")
                .find("system.blocks[0].derivative"), std::string::npos);
  EXPECT_NE(err(R"({"n_qubits": 1, "hamiltonian": [{"pauli": "Z", "coefficient": 1}],
                  "blocks": [{"gates": [{"gate": "phase", "targets": [0]}]}], "initial": [1, 2]})")
                .find("system.initial"), std::string::npos);
  EXPECT_NE(err(R"({"hamiltonian": []})").find("system.n_qubits"), std::string::npos);
}

TEST(DeclarativeSystem, TrotterNeedsNativeTerms) {
  json doc{{"scenario", "trotter-scan"},
           {"system", json::parse(R"({"n_qubits": 2, "hamiltonian": [{"pauli": "XX", "coefficient": 1}],
                                      "blocks": [{"gates": [{"gate": "phase", "targets": [0]}]}]})")}};
  EXPECT_NE(error_of(doc).find("system.hamiltonian[0]"), std::string::npos);
  doc["system"]["hamiltonian"][0]["pauli"] = "ZZ";
  EXPECT_EQ(error_of(doc), "");
}
