#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "vqsim/integrator.hpp"
#include "vqsim/trotter.hpp"

namespace vqsim {

enum class Scenario { IsingHybrid, IsingTrotter, TrotterScan, QubitDemo, CoefficientDump };
std::string scenario_name(Scenario s);
Scenario scenario_from_name(const std::string& name);

struct SystemConfig {
  int n_s = 3;
  double J = 0.5;
  double B = 0.5;
  nlohmann::json custom;  // declarative system document; null for the built-in ring
};

struct TrotterRunConfig {
  double dt = 2.0 * kPi * std::pow(10.0, -1.4);
  bool symmetric = false;
  std::vector<double> grid;          // scan grid (dt values); default_trotter_grid() when empty
  std::vector<std::string> variants{"plain", "symmetric"};  // scan variants
  std::size_t samples = 200;         // evaluation intervals over the horizon
};

struct RunConfig {
  Scenario scenario = Scenario::IsingHybrid;
  SystemConfig system;
  NoiseModel noise;
  EvaluationMode evaluation;
  Principle principle = Principle::Dirac;
  IntegratorConfig integrator;
  bool horizon_set = false;
  MitigationConfig mitigation;
  TrotterRunConfig trotter;
  std::vector<double> parameters;  // coefficient-dump point; system initial when empty
  double time = 0.0;               // coefficient-dump time
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::string output = "out";
  std::size_t record_every = 0;  // checkpoint stride in steps; 0: N/200
  bool budget = false;
  std::size_t threads = 0;  // 0: hardware concurrency

  nlohmann::ordered_json to_json() const;
};

// Strict parse: unknown fields, wrong types and out-of-range values throw
// ConfigError naming the field.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

struct VariationalSystem;
// Builds a system from a declarative document (see README). Throws ConfigError.
VariationalSystem system_from_json(const nlohmann::json& doc);

}  // namespace vqsim
