#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vqsim/config.hpp"
#include "vqsim/diagnostics.hpp"
#include "vqsim/systems.hpp"

namespace vqsim {

inline constexpr const char* kVersion = "0.1.0";
// Bumped whenever a CSV layout changes.
inline constexpr int kCsvSchemaVersion = 1;

// Row flags
inline constexpr int kFlagBootstrap = 1;      // step driven by the bootstrap equations
inline constexpr int kFlagRankDeficient = 2;  // singular values dropped in the solve

std::vector<double> stabilizer_report(const DensityOperator& rho, const std::vector<PauliString>& stabilizers);
std::vector<double> stabilizer_report(const PureState& psi, const std::vector<PauliString>& stabilizers);

VariationalSystem make_system(const RunConfig& cfg);

struct SeriesTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Writes the header then streams rows.
class CsvSink {
 public:
  explicit CsvSink(std::ostream* os) : os_(os) {}
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);

 private:
  std::ostream* os_;
};

struct HybridTrial {
  SeriesTable table;
  Trajectory trajectory;
  std::optional<ErrorBudget> budget;
};

// One seeded trial of ising-hybrid / qubit-demo; rows are streamed to `csv` when given.
HybridTrial run_hybrid_trial(const RunConfig& cfg, std::uint64_t trial, std::ostream* csv = nullptr);

// Noisy Trotter run sampled on the evaluation grid.
SeriesTable run_trotter_series(const RunConfig& cfg, std::ostream* csv = nullptr);

struct ScanVariant {
  std::string name;
  TrotterScan scan;
};
std::vector<ScanVariant> run_trotter_scan(const RunConfig& cfg);
void write_scan_csv(std::ostream& os, const std::vector<ScanVariant>& scans);
std::string scan_json(const std::vector<ScanVariant>& scans);

struct TaskDump {
  std::vector<CoefficientTask> tasks;
  std::vector<TaskDumpRow> rows;
  std::vector<std::vector<ExtrapolationPoint>> points;
  std::vector<ExtrapolationFit> fits;
};
TaskDump run_coefficient_dump(const RunConfig& cfg);

// Linear-interpolated percentile (q in [0, 1]) of unsorted values.
double percentile(std::vector<double> values, double q);
// Per-row mean and 16/84 percentiles over trials; tables must share columns and length.
// Columns named in `skip` (and the first, time) are not aggregated.
void write_aggregate(std::ostream& os, const std::vector<SeriesTable>& trials, const std::vector<std::string>& skip = {"flags"});

// Full scenario with output files and manifest under cfg.output. Returns the files written.
std::vector<std::filesystem::path> run_scenario(const RunConfig& cfg);
std::vector<std::filesystem::path> run_scan_command(const RunConfig& cfg);
std::vector<std::filesystem::path> run_dump_command(const RunConfig& cfg);

}  // namespace vqsim
