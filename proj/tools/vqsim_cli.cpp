// vqsim simulate|scan-trotter|dump-tasks <config> [--seed N] [--trials N] [--out DIR]
#include <CLI11.hpp>
#include <iostream>

#include "vqsim/scenario.hpp"

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kDegenerate = 3 };

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Overrides& o, bool hybrid) {
  sub->add_option("config", o.config, "JSON run configuration")->required();
  sub->add_option("--out", o.out, "output directory");
  if (hybrid) {
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--trials", o.trials, "number of trials")->check(CLI::PositiveNumber);
  }
}

vqsim::RunConfig resolve(const Overrides& o) {
  auto cfg = vqsim::load_config(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.out) cfg.output = *o.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational quantum simulation emulator"};
  app.require_subcommand(1);
  Overrides sim, scan, dump;
  add_common(app.add_subcommand("simulate", "run the scenario named in the config"), sim, true);
  add_common(app.add_subcommand("scan-trotter", "Trotter step scan"), scan, false);
  add_common(app.add_subcommand("dump-tasks", "coefficient circuits and extrapolation report"), dump, true);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  try {
    std::vector<std::filesystem::path> files;
    if (app.got_subcommand("simulate")) {
      files = vqsim::run_scenario(resolve(sim));
    } else if (app.got_subcommand("scan-trotter")) {
      files = vqsim::run_scan_command(resolve(scan));
    } else {
      files = vqsim::run_dump_command(resolve(dump));
    }
    for (const auto& f : files) std::cout << f.string() << '\n';
    return kOk;
  } catch (const vqsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const vqsim::DegenerateSystemError& e) {
    std::cerr << "numerical degeneracy: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
