#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dacopt/commands.hpp"
#include "dacopt/errors.hpp"

namespace {

struct CliOverrides {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  long long realizations = 0;
  double sigma_delta = 0.0;
  double quantile = 0.0;
  int n_bits = 0;
  std::vector<std::string> archs;
  std::string pmf;
  std::string mode;
  int threads = -1;
  int restarts = 0;
  int descent_restarts = 0;
};

void add_common_options(CLI::App* cmd, CliOverrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON experiment config");
  cmd->add_option("--seed", ov.seed, "root seed for all derived streams");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--realizations", ov.realizations,
                  "Monte Carlo realizations");
  cmd->add_option("--sigma-delta", ov.sigma_delta,
                  "unit current source relative std");
  cmd->add_option("--quantile", ov.quantile, "yield quantile in (0, 1)");
  cmd->add_option("--n-bits", ov.n_bits, "codeword width in bits");
  cmd->add_option("--arch", ov.archs,
                  "architecture spec (repeatable): binary | thermometer | "
                  "segmented:<M> | file:<path> | optimize:<L>");
  cmd->add_option("--pmf", ov.pmf,
                  "input distribution: uniform | gaussian:auto | "
                  "gaussian:<rms>");
  cmd->add_option("--mode", ov.mode, "simulation mode: exact | sampled");
  cmd->add_option("--threads", ov.threads, "worker threads (0 = hardware)");
  cmd->add_option("--restarts", ov.restarts, "annealing restarts");
  cmd->add_option("--descent-restarts", ov.descent_restarts,
                  "coordinate descent restarts for file: architectures");
}

dacopt::ExperimentConfig build_config(const CLI::App* cmd,
                                      const CliOverrides& ov) {
  dacopt::ExperimentConfig config;
  if (cmd->count("--config") > 0) {
    config = dacopt::load_config_file(ov.config_path);
  }
  if (cmd->count("--seed") > 0) config.seed = ov.seed;
  if (cmd->count("--out") > 0) config.out = ov.out;
  if (cmd->count("--realizations") > 0) config.realizations = ov.realizations;
  if (cmd->count("--sigma-delta") > 0) config.sigma_delta = ov.sigma_delta;
  if (cmd->count("--quantile") > 0) config.quantile = ov.quantile;
  if (cmd->count("--n-bits") > 0) config.n_bits = ov.n_bits;
  if (cmd->count("--arch") > 0) config.architectures = ov.archs;
  if (cmd->count("--pmf") > 0) config.pmf = ov.pmf;
  if (cmd->count("--mode") > 0) config.mode = ov.mode;
  if (cmd->count("--threads") > 0) config.threads = ov.threads;
  if (cmd->count("--restarts") > 0) config.sa_restarts = ov.restarts;
  if (cmd->count("--descent-restarts") > 0) {
    config.descent_restarts = ov.descent_restarts;
  }
  dacopt::validate_config(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "dacopt: design and evaluate current-steering DAC switch-weight "
      "architectures under random amplitude mismatch"};
  app.require_subcommand(1);

  CliOverrides ov;
  std::string basis_path, mapping_path, lut_output;

  CLI::App* metric = app.add_subcommand(
      "metric", "compute raw and normalized mismatch metrics");
  add_common_options(metric, ov);

  CLI::App* optimize = app.add_subcommand(
      "optimize",
      "search switch mappings (file:<basis>) or whole bases (optimize:<L>)");
  add_common_options(optimize, ov);

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte Carlo SNDR distributions per architecture");
  add_common_options(simulate, ov);

  CLI::App* export_lut =
      app.add_subcommand("export-lut", "emit a hardware LUT for a mapping");
  add_common_options(export_lut, ov);
  export_lut->add_option("--basis", basis_path, "basis file")->required();
  export_lut->add_option("--mapping", mapping_path, "mapping CSV")->required();
  export_lut->add_option("--output", lut_output, "output LUT path");

  CLI::App* reproduce = app.add_subcommand(
      "reproduce",
      "regenerate the bundled reference-architecture comparison artifacts");
  add_common_options(reproduce, ov);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? dacopt::kExitOk : dacopt::kExitConfigError;
  }

  try {
    if (metric->parsed()) {
      dacopt::cmd_metric(build_config(metric, ov));
    } else if (optimize->parsed()) {
      dacopt::cmd_optimize(build_config(optimize, ov));
    } else if (simulate->parsed()) {
      dacopt::cmd_simulate(build_config(simulate, ov));
    } else if (export_lut->parsed()) {
      dacopt::cmd_export_lut(build_config(export_lut, ov), basis_path,
                             mapping_path, lut_output);
    } else if (reproduce->parsed()) {
      dacopt::cmd_reproduce(build_config(reproduce, ov));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return dacopt::exit_code_for(e);
  }
  return dacopt::kExitOk;
}
