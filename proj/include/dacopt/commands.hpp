#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "dacopt/basis.hpp"
#include "dacopt/metric.hpp"
#include "dacopt/montecarlo.hpp"
#include "dacopt/optimizer.hpp"

namespace dacopt {

// Resolved experiment description. Every field is echoed into the output
// artifacts; re-running from the echo reproduces them byte for byte.
struct ExperimentConfig {
  int n_bits = 8;
  // binary | thermometer | segmented:<M> | file:<path> | optimize:<L>
  std::vector<std::string> architectures = {"binary", "segmented:4"};
  std::string pmf = "gaussian:auto";  // uniform | gaussian:auto | gaussian:<rms>
  double sigma_delta = 0.05;
  long long realizations = 10000;
  double quantile = 0.95;
  std::string mode = "exact";  // exact | sampled
  long long waveform_samples = 100000;
  std::uint64_t seed = 1;
  std::string out = "out";
  int threads = 0;
  int descent_restarts = 32;
  int descent_sweeps = 500;
  int sa_restarts = 100;
  double sa_initial_temperature = 0.0;
  double sa_cooling = 0.95;
  int sa_steps_per_temperature = 150;
  double sa_min_temperature_ratio = 1e-4;
  int sa_inner_sweeps = 10;
};

// JSON round trip; unknown fields are rejected.
ExperimentConfig load_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_json(const std::string& text,
                                   const std::string& source_name);
std::string config_to_json(const ExperimentConfig& config);  // one line
std::string config_to_json_pretty(const ExperimentConfig& config);
void validate_config(const ExperimentConfig& config);

InputPmf resolve_pmf(const ExperimentConfig& config);

// One fully resolved architecture: basis plus the static mapping the
// experiment will use.
struct Architecture {
  std::string name;
  std::string series;  // canonical | optimized | segmented
  Basis basis;
  RepresentationTable table;
  bool has_trace = false;
  bool annealed = false;
  OptimizationTrace trace;
};

std::vector<Architecture> resolve_architectures(const ExperimentConfig& config,
                                                const InputPmf& pmf);

// Mapping CSV: codeword,bits,value with basis header comments.
void save_mapping_csv(std::ostream& out, const RepresentationTable& table,
                      const Basis& basis);
RepresentationTable load_mapping_csv(std::istream& in, const Basis& basis,
                                     const std::string& source_name);
RepresentationTable load_mapping_csv_file(const std::filesystem::path& path,
                                          const Basis& basis);

// LUT: one L-bit word per line, address = codeword, basis index 0 leftmost.
void save_lut(std::ostream& out, const RepresentationTable& table,
              const Basis& basis);
std::pair<Basis, RepresentationTable> load_lut(std::istream& in,
                                               const std::string& source_name);
std::pair<Basis, RepresentationTable> load_lut_file(
    const std::filesystem::path& path);

void save_trace_csv(std::ostream& out, const OptimizationTrace& trace);

// Subcommands. Results land under config.out; each throws on error and the
// CLI maps exceptions to exit codes.
void cmd_metric(const ExperimentConfig& config);
void cmd_optimize(const ExperimentConfig& config);
void cmd_simulate(const ExperimentConfig& config);
void cmd_export_lut(const ExperimentConfig& config,
                    const std::filesystem::path& basis_path,
                    const std::filesystem::path& mapping_path,
                    std::filesystem::path output_path = {});
void cmd_reproduce(const ExperimentConfig& config);

}  // namespace dacopt
