#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dacopt/basis.hpp"
#include "dacopt/metric.hpp"
#include "dacopt/repset.hpp"

namespace dacopt {

struct DescentConfig {
  int max_sweeps = 200;
  std::uint64_t seed = 0;
};

// Shared search trace: one entry per sweep (descent) or per temperature (SA).
struct OptimizationTrace {
  std::vector<double> objective;
  std::vector<double> temperature;     // SA only
  std::vector<long long> accepted;     // moves per entry
  std::vector<long long> rejected;     // SA only (descent scans are exhaustive)
  double initial_objective = 0.0;
  bool converged = false;              // descent: a full sweep changed nothing
  int winning_restart = -1;            // SA only
  std::vector<double> final_means;     // descent: incrementally maintained means
};

struct DescentResult {
  RepresentationTable table;
  OptimizationTrace trace;
};

// Coordinate descent over representation choices: random init per codeword,
// then sweeps in ascending codeword order; each visit exhaustively scans R(y)
// with all other rows fixed. Ties keep the incumbent; strictly better
// candidates win with lowest-mask tie-break. Activation means are updated
// incrementally. Stops on a clean sweep or after max_sweeps.
// warm_start, when given, replaces the random initialization.
DescentResult descend_representations(const RepresentationIndex& index,
                                      const Basis& basis, const InputPmf& pmf,
                                      const DescentConfig& cfg,
                                      const RepresentationTable* warm_start =
                                          nullptr);

struct AnnealConfig {
  int restarts = 100;
  double initial_temperature = 0.0;  // <= 0: calibrated so ~80% of uphill
                                     // moves are accepted at the start
  double cooling_factor = 0.95;
  int steps_per_temperature = 150;
  double min_temperature_ratio = 1e-4;  // floor = ratio * T0
  DescentConfig inner_descent{10, 0};   // energy evaluation budget
  int polish_sweeps = 1000;             // final winner re-descended to convergence
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

struct AnnealResult {
  Basis basis;  // ascending weight order
  RepresentationTable table;
  double raw = 0.0;  // recomputed from the polished table
  OptimizationTrace trace;  // winning chain
};

// Simulated annealing over complete bases of the given length: independent
// restart chains, single-weight geometric-step moves clamped to
// [1, 2^N - 1], immediate rejection of incomplete candidates, Metropolis
// acceptance on the inner-descent energy, geometric cooling. The best chain
// result is re-descended to convergence before reporting.
AnnealResult anneal_basis(int n_bits, int length, const InputPmf& pmf,
                          const AnnealConfig& cfg);

struct ArchReport {
  std::string name;
  int switches = 0;
  double raw = 0.0;
  double normalized = 0.0;
  double sigma_delta = 0.0;
  // Filled by the simulation layer; quiet NaN until then.
  double mean_sndr_db;
  double linear_mean_sndr_db;
  double yield_sndr_db;

  double mse() const { return sigma_delta * sigma_delta * raw; }
};

ArchReport evaluate_architecture(const std::string& name, const Basis& basis,
                                 const RepresentationTable& table,
                                 const InputPmf& pmf, double sigma_delta);

}  // namespace dacopt
