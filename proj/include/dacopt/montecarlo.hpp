#pragma once

#include <cstdint>
#include <vector>

#include "dacopt/basis.hpp"
#include "dacopt/metric.hpp"

namespace dacopt {

enum class SimMode { kExactExpectation, kSampledWaveform };

struct SimConfig {
  long long realizations = 10000;
  double sigma_delta = 0.05;
  double yield_quantile = 0.95;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::kExactExpectation;
  long long waveform_samples = 100000;  // sampled mode only
  int threads = 0;                      // 0: hardware concurrency
};

// Per-realization SNDR values plus the summaries derived from them.
struct SndrDistribution {
  std::vector<double> sndr_db;      // one entry per realization
  std::vector<double> error_power;  // matching per-realization D
  double signal_power = 0.0;
  long long infinite_count = 0;  // zero-error sentinels, excluded from means

  long long realizations() const {
    return static_cast<long long>(sndr_db.size());
  }
  double mean_db() const;             // arithmetic mean of the dB values
  double linear_mean_db() const;      // 10 log10(signal / mean error power)
  double mean_error_power() const;
  // SNDR exceeded by fraction q of realizations: the nearest-rank (1 - q)
  // lower quantile of the dB values.
  double yield_db(double q) const;
  double min_db() const;
  double max_db() const;
};

// Precomputed per-architecture state shared by the exact-expectation paths;
// evaluating one realization is a 2^N-term weighted sum.
class SndrEvaluator {
 public:
  SndrEvaluator(const RepresentationTable& table, const Basis& basis,
                const InputPmf& pmf);

  double error_power(const MismatchRealization& delta) const;
  double sndr_db(const MismatchRealization& delta) const;  // +inf when D = 0
  double signal_power() const { return signal_power_; }

 private:
  std::vector<std::int32_t> row_offsets_;
  std::vector<std::uint16_t> row_switches_;
  std::vector<double> means_;
  std::vector<double> probs_;
  double signal_power_ = 0.0;
};

double sndr_one_realization(const RepresentationTable& table,
                            const Basis& basis, const InputPmf& pmf,
                            const MismatchRealization& delta);

SndrDistribution run_simulation(const RepresentationTable& table,
                                const Basis& basis, const InputPmf& pmf,
                                const SimConfig& cfg);

// Validation cross-check of the exact-expectation path: draw Gaussian
// samples, quantize, push through the mismatched DAC, remove the empirical
// mean, and compare signal to residual power. Requires n_samples >= 10^4.
double sampled_waveform_sndr(const RepresentationTable& table,
                             const Basis& basis,
                             const MismatchRealization& delta, double sigma_s,
                             long long n_samples, std::uint64_t seed);

// realization,sndr_db rows.
void write_distribution_csv(std::ostream& out, const SndrDistribution& dist);

}  // namespace dacopt
