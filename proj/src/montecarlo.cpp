#include "dacopt/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <ostream>
#include <thread>

#include "dacopt/errors.hpp"
#include "dacopt/format.hpp"
#include "dacopt/rng.hpp"

namespace dacopt {

double SndrDistribution::mean_db() const {
  double sum = 0.0;
  long long n = 0;
  for (double v : sndr_db) {
    if (std::isinf(v)) continue;
    sum += v;
    ++n;
  }
  return n > 0 ? sum / static_cast<double>(n)
               : std::numeric_limits<double>::infinity();
}

double SndrDistribution::mean_error_power() const {
  double sum = 0.0;
  for (double d : error_power) {
    sum += d;
  }
  return sum / static_cast<double>(error_power.size());
}

double SndrDistribution::linear_mean_db() const {
  return 10.0 * std::log10(signal_power / mean_error_power());
}

double SndrDistribution::yield_db(double q) const {
  if (!(q > 0.0 && q < 1.0)) {
    throw ConfigError("yield quantile must lie in (0, 1)");
  }
  std::vector<double> sorted = sndr_db;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<long long>(sorted.size());
  // nearest rank; the epsilon keeps exact integer ranks (e.g. 0.05 * 100)
  // from rounding up through float error
  long long rank = static_cast<long long>(
      std::ceil((1.0 - q) * static_cast<double>(n) - 1e-9));
  rank = std::clamp(rank, 1ll, n);
  return sorted[static_cast<std::size_t>(rank - 1)];
}

double SndrDistribution::min_db() const {
  return *std::min_element(sndr_db.begin(), sndr_db.end());
}

double SndrDistribution::max_db() const {
  return *std::max_element(sndr_db.begin(), sndr_db.end());
}

SndrEvaluator::SndrEvaluator(const RepresentationTable& table,
                             const Basis& basis, const InputPmf& pmf) {
  if (table.basis_length != basis.length() || table.n_bits != basis.n_bits ||
      pmf.n_bits != basis.n_bits) {
    throw InternalError("SndrEvaluator: dimension mismatch");
  }
  const int count = table.codeword_count();
  probs_ = pmf.probs;
  row_offsets_.reserve(static_cast<std::size_t>(count) + 1);
  row_offsets_.push_back(0);
  for (int x = 0; x < count; ++x) {
    table.rows[static_cast<std::size_t>(x)].for_each_set([&](int i) {
      row_switches_.push_back(static_cast<std::uint16_t>(i));
    });
    row_offsets_.push_back(static_cast<std::int32_t>(row_switches_.size()));
  }
  ActivationProfile profile = activation_profile(table, pmf);
  means_ = std::move(profile.means);
  signal_power_ = pmf.variance();
}

double SndrEvaluator::error_power(const MismatchRealization& delta) const {
  if (delta.deltas.size() != means_.size()) {
    throw InternalError("SndrEvaluator: realization length mismatch");
  }
  const double* d = delta.deltas.data();
  double offset = 0.0;
  for (std::size_t i = 0; i < means_.size(); ++i) {
    offset += means_[i] * d[i];
  }
  double power = 0.0;
  const int count = static_cast<int>(probs_.size());
  for (int x = 0; x < count; ++x) {
    double s = 0.0;
    for (std::int32_t k = row_offsets_[static_cast<std::size_t>(x)];
         k < row_offsets_[static_cast<std::size_t>(x) + 1]; ++k) {
      s += d[row_switches_[static_cast<std::size_t>(k)]];
    }
    const double e = s - offset;
    power += probs_[static_cast<std::size_t>(x)] * e * e;
  }
  return power;
}

double SndrEvaluator::sndr_db(const MismatchRealization& delta) const {
  const double d = error_power(delta);
  if (d <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(signal_power_ / d);
}

double sndr_one_realization(const RepresentationTable& table,
                            const Basis& basis, const InputPmf& pmf,
                            const MismatchRealization& delta) {
  return SndrEvaluator(table, basis, pmf).sndr_db(delta);
}

SndrDistribution run_simulation(const RepresentationTable& table,
                                const Basis& basis, const InputPmf& pmf,
                                const SimConfig& cfg) {
  if (cfg.realizations < 1) {
    throw ConfigError("run_simulation: realizations must be >= 1");
  }
  if (!(cfg.sigma_delta > 0.0)) {
    throw ConfigError(
        "run_simulation: sigma_delta must be > 0 (a zero-mismatch DAC has "
        "unbounded SNDR)");
  }
  if (!(cfg.yield_quantile > 0.0 && cfg.yield_quantile < 1.0)) {
    throw ConfigError("run_simulation: yield_quantile must lie in (0, 1)");
  }
  if (cfg.mode == SimMode::kSampledWaveform && !(pmf.sigma_s > 0.0)) {
    throw ConfigError(
        "run_simulation: sampled-waveform mode needs a gaussian pmf");
  }

  const SndrEvaluator evaluator(table, basis, pmf);
  SndrDistribution dist;
  dist.signal_power = evaluator.signal_power();
  dist.sndr_db.resize(static_cast<std::size_t>(cfg.realizations));
  dist.error_power.resize(static_cast<std::size_t>(cfg.realizations));

  // Realizations are partitioned by index; each draws from its own derived
  // stream, so the result is identical for any thread count.
  const auto run_range = [&](long long begin, long long end) {
    for (long long j = begin; j < end; ++j) {
      auto gen = make_generator(cfg.seed, RngStream::kRealization,
                                static_cast<std::uint64_t>(j));
      const MismatchRealization delta =
          sample_mismatch(basis, cfg.sigma_delta, gen);
      if (cfg.mode == SimMode::kExactExpectation) {
        const double d = evaluator.error_power(delta);
        dist.error_power[static_cast<std::size_t>(j)] = d;
        dist.sndr_db[static_cast<std::size_t>(j)] =
            d > 0.0 ? 10.0 * std::log10(dist.signal_power / d)
                    : std::numeric_limits<double>::infinity();
      } else {
        const double sndr = sampled_waveform_sndr(
            table, basis, delta, pmf.sigma_s, cfg.waveform_samples,
            derive_seed(cfg.seed, RngStream::kWaveform,
                        static_cast<std::uint64_t>(j)));
        dist.sndr_db[static_cast<std::size_t>(j)] = sndr;
        dist.error_power[static_cast<std::size_t>(j)] =
            std::isinf(sndr) ? 0.0
                             : dist.signal_power / std::pow(10.0, sndr / 10.0);
      }
    }
  };

  int thread_count = cfg.threads > 0
                         ? cfg.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = static_cast<int>(std::clamp<long long>(
      thread_count, 1, cfg.realizations));
  if (thread_count == 1) {
    run_range(0, cfg.realizations);
  } else {
    std::vector<std::thread> pool;
    const long long chunk =
        (cfg.realizations + thread_count - 1) / thread_count;
    for (int t = 0; t < thread_count; ++t) {
      const long long begin = t * chunk;
      const long long end = std::min(cfg.realizations, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  for (double v : dist.sndr_db) {
    if (std::isinf(v)) ++dist.infinite_count;
  }
  if (dist.infinite_count > 0) {
    std::cerr << "warning: " << dist.infinite_count
              << " realization(s) had zero error power; excluded from the "
                 "dB mean\n";
  }
  return dist;
}

double sampled_waveform_sndr(const RepresentationTable& table,
                             const Basis& basis,
                             const MismatchRealization& delta, double sigma_s,
                             long long n_samples, std::uint64_t seed) {
  if (n_samples < 10000) {
    throw ConfigError("sampled_waveform_sndr: need at least 10^4 samples");
  }
  if (!(sigma_s > 0.0)) {
    throw ConfigError("sampled_waveform_sndr: sigma_s must be > 0");
  }
  if (table.basis_length != basis.length() ||
      delta.deltas.size() != basis.weights.size()) {
    throw InternalError("sampled_waveform_sndr: dimension mismatch");
  }

  // Per-codeword mismatch contribution: y(x) - x = sum of selected deltas.
  const int count = table.codeword_count();
  std::vector<double> mismatch(static_cast<std::size_t>(count), 0.0);
  for (int x = 0; x < count; ++x) {
    double s = 0.0;
    table.rows[static_cast<std::size_t>(x)].for_each_set(
        [&](int i) { s += delta.deltas[static_cast<std::size_t>(i)]; });
    mismatch[static_cast<std::size_t>(x)] = s;
  }

  std::mt19937_64 gen(seed);
  std::normal_distribution<double> source(0.0, sigma_s);
  double sum_x = 0.0, sum_x2 = 0.0, sum_d = 0.0, sum_d2 = 0.0;
  for (long long k = 0; k < n_samples; ++k) {
    const int x = quantize_to_codeword(source(gen), basis.n_bits);
    const double d = mismatch[static_cast<std::size_t>(x)];
    sum_x += x;
    sum_x2 += static_cast<double>(x) * x;
    sum_d += d;
    sum_d2 += d * d;
  }
  const double n = static_cast<double>(n_samples);
  const double signal = sum_x2 / n - (sum_x / n) * (sum_x / n);
  const double error = sum_d2 / n - (sum_d / n) * (sum_d / n);
  if (error <= 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(signal / error);
}

void write_distribution_csv(std::ostream& out, const SndrDistribution& dist) {
  out << "realization,sndr_db\n";
  for (std::size_t j = 0; j < dist.sndr_db.size(); ++j) {
    out << j << ',' << fmt_double(dist.sndr_db[j]) << '\n';
  }
}

}  // namespace dacopt
