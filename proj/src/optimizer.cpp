#include "dacopt/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include "dacopt/errors.hpp"
#include "dacopt/rng.hpp"

namespace dacopt {

namespace {

double switch_variance(double p) { return p * (1.0 - p); }

// Mask-based descent state; SelectionVector rows are materialized only at
// the end.
struct DescentState {
  std::vector<std::uint32_t> rows;
  std::vector<double> means;
  double objective = 0.0;
};

double full_objective(const DescentState& st, const std::vector<double>& bw) {
  double obj = 0.0;
  for (std::size_t i = 0; i < bw.size(); ++i) {
    obj += switch_variance(st.means[i]) * bw[i];
  }
  return obj;
}

void recompute_means(const RepresentationIndex& index, const InputPmf& pmf,
                     DescentState& st, int length) {
  st.means.assign(static_cast<std::size_t>(length), 0.0);
  for (int x = 0; x < index.codeword_count(); ++x) {
    const double p = pmf.probs[static_cast<std::size_t>(x)];
    std::uint32_t mask = st.rows[static_cast<std::size_t>(x)];
    while (mask) {
      st.means[static_cast<std::size_t>(std::countr_zero(mask))] += p;
      mask &= mask - 1;
    }
  }
}

}  // namespace

DescentResult descend_representations(const RepresentationIndex& index,
                                      const Basis& basis, const InputPmf& pmf,
                                      const DescentConfig& cfg,
                                      const RepresentationTable* warm_start) {
  if (cfg.max_sweeps < 1) {
    throw ConfigError("descend_representations: max_sweeps must be >= 1");
  }
  if (index.basis_length() != basis.length() ||
      index.n_bits() != basis.n_bits || pmf.n_bits != basis.n_bits) {
    throw InternalError("descend_representations: dimension mismatch");
  }
  if (!index.complete()) {
    throw InfeasibleError(
        "descend_representations: basis is incomplete; some codeword has no "
        "representation");
  }

  const int length = basis.length();
  const int count = index.codeword_count();
  std::vector<double> bw(basis.weights.begin(), basis.weights.end());

  DescentState st;
  st.rows.resize(static_cast<std::size_t>(count));
  if (warm_start != nullptr) {
    if (warm_start->n_bits != basis.n_bits ||
        warm_start->basis_length != length) {
      throw InternalError("descend_representations: warm start mismatch");
    }
    for (int x = 0; x < count; ++x) {
      std::uint32_t mask = 0;
      warm_start->rows[static_cast<std::size_t>(x)].for_each_set(
          [&](int i) { mask |= 1u << i; });
      st.rows[static_cast<std::size_t>(x)] = mask;
    }
  } else {
    std::mt19937_64 gen(cfg.seed);
    for (int x = 0; x < count; ++x) {
      const auto& bucket = index.masks(x);
      std::uniform_int_distribution<std::size_t> pick(0, bucket.size() - 1);
      st.rows[static_cast<std::size_t>(x)] = bucket[pick(gen)];
    }
  }
  recompute_means(index, pmf, st, length);
  st.objective = full_objective(st, bw);

  OptimizationTrace trace;
  trace.initial_objective = st.objective;

  std::vector<double> base(static_cast<std::size_t>(length));
  std::vector<double> gain(static_cast<std::size_t>(length));

  for (int sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    long long moves = 0;
    for (int y = 0; y < count; ++y) {
      const double py = pmf.probs[static_cast<std::size_t>(y)];
      if (py == 0.0) continue;  // every member scores identically
      const std::uint32_t incumbent = st.rows[static_cast<std::size_t>(y)];

      // means with row y removed; gain[i] = objective delta of turning
      // switch i on for this codeword.
      for (int i = 0; i < length; ++i) {
        base[static_cast<std::size_t>(i)] = st.means[static_cast<std::size_t>(i)];
      }
      {
        std::uint32_t m = incumbent;
        while (m) {
          base[static_cast<std::size_t>(std::countr_zero(m))] -= py;
          m &= m - 1;
        }
      }
      for (int i = 0; i < length; ++i) {
        const double b = base[static_cast<std::size_t>(i)];
        gain[static_cast<std::size_t>(i)] =
            (switch_variance(b + py) - switch_variance(b)) *
            bw[static_cast<std::size_t>(i)];
      }

      const auto score = [&](std::uint32_t mask) {
        double s = 0.0;
        while (mask) {
          s += gain[static_cast<std::size_t>(std::countr_zero(mask))];
          mask &= mask - 1;
        }
        return s;
      };

      const double incumbent_score = score(incumbent);
      double best_score = std::numeric_limits<double>::infinity();
      std::uint32_t best_mask = incumbent;
      for (std::uint32_t cand : index.masks(y)) {
        const double s = score(cand);
        if (s < best_score) {  // ascending masks: first strict win = lowest
          best_score = s;
          best_mask = cand;
        }
      }
      if (best_score < incumbent_score) {
        st.rows[static_cast<std::size_t>(y)] = best_mask;
        for (int i = 0; i < length; ++i) {
          st.means[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)];
        }
        std::uint32_t m = best_mask;
        while (m) {
          st.means[static_cast<std::size_t>(std::countr_zero(m))] += py;
          m &= m - 1;
        }
        st.objective += best_score - incumbent_score;
        ++moves;
      }
    }
    trace.objective.push_back(st.objective);
    trace.accepted.push_back(moves);
    if (moves == 0) {
      trace.converged = true;
      break;
    }
  }

  DescentResult result;
  result.trace = std::move(trace);
  result.trace.final_means = st.means;
  result.table.n_bits = basis.n_bits;
  result.table.basis_length = length;
  result.table.rows.reserve(static_cast<std::size_t>(count));
  for (int x = 0; x < count; ++x) {
    result.table.rows.push_back(SelectionVector::from_mask(
        st.rows[static_cast<std::size_t>(x)], length));
  }
  verify_table_decodes(result.table, basis);
  return result;
}

namespace {

struct ChainResult {
  double raw = std::numeric_limits<double>::infinity();
  Basis basis;
  RepresentationTable table;
  OptimizationTrace trace;
};

class AnnealChain {
 public:
  AnnealChain(int n_bits, int length, const InputPmf& pmf,
              const AnnealConfig& cfg, int chain_index)
      : n_bits_(n_bits),
        length_(length),
        pmf_(pmf),
        cfg_(cfg),
        gen_(derive_seed(cfg.seed, RngStream::kSaChain,
                         static_cast<std::uint64_t>(chain_index))) {}

  ChainResult run() {
    Basis basis = random_complete_basis();
    double energy = 0.0;
    RepresentationTable table = evaluate(basis, &energy);

    ChainResult best;
    best.raw = energy;
    best.basis = basis;
    best.table = table;

    const double t0 = cfg_.initial_temperature > 0.0
                          ? cfg_.initial_temperature
                          : calibrate_temperature(basis, energy);
    const double floor = t0 * cfg_.min_temperature_ratio;
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (double t = t0; t > floor; t *= cfg_.cooling_factor) {
      long long accepted = 0;
      long long rejected = 0;
      for (int s = 0; s < cfg_.steps_per_temperature; ++s) {
        Basis cand = propose(basis);
        if (cand.weights == basis.weights || !is_complete(cand)) {
          ++rejected;
          continue;
        }
        double cand_energy = 0.0;
        RepresentationTable cand_table = evaluate(cand, &cand_energy);
        const double delta = cand_energy - energy;
        if (delta <= 0.0 || unit(gen_) < std::exp(-delta / t)) {
          if (!is_complete(cand)) {
            throw InternalError("anneal_basis: accepted incomplete basis");
          }
          basis = std::move(cand);
          energy = cand_energy;
          table = std::move(cand_table);
          ++accepted;
          if (energy < best.raw) {
            best.raw = energy;
            best.basis = basis;
            best.table = table;
          }
        } else {
          ++rejected;
        }
      }
      best.trace.temperature.push_back(t);
      best.trace.objective.push_back(best.raw);
      best.trace.accepted.push_back(accepted);
      best.trace.rejected.push_back(rejected);
    }

    polish(best);
    return best;
  }

 private:
  RepresentationTable evaluate(const Basis& basis, double* raw_out) {
    enumerate_into(basis, index_, sum_scratch_);
    DescentConfig inner = cfg_.inner_descent;
    inner.seed = gen_();
    DescentResult res = descend_representations(index_, basis, pmf_, inner);
    *raw_out =
        raw_mismatch_metric(activation_profile(res.table, pmf_), basis);
    return std::move(res.table);
  }

  Basis propose(const Basis& basis) {
    std::uniform_int_distribution<int> pick(0, length_ - 1);
    std::geometric_distribution<int> extra(0.5);
    std::bernoulli_distribution up(0.5);
    Basis cand = basis;
    const int idx = pick(gen_);
    const int step = 1 + extra(gen_);
    const int full = basis.full_scale();
    int& w = cand.weights[static_cast<std::size_t>(idx)];
    w = std::clamp(w + (up(gen_) ? step : -step), 1, full);
    std::sort(cand.weights.begin(), cand.weights.end());
    return cand;
  }

  Basis random_complete_basis() {
    Basis b = binary_basis(n_bits_);
    std::uniform_int_distribution<int> any(1, b.full_scale());
    for (int i = n_bits_; i < length_; ++i) {
      b.weights.push_back(any(gen_));  // supersets of a complete basis stay complete
    }
    std::sort(b.weights.begin(), b.weights.end());
    for (int k = 0; k < 2 * length_; ++k) {
      Basis cand = propose(b);
      if (is_complete(cand)) {
        b = std::move(cand);
      }
    }
    return b;
  }

  // T0 such that a typical uphill move is accepted with probability ~0.8.
  double calibrate_temperature(const Basis& basis, double energy) {
    constexpr int kProposals = 30;
    double uphill_sum = 0.0;
    int uphill_count = 0;
    for (int k = 0; k < kProposals; ++k) {
      Basis cand = propose(basis);
      if (cand.weights == basis.weights || !is_complete(cand)) continue;
      double cand_energy = 0.0;
      evaluate(cand, &cand_energy);
      if (cand_energy > energy) {
        uphill_sum += cand_energy - energy;
        ++uphill_count;
      }
    }
    if (uphill_count == 0) {
      return std::max(0.05 * std::abs(energy), 1e-6);
    }
    return (uphill_sum / uphill_count) / -std::log(0.8);
  }

  void polish(ChainResult& best) {
    enumerate_into(best.basis, index_, sum_scratch_);
    DescentConfig full{cfg_.polish_sweeps, 0};
    DescentResult res =
        descend_representations(index_, best.basis, pmf_, full, &best.table);
    const double raw =
        raw_mismatch_metric(activation_profile(res.table, pmf_), best.basis);
    if (raw <= best.raw) {
      best.raw = raw;
      best.table = std::move(res.table);
    }
  }

  int n_bits_;
  int length_;
  const InputPmf& pmf_;
  const AnnealConfig& cfg_;
  std::mt19937_64 gen_;
  RepresentationIndex index_;
  std::vector<std::int32_t> sum_scratch_;
};

}  // namespace

AnnealResult anneal_basis(int n_bits, int length, const InputPmf& pmf,
                          const AnnealConfig& cfg) {
  if (n_bits < 1) {
    throw ConfigError("anneal_basis: n_bits must be >= 1");
  }
  if (length > kEnumerationMaxLength) {
    throw ConfigError("anneal_basis: length " + std::to_string(length) +
                      " exceeds the enumeration guard of " +
                      std::to_string(kEnumerationMaxLength));
  }
  if (length < n_bits) {
    throw InfeasibleError("anneal_basis: length " + std::to_string(length) +
                          " < n_bits " + std::to_string(n_bits) +
                          "; no complete basis exists");
  }
  if (cfg.restarts < 1 || cfg.steps_per_temperature < 1 ||
      !(cfg.cooling_factor > 0.0 && cfg.cooling_factor < 1.0) ||
      !(cfg.min_temperature_ratio > 0.0 && cfg.min_temperature_ratio < 1.0)) {
    throw ConfigError("anneal_basis: invalid annealing configuration");
  }
  validate_pmf(pmf);
  if (pmf.n_bits != n_bits) {
    throw ConfigError("anneal_basis: pmf width does not match n_bits");
  }

  std::vector<ChainResult> results(static_cast<std::size_t>(cfg.restarts));
  int thread_count = cfg.threads > 0
                         ? cfg.threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  thread_count = std::clamp(thread_count, 1, cfg.restarts);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int chain = next.fetch_add(1);
      if (chain >= cfg.restarts) return;
      AnnealChain runner(n_bits, length, pmf, cfg, chain);
      results[static_cast<std::size_t>(chain)] = runner.run();
    }
  };
  if (thread_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(thread_count));
    for (int i = 0; i < thread_count; ++i) {
      pool.emplace_back(worker);
    }
    for (auto& th : pool) {
      th.join();
    }
  }

  // (energy, chain index) lexicographic winner for determinism.
  int win = 0;
  for (int c = 1; c < cfg.restarts; ++c) {
    if (results[static_cast<std::size_t>(c)].raw <
        results[static_cast<std::size_t>(win)].raw) {
      win = c;
    }
  }
  ChainResult& winner = results[static_cast<std::size_t>(win)];
  if (!is_complete(winner.basis)) {
    throw InternalError("anneal_basis: winning basis is incomplete");
  }
  verify_table_decodes(winner.table, winner.basis);

  AnnealResult result;
  result.basis = std::move(winner.basis);
  result.table = std::move(winner.table);
  result.raw = winner.raw;
  result.trace = std::move(winner.trace);
  result.trace.winning_restart = win;
  return result;
}

ArchReport evaluate_architecture(const std::string& name, const Basis& basis,
                                 const RepresentationTable& table,
                                 const InputPmf& pmf, double sigma_delta) {
  const MetricValue metric = mismatch_mse(table, basis, pmf, sigma_delta);
  ArchReport report;
  report.name = name;
  report.switches = basis.length();
  report.raw = metric.raw;
  report.normalized = metric.normalized;
  report.sigma_delta = sigma_delta;
  report.mean_sndr_db = std::numeric_limits<double>::quiet_NaN();
  report.linear_mean_sndr_db = std::numeric_limits<double>::quiet_NaN();
  report.yield_sndr_db = std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace dacopt
