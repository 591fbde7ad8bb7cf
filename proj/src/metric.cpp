#include "dacopt/metric.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "dacopt/errors.hpp"
#include "dacopt/format.hpp"

namespace dacopt {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }
double std_normal_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

// int_a^b (c - s)^2 dPhi(s/sigma), with a = -inf or b = +inf allowed.
double clipped_cell_moment(double c, double a, double b, double sigma) {
  const bool lo_open = std::isinf(a);
  const bool hi_open = std::isinf(b);
  const double alpha = lo_open ? 0.0 : a / sigma;
  const double beta = hi_open ? 0.0 : b / sigma;
  const double Pa = lo_open ? 0.0 : std_normal_cdf(alpha);
  const double Pb = hi_open ? 1.0 : std_normal_cdf(beta);
  const double pa = lo_open ? 0.0 : std_normal_pdf(alpha);
  const double pb = hi_open ? 0.0 : std_normal_pdf(beta);
  const double dP = Pb - Pa;
  return c * c * dP - 2.0 * c * sigma * (pa - pb) +
         sigma * sigma * (dP + alpha * pa - beta * pb);
}

}  // namespace

double InputPmf::mean() const {
  double m = 0.0;
  for (int x = 0; x < codeword_count(); ++x) {
    m += probs[static_cast<std::size_t>(x)] * x;
  }
  return m;
}

double InputPmf::variance() const {
  const double m = mean();
  double v = 0.0;
  for (int x = 0; x < codeword_count(); ++x) {
    const double d = x - m;
    v += probs[static_cast<std::size_t>(x)] * d * d;
  }
  return v;
}

void validate_pmf(const InputPmf& pmf) {
  if (pmf.n_bits < 1) {
    throw ConfigError("pmf n_bits must be >= 1");
  }
  if (static_cast<int>(pmf.probs.size()) != pmf.codeword_count()) {
    throw ConfigError("pmf has " + std::to_string(pmf.probs.size()) +
                      " entries, expected " +
                      std::to_string(pmf.codeword_count()));
  }
  double sum = 0.0;
  for (double p : pmf.probs) {
    if (!(p >= 0.0)) {
      throw ConfigError("pmf has a negative or NaN probability");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("pmf sums to " + fmt_double(sum) + ", expected 1");
  }
}

InputPmf uniform_pmf(int n_bits) {
  if (n_bits < 1 || n_bits > 20) {
    throw ConfigError("uniform_pmf: n_bits out of supported range [1, 20]");
  }
  InputPmf pmf;
  pmf.n_bits = n_bits;
  pmf.probs.assign(static_cast<std::size_t>(1) << n_bits,
                   1.0 / static_cast<double>(1 << n_bits));
  pmf.description = "uniform";
  return pmf;
}

InputPmf gaussian_pmf(int n_bits, double sigma_s) {
  if (n_bits < 1 || n_bits > 20) {
    throw ConfigError("gaussian_pmf: n_bits out of supported range [1, 20]");
  }
  if (!(sigma_s > 0.0)) {
    throw ConfigError("gaussian_pmf: sigma_s must be > 0");
  }
  const int full = (1 << n_bits) - 1;
  const double mu = full / 2.0;
  InputPmf pmf;
  pmf.n_bits = n_bits;
  pmf.sigma_s = sigma_s;
  pmf.description = "clipped-gaussian(sigma_s=" + fmt_double(sigma_s) + ")";
  pmf.probs.resize(static_cast<std::size_t>(full) + 1);
  // Edge cells absorb the clipped tails.
  double prev = std_normal_cdf((0.5 - mu) / sigma_s);
  pmf.probs[0] = prev;
  for (int x = 1; x < full; ++x) {
    const double cur = std_normal_cdf((x + 0.5 - mu) / sigma_s);
    pmf.probs[static_cast<std::size_t>(x)] = cur - prev;
    prev = cur;
  }
  pmf.probs[static_cast<std::size_t>(full)] = 1.0 - prev;
  return pmf;
}

int quantize_to_codeword(double s, int n_bits) {
  const int full = (1 << n_bits) - 1;
  const double mu = full / 2.0;
  const double r = std::round(s + mu);
  if (r < 0.0) return 0;
  if (r > full) return full;
  return static_cast<int>(r);
}

double quantizer_error_power(int n_bits, double sigma_s) {
  const int full = (1 << n_bits) - 1;
  const double mu = full / 2.0;
  const double inf = std::numeric_limits<double>::infinity();
  // Codeword k is produced for s + mu in [k - 0.5, k + 0.5); the end cells
  // extend to the clipped tails.
  double total = clipped_cell_moment(0.0 - mu, -inf, 0.5 - mu, sigma_s);
  for (int k = 1; k < full; ++k) {
    total += clipped_cell_moment(k - mu, k - 0.5 - mu, k + 0.5 - mu, sigma_s);
  }
  total += clipped_cell_moment(full - mu, full - 0.5 - mu, inf, sigma_s);
  return total;
}

double optimal_rms(int n_bits) {
  if (n_bits < 1 || n_bits > 20) {
    throw ConfigError("optimal_rms: n_bits out of supported range [1, 20]");
  }
  const double scale = static_cast<double>(1 << n_bits);
  const double lo = scale / 16.0;
  const double hi = 0.35 * scale;
  const double step = scale / 512.0;  // 0.5 LSB at n_bits = 8
  const long long steps = static_cast<long long>(std::floor((hi - lo) / step));
  double best_sigma = lo;
  double best_sqnr = -1.0;
  for (long long i = 0; i <= steps; ++i) {
    const double sigma = lo + static_cast<double>(i) * step;
    const double sqnr = sigma * sigma / quantizer_error_power(n_bits, sigma);
    if (sqnr > best_sqnr) {
      best_sqnr = sqnr;
      best_sigma = sigma;
    }
  }
  return best_sigma;
}

void write_pmf_csv(std::ostream& out, const InputPmf& pmf) {
  out << "codeword,probability\n";
  for (int x = 0; x < pmf.codeword_count(); ++x) {
    out << x << ',' << fmt_double(pmf.probs[static_cast<std::size_t>(x)])
        << '\n';
  }
}

ActivationProfile activation_profile(const RepresentationTable& table,
                                     const InputPmf& pmf) {
  if (table.n_bits != pmf.n_bits) {
    throw InternalError("activation_profile: table and pmf width mismatch");
  }
  ActivationProfile profile;
  profile.means.assign(static_cast<std::size_t>(table.basis_length), 0.0);
  for (int x = 0; x < table.codeword_count(); ++x) {
    const double p = pmf.probs[static_cast<std::size_t>(x)];
    table.rows[static_cast<std::size_t>(x)].for_each_set(
        [&](int i) { profile.means[static_cast<std::size_t>(i)] += p; });
  }
  return profile;
}

double raw_mismatch_metric(const ActivationProfile& profile, const Basis& basis) {
  if (static_cast<int>(profile.means.size()) != basis.length()) {
    throw InternalError("raw_mismatch_metric: dimension mismatch");
  }
  double raw = 0.0;
  for (std::size_t i = 0; i < profile.means.size(); ++i) {
    const double p = profile.means[i];
    raw += p * (1.0 - p) * static_cast<double>(basis.weights[i]);
  }
  return raw;
}

double thermometer_reference_raw(const InputPmf& pmf) {
  const Basis thermo = thermometer_basis(pmf.n_bits);
  const RepresentationTable table =
      canonical_mapping(thermo, ArchKind::kThermometer);
  return raw_mismatch_metric(activation_profile(table, pmf), thermo);
}

MetricValue mismatch_mse(const RepresentationTable& table, const Basis& basis,
                         const InputPmf& pmf, double sigma_delta) {
  validate_pmf(pmf);
  if (table.basis_length != basis.length() || table.n_bits != basis.n_bits) {
    throw InternalError("mismatch_mse: table does not match basis");
  }
  MetricValue value;
  value.sigma_delta = sigma_delta;
  value.raw = raw_mismatch_metric(activation_profile(table, pmf), basis);
  value.normalized = value.raw / thermometer_reference_raw(pmf);
  return value;
}

double receiver_error(const SelectionVector& w, const ActivationProfile& profile,
                      const MismatchRealization& delta) {
  if (w.length() != static_cast<int>(profile.means.size()) ||
      delta.deltas.size() != profile.means.size()) {
    throw InternalError("receiver_error: dimension mismatch");
  }
  double selected = 0.0;
  w.for_each_set(
      [&](int i) { selected += delta.deltas[static_cast<std::size_t>(i)]; });
  double mean_term = 0.0;
  for (std::size_t i = 0; i < profile.means.size(); ++i) {
    mean_term += profile.means[i] * delta.deltas[i];
  }
  return selected - mean_term;
}

}  // namespace dacopt
