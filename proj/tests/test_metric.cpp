#include "dacopt/metric.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dacopt/errors.hpp"
#include "dacopt/repset.hpp"
#include "dacopt/rng.hpp"
#include "test_support.hpp"

using namespace dacopt;

namespace {

// ---------------------------------------------------------------------------
// Independent SQNR oracle: per-cell Simpson quadrature of (q(s) - s)^2 under
// the Gaussian density. The implementation integrates in closed form; any
// disagreement here flags a quantizer-model bug.
// ---------------------------------------------------------------------------

double gauss_pdf(double s, double sigma) {
  return std::exp(-0.5 * (s / sigma) * (s / sigma)) /
         (sigma * std::sqrt(2.0 * M_PI));
}

double simpson(double a, double b, int n, double c, double sigma) {
  // integrand (c - s)^2 * pdf(s); n even
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double s = a + k * h;
    const double f = (c - s) * (c - s) * gauss_pdf(s, sigma);
    acc += f * (k == 0 || k == n ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0));
  }
  return acc * h / 3.0;
}

double oracle_error_power(int n_bits, double sigma) {
  const int full = (1 << n_bits) - 1;
  const double mu = full / 2.0;
  double total = simpson(-10.0 * sigma, 0.5 - mu, 512, 0.0 - mu, sigma);
  for (int k = 1; k < full; ++k) {
    total += simpson(k - 0.5 - mu, k + 0.5 - mu, 16, k - mu, sigma);
  }
  total += simpson(full - 0.5 - mu, 10.0 * sigma, 512, full - mu, sigma);
  return total;
}

void test_optimal_rms() {
  // oracle sweep over the same grid as the implementation
  const double lo = 256.0 / 16.0;
  const double hi = 0.35 * 256.0;
  const double step = 0.5;
  double best_sigma = lo, best_sqnr = -1.0;
  for (long long i = 0; lo + i * step <= hi; ++i) {
    const double sigma = lo + i * step;
    const double sqnr = sigma * sigma / oracle_error_power(8, sigma);
    if (sqnr > best_sqnr) {
      best_sqnr = sqnr;
      best_sigma = sigma;
    }
  }
  const double impl = optimal_rms(8);
  REQUIRE(impl == best_sigma);
  REQUIRE(impl == 32.5);  // frozen grid optimum for the 8-bit quantizer
  REQUIRE(impl >= 30.0 && impl <= 70.0);

  // closed-form error power agrees with quadrature across the sweep range
  for (double sigma : {20.0, 32.5, 50.0, 80.0}) {
    const double exact = quantizer_error_power(8, sigma);
    const double quad = oracle_error_power(8, sigma);
    REQUIRE_NEAR(exact / quad, 1.0, 1e-6);
  }

  // argmax property: no swept neighbor beats the optimum
  const double at = impl * impl / quantizer_error_power(8, impl);
  for (double nb : {impl - step, impl + step}) {
    REQUIRE(at >= nb * nb / quantizer_error_power(8, nb));
  }

  // degenerate width still yields a finite optimum
  const double s1 = optimal_rms(1);
  REQUIRE(s1 > 0.0);
  REQUIRE(std::isfinite(s1 * s1 / quantizer_error_power(1, s1)));
}

void test_gaussian_pmf() {
  for (double sigma : {5.0, 32.5, 200.0}) {
    const InputPmf pmf = gaussian_pmf(8, sigma);
    validate_pmf(pmf);
    double sum = 0.0;
    for (double p : pmf.probs) sum += p;
    REQUIRE_NEAR(sum, 1.0, 1e-12);
    REQUIRE_NEAR(pmf.probs[127], pmf.probs[128], 1e-15);  // symmetric about 127.5
    REQUIRE_NEAR(pmf.probs[0], pmf.probs[255], 1e-15);
  }
  // very large sigma: nearly uniform interior, heavier clipped edges
  const InputPmf wide = gaussian_pmf(8, 1e6);
  REQUIRE_NEAR(wide.probs[100] / wide.probs[128], 1.0, 1e-6);
  REQUIRE(wide.probs[0] > 100.0 * wide.probs[128]);
  REQUIRE_THROWS_AS(gaussian_pmf(8, 0.0), ConfigError);
}

InputPmf delta_pmf(int n_bits, int c) {
  InputPmf pmf;
  pmf.n_bits = n_bits;
  pmf.probs.assign(1u << n_bits, 0.0);
  pmf.probs[c] = 1.0;
  pmf.description = "custom";
  return pmf;
}

void test_activation_profile() {
  const Basis b8 = binary_basis(8);
  const RepresentationTable tb = canonical_mapping(b8, ArchKind::kBinary);
  const ActivationProfile uniform_profile =
      activation_profile(tb, uniform_pmf(8));
  for (double m : uniform_profile.means) {
    REQUIRE(m == 0.5);
  }

  const ActivationProfile spike = activation_profile(tb, delta_pmf(8, 37));
  for (int i = 0; i < 8; ++i) {
    REQUIRE(spike.means[i] == ((37 >> i) & 1 ? 1.0 : 0.0));
  }

  const Basis t8 = thermometer_basis(8);
  const RepresentationTable tt = canonical_mapping(t8, ArchKind::kThermometer);
  const ActivationProfile thermo = activation_profile(tt, uniform_pmf(8));
  for (int i = 0; i < 255; ++i) {
    REQUIRE_MSG(thermo.means[i] == (255.0 - i) / 256.0, "cell " << i);
  }
}

void test_mismatch_mse() {
  const Basis b8 = binary_basis(8);
  const RepresentationTable tb = canonical_mapping(b8, ArchKind::kBinary);

  const MetricValue uniform_metric = mismatch_mse(tb, b8, uniform_pmf(8), 0.05);
  REQUIRE(uniform_metric.raw == 63.75);
  REQUIRE_NEAR(uniform_metric.mse(), 0.0025 * 63.75, 1e-15);

  const MetricValue spike_metric = mismatch_mse(tb, b8, delta_pmf(8, 200), 0.05);
  REQUIRE(spike_metric.raw == 0.0);

  // thermometer normalizes to exactly 1
  const Basis t8 = thermometer_basis(8);
  const RepresentationTable tt = canonical_mapping(t8, ArchKind::kThermometer);
  const InputPmf gauss = gaussian_pmf(8, optimal_rms(8));
  REQUIRE(mismatch_mse(tt, t8, gauss, 0.05).normalized == 1.0);

  // raw is sigma_delta-free; mse scales exactly with sigma_delta^2
  const MetricValue a = mismatch_mse(tb, b8, gauss, 0.01);
  const MetricValue b = mismatch_mse(tb, b8, gauss, 0.02);
  REQUIRE(a.raw == b.raw);
  REQUIRE(b.mse() == 4.0 * a.mse());

  // independent tail-sum route for the thermometer reference raw
  double tail = 0.0;
  double expect = 0.0;
  for (int i = 254; i >= 0; --i) {
    tail += gauss.probs[i + 1];  // P(x > i)
    expect += tail * (1.0 - tail);
  }
  REQUIRE_NEAR(thermometer_reference_raw(gauss), expect, 1e-9);

  // p(1-p) <= 1/4 bound for random mappings and pmfs
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 40; ++trial) {
    Basis b4 = binary_basis(4);
    b4.weights.push_back(1 + static_cast<int>(gen() % 15));
    const auto index = enumerate_all(b4);
    RepresentationTable table;
    table.n_bits = 4;
    table.basis_length = b4.length();
    for (int x = 0; x < 16; ++x) {
      const auto& masks = index.masks(x);
      table.rows.push_back(SelectionVector::from_mask(
          masks[gen() % masks.size()], b4.length()));
    }
    InputPmf pmf;
    pmf.n_bits = 4;
    pmf.description = "custom";
    double total = 0.0;
    for (int x = 0; x < 16; ++x) {
      pmf.probs.push_back(static_cast<double>(gen() % 1000 + 1));
      total += pmf.probs.back();
    }
    for (double& p : pmf.probs) p /= total;
    const double raw =
        raw_mismatch_metric(activation_profile(table, pmf), b4);
    REQUIRE(raw <= 0.25 * static_cast<double>(b4.weight_sum()));
  }
}

void test_receiver_error() {
  const Basis b = binary_basis(4);
  const RepresentationTable table = canonical_mapping(b, ArchKind::kBinary);
  const InputPmf gauss = gaussian_pmf(4, optimal_rms(4));
  const ActivationProfile profile = activation_profile(table, gauss);

  MismatchRealization zero{std::vector<double>(4, 0.0), 0.0};
  REQUIRE(receiver_error(table.rows[9], profile, zero) == 0.0);

  // deterministic input: the selected row carries no receiver error
  const ActivationProfile spike = activation_profile(table, delta_pmf(4, 9));
  auto gen = make_generator(5, RngStream::kRealization, 0);
  const MismatchRealization d = sample_mismatch(b, 0.05, gen);
  REQUIRE(receiver_error(table.rows[9], spike, d) == 0.0);

  // weighted mean removal: sum_x P(x) e_m(x) = 0 for any draw
  for (int j = 0; j < 20; ++j) {
    auto g = make_generator(17, RngStream::kRealization, j);
    const MismatchRealization r = sample_mismatch(b, 0.05, g);
    double mean_error = 0.0;
    for (int x = 0; x < 16; ++x) {
      mean_error += gauss.probs[x] * receiver_error(table.rows[x], profile, r);
    }
    REQUIRE_NEAR(mean_error, 0.0, 1e-12);
  }
}

void test_monte_carlo_oracle_equivalence() {
  // E_delta[sum_x P(x) e_m(x)^2] converges to sigma_delta^2 * raw
  const Basis b = binary_basis(4);
  const RepresentationTable table = canonical_mapping(b, ArchKind::kBinary);
  const InputPmf gauss = gaussian_pmf(4, optimal_rms(4));
  const ActivationProfile profile = activation_profile(table, gauss);
  const double raw = raw_mismatch_metric(profile, b);
  const double sigma_delta = 0.05;

  double mean_power = 0.0;
  const int draws = 100000;
  for (int j = 0; j < draws; ++j) {
    auto gen = make_generator(99, RngStream::kRealization, j);
    const MismatchRealization r = sample_mismatch(b, sigma_delta, gen);
    double power = 0.0;
    for (int x = 0; x < 16; ++x) {
      const double e = receiver_error(table.rows[x], profile, r);
      power += gauss.probs[x] * e * e;
    }
    mean_power += power;
  }
  mean_power /= draws;
  REQUIRE_NEAR(mean_power / (sigma_delta * sigma_delta * raw), 1.0, 0.02);
}

void test_pmf_csv() {
  std::ostringstream out;
  write_pmf_csv(out, uniform_pmf(2));
  REQUIRE(out.str() ==
          "codeword,probability\n0,0.25\n1,0.25\n2,0.25\n3,0.25\n");
}

}  // namespace

int main() {
  test_optimal_rms();
  test_gaussian_pmf();
  test_activation_profile();
  test_mismatch_mse();
  test_receiver_error();
  test_monte_carlo_oracle_equivalence();
  test_pmf_csv();
  return testsupport::done("test_metric");
}
