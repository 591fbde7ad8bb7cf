#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dacopt/basis.hpp"

namespace dacopt {

// Probability mass over the 2^N codewords.
struct InputPmf {
  int n_bits = 0;
  std::vector<double> probs;
  std::string description;  // uniform | clipped-gaussian(...) | custom
  double sigma_s = 0.0;     // source RMS in LSB for gaussian pmfs, else 0

  int codeword_count() const { return 1 << n_bits; }
  double mean() const;
  double variance() const;
};

// Throws ConfigError unless probs are non-negative, length 2^N, and sum to 1
// within 1e-12.
void validate_pmf(const InputPmf& pmf);

InputPmf uniform_pmf(int n_bits);

// Mid-tread quantization of N(mu, sigma_s^2) with mu = (2^N-1)/2; tail mass
// below 0 folds into P(0), above full scale into P(2^N-1).
InputPmf gaussian_pmf(int n_bits, double sigma_s);

// clamp(round(s + mu), 0, 2^N-1) for a zero-mean sample s.
int quantize_to_codeword(double s, int n_bits);

// Input RMS (in LSB) that maximizes SQNR = sigma_s^2 / E[(q(s)-s)^2] for the
// clipped mid-tread quantizer above. Deterministic: the expectation uses
// closed-form Gaussian cell moments and the sweep grid is fixed per n_bits
// (0.5 LSB at n_bits = 8).
double optimal_rms(int n_bits);

// E[(q(s)-s)^2] for s ~ N(0, sigma_s^2); exposed for the SQNR sweep tests.
double quantizer_error_power(int n_bits, double sigma_s);

// codeword,probability rows.
void write_pmf_csv(std::ostream& out, const InputPmf& pmf);

// Per-switch activation probabilities: means[i] = sum_x P(x) W_i(x).
struct ActivationProfile {
  std::vector<double> means;
};

ActivationProfile activation_profile(const RepresentationTable& table,
                                     const InputPmf& pmf);

// sum_i means_i (1 - means_i) B_i, the sigma_delta-free mismatch MSE factor.
double raw_mismatch_metric(const ActivationProfile& profile, const Basis& basis);

// Denominator used to normalize metrics: the raw metric of the canonical
// thermometer architecture at the same width, under the same pmf.
double thermometer_reference_raw(const InputPmf& pmf);

struct MetricValue {
  double raw = 0.0;         // units of sigma_delta^2
  double normalized = 0.0;  // raw / thermometer raw, same pmf
  double sigma_delta = 0.0;

  // Full expectation of the squared receiver error.
  double mse() const { return sigma_delta * sigma_delta * raw; }
};

MetricValue mismatch_mse(const RepresentationTable& table, const Basis& basis,
                         const InputPmf& pmf, double sigma_delta);

// Receiver-referred error of one codeword for one mismatch draw:
// sum_i (w_i - means_i) delta_i.
double receiver_error(const SelectionVector& w, const ActivationProfile& profile,
                      const MismatchRealization& delta);

}  // namespace dacopt
