#pragma once

#include <bit>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

namespace dacopt {

// Nominal current-source weights in unit-current multiples. Index order is
// the contract: bit i of every selection vector and mapping row refers to
// weights[i]. Weights are stored in the order given (constructors and basis
// files define it; the annealer reports ascending order).
struct Basis {
  std::vector<int> weights;
  int n_bits = 0;

  int length() const { return static_cast<int>(weights.size()); }
  int full_scale() const { return (1 << n_bits) - 1; }
  long long weight_sum() const;

  bool operator==(const Basis&) const = default;
};

// Throws ConfigError unless n_bits >= 1 and every weight >= 1.
void validate_basis(const Basis& basis);

Basis binary_basis(int n_bits);

// Refuses n_bits > 16 (2^16 - 1 unit cells is the table-size guard).
Basis thermometer_basis(int n_bits);

struct SegmentSpec {
  int unary_bits = 0;   // MSBs, thermometer-coded
  int binary_bits = 0;  // LSBs, binary-weighted

  int switch_count() const { return ((1 << unary_bits) - 1) + binary_bits; }
};

Basis segmented_basis(SegmentSpec spec, int n_bits);

// One switch state per basis position; bit i pairs with weights[i].
class SelectionVector {
 public:
  SelectionVector() = default;
  explicit SelectionVector(int length);
  static SelectionVector from_mask(std::uint32_t mask, int length);

  int length() const { return length_; }
  bool test(int i) const {
    return (words_[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1u;
  }
  void set(int i, bool on);
  int popcount() const;

  // Sum of selected weights: sum_i bits_i * weights_i.
  long long value(const Basis& basis) const;

  // Index 0 leftmost; the order used by mapping CSV and LUT artifacts.
  std::string to_string() const;
  static SelectionVector from_string(const std::string& bits);

  template <typename Fn>
  void for_each_set(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t word = words_[w];
      while (word) {
        int bit = std::countr_zero(word);
        fn(static_cast<int>(w * 64) + bit);
        word &= word - 1;
      }
    }
  }

  bool operator==(const SelectionVector&) const = default;

 private:
  int length_ = 0;
  std::vector<std::uint64_t> words_;
};

// One static selection vector per codeword; row x must decode to x.
struct RepresentationTable {
  int n_bits = 0;
  int basis_length = 0;
  std::vector<SelectionVector> rows;

  int codeword_count() const { return 1 << n_bits; }
  bool operator==(const RepresentationTable&) const = default;
};

// Throws InternalError naming the first row whose value differs from its
// codeword.
void verify_table_decodes(const RepresentationTable& table, const Basis& basis);

enum class ArchKind { kBinary, kThermometer, kSegmented };

// Canonical static mappings: binary = input bits drive switches directly;
// thermometer = first x cells on, ascending index; segmented = binary LSB
// part plus first (x >> binary_bits) unary cells. Throws ConfigError when the
// basis was not produced by the matching constructor.
RepresentationTable canonical_mapping(const Basis& basis, ArchKind kind);

// One static draw of per-switch current deviations, unit-current units.
struct MismatchRealization {
  std::vector<double> deltas;
  double sigma_delta = 0.0;
};

// Independent zero-mean Gaussians, per-element std sqrt(weights[i]) * sigma_delta.
MismatchRealization sample_mismatch(const Basis& basis, double sigma_delta,
                                    std::mt19937_64& gen);

// sum_i w_i * (B_i + delta_i)
double dac_output(const SelectionVector& w, const Basis& basis,
                  const MismatchRealization& delta);

// Plain-text basis file: `n_bits <N>` and `weights <w0> <w1> ...` lines,
// '#' comments. Round-trips losslessly.
Basis load_basis(std::istream& in, const std::string& source_name);
Basis load_basis_file(const std::filesystem::path& path);
void save_basis(std::ostream& out, const Basis& basis);
void save_basis_file(const std::filesystem::path& path, const Basis& basis);

}  // namespace dacopt
