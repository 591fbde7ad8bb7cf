#include "dacopt/basis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dacopt/errors.hpp"

namespace dacopt {

long long Basis::weight_sum() const {
  return std::accumulate(weights.begin(), weights.end(), 0ll);
}

void validate_basis(const Basis& basis) {
  if (basis.n_bits < 1) {
    throw ConfigError("basis n_bits must be >= 1, got " +
                      std::to_string(basis.n_bits));
  }
  if (basis.n_bits > 30) {
    throw ConfigError("basis n_bits must be <= 30, got " +
                      std::to_string(basis.n_bits));
  }
  if (basis.weights.empty()) {
    throw ConfigError("basis has no weights");
  }
  for (std::size_t i = 0; i < basis.weights.size(); ++i) {
    if (basis.weights[i] < 1) {
      throw ConfigError("basis weight " + std::to_string(i) +
                        " must be >= 1, got " +
                        std::to_string(basis.weights[i]));
    }
  }
}

Basis binary_basis(int n_bits) {
  if (n_bits < 1) {
    throw ConfigError("binary_basis: n_bits must be >= 1");
  }
  if (n_bits > 30) {
    throw ConfigError("binary_basis: n_bits must be <= 30");
  }
  Basis b;
  b.n_bits = n_bits;
  b.weights.reserve(static_cast<std::size_t>(n_bits));
  for (int i = 0; i < n_bits; ++i) {
    b.weights.push_back(1 << i);
  }
  return b;
}

Basis thermometer_basis(int n_bits) {
  if (n_bits < 1) {
    throw ConfigError("thermometer_basis: n_bits must be >= 1");
  }
  if (n_bits > 16) {
    throw ConfigError(
        "thermometer_basis: n_bits > 16 would need " +
        std::to_string((1ll << n_bits) - 1) + " unit cells; refusing");
  }
  Basis b;
  b.n_bits = n_bits;
  b.weights.assign(static_cast<std::size_t>((1 << n_bits) - 1), 1);
  return b;
}

Basis segmented_basis(SegmentSpec spec, int n_bits) {
  if (n_bits < 1) {
    throw ConfigError("segmented_basis: n_bits must be >= 1");
  }
  if (spec.unary_bits < 0 || spec.binary_bits < 0 ||
      spec.unary_bits + spec.binary_bits != n_bits) {
    throw ConfigError("segmented_basis: segment spec (" +
                      std::to_string(spec.unary_bits) + "T+" +
                      std::to_string(spec.binary_bits) +
                      "B) inconsistent with n_bits=" + std::to_string(n_bits));
  }
  if (spec.unary_bits > 16) {
    throw ConfigError("segmented_basis: unary_bits > 16; refusing");
  }
  Basis b;
  b.n_bits = n_bits;
  const int nb = spec.binary_bits;
  for (int i = 0; i < nb; ++i) {
    b.weights.push_back(1 << i);
  }
  const int unary_weight = 1 << nb;
  const int unary_cells = (1 << spec.unary_bits) - 1;
  for (int i = 0; i < unary_cells; ++i) {
    b.weights.push_back(unary_weight);
  }
  return b;
}

SelectionVector::SelectionVector(int length)
    : length_(length),
      words_(static_cast<std::size_t>((length + 63) / 64), 0ull) {
  if (length < 0) {
    throw InternalError("SelectionVector: negative length");
  }
}

SelectionVector SelectionVector::from_mask(std::uint32_t mask, int length) {
  if (length > 32) {
    throw InternalError("SelectionVector::from_mask: length > 32");
  }
  SelectionVector v(length);
  if (length > 0) {
    v.words_[0] = mask;
  }
  return v;
}

void SelectionVector::set(int i, bool on) {
  const std::uint64_t bit = 1ull << (i & 63);
  if (on) {
    words_[static_cast<std::size_t>(i) >> 6] |= bit;
  } else {
    words_[static_cast<std::size_t>(i) >> 6] &= ~bit;
  }
}

int SelectionVector::popcount() const {
  int n = 0;
  for (std::uint64_t w : words_) {
    n += std::popcount(w);
  }
  return n;
}

long long SelectionVector::value(const Basis& basis) const {
  if (basis.length() != length_) {
    throw InternalError("SelectionVector::value: length " +
                        std::to_string(length_) + " vs basis length " +
                        std::to_string(basis.length()));
  }
  long long sum = 0;
  for_each_set([&](int i) { sum += basis.weights[static_cast<std::size_t>(i)]; });
  return sum;
}

std::string SelectionVector::to_string() const {
  std::string s(static_cast<std::size_t>(length_), '0');
  for_each_set([&](int i) { s[static_cast<std::size_t>(i)] = '1'; });
  return s;
}

SelectionVector SelectionVector::from_string(const std::string& bits) {
  SelectionVector v(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      v.set(static_cast<int>(i), true);
    } else if (bits[i] != '0') {
      throw ConfigError("selection vector string has non-binary character '" +
                        std::string(1, bits[i]) + "'");
    }
  }
  return v;
}

void verify_table_decodes(const RepresentationTable& table, const Basis& basis) {
  if (table.basis_length != basis.length() || table.n_bits != basis.n_bits) {
    throw InternalError("mapping table dimensions do not match basis");
  }
  if (static_cast<int>(table.rows.size()) != table.codeword_count()) {
    throw InternalError("mapping table has " +
                        std::to_string(table.rows.size()) + " rows, expected " +
                        std::to_string(table.codeword_count()));
  }
  for (int x = 0; x < table.codeword_count(); ++x) {
    const long long v = table.rows[static_cast<std::size_t>(x)].value(basis);
    if (v != x) {
      throw InternalError("mapping row " + std::to_string(x) + " decodes to " +
                          std::to_string(v));
    }
  }
}

namespace {

bool is_binary_pattern(const Basis& b) {
  if (b.length() != b.n_bits) return false;
  for (int i = 0; i < b.length(); ++i) {
    if (b.weights[static_cast<std::size_t>(i)] != (1 << i)) return false;
  }
  return true;
}

bool is_thermometer_pattern(const Basis& b) {
  if (b.length() != b.full_scale()) return false;
  return std::all_of(b.weights.begin(), b.weights.end(),
                     [](int w) { return w == 1; });
}

// Returns the unary MSB count when the weights match a segmented layout,
// -1 otherwise.
int segmented_unary_bits(const Basis& b) {
  for (int m = 0; m <= b.n_bits && m <= 16; ++m) {
    const SegmentSpec spec{m, b.n_bits - m};
    if (segmented_basis(spec, b.n_bits).weights == b.weights) {
      return m;
    }
  }
  return -1;
}

}  // namespace

RepresentationTable canonical_mapping(const Basis& basis, ArchKind kind) {
  validate_basis(basis);
  RepresentationTable table;
  table.n_bits = basis.n_bits;
  table.basis_length = basis.length();
  const int count = table.codeword_count();
  table.rows.reserve(static_cast<std::size_t>(count));

  switch (kind) {
    case ArchKind::kBinary: {
      if (!is_binary_pattern(basis)) {
        throw ConfigError("canonical_mapping: basis is not binary-weighted");
      }
      for (int x = 0; x < count; ++x) {
        SelectionVector v(basis.length());
        for (int i = 0; i < basis.n_bits; ++i) {
          if ((x >> i) & 1) v.set(i, true);
        }
        table.rows.push_back(std::move(v));
      }
      break;
    }
    case ArchKind::kThermometer: {
      if (!is_thermometer_pattern(basis)) {
        throw ConfigError("canonical_mapping: basis is not thermometer-coded");
      }
      for (int x = 0; x < count; ++x) {
        SelectionVector v(basis.length());
        for (int i = 0; i < x; ++i) {
          v.set(i, true);
        }
        table.rows.push_back(std::move(v));
      }
      break;
    }
    case ArchKind::kSegmented: {
      const int m = segmented_unary_bits(basis);
      if (m < 0) {
        throw ConfigError("canonical_mapping: basis is not a segmented layout");
      }
      const int nb = basis.n_bits - m;
      for (int x = 0; x < count; ++x) {
        SelectionVector v(basis.length());
        for (int i = 0; i < nb; ++i) {
          if ((x >> i) & 1) v.set(i, true);
        }
        const int unary_on = x >> nb;
        for (int i = 0; i < unary_on; ++i) {
          v.set(nb + i, true);
        }
        table.rows.push_back(std::move(v));
      }
      break;
    }
  }
  verify_table_decodes(table, basis);
  return table;
}

MismatchRealization sample_mismatch(const Basis& basis, double sigma_delta,
                                    std::mt19937_64& gen) {
  MismatchRealization r;
  r.sigma_delta = sigma_delta;
  r.deltas.resize(basis.weights.size());
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < basis.weights.size(); ++i) {
    r.deltas[i] = unit(gen) * std::sqrt(static_cast<double>(basis.weights[i])) *
                  sigma_delta;
  }
  return r;
}

double dac_output(const SelectionVector& w, const Basis& basis,
                  const MismatchRealization& delta) {
  if (w.length() != basis.length() ||
      delta.deltas.size() != basis.weights.size()) {
    throw InternalError("dac_output: dimension mismatch");
  }
  double y = 0.0;
  w.for_each_set([&](int i) {
    y += static_cast<double>(basis.weights[static_cast<std::size_t>(i)]) +
         delta.deltas[static_cast<std::size_t>(i)];
  });
  return y;
}

Basis load_basis(std::istream& in, const std::string& source_name) {
  Basis b;
  bool have_bits = false;
  bool have_weights = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) {
      continue;  // blank or comment-only line
    }
    const std::string where = source_name + ":" + std::to_string(line_no);
    if (key == "n_bits") {
      if (!(ls >> b.n_bits)) {
        throw ConfigError(where + ": expected integer after 'n_bits'");
      }
      have_bits = true;
    } else if (key == "weights") {
      int w = 0;
      while (ls >> w) {
        b.weights.push_back(w);
      }
      if (!ls.eof()) {
        throw ConfigError(where + ": non-integer token in weights list");
      }
      have_weights = true;
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    std::string trailing;
    if (ls.clear(), ls >> trailing) {
      throw ConfigError(where + ": trailing token '" + trailing + "'");
    }
  }
  if (!have_bits) {
    throw ConfigError(source_name + ": missing 'n_bits' line");
  }
  if (!have_weights) {
    throw ConfigError(source_name + ": missing 'weights' line");
  }
  validate_basis(b);
  return b;
}

Basis load_basis_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open basis file " + path.string());
  }
  return load_basis(in, path.string());
}

void save_basis(std::ostream& out, const Basis& basis) {
  out << "n_bits " << basis.n_bits << "\n";
  out << "weights";
  for (int w : basis.weights) {
    out << ' ' << w;
  }
  out << "\n";
}

void save_basis_file(const std::filesystem::path& path, const Basis& basis) {
  std::ofstream out(path);
  if (!out) {
    throw ConfigError("cannot write basis file " + path.string());
  }
  save_basis(out, basis);
}

}  // namespace dacopt
