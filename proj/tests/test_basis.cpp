#include "dacopt/basis.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dacopt/errors.hpp"
#include "dacopt/repset.hpp"
#include "dacopt/rng.hpp"
#include "test_support.hpp"

using namespace dacopt;

namespace {

void test_constructors() {
  REQUIRE(binary_basis(8).weights ==
          (std::vector<int>{1, 2, 4, 8, 16, 32, 64, 128}));
  REQUIRE(binary_basis(1).weights == (std::vector<int>{1}));
  REQUIRE(binary_basis(3).weights == (std::vector<int>{1, 2, 4}));
  REQUIRE(is_complete(binary_basis(3)));

  const Basis t3 = thermometer_basis(3);
  REQUIRE(t3.weights == (std::vector<int>(7, 1)));
  REQUIRE(thermometer_basis(8).length() == 255);
  REQUIRE(thermometer_basis(1).weights == (std::vector<int>{1}));
  REQUIRE_THROWS_AS(thermometer_basis(17), ConfigError);

  const Basis s44 = segmented_basis(SegmentSpec{4, 4}, 8);
  std::vector<int> expect44 = {1, 2, 4, 8};
  expect44.insert(expect44.end(), 15, 16);
  REQUIRE(s44.weights == expect44);
  REQUIRE(s44.length() == 19);
  REQUIRE((SegmentSpec{4, 4}.switch_count() == 19));

  const Basis s26 = segmented_basis(SegmentSpec{2, 6}, 8);
  std::vector<int> expect26 = {1, 2, 4, 8, 16, 32, 64, 64, 64};
  REQUIRE(s26.weights == expect26);
  REQUIRE(s26.length() == 9);

  REQUIRE(segmented_basis(SegmentSpec{0, 8}, 8) == binary_basis(8));
  REQUIRE_THROWS_AS(segmented_basis(SegmentSpec{3, 4}, 8), ConfigError);

  // every constructor output passes the completeness check
  for (int n = 1; n <= 8; ++n) {
    REQUIRE(is_complete(binary_basis(n)));
  }
  REQUIRE(is_complete(thermometer_basis(6)));
  REQUIRE(is_complete(segmented_basis(SegmentSpec{4, 4}, 8)));
}

void test_canonical_mappings() {
  const Basis b3 = binary_basis(3);
  const RepresentationTable tb = canonical_mapping(b3, ArchKind::kBinary);
  REQUIRE(tb.rows[5].to_string() == "101");

  const Basis t3 = thermometer_basis(3);
  const RepresentationTable tt = canonical_mapping(t3, ArchKind::kThermometer);
  REQUIRE(tt.rows[3].to_string() == "1110000");

  const Basis s44 = segmented_basis(SegmentSpec{4, 4}, 8);
  const RepresentationTable ts = canonical_mapping(s44, ArchKind::kSegmented);
  // 37 = 5 + 2 * 16: binary part 1010 (weights 1 and 4), two unary cells on
  REQUIRE(ts.rows[37].to_string() == "1010110000000000000");
  REQUIRE(ts.rows[37].value(s44) == 37);

  // every row decodes for all three kinds at n_bits = 8
  for (const auto& [basis, kind] :
       {std::pair{binary_basis(8), ArchKind::kBinary},
        std::pair{thermometer_basis(8), ArchKind::kThermometer},
        std::pair{segmented_basis(SegmentSpec{4, 4}, 8),
                  ArchKind::kSegmented}}) {
    const RepresentationTable table = canonical_mapping(basis, kind);
    for (int x = 0; x <= 255; ++x) {
      REQUIRE_MSG(table.rows[x].value(basis) == x, "codeword " << x);
    }
  }

  // thermometer monotonicity: each increment turns on exactly one new cell
  const Basis t8 = thermometer_basis(8);
  const RepresentationTable tt8 = canonical_mapping(t8, ArchKind::kThermometer);
  for (int x = 0; x < 255; ++x) {
    int flips_on = 0, flips_off = 0;
    for (int i = 0; i < 255; ++i) {
      const bool a = tt8.rows[x].test(i);
      const bool b = tt8.rows[x + 1].test(i);
      flips_on += (!a && b) ? 1 : 0;
      flips_off += (a && !b) ? 1 : 0;
    }
    REQUIRE(flips_on == 1);
    REQUIRE(flips_off == 0);
  }

  REQUIRE_THROWS_AS(canonical_mapping(binary_basis(8), ArchKind::kThermometer),
                    ConfigError);
  REQUIRE_THROWS_AS(
      canonical_mapping(thermometer_basis(4), ArchKind::kBinary), ConfigError);
}

void test_dac_output() {
  Basis b;
  b.n_bits = 2;
  b.weights = {1, 2};
  MismatchRealization zero{{0.0, 0.0}, 0.0};
  SelectionVector none(2);
  REQUIRE(dac_output(none, b, zero) == 0.0);

  SelectionVector both = SelectionVector::from_string("11");
  MismatchRealization d{{0.1, -0.2}, 0.1};
  REQUIRE_NEAR(dac_output(both, b, d), 2.9, 1e-15);

  // with zero mismatch, output equals the codeword for every mapping row
  const Basis s44 = segmented_basis(SegmentSpec{4, 4}, 8);
  const RepresentationTable ts = canonical_mapping(s44, ArchKind::kSegmented);
  MismatchRealization zero19{std::vector<double>(19, 0.0), 0.0};
  for (int x = 0; x <= 255; ++x) {
    REQUIRE(dac_output(ts.rows[x], s44, zero19) == static_cast<double>(x));
  }

  MismatchRealization wrong{{0.0}, 0.0};
  REQUIRE_THROWS_AS(dac_output(both, b, wrong), InternalError);
}

void test_mismatch_sampling() {
  const Basis b = binary_basis(4);
  const double sigma_delta = 0.05;
  const int draws = 100000;
  std::vector<double> sum(b.weights.size(), 0.0);
  std::vector<double> sum2(b.weights.size(), 0.0);
  for (int j = 0; j < draws; ++j) {
    auto gen = make_generator(42, RngStream::kRealization, j);
    const MismatchRealization r = sample_mismatch(b, sigma_delta, gen);
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += r.deltas[i];
      sum2[i] += r.deltas[i] * r.deltas[i];
    }
  }
  for (std::size_t i = 0; i < sum.size(); ++i) {
    const double mean = sum[i] / draws;
    const double var = sum2[i] / draws - mean * mean;
    const double expect = std::sqrt(b.weights[i]) * sigma_delta;
    REQUIRE_NEAR(std::sqrt(var) / expect, 1.0, 0.02);
  }
}

void test_basis_file_io() {
  const Basis b = segmented_basis(SegmentSpec{2, 6}, 8);
  std::ostringstream out;
  save_basis(out, b);
  std::istringstream in(out.str());
  REQUIRE(load_basis(in, "roundtrip") == b);

  std::istringstream missing("weights 1 2 4\n");
  REQUIRE_THROWS_AS(load_basis(missing, "missing"), ConfigError);

  std::istringstream bad("n_bits 3\nweights 1 two 4\n");
  try {
    load_basis(bad, "bad");
    REQUIRE_MSG(false, "expected parse failure");
  } catch (const ConfigError& e) {
    REQUIRE_MSG(std::string(e.what()).find("bad:2") != std::string::npos,
                e.what());
  }

  std::istringstream junk("n_bits 3\nvolts 5\nweights 1 2 4\n");
  REQUIRE_THROWS_AS(load_basis(junk, "junk"), ConfigError);

  std::istringstream commented("# header\nn_bits 3\nweights 1 2 4 # tail\n");
  REQUIRE(load_basis(commented, "commented") == binary_basis(3));
}

}  // namespace

int main() {
  test_constructors();
  test_canonical_mappings();
  test_dac_output();
  test_mismatch_sampling();
  test_basis_file_io();
  return testsupport::done("test_basis");
}
