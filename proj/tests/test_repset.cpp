#include "dacopt/repset.hpp"

#include <random>

#include "dacopt/errors.hpp"
#include "dacopt/reference.hpp"
#include "test_support.hpp"

using namespace dacopt;

namespace {

Basis make_basis(std::vector<int> weights, int n_bits) {
  Basis b;
  b.weights = std::move(weights);
  b.n_bits = n_bits;
  return b;
}

// Independent subset-sum oracle: walk every mask and sum weights directly.
long long brute_count_in_range(const Basis& b) {
  const int L = b.length();
  long long count = 0;
  for (std::uint32_t mask = 0; mask < (1u << L); ++mask) {
    long long sum = 0;
    for (int i = 0; i < L; ++i) {
      if ((mask >> i) & 1) sum += b.weights[i];
    }
    if (sum <= b.full_scale()) ++count;
  }
  return count;
}

void test_enumeration_small() {
  const Basis b = make_basis({1, 1, 2}, 2);
  const RepresentationIndex index = enumerate_all(b);
  REQUIRE(index.masks(2) == (std::vector<std::uint32_t>{3, 4}));
  REQUIRE(index.representation_set(2).members.size() == 2);
  REQUIRE(index.representation_set(2).members[0].to_string() == "110");
  REQUIRE(index.representation_set(2).members[1].to_string() == "001");

  // binary uniqueness
  for (int n : {3, 8}) {
    const RepresentationIndex bi = enumerate_all(binary_basis(n));
    for (int x = 0; x < bi.codeword_count(); ++x) {
      REQUIRE(bi.masks(x).size() == 1);
    }
  }
}

void test_enumeration_reference_13() {
  const Basis b13 = reference_basis(13);
  const RepresentationIndex index = enumerate_all(b13);
  REQUIRE(index.complete());
  REQUIRE(index.total_members() == brute_count_in_range(b13));

  // every stored member decodes to its bucket's codeword
  for (int x = 0; x <= 255; ++x) {
    for (const SelectionVector& w : index.representation_set(x).members) {
      REQUIRE_MSG(w.value(b13) == x, "codeword " << x);
    }
  }
}

void test_is_complete() {
  REQUIRE(is_complete(binary_basis(8)));
  REQUIRE(!is_complete(make_basis({2, 4, 8, 16, 32, 64, 128, 128}, 8)));
  for (int length : reference_basis_lengths()) {
    REQUIRE_MSG(is_complete(reference_basis(length)), "L=" << length);
  }
  // cross-check against enumeration over random small bases
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> weight(1, 15);
  for (int trial = 0; trial < 200; ++trial) {
    Basis b = make_basis({}, 4);
    const int L = 4 + static_cast<int>(gen() % 3);
    for (int i = 0; i < L; ++i) {
      b.weights.push_back(weight(gen));
    }
    REQUIRE(is_complete(b) == enumerate_all(b).complete());
  }
}

void test_mean_representation_count() {
  REQUIRE(mean_representation_count(binary_basis(8)) == 1.0);
  REQUIRE(mean_representation_count(make_basis({1, 1, 2}, 2)) == 1.75);
  // order-of-magnitude bound around 2^(L-N) = 32
  const double mean13 = mean_representation_count(reference_basis(13));
  REQUIRE(mean13 > 16.0 && mean13 < 64.0);
  REQUIRE_THROWS_AS(
      mean_representation_count(make_basis({2, 4, 8, 16}, 4)),
      InfeasibleError);
}

void test_duplicate_weight_property() {
  // adding a weight keeps completeness and never shrinks any bucket
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> weight(1, 15);
  for (int trial = 0; trial < 50; ++trial) {
    Basis b = binary_basis(4);
    b.weights.push_back(weight(gen));
    const RepresentationIndex before = enumerate_all(b);
    Basis extended = b;
    extended.weights.push_back(weight(gen));
    REQUIRE(is_complete(extended));
    const RepresentationIndex after = enumerate_all(extended);
    for (int x = 0; x < before.codeword_count(); ++x) {
      REQUIRE(after.masks(x).size() >= before.masks(x).size());
    }
  }
}

void test_guard() {
  Basis big = binary_basis(8);
  while (big.length() <= kEnumerationMaxLength) {
    big.weights.push_back(1);
  }
  REQUIRE_THROWS_AS(enumerate_all(big), ConfigError);
}

}  // namespace

int main() {
  test_enumeration_small();
  test_enumeration_reference_13();
  test_is_complete();
  test_mean_representation_count();
  test_duplicate_weight_property();
  test_guard();
  return testsupport::done("test_repset");
}
