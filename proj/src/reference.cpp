#include "dacopt/reference.hpp"

#include <string>

#include "dacopt/errors.hpp"

namespace dacopt {

std::vector<int> reference_basis_lengths() { return {9, 10, 11, 12, 13}; }

Basis reference_basis(int length) {
  Basis b;
  b.n_bits = 8;
  switch (length) {
    case 9:
      b.weights = {1, 2, 4, 8, 16, 32, 35, 77, 80};
      break;
    case 10:
      b.weights = {1, 2, 4, 8, 16, 17, 32, 33, 70, 72};
      break;
    case 11:
      b.weights = {1, 2, 4, 8, 8, 16, 17, 32, 33, 66, 70};
      break;
    case 12:
      b.weights = {1, 2, 4, 7, 8, 15, 15, 23, 25, 30, 61, 64};
      break;
    case 13:
      b.weights = {1, 2, 4, 6, 8, 9, 12, 16, 17, 25, 32, 61, 66};
      break;
    default:
      throw ConfigError("reference_basis: no bundled basis of length " +
                        std::to_string(length));
  }
  return b;
}

const std::vector<ReferenceMappingRow>& reference_mapping_excerpt() {
  static const std::vector<ReferenceMappingRow> rows = {
      {118, "0001011001001"}, {119, "1001011001001"}, {120, "0101011001001"},
      {121, "1101011001001"}, {122, "0011011001001"}, {123, "1011011001001"},
      {124, "0111011001001"}, {125, "1111011001001"}, {126, "0001001011001"},
      {127, "1001001011001"}, {128, "0101001011001"}, {129, "1101001011001"},
      {130, "0011001011001"}, {131, "1011001011001"}, {132, "0111001011001"},
      {133, "1111001011001"}, {134, "1010011011001"}, {135, "0001011011001"},
      {136, "1001011011001"}, {137, "0101011011001"}, {138, "1101011011001"},
  };
  return rows;
}

}  // namespace dacopt
