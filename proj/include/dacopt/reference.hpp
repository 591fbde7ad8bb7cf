#pragma once

#include <vector>

#include "dacopt/basis.hpp"

namespace dacopt {

// Amplitude-mismatch-optimized 8-bit reference bases bundled with the
// toolkit, one per supported switch count. Used for regression checks and as
// comparison points against segmented baselines.
std::vector<int> reference_basis_lengths();  // {9, 10, 11, 12, 13}
Basis reference_basis(int length);

// Excerpt of the static mapping for the 13-switch reference architecture:
// codewords 118..138, bit strings in basis index order (index 0 leftmost).
struct ReferenceMappingRow {
  int codeword;
  const char* bits;
};
const std::vector<ReferenceMappingRow>& reference_mapping_excerpt();

}  // namespace dacopt
