#include "dacopt/repset.hpp"

#include <bit>
#include <numeric>
#include <string>

#include "dacopt/errors.hpp"

namespace dacopt {

RepresentationSet RepresentationIndex::representation_set(int codeword) const {
  RepresentationSet set;
  set.codeword = codeword;
  const auto& bucket = buckets_[static_cast<std::size_t>(codeword)];
  set.members.reserve(bucket.size());
  for (std::uint32_t mask : bucket) {
    set.members.push_back(SelectionVector::from_mask(mask, basis_length_));
  }
  return set;
}

long long RepresentationIndex::total_members() const {
  long long total = 0;
  for (const auto& bucket : buckets_) {
    total += static_cast<long long>(bucket.size());
  }
  return total;
}

bool RepresentationIndex::complete() const {
  for (const auto& bucket : buckets_) {
    if (bucket.empty()) return false;
  }
  return true;
}

void enumerate_into(const Basis& basis, RepresentationIndex& out,
                    std::vector<std::int32_t>& sum_scratch) {
  validate_basis(basis);
  const int length = basis.length();
  if (length > kEnumerationMaxLength) {
    throw ConfigError("enumerate_all: basis length " + std::to_string(length) +
                      " exceeds the 2^" +
                      std::to_string(kEnumerationMaxLength) +
                      " enumeration guard");
  }
  if (basis.n_bits > kEnumerationMaxLength) {
    throw ConfigError("enumerate_all: n_bits " + std::to_string(basis.n_bits) +
                      " exceeds the bucket-table guard of " +
                      std::to_string(kEnumerationMaxLength));
  }
  out.n_bits_ = basis.n_bits;
  out.basis_length_ = length;
  const std::size_t mask_count = std::size_t{1} << length;
  const int top = basis.full_scale();

  sum_scratch.resize(mask_count);
  sum_scratch[0] = 0;
  for (std::size_t mask = 1; mask < mask_count; ++mask) {
    const std::uint32_t low = static_cast<std::uint32_t>(mask & (~mask + 1));
    sum_scratch[mask] =
        sum_scratch[mask ^ low] +
        basis.weights[static_cast<std::size_t>(std::countr_zero(low))];
  }

  out.buckets_.resize(static_cast<std::size_t>(top) + 1);
  for (auto& bucket : out.buckets_) {
    bucket.clear();
  }
  for (std::size_t mask = 0; mask < mask_count; ++mask) {
    const std::int32_t sum = sum_scratch[mask];
    if (sum <= top) {
      out.buckets_[static_cast<std::size_t>(sum)].push_back(
          static_cast<std::uint32_t>(mask));
    }
  }
}

RepresentationIndex enumerate_all(const Basis& basis) {
  RepresentationIndex index;
  std::vector<std::int32_t> scratch;
  enumerate_into(basis, index, scratch);
  return index;
}

bool is_complete(const Basis& basis) {
  validate_basis(basis);
  const int top = basis.full_scale();
  const std::size_t words = (static_cast<std::size_t>(top) + 1 + 63) / 64;
  std::vector<std::uint64_t> reach(words, 0ull);
  reach[0] = 1ull;  // empty subset
  for (int w : basis.weights) {
    if (w > top) continue;  // cannot contribute to any in-range sum
    const std::size_t word_shift = static_cast<std::size_t>(w) >> 6;
    const int bit_shift = w & 63;
    if (bit_shift == 0) {
      for (std::size_t i = words; i-- > word_shift;) {
        reach[i] |= reach[i - word_shift];
      }
    } else {
      for (std::size_t i = words; i-- > word_shift;) {
        std::uint64_t v = reach[i - word_shift] << bit_shift;
        if (i > word_shift) {
          v |= reach[i - word_shift - 1] >> (64 - bit_shift);
        }
        reach[i] |= v;
      }
    }
  }
  for (int x = 0; x <= top; ++x) {
    if (!((reach[static_cast<std::size_t>(x) >> 6] >> (x & 63)) & 1ull)) {
      return false;
    }
  }
  return true;
}

double mean_representation_count(const Basis& basis) {
  if (!is_complete(basis)) {
    throw InfeasibleError(
        "mean_representation_count: basis is incomplete over [0, " +
        std::to_string(basis.full_scale()) + "]");
  }
  const RepresentationIndex index = enumerate_all(basis);
  return static_cast<double>(index.total_members()) /
         static_cast<double>(index.codeword_count());
}

}  // namespace dacopt
