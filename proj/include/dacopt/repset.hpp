#pragma once

#include <cstdint>
#include <vector>

#include "dacopt/basis.hpp"

namespace dacopt {

// Full subset enumeration is bounded to 2^20 masks; the architectures of
// interest need at most L = 13.
inline constexpr int kEnumerationMaxLength = 20;

struct RepresentationSet {
  int codeword = 0;
  std::vector<SelectionVector> members;
};

// All binary representations of every codeword under one basis. Buckets hold
// L-bit masks in ascending value; subsets whose sum exceeds full scale belong
// to no codeword and are dropped.
class RepresentationIndex {
 public:
  int n_bits() const { return n_bits_; }
  int basis_length() const { return basis_length_; }
  int codeword_count() const { return 1 << n_bits_; }

  const std::vector<std::uint32_t>& masks(int codeword) const {
    return buckets_[static_cast<std::size_t>(codeword)];
  }
  RepresentationSet representation_set(int codeword) const;

  long long total_members() const;
  bool complete() const;  // no empty bucket in range

 private:
  friend void enumerate_into(const Basis&, RepresentationIndex&,
                             std::vector<std::int32_t>&);
  int n_bits_ = 0;
  int basis_length_ = 0;
  std::vector<std::vector<std::uint32_t>> buckets_;
};

RepresentationIndex enumerate_all(const Basis& basis);

// Reuses the index's bucket storage and the caller's subset-sum scratch;
// the annealer calls this once per candidate basis.
void enumerate_into(const Basis& basis, RepresentationIndex& out,
                    std::vector<std::int32_t>& sum_scratch);

// Achievability bitset built by dynamic programming over the weights,
// O(L * 2^N) bit operations; no length guard needed.
bool is_complete(const Basis& basis);

// sum_x |R(x)| / 2^N. Throws InfeasibleError when the basis is incomplete.
double mean_representation_count(const Basis& basis);

}  // namespace dacopt
