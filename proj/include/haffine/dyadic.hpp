#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "haffine/scalar.hpp"

namespace haffine {

// Address in the infinite binary tree. A multi-index (a_1,...,a_k) over {0,1}
// is stored as the integer 2^k + sum a_nu 2^{k-nu}, which is exactly the
// natural numbering of the Haar system; the empty index is 1.
struct MultiIndex {
  static constexpr int kMaxLen = 62;

  std::uint64_t code = 1;

  MultiIndex() = default;
  explicit MultiIndex(std::uint64_t c);

  static MultiIndex empty() { return MultiIndex(); }
  static MultiIndex from_bits(std::span<const int> bits);

  int length() const;
  std::uint64_t position() const;  // sum a_nu 2^{len-nu}
  int bit(int nu) const;           // nu in [1, length()]
  std::vector<int> bits() const;
  int ones() const;

  MultiIndex concat(const MultiIndex& beta) const;
  bool is_prefix_of(const MultiIndex& other) const;
  // drop k trailing symbols (k <= length())
  MultiIndex drop_tail(int k) const;
  int trailing_zeros() const;

  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
};

// (j/2^k, (j+1)/2^k]
struct DyadicInterval {
  int level = 0;
  std::uint64_t position = 0;

  Rat lower() const;
  Rat upper() const;
  Rat length() const;
  bool contains(const Rat& t) const;  // half-open on the left
  bool contains(const DyadicInterval& other) const;
  bool disjoint_from(const DyadicInterval& other) const;
};

// Gap form of a multi-index with exactly d-1 ones:
// (0_{k1}, 1, 0_{k2}, 1, ..., 1, 0_{kd}).
struct GapVector {
  std::vector<std::uint32_t> gaps;  // size d >= 1

  int order() const { return static_cast<int>(gaps.size()); }
  friend auto operator<=>(const GapVector&, const GapVector&) = default;
};

MultiIndex index_to_multi(std::uint64_t n);
std::uint64_t multi_to_index(const MultiIndex& alpha);
DyadicInterval interval_of(const MultiIndex& alpha);
int chaos_order(std::uint64_t n);

GapVector nd_to_gaps(std::uint64_t n);
std::uint64_t gaps_to_nd(const GapVector& g);
GapVector multi_to_gaps(const MultiIndex& alpha);
MultiIndex gaps_to_multi(const GapVector& g);

// true iff no index in the family is a proper prefix of another
// (equivalently: the intervals I_alpha are pairwise disjoint)
bool pairwise_disjoint(std::span<const MultiIndex> family);

}  // namespace haffine
