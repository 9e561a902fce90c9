#include "haffine/dyadic.hpp"

#include <algorithm>
#include <bit>

namespace haffine {

MultiIndex::MultiIndex(std::uint64_t c) : code(c) {
  if (c == 0) throw error("multi-index code must be positive");
  if (length() > kMaxLen) throw capacity_error("multi-index longer than 62 symbols");
}

int MultiIndex::length() const { return 63 - std::countl_zero(code); }

std::uint64_t MultiIndex::position() const { return code - (std::uint64_t{1} << length()); }

int MultiIndex::bit(int nu) const { return static_cast<int>((code >> (length() - nu)) & 1u); }

std::vector<int> MultiIndex::bits() const {
  const int len = length();
  std::vector<int> out(len);
  for (int nu = 1; nu <= len; ++nu) out[nu - 1] = bit(nu);
  return out;
}

int MultiIndex::ones() const { return std::popcount(code) - 1; }

MultiIndex MultiIndex::from_bits(std::span<const int> bits) {
  if (static_cast<int>(bits.size()) > kMaxLen) throw capacity_error("multi-index longer than 62 symbols");
  std::uint64_t c = 1;
  for (int b : bits) c = (c << 1) | static_cast<unsigned>(b & 1);
  return MultiIndex(c);
}

MultiIndex MultiIndex::concat(const MultiIndex& beta) const {
  const int lb = beta.length();
  if (length() + lb > kMaxLen) throw capacity_error("concatenated multi-index longer than 62 symbols");
  return MultiIndex((code << lb) | beta.position());
}

bool MultiIndex::is_prefix_of(const MultiIndex& other) const {
  const int la = length();
  const int lb = other.length();
  if (la > lb) return false;
  return (other.code >> (lb - la)) == code;
}

MultiIndex MultiIndex::drop_tail(int k) const {
  if (k < 0 || k > length()) throw error("drop_tail out of range");
  return MultiIndex(code >> k);
}

int MultiIndex::trailing_zeros() const {
  if (code == 1) return 0;
  const int tz = std::countr_zero(code);
  return std::min(tz, length());
}

Rat DyadicInterval::lower() const { return Rat(static_cast<unsigned long>(position)) * pow2_inv(level); }

Rat DyadicInterval::upper() const {
  return Rat(static_cast<unsigned long>(position) + 1) * pow2_inv(level);
}

Rat DyadicInterval::length() const { return pow2_inv(level); }

bool DyadicInterval::contains(const Rat& t) const { return t > lower() && t <= upper(); }

bool DyadicInterval::contains(const DyadicInterval& other) const {
  return other.lower() >= lower() && other.upper() <= upper();
}

bool DyadicInterval::disjoint_from(const DyadicInterval& other) const {
  return upper() <= other.lower() || other.upper() <= lower();
}

MultiIndex index_to_multi(std::uint64_t n) {
  if (n == 0) throw error("index must be >= 1");
  return MultiIndex(n);
}

std::uint64_t multi_to_index(const MultiIndex& alpha) { return alpha.code; }

DyadicInterval interval_of(const MultiIndex& alpha) {
  return DyadicInterval{alpha.length(), alpha.position()};
}

int chaos_order(std::uint64_t n) {
  if (n == 0) throw error("index must be >= 1");
  return std::popcount(n);
}

GapVector nd_to_gaps(std::uint64_t n) {
  if (n == 0) throw error("index must be >= 1");
  // exponents i_1 > ... > i_d of the binary expansion; k_j = i_j - i_{j+1} - 1,
  // k_d = i_d
  std::vector<int> exps;
  for (int b = 63; b >= 0; --b)
    if ((n >> b) & 1u) exps.push_back(b);
  const int d = static_cast<int>(exps.size());
  GapVector g;
  g.gaps.resize(d);
  for (int j = 0; j + 1 < d; ++j) g.gaps[j] = static_cast<std::uint32_t>(exps[j] - exps[j + 1] - 1);
  g.gaps[d - 1] = static_cast<std::uint32_t>(exps[d - 1]);
  return g;
}

std::uint64_t gaps_to_nd(const GapVector& g) {
  if (g.gaps.empty()) throw error("gap vector must have order >= 1");
  const int d = g.order();
  std::uint64_t n = 0;
  std::uint64_t i = g.gaps[d - 1];
  n |= std::uint64_t{1} << i;
  for (int j = d - 2; j >= 0; --j) {
    i += g.gaps[j] + 1;
    if (i > 62) throw capacity_error("gap vector exceeds 62-bit index range");
    n |= std::uint64_t{1} << i;
  }
  return n;
}

GapVector multi_to_gaps(const MultiIndex& alpha) {
  GapVector g;
  std::uint32_t run = 0;
  const int len = alpha.length();
  for (int nu = 1; nu <= len; ++nu) {
    if (alpha.bit(nu) == 1) {
      g.gaps.push_back(run);
      run = 0;
    } else {
      ++run;
    }
  }
  g.gaps.push_back(run);
  return g;
}

MultiIndex gaps_to_multi(const GapVector& g) {
  if (g.gaps.empty()) throw error("gap vector must have order >= 1");
  std::vector<int> bits;
  for (std::size_t j = 0; j < g.gaps.size(); ++j) {
    if (j > 0) bits.push_back(1);
    bits.insert(bits.end(), g.gaps[j], 0);
  }
  return MultiIndex::from_bits(bits);
}

bool pairwise_disjoint(std::span<const MultiIndex> family) {
  std::vector<MultiIndex> sorted(family.begin(), family.end());
  std::sort(sorted.begin(), sorted.end());
  // in code order a prefix immediately precedes its extensions only if the
  // extension's truncation equals it; check every pair via truncation against
  // a sorted lookup
  for (const MultiIndex& a : sorted) {
    for (int k = 1; k <= a.length(); ++k) {
      const MultiIndex pre = a.drop_tail(k);
      if (std::binary_search(sorted.begin(), sorted.end(), pre)) return false;
    }
  }
  // duplicates also overlap
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

}  // namespace haffine
