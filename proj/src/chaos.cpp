#include "haffine/chaos.hpp"

#include <algorithm>

namespace haffine {

namespace {

void extend(std::vector<std::uint32_t>& ks, int n, int max_len, long part_sum,
            std::vector<MultiIndex>& out) {
  // close the block sequence with the mandatory final gap n
  const long blocks = static_cast<long>(ks.size()) + 1;
  const long len = part_sum + n + blocks - 1;
  if (len <= max_len) {
    GapVector g;
    g.gaps = ks;
    g.gaps.push_back(static_cast<std::uint32_t>(n));
    out.push_back(gaps_to_multi(g));
  }
  // or grow by another gap < n
  for (int k = 0; k < n; ++k) {
    const long next_len = part_sum + k + n + blocks;  // minimal closed length
    if (next_len > max_len) break;
    ks.push_back(static_cast<std::uint32_t>(k));
    extend(ks, n, max_len, part_sum + k, out);
    ks.pop_back();
  }
}

}  // namespace

std::vector<MultiIndex> x0_indices(int n, int max_len) {
  if (n < 1) throw error("x0 requires n >= 1");
  if (max_len < n) return {};
  if (max_len > MultiIndex::kMaxLen) throw capacity_error("x0 cap exceeds index capacity");
  std::vector<MultiIndex> out;
  std::vector<std::uint32_t> ks;
  extend(ks, n, max_len, 0, out);
  std::sort(out.begin(), out.end(), [](const MultiIndex& a, const MultiIndex& b) {
    if (a.length() != b.length()) return a.length() < b.length();
    return a.code < b.code;
  });
  return out;
}

}  // namespace haffine
