#pragma once

#include <random>

#include "haffine/chaos.hpp"
#include "haffine/stepfn.hpp"

// Seeded generators for the randomized verification suites. Plain integer
// draws from mt19937_64 keep runs reproducible across platforms.
namespace haffine::gen {

inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

inline long draw_int(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(draw(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

inline Rat rand_rat(std::mt19937_64& rng, long max_num = 9, long max_den = 9) {
  const long p = draw_int(rng, -max_num, max_num);
  const long q = draw_int(rng, 1, max_den);
  return make_rat(p, q);
}

inline CplxQ rand_cplxq(std::mt19937_64& rng, bool complex_parts = true) {
  CplxQ s(rand_rat(rng));
  if (complex_parts && draw(rng, 2) == 0) s.im = rand_rat(rng);
  return s;
}

inline Chaos1Q rand_symbol(std::mt19937_64& rng, int max_degree, bool complex_parts = true,
                           bool nonzero_c0 = true) {
  Chaos1Q c;
  const int deg = static_cast<int>(draw(rng, static_cast<std::uint64_t>(max_degree) + 1));
  for (int k = 0; k <= deg; ++k) c.coeffs.push_back(rand_cplxq(rng, complex_parts));
  if (nonzero_c0 && scalar_traits<CplxQ>::is_zero(c.coeffs[0])) c.coeffs[0] = CplxQ(1);
  c.prov = Provenance::polynomial;
  return c;
}

inline StepQ rand_step(std::mt19937_64& rng, int level, bool mean_zero,
                       bool complex_parts = true) {
  StepQ x = StepQ::zero(level);
  for (auto& v : x.values) v = rand_cplxq(rng, complex_parts);
  if (mean_zero) {
    const CplxQ mu = mean(x);
    for (auto& v : x.values) v -= mu;
  }
  return x;
}

inline HaarCoeffMap<CplxQ> rand_coeff_map(std::mt19937_64& rng, int max_len, int terms,
                                          bool complex_parts = true) {
  HaarCoeffMap<CplxQ> out;
  for (int t = 0; t < terms; ++t) {
    const int len = static_cast<int>(draw(rng, static_cast<std::uint64_t>(max_len) + 1));
    const std::uint64_t code =
        (std::uint64_t{1} << len) | (len ? draw(rng, std::uint64_t{1} << len) : 0);
    out[MultiIndex(code)] = rand_cplxq(rng, complex_parts);
  }
  map_prune_zeros(out);
  return out;
}

}  // namespace haffine::gen
