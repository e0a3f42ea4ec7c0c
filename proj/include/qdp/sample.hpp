#pragma once

#include <array>
#include <vector>

#include "qdp/graph.hpp"
#include "qdp/rational.hpp"

namespace qdp {

// Counter-based uniform bits keyed by (seed, sample_index, edge_index):
// results are independent of worker count and iteration order.
inline u64 mix64(u64 x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline u64 counter_hash(u64 seed, u64 sample_index, u64 counter) {
  return mix64(mix64(mix64(seed) ^ sample_index) ^ counter);
}

// Exact comparison of a 53-bit uniform draw against a rational threshold:
// retain iff u < p with u = hash>>11 / 2^53. Avoids any float rounding.
inline bool bernoulli_exact(u64 hash, const Rational& p) {
  const BigInt& num = p.get_num();
  const BigInt& den = p.get_den();
  if (!num.fits_ulong_p() || !den.fits_ulong_p())
    throw BudgetError("edge probability num/den must fit in 64 bits");
  unsigned __int128 lhs = (unsigned __int128)(hash >> 11) * den.get_ui();
  unsigned __int128 rhs = ((unsigned __int128)num.get_ui()) << 53;
  return lhs < rhs;
}

struct SubgraphSample {
  const Graph* base = nullptr;
  std::vector<bool> retained;  // indexed by canonical edge_list position
  Rational p;
  u64 seed = 0;
  u64 sample_index = 0;

  u64 retained_count() const {
    u64 c = 0;
    for (bool b : retained) c += b;
    return c;
  }
  // Per-vertex adjacency masks of the retained subgraph; valid for graphs
  // with at most 64 vertices.
  std::vector<u64> adjacency_masks() const;
};

SubgraphSample sample_subgraph(const Graph& g, const Rational& p, u64 seed,
                               u64 sample_index);

}  // namespace qdp
