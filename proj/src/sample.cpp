#include "qdp/sample.hpp"

namespace qdp {

SubgraphSample sample_subgraph(const Graph& g, const Rational& p, u64 seed,
                               u64 sample_index) {
  if (p < 0 || p > 1) throw ConfigError("p must lie in [0,1]");
  SubgraphSample s;
  s.base = &g;
  s.p = p;
  s.seed = seed;
  s.sample_index = sample_index;
  const auto& es = g.edges();
  s.retained.resize(es.size());
  for (size_t i = 0; i < es.size(); ++i)
    s.retained[i] = bernoulli_exact(counter_hash(seed, sample_index, i), p);
  return s;
}

std::vector<u64> SubgraphSample::adjacency_masks() const {
  if (base->vertex_count() > 64)
    throw BudgetError("adjacency_masks: graph exceeds 64 vertices");
  std::vector<u64> adj(base->vertex_count(), 0);
  const auto& es = base->edges();
  for (size_t i = 0; i < es.size(); ++i)
    if (retained[i]) {
      adj[es[i].u] |= 1ull << es[i].v;
      adj[es[i].v] |= 1ull << es[i].u;
    }
  return adj;
}

}  // namespace qdp
