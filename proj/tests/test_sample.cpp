#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdp/sample.hpp"

using namespace qdp;

TEST_CASE("degenerate probabilities") {
  auto q3 = Graph::hypercube(3);
  auto all = sample_subgraph(q3, Rational(1), 7, 0);
  CHECK(all.retained_count() == 12);
  auto none = sample_subgraph(q3, Rational(0), 7, 0);
  CHECK(none.retained_count() == 0);
}

TEST_CASE("determinism in (seed, sample_index)") {
  auto q4 = Graph::hypercube(4);
  auto a = sample_subgraph(q4, rat(1, 2), 42, 17);
  auto b = sample_subgraph(q4, rat(1, 2), 42, 17);
  CHECK(a.retained == b.retained);
  auto c = sample_subgraph(q4, rat(1, 2), 42, 18);
  CHECK(a.retained != c.retained);
  auto d = sample_subgraph(q4, rat(1, 2), 43, 17);
  CHECK(a.retained != d.retained);
}

TEST_CASE("empirical retention frequency within 5 sigma of p") {
  auto q4 = Graph::hypercube(4);  // 32 edges
  const int samples = 100000 / 32 + 1;
  for (Rational p : {rat(1, 2), rat(3, 4), rat(1, 5)}) {
    u64 kept = 0, total = 0;
    for (int i = 0; i < samples; ++i) {
      auto s = sample_subgraph(q4, p, 2024, i);
      kept += s.retained_count();
      total += s.retained.size();
    }
    double pd = to_double(p);
    double sigma = std::sqrt(pd * (1 - pd) / (double)total);
    CHECK(std::abs((double)kept / (double)total - pd) < 5 * sigma);
  }
}

TEST_CASE("adjacency masks match retained edges") {
  auto q3 = Graph::hypercube(3);
  auto s = sample_subgraph(q3, rat(1, 2), 5, 3);
  auto adj = s.adjacency_masks();
  const auto& es = q3.edges();
  for (size_t i = 0; i < es.size(); ++i) {
    bool has = (adj[es[i].u] >> es[i].v) & 1;
    CHECK(has == (bool)s.retained[i]);
    CHECK((bool)((adj[es[i].v] >> es[i].u) & 1) == (bool)s.retained[i]);
  }
}
