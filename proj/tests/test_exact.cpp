#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qdp/exact.hpp"

using namespace qdp;

namespace {

// Brute-force oracles, kept deliberately independent of the library paths
// they check: plain subset scans with explicit adjacency tests.
BigInt oracle_is_count(const Graph& g) {
  int n = (int)g.vertex_count();
  REQUIRE(n <= 20);
  auto adj = adjacency_masks(g);
  BigInt c = 0;
  for (u64 S = 0; S < (1ull << n); ++S) {
    bool ok = true;
    for (u64 m = S; m && ok;) {
      int v = std::countr_zero(m);
      m &= m - 1;
      ok = !(adj[v] & S & ~(~0ull << v));
    }
    if (ok) c += 1;
  }
  return c;
}

Rational oracle_postemp(const Graph& g, const ModelParams& mp) {
  int n = (int)g.vertex_count();
  REQUIRE(n <= 16);
  auto adj = adjacency_masks(g);
  Rational z = 0;
  for (u64 S = 0; S < (1ull << n); ++S) {
    int edges = 0;
    for (u64 m = S; m;) {
      int v = std::countr_zero(m);
      m &= m - 1;
      edges += std::popcount(adj[v] & S & ~(~0ull << v));
    }
    z += qdp::pow(mp.lambda, std::popcount(S)) * qdp::pow(mp.q(), edges);
  }
  return z;
}

ModelParams params(int d, int k, Rational lambda, Rational p) {
  ModelParams mp;
  mp.d = d;
  mp.k = k;
  mp.lambda = lambda;
  mp.p = p;
  return mp;
}

}  // namespace

TEST_CASE("independent set counts on Q_1..Q_4 against brute force") {
  CHECK(count_independent_sets(Graph::hypercube(1)) == 3);
  CHECK(count_independent_sets(Graph::hypercube(2)) == 7);
  CHECK(count_independent_sets(Graph::hypercube(3)) == 35);
  CHECK(count_independent_sets(Graph::hypercube(4)) ==
        oracle_is_count(Graph::hypercube(4)));
  CHECK(count_independent_sets(Graph::hypercube(4)) == 743);
  CHECK(oracle_is_count(Graph::hypercube(2)) == 7);
  CHECK(oracle_is_count(Graph::hypercube(3)) == 35);
}

TEST_CASE("branching counter equals brute force on random graphs") {
  u64 state = 99;
  auto rnd = [&] {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    return state >> 33;
  };
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + (int)(rnd() % 8);
    std::vector<std::pair<u64, u64>> edges;
    for (u64 u = 0; u < (u64)n; ++u)
      for (u64 v = u + 1; v < (u64)n; ++v)
        if (rnd() % 100 < 40) edges.emplace_back(u, v);
    auto g = Graph::from_edges(n, edges);
    CHECK(count_independent_sets(g) == oracle_is_count(g));
    // weighted version at a couple of fugacities
    for (Rational lam : {rat(1, 2), rat(2), rat(3, 7)}) {
      Rational direct = 0;
      auto adj = adjacency_masks(g);
      auto counts = independence_counts_masks(adj, n);
      for (int j = 0; j <= n; ++j)
        direct += Rational((unsigned long)counts[j]) * qdp::pow(lam, j);
      CHECK(hardcore_partition(g, lam) == direct);
    }
  }
}

TEST_CASE("hardcore partition closed forms") {
  auto k2 = Graph::from_edges(2, {{0, 1}});
  for (Rational lam : {rat(1), rat(1, 2), rat(3)}) {
    CHECK(hardcore_partition(k2, lam) == Rational(1) + 2 * lam);
  }
  auto v1 = Graph::from_edges(1, {});
  CHECK(hardcore_partition(v1, rat(5, 3)) == rat(8, 3));
  CHECK(hardcore_partition(Graph::hypercube(2), rat(1)) == 7);
}

TEST_CASE("postemp partition: K_2 closed form and limits") {
  auto k2 = Graph::from_edges(2, {{0, 1}});
  for (Rational lam : {rat(1), rat(2, 3)}) {
    for (Rational p : {rat(0), rat(1, 4), rat(1, 2), rat(1)}) {
      auto z = postemp_partition(k2, params(1, 1, lam, p));
      CHECK(z == 1 + 2 * lam + lam * lam * (Rational(1) - p));
    }
  }
  // p=0 gives (1+lambda)^{|V|}
  auto q3 = Graph::hypercube(3);
  CHECK(postemp_partition(q3, params(3, 1, rat(2), rat(0))) ==
        qdp::pow(rat(3), 8));
  // p=1 recovers the hard-core partition function
  CHECK(postemp_partition(q3, params(3, 1, rat(1), rat(1))) == 35);
}

TEST_CASE("postemp partition: explicit path vs brute force and vs bipartite") {
  auto q3 = Graph::hypercube(3);
  for (Rational lam : {rat(1), rat(1, 2)}) {
    for (Rational p : {rat(1, 2), rat(3, 4)}) {
      auto mp = params(3, 1, lam, p);
      auto z = postemp_partition(q3, mp);
      CHECK(z == oracle_postemp(q3, mp));
      CHECK(z == ksystem_partition_bipartite(q3, mp));
    }
  }
  // Q_4 explicit vs bipartite
  auto q4 = Graph::hypercube(4);
  auto mp = params(4, 1, rat(1), rat(1, 2));
  CHECK(postemp_partition(q4, mp) == ksystem_partition_bipartite(q4, mp));
}

TEST_CASE("ksystem: K_2 with k=2 closed form") {
  auto k2 = Graph::from_edges(2, {{0, 1}});
  for (Rational lam : {rat(1), rat(1, 2)}) {
    for (Rational p : {rat(0), rat(1, 4), rat(1)}) {
      auto mp = params(1, 2, lam, p);
      Rational expect = p * qdp::pow(1 + 2 * lam, 2) +
                        (1 - p) * qdp::pow(1 + lam, 4);
      CHECK(ksystem_partition_tuples(k2, mp) == expect);
      CHECK(ksystem_partition_edge_expectation(k2, mp) == expect);
    }
  }
}

TEST_CASE("ksystem: k=1 equals postemp, p=1 equals Z^k") {
  auto g = Graph::from_edges(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}});
  auto mp1 = params(1, 1, rat(2, 3), rat(1, 3));
  CHECK(ksystem_partition_tuples(g, mp1) == postemp_partition(g, mp1));
  auto mp2 = params(1, 2, rat(2, 3), rat(1));
  Rational z = hardcore_partition(g, rat(2, 3));
  CHECK(ksystem_partition_tuples(g, mp2) == z * z);
  auto mp3 = params(1, 3, rat(1, 2), rat(1));
  Rational z2 = hardcore_partition(g, rat(1, 2));
  CHECK(ksystem_partition_tuples(g, mp3) == z2 * z2 * z2);
}

TEST_CASE("ksystem: three routes agree on Q_2 and Q_3") {
  for (int d : {2, 3}) {
    auto g = Graph::hypercube(d);
    for (int k : {1, 2, 3}) {
      auto mp = params(d, k, rat(1, 2), rat(1, 4));
      Rational a = ksystem_partition_tuples(g, mp);
      Rational b = ksystem_partition_bipartite(g, mp);
      Rational c = ksystem_partition_edge_expectation(g, mp);
      CHECK(a == b);
      CHECK(a == c);
    }
  }
}

TEST_CASE("ksystem monotone in p at fixed lambda (non-increasing in beta)") {
  auto g = Graph::hypercube(3);
  Rational prev;
  bool first = true;
  for (int i = 0; i <= 4; ++i) {
    auto mp = params(3, 2, rat(1), rat(i, 4));
    Rational z = ksystem_partition_bipartite(g, mp);
    if (!first) CHECK(z <= prev);
    prev = z;
    first = false;
  }
}

TEST_CASE("even/odd swap symmetry") {
  // relabeling v -> v XOR 1 swaps the classes; partition functions must agree
  auto q3 = Graph::hypercube(3);
  std::vector<std::pair<u64, u64>> flipped;
  for (const auto& e : q3.edges()) flipped.emplace_back(e.u ^ 1, e.v ^ 1);
  auto q3f = Graph::from_edges(8, flipped);
  auto mp = params(3, 1, rat(1), rat(1, 2));
  CHECK(postemp_partition(q3f, mp) == postemp_partition(q3, mp));
}

TEST_CASE("gray kernel log Z against exact rationals, d <= 5") {
  for (int d : {3, 4, 5}) {
    for (Rational p : {rat(0), rat(1, 2), rat(1)}) {
      auto mp = params(d, 1, rat(1), p);
      auto lz = hypercube_postemp_logZ(mp, 2);
      auto exact = ksystem_partition_bipartite(Graph::hypercube(d), mp);
      double lg_exact = qdp::log2(exact);
      CHECK(std::abs(lz.log2_value() - lg_exact) <
            1e-6 * std::abs(lg_exact));
    }
  }
  // examples pinned by hand
  auto l35 = hypercube_postemp_logZ(params(3, 1, rat(1), rat(1)));
  CHECK(l35.log2_value() == doctest::Approx(std::log2(35.0)).epsilon(1e-10));
  auto l32 = hypercube_postemp_logZ(params(5, 1, rat(1), rat(0)));
  CHECK(l32.log2_value() == doctest::Approx(32.0).epsilon(1e-12));
}

TEST_CASE("gray kernel bit-identical across worker counts") {
  auto mp = params(5, 1, rat(1), rat(7, 10));
  auto a = hypercube_postemp_logZ(mp, 1);
  auto b = hypercube_postemp_logZ(mp, 2);
  auto c = hypercube_postemp_logZ(mp, 4);
  CHECK(a.log2_value() == b.log2_value());
  CHECK(a.log2_value() == c.log2_value());
}

TEST_CASE("hypercube_is_count matches count_independent_sets") {
  CHECK(hypercube_is_count(1) == 3);
  CHECK(hypercube_is_count(2) == 7);
  CHECK(hypercube_is_count(3) == 35);
  CHECK(hypercube_is_count(4) == 743);
  CHECK(hypercube_is_count(5) == 254475);
  CHECK(hypercube_is_count(5, 4) == 254475);
}

TEST_CASE("sample kernels: gray vs branching vs brute force") {
  // p=1 sample of Q_3 at lambda=1 -> 35
  auto q3 = Graph::hypercube(3);
  auto s1 = sample_subgraph(q3, rat(1), 1, 0);
  CHECK(hardcore_on_sample_exact(s1, rat(1)) == 35);
  CHECK(hardcore_on_sample_logZ(s1, rat(1)).log2_value() ==
        doctest::Approx(std::log2(35.0)).epsilon(1e-10));
  // p=0 sample: 2^{2^d} independent sets
  auto s0 = sample_subgraph(q3, rat(0), 1, 0);
  CHECK(hardcore_on_sample_exact(s0, rat(1)) == 256);
  // random samples at d=3,4: all three routes agree
  for (int d : {3, 4}) {
    auto g = Graph::hypercube(d);
    for (int i = 0; i < 10; ++i) {
      auto s = sample_subgraph(g, rat(3, 5), 77, i);
      for (Rational lam : {rat(1), rat(1, 2)}) {
        Rational exact = hardcore_on_sample_exact(s, lam);
        // brute force over vertex subsets of the sampled graph
        auto adj = s.adjacency_masks();
        int n = (int)g.vertex_count();
        Rational brute = 0;
        auto counts = independence_counts_masks(adj, n);
        for (int j = 0; j <= n; ++j)
          brute += Rational((unsigned long)counts[j]) * qdp::pow(lam, j);
        CHECK(exact == brute);
        auto lz = hardcore_on_sample_logZ(s, lam);
        CHECK(std::abs(lz.log2_value() - qdp::log2(exact)) < 1e-9);
      }
    }
  }
}

TEST_CASE("d=2 sample with two opposite edges removed, brute force match") {
  auto q2 = Graph::hypercube(2);
  // find a (seed, index) whose sample drops exactly edges {0,1} and {2,3}
  // deterministically; instead construct directly via retained flags
  SubgraphSample s;
  s.base = &q2;
  s.p = rat(1, 2);
  s.seed = 0;
  s.sample_index = 0;
  s.retained.assign(q2.edges().size(), true);
  const auto& es = q2.edges();
  for (size_t i = 0; i < es.size(); ++i)
    if ((es[i] == Edge{0, 1}) || (es[i] == Edge{2, 3})) s.retained[i] = false;
  Rational z = hardcore_on_sample_exact(s, rat(1));
  // brute force: independent sets of the 4-cycle minus two opposite edges,
  // which is two disjoint edges 0-2 and 1-3: (3)(3) = 9
  CHECK(z == 9);
}

TEST_CASE("budget errors surface as exceptions") {
  CHECK_THROWS_AS(
      ksystem_partition_edge_expectation(Graph::hypercube(4),
                                         params(4, 2, rat(1), rat(1, 2))),
      BudgetError);
  CHECK_THROWS_AS(hypercube_postemp_logZ(params(7, 1, rat(1), rat(1, 2))),
                  ConfigError);
}
