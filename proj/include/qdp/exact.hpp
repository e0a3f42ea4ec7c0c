#pragma once

#include <vector>

#include "qdp/graph.hpp"
#include "qdp/log2real.hpp"
#include "qdp/params.hpp"
#include "qdp/rational.hpp"
#include "qdp/sample.hpp"

namespace qdp {

// ---------------------------------------------------------------------------
// Weighted independent-set counting on graphs of <= 64 vertices, given
// per-vertex adjacency masks. Branching with component factorization and
// mask-keyed memoization; exact in rationals for rational lambda.
// ---------------------------------------------------------------------------
BigInt is_count(const std::vector<u64>& adj, u64 mask);
Rational weighted_is_partition(const std::vector<u64>& adj, u64 mask,
                               const Rational& lambda);

// Adjacency masks of a full graph (vertex_count <= 64).
std::vector<u64> adjacency_masks(const Graph& g);

// ---------------------------------------------------------------------------
// Exact small-instance partition functions.
// ---------------------------------------------------------------------------
// i(G): brute force for explicit graphs; even-side kernels for Q_d, d <= 6.
BigInt count_independent_sets(const Graph& g, int workers = 1);
// Z(G, lambda) = sum over independent sets of lambda^{|I|}.
Rational hardcore_partition(const Graph& g, const Rational& lambda);
// Z(G, lambda, beta) = sum_{I subset V} lambda^{|I|} (1-p)^{|E(I)|}.
Rational postemp_partition(const Graph& g, const ModelParams& mp);

// Z_k: three exact routes.
//  - tuples: definitional sum over k-tuples of vertex subsets (also the
//    Fubini evaluation of E_omega Z(omega,lambda)^k); budget 2^{k|V|}.
//  - bipartite: per-odd-vertex factorization over k-tuples of even-side
//    subsets, hypercubes only; budget 2^{k 2^{d-1}}.
//  - edge_expectation: sum over retained-edge subsets omega of
//    p^{|omega|} (1-p)^{|E - omega|} Z(omega,lambda)^k; budget 2^{|E|}.
Rational ksystem_partition_tuples(const Graph& g, const ModelParams& mp);
Rational ksystem_partition_bipartite(const Graph& g, const ModelParams& mp);
Rational ksystem_partition_edge_expectation(const Graph& g,
                                            const ModelParams& mp);
// Default route: bipartite for hypercubes when cheaper, else tuples.
Rational ksystem_partition(const Graph& g, const ModelParams& mp);

// Parameter-free aggregations: one enumeration pass serves every (lambda, p)
// evaluation on a grid.
//   tuples:  cnt[s][m] = #{k-tuples with total size s, union-edge count m};
//            Z_k = sum cnt[s][m] lambda^s (1-p)^m.
//   edge expectation: bucket[m][j] = sum over |omega| = m of the j-th
//            lambda-coefficient of Z(omega,lambda)^k;
//            Z_k = sum_m p^m (1-p)^{|E|-m} sum_j bucket[m][j] lambda^j.
std::vector<std::vector<u64>> ksystem_tuple_counts(const Graph& g, int k);
Rational evaluate_size_edge_counts(const std::vector<std::vector<u64>>& cnt,
                                   const Rational& lambda, const Rational& q);
std::vector<std::vector<BigInt>> ksystem_edge_expectation_buckets(
    const Graph& g, int k);
Rational evaluate_edge_expectation_buckets(
    const std::vector<std::vector<BigInt>>& bucket, const Rational& lambda,
    const Rational& p);

// ---------------------------------------------------------------------------
// Gray-code hypercube kernels (d <= 6). Parallelized over fixed segments of
// the even-side enumeration; results are bit-identical across worker counts.
// ---------------------------------------------------------------------------
// log2 Z(Q_d, lambda, beta) via the even-side product form.
Log2Real hypercube_postemp_logZ(const ModelParams& mp, int workers = 1);
// log2 Z(sample, lambda) for a sampled subgraph of Q_d.
Log2Real hardcore_on_sample_logZ(const SubgraphSample& s,
                                 const Rational& lambda, int workers = 1);
// Exact i(Q_d) from the alive-count histogram (same enumeration).
BigInt hypercube_is_count(int d, int workers = 1);

// Exact Z(sample, lambda) through the branching counter.
Rational hardcore_on_sample_exact(const SubgraphSample& s,
                                  const Rational& lambda);

// Independence polynomial coefficients (count by size) of the graph (V, omega)
// for an explicit edge subset; used by the edge-expectation route and tests.
std::vector<u64> independence_counts_masks(const std::vector<u64>& adj, int n);

}  // namespace qdp
