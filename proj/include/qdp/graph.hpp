#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdp/rational.hpp"
#include "qdp/vertex_set.hpp"

namespace qdp {

struct Edge {
  u64 u, v;  // u < v
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Simple undirected graph. Two backing modes:
//   - hypercube Q_d (1 <= d <= 24): adjacency implicit via v XOR 2^j, even/odd
//     bipartition by popcount parity;
//   - explicit adjacency for arbitrary simple graphs up to 24 vertices.
// The edge list is canonical: sorted (min,max) pairs. Sampling reproducibility
// depends on that order, so it is frozen and covered by tests.
class Graph {
 public:
  static Graph hypercube(int d);
  static Graph from_edges(u64 vertex_count,
                          std::vector<std::pair<u64, u64>> edges);

  int hypercube_dim() const { return dim_; }  // -1 for explicit graphs
  u64 vertex_count() const { return n_; }
  u64 edge_count() const;
  const std::vector<Edge>& edges() const;  // canonical order

  int degree(u64 v) const;
  template <class F>
  void for_each_neighbor(u64 v, F&& f) const {
    if (dim_ >= 0) {
      for (int j = 0; j < dim_; ++j) f(v ^ (1ull << j));
    } else {
      for (u64 w : adj_[v]) f(w);
    }
  }
  bool adjacent(u64 u, u64 v) const;

  // Popcount-parity bipartition for hypercubes; std::nullopt for explicit
  // graphs (they participate only in identity checks that need no classes).
  std::optional<std::pair<VertexSet, VertexSet>> bipartition() const;
  bool is_even(u64 v) const { return std::popcount(v) % 2 == 0; }

  // N(U) = union of neighbor sets; N(empty) = empty.
  VertexSet neighborhood(const VertexSet& s) const;
  // [U] = { v : N(v) subseteq N(U) }.
  VertexSet closure(const VertexSet& s) const;

  // Vertices at graph distance exactly 2 are linked; s must lie inside one
  // bipartition class (hypercube mode) or anywhere (explicit mode).
  bool two_linked_adjacent(u64 u, u64 v) const;
  std::vector<VertexSet> two_linked_components(const VertexSet& s) const;
  // Exact count of 2-linked S with v in S, |S| <= t, S inside v's class.
  BigInt count_two_linked_sets(u64 v, int t) const;

  std::string to_json() const;
  static Graph from_json(const std::string& json_text);

 private:
  Graph() = default;

  int dim_ = -1;
  u64 n_ = 0;
  std::vector<std::vector<u64>> adj_;     // explicit mode
  mutable std::vector<Edge> edge_list_;   // lazy for hypercubes
};

}  // namespace qdp
