#include "qdp/graph.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "qdp/budget.hpp"

namespace qdp {

Graph Graph::hypercube(int d) {
  if (d < 1 || d > 24)
    throw ConfigError("hypercube: d must be in [1,24], got " +
                      std::to_string(d));
  Graph g;
  g.dim_ = d;
  g.n_ = 1ull << d;
  return g;
}

Graph Graph::from_edges(u64 vertex_count,
                        std::vector<std::pair<u64, u64>> edges) {
  if (vertex_count > 24)
    throw BudgetError("explicit graphs are capped at 24 vertices");
  Graph g;
  g.n_ = vertex_count;
  g.adj_.assign(vertex_count, {});
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u == v) throw ConfigError("self-loop");
    if (u >= vertex_count || v >= vertex_count)
      throw ConfigError("edge endpoint out of range");
    if (u > v) std::swap(u, v);
    es.push_back({u, v});
  }
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  for (const auto& e : es) {
    g.adj_[e.u].push_back(e.v);
    g.adj_[e.v].push_back(e.u);
  }
  for (auto& a : g.adj_) std::sort(a.begin(), a.end());
  g.edge_list_ = std::move(es);
  return g;
}

const std::vector<Edge>& Graph::edges() const {
  if (edge_list_.empty() && dim_ >= 0) {
    if (dim_ > 16) throw BudgetError("hypercube edge list capped at d=16");
    // Ascending v, ascending unset-bit j gives the lexicographically sorted
    // (min,max) pair order directly.
    edge_list_.reserve((u64)dim_ << (dim_ - 1));
    for (u64 v = 0; v < n_; ++v)
      for (int j = 0; j < dim_; ++j)
        if (!(v >> j & 1)) edge_list_.push_back({v, v | (1ull << j)});
  }
  return edge_list_;
}

u64 Graph::edge_count() const {
  if (dim_ >= 0) return (u64)dim_ << (dim_ - 1);
  return edge_list_.size();
}

int Graph::degree(u64 v) const {
  if (dim_ >= 0) return dim_;
  return (int)adj_[v].size();
}

bool Graph::adjacent(u64 u, u64 v) const {
  if (dim_ >= 0) return std::popcount(u ^ v) == 1;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::optional<std::pair<VertexSet, VertexSet>> Graph::bipartition() const {
  if (dim_ < 0) return std::nullopt;
  VertexSet even(n_), odd(n_);
  for (u64 v = 0; v < n_; ++v) (is_even(v) ? even : odd).add(v);
  return std::make_pair(std::move(even), std::move(odd));
}

VertexSet Graph::neighborhood(const VertexSet& s) const {
  VertexSet out(n_);
  s.for_each([&](u64 v) { for_each_neighbor(v, [&](u64 w) { out.add(w); }); });
  return out;
}

VertexSet Graph::closure(const VertexSet& s) const {
  VertexSet ns = neighborhood(s);
  VertexSet out(n_);
  for (u64 v = 0; v < n_; ++v) {
    bool inside = true;
    for_each_neighbor(v, [&](u64 w) { inside = inside && ns.contains(w); });
    if (inside) out.add(v);
  }
  return out;
}

bool Graph::two_linked_adjacent(u64 u, u64 v) const {
  if (u == v) return false;
  if (dim_ >= 0) return std::popcount(u ^ v) == 2;
  if (adjacent(u, v)) return false;
  for (u64 w : adj_[u])
    if (std::binary_search(adj_[v].begin(), adj_[v].end(), w)) return true;
  return false;
}

std::vector<VertexSet> Graph::two_linked_components(const VertexSet& s) const {
  if (dim_ >= 0) {
    bool has_even = false, has_odd = false;
    s.for_each([&](u64 v) { (is_even(v) ? has_even : has_odd) = true; });
    if (has_even && has_odd)
      throw ConfigError("two_linked_components: set straddles both classes");
  }
  std::vector<u64> verts = s.to_vector();
  std::vector<int> comp(verts.size(), -1);
  std::vector<VertexSet> out;
  for (size_t i = 0; i < verts.size(); ++i) {
    if (comp[i] >= 0) continue;
    int c = (int)out.size();
    out.emplace_back(n_);
    std::vector<size_t> stack{i};
    comp[i] = c;
    while (!stack.empty()) {
      size_t j = stack.back();
      stack.pop_back();
      out[c].add(verts[j]);
      for (size_t l = 0; l < verts.size(); ++l)
        if (comp[l] < 0 && two_linked_adjacent(verts[j], verts[l])) {
          comp[l] = c;
          stack.push_back(l);
        }
    }
  }
  return out;
}

namespace {

// Counts subsets of `pool` (vertex ids) of size <= t that contain pool[0] and
// are connected under `linked`. Explores the ball exhaustively; the node
// budget guards against combinatorial blowup.
struct TwoLinkedCounter {
  const std::vector<u64>& pool;
  const Graph& g;
  u64 nodes = 0;
  BigInt total = 0;

  void run(int t) {
    std::vector<int> chosen{0};
    recurse(chosen, 1, t);
  }
  bool connected(const std::vector<int>& chosen) const {
    std::vector<bool> seen(chosen.size(), false);
    std::vector<size_t> stack{0};
    seen[0] = true;
    size_t cnt = 1;
    while (!stack.empty()) {
      size_t i = stack.back();
      stack.pop_back();
      for (size_t j = 0; j < chosen.size(); ++j)
        if (!seen[j] &&
            g.two_linked_adjacent(pool[chosen[i]], pool[chosen[j]])) {
          seen[j] = true;
          cnt++;
          stack.push_back(j);
        }
    }
    return cnt == chosen.size();
  }
  void recurse(std::vector<int>& chosen, int next, int t) {
    if (++nodes > Budgets::get().max_two_linked_nodes)
      throw BudgetError("count_two_linked_sets: node budget exceeded");
    if (connected(chosen)) total += 1;
    if ((int)chosen.size() == t) return;
    for (int i = next; i < (int)pool.size(); ++i) {
      chosen.push_back(i);
      recurse(chosen, i + 1, t);
      chosen.pop_back();
    }
  }
};

}  // namespace

BigInt Graph::count_two_linked_sets(u64 v, int t) const {
  if (t < 1) throw ConfigError("count_two_linked_sets: t >= 1 required");
  // Any 2-linked set containing v lies in the radius-(t-1) ball of the
  // distance-2 relation around v, inside v's class.
  std::vector<u64> pool{v};
  VertexSet seen(n_);
  seen.add(v);
  size_t lo = 0;
  for (int step = 1; step < t; ++step) {
    size_t hi = pool.size();
    for (size_t i = lo; i < hi; ++i)
      for (u64 w = 0; w < n_; ++w)
        if (!seen.contains(w) && two_linked_adjacent(pool[i], w)) {
          seen.add(w);
          pool.push_back(w);
        }
    lo = hi;
  }
  TwoLinkedCounter c{pool, *this};
  c.run(t);
  return c.total;
}

std::string Graph::to_json() const {
  nlohmann::json j;
  j["vertices"] = n_;
  auto& es = j["edges"] = nlohmann::json::array();
  for (const auto& e : edges()) es.push_back({e.u, e.v});
  if (dim_ >= 0) {
    j["hypercube_dim"] = dim_;
    nlohmann::json even = nlohmann::json::array(),
                   odd = nlohmann::json::array();
    for (u64 v = 0; v < n_; ++v) (is_even(v) ? even : odd).push_back(v);
    j["bipartition"] = {{"even", even}, {"odd", odd}};
  }
  return j.dump();
}

Graph Graph::from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.contains("hypercube_dim")) return hypercube(j["hypercube_dim"]);
  std::vector<std::pair<u64, u64>> es;
  for (const auto& e : j["edges"]) es.emplace_back(e[0], e[1]);
  return from_edges(j["vertices"], std::move(es));
}

}  // namespace qdp
