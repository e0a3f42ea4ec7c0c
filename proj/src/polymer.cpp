#include "qdp/polymer.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <nlohmann/json.hpp>

#include "qdp/budget.hpp"

namespace qdp {

namespace {

void require_small_d(int d) {
  if (d < 1 || d > 6)
    throw BudgetError("polymer engine works on Q_d with d <= 6");
}

int dist(u64 u, u64 v) { return std::popcount(u ^ v); }

}  // namespace

u64 qd_neighborhood_mask(int d, u64 mask) {
  u64 out = 0;
  while (mask) {
    int v = std::countr_zero(mask);
    mask &= mask - 1;
    for (int j = 0; j < d; ++j) out |= 1ull << (v ^ (1 << j));
  }
  return out;
}

u64 qd_closure_mask(int d, u64 mask) {
  if (!mask) return 0;  // Q_d has no isolated vertices, so [empty] = empty
  u64 nb = qd_neighborhood_mask(d, mask);
  u64 out = 0;
  for (u64 v = 0; v < (1ull << d); ++v) {
    u64 nv = qd_neighborhood_mask(d, 1ull << v);
    if (!(nv & ~nb)) out |= 1ull << v;
  }
  return out;
}

int polymer_nbhd_size(const Polymer& g) {
  int total = 0;
  for (u64 c : g.comps) total += std::popcount(qd_neighborhood_mask(g.d, c));
  return total;
}

bool polymer_H_connected(const Polymer& g) {
  struct Node {
    int i;
    u64 v;
  };
  std::vector<Node> nodes;
  for (int i = 0; i < g.k(); ++i) {
    u64 c = g.comps[i];
    while (c) {
      nodes.push_back({i, (u64)std::countr_zero(c)});
      c &= c - 1;
    }
  }
  if (nodes.empty()) return false;
  auto linked = [&](const Node& a, const Node& b) {
    int dd = dist(a.v, b.v);
    return a.i == b.i ? dd == 2 : dd <= 1;
  };
  std::vector<char> seen(nodes.size(), 0);
  std::vector<size_t> stack{0};
  seen[0] = 1;
  size_t cnt = 1;
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    for (size_t j = 0; j < nodes.size(); ++j)
      if (!seen[j] && linked(nodes[i], nodes[j])) {
        seen[j] = 1;
        cnt++;
        stack.push_back(j);
      }
  }
  return cnt == nodes.size();
}

bool polymer_is_valid(const Polymer& g) {
  require_small_d(g.d);
  if ((int)g.comps.size() != g.k()) return false;
  if (g.support() == 0) return false;
  u64 evens = 0;
  for (u64 v = 0; v < (1ull << g.d); ++v)
    if (side_of(v) == Side::even) evens |= 1ull << v;
  const u64 closure_cap = (3ull << (g.d - 1)) / 4;  // (3/4) 2^{d-1}
  for (int i = 0; i < g.k(); ++i) {
    u64 allowed = g.defects.sides[i] == Side::even ? evens : ~evens;
    if (g.comps[i] & ~allowed) return false;
    if (g.comps[i] &&
        (u64)std::popcount(qd_closure_mask(g.d, g.comps[i])) > closure_cap)
      return false;
  }
  return polymer_H_connected(g);
}

std::vector<Polymer> enumerate_polymers(int d, const DefectVector& defects,
                                        int max_size, std::optional<u64> root) {
  require_small_d(d);
  if (max_size < 1) throw ConfigError("max_size must be >= 1");
  if (max_size > Budgets::get().max_polymer_size)
    throw BudgetError("enumerate_polymers: max_size exceeds budget");
  const int k = defects.k();
  const u64 n = 1ull << d;
  bool side_present[2] = {false, false};
  for (Side s : defects.sides) side_present[(int)s] = true;

  // Candidate supports are connected under
  //   u ~ w  iff (same side, dist 2) or (different side, dist 1),
  // which H_gamma connectivity forces on the support.
  auto r_linked = [&](u64 u, u64 w) {
    if (u == w) return false;
    int dd = dist(u, w);
    return side_of(u) == side_of(w) ? dd == 2 : dd == 1;
  };
  auto vertex_allowed = [&](u64 v) { return side_present[(int)side_of(v)]; };

  std::vector<Polymer> out;
  std::vector<u64> roots;
  if (root) {
    roots.push_back(*root);
  } else {
    for (u64 v = 0; v < n; ++v) roots.push_back(v);
  }
  for (u64 r : roots) {
    if (r >= n || !vertex_allowed(r)) continue;
    // pool: allowed vertices above r within R-distance (max_size-1) of r
    std::vector<u64> pool;
    {
      std::vector<int> distv(n, -1);
      distv[r] = 0;
      std::vector<u64> frontier{r};
      for (int step = 1; step < max_size; ++step) {
        std::vector<u64> nxt;
        for (u64 u : frontier)
          for (u64 w = 0; w < n; ++w)
            if (distv[w] < 0 && vertex_allowed(w) && r_linked(u, w)) {
              distv[w] = step;
              nxt.push_back(w);
            }
        frontier = std::move(nxt);
      }
      for (u64 v = r + 1; v < n; ++v)
        if (distv[v] > 0) pool.push_back(v);
    }

    auto emit_assignments = [&](const std::vector<u64>& verts) {
      std::vector<std::vector<int>> options(verts.size());
      for (size_t vi = 0; vi < verts.size(); ++vi)
        for (int i = 0; i < k; ++i)
          if (defects.sides[i] == side_of(verts[vi]))
            options[vi].push_back(i);
      std::vector<u32> tsel(verts.size(), 0);
      std::function<void(size_t, int)> rec_assign = [&](size_t vi, int used) {
        if (vi == verts.size()) {
          Polymer p;
          p.d = d;
          p.defects = defects;
          p.comps.assign(k, 0);
          for (size_t x = 0; x < verts.size(); ++x)
            for (size_t b = 0; b < options[x].size(); ++b)
              if (tsel[x] >> b & 1) p.comps[options[x][b]] |= 1ull << verts[x];
          if (polymer_is_valid(p)) out.push_back(std::move(p));
          return;
        }
        int kv = (int)options[vi].size();
        int remaining = (int)(verts.size() - vi - 1);
        for (u32 sub = 1; sub < (1u << kv); ++sub) {
          int cost = std::popcount(sub);
          if (used + cost + remaining > max_size) continue;
          tsel[vi] = sub;
          rec_assign(vi + 1, used + cost);
        }
      };
      rec_assign(0, 0);
    };

    auto r_connected = [&](const std::vector<u64>& verts) {
      std::vector<char> seen(verts.size(), 0);
      std::vector<size_t> stack{0};
      seen[0] = 1;
      size_t cnt = 1;
      while (!stack.empty()) {
        size_t i = stack.back();
        stack.pop_back();
        for (size_t j = 0; j < verts.size(); ++j)
          if (!seen[j] && r_linked(verts[i], verts[j])) {
            seen[j] = 1;
            cnt++;
            stack.push_back(j);
          }
      }
      return cnt == verts.size();
    };

    int max_extra = std::min<int>(max_size - 1, (int)pool.size());
    std::vector<u64> chosen{r};
    std::function<void(size_t, int)> rec_support = [&](size_t start,
                                                       int left) {
      if (r_connected(chosen)) emit_assignments(chosen);
      if (!left) return;
      for (size_t i = start; i < pool.size(); ++i) {
        chosen.push_back(pool[i]);
        rec_support(i + 1, left - 1);
        chosen.pop_back();
      }
    };
    rec_support(0, max_extra);
  }
  std::sort(out.begin(), out.end(), [](const Polymer& a, const Polymer& b) {
    return a.comps < b.comps;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Weights.
// ---------------------------------------------------------------------------
namespace {

// Edge mask over ids (even_endpoint_vertex * d + direction); 2^6*6 <= 384 bits.
struct EdgeMask {
  std::array<u64, 6> w{};
  void set(int d, u64 even_v, int j) {
    int id = (int)(even_v * d + j);
    w[id >> 6] |= 1ull << (id & 63);
  }
  EdgeMask& operator|=(const EdgeMask& o) {
    for (size_t i = 0; i < w.size(); ++i) w[i] |= o.w[i];
    return *this;
  }
  int count() const {
    int c = 0;
    for (u64 x : w) c += std::popcount(x);
    return c;
  }
};

// Mask of edges between decoration vertex b and N(b) cap comp.
EdgeMask edges_into(int d, u64 b, u64 comp) {
  EdgeMask em;
  for (int j = 0; j < d; ++j) {
    u64 a = b ^ (1ull << j);
    if (comp >> a & 1) {
      u64 even_v = side_of(b) == Side::even ? b : a;
      em.set(d, even_v, j);
    }
  }
  return em;
}

}  // namespace

Rational polymer_weight_bruteforce(const Polymer& g, const ModelParams& mp) {
  mp.validate();
  require_small_d(g.d);
  const int d = g.d;
  // decoration slots: (component i, vertex b in N(A_i))
  std::vector<EdgeMask> slot_edges;
  for (int i = 0; i < g.k(); ++i) {
    u64 nb = qd_neighborhood_mask(d, g.comps[i]);
    while (nb) {
      u64 b = (u64)std::countr_zero(nb);
      nb &= nb - 1;
      slot_edges.push_back(edges_into(d, b, g.comps[i]));
    }
  }
  if ((int)slot_edges.size() > Budgets::get().max_decoration_bits)
    throw BudgetError("polymer_weight_bruteforce: decoration budget exceeded");
  int max_edges = 0;
  for (const auto& em : slot_edges) max_edges += em.count();
  // aggregate counts over decorations by (sum |B_i|, |union of edge sets|)
  std::vector<std::vector<u64>> cnt(slot_edges.size() + 1,
                                    std::vector<u64>(max_edges + 1, 0));
  std::function<void(size_t, int, const EdgeMask&)> rec =
      [&](size_t s, int bsize, const EdgeMask& acc) {
        if (s == slot_edges.size()) {
          cnt[bsize][acc.count()]++;
          return;
        }
        rec(s + 1, bsize, acc);
        EdgeMask with = acc;
        with |= slot_edges[s];
        rec(s + 1, bsize + 1, with);
      };
  rec(0, 0, EdgeMask{});

  Rational sum = 0;
  std::vector<Rational> lp(slot_edges.size() + 1), qp(max_edges + 1);
  lp[0] = qp[0] = Rational(1);
  for (size_t i = 1; i <= slot_edges.size(); ++i) lp[i] = lp[i - 1] * mp.lambda;
  for (int m = 1; m <= max_edges; ++m) qp[m] = qp[m - 1] * mp.q();
  for (size_t b = 0; b <= slot_edges.size(); ++b)
    for (int m = 0; m <= max_edges; ++m)
      if (cnt[b][m]) sum += Rational((unsigned long)cnt[b][m]) * lp[b] * qp[m];
  return qdp::pow(mp.lambda, g.size()) * sum /
         qdp::pow(Rational(1) + mp.lambda, polymer_nbhd_size(g));
}

Rational polymer_weight_factorized(const Polymer& g, const ModelParams& mp) {
  mp.validate();
  require_small_d(g.d);
  const int d = g.d;
  const int k = g.k();
  const u64 supp = g.support();
  std::vector<u64> nbm(k);
  u64 all_nb = 0;
  for (int i = 0; i < k; ++i) {
    nbm[i] = qd_neighborhood_mask(d, g.comps[i]);
    all_nb |= nbm[i];
  }
  Rational result = qdp::pow(mp.lambda, g.size()) /
                    qdp::pow(Rational(1) + mp.lambda, polymer_nbhd_size(g));
  // Decoration vertices outside the support: every edge they can occupy has
  // its other endpoint in the support, so distinct vertices touch disjoint
  // edges and factor independently.
  u64 outside = all_nb & ~supp;
  while (outside) {
    u64 v = (u64)std::countr_zero(outside);
    outside &= outside - 1;
    std::vector<int> tv;
    for (int i = 0; i < k; ++i)
      if (nbm[i] >> v & 1) tv.push_back(i);
    u64 nv = qd_neighborhood_mask(d, 1ull << v);
    Rational fv = 0;
    for (u32 sub = 0; sub < (1u << tv.size()); ++sub) {
      u64 uni = 0;
      for (size_t b = 0; b < tv.size(); ++b)
        if (sub >> b & 1) uni |= g.comps[tv[b]];
      fv += qdp::pow(mp.lambda, std::popcount(sub)) *
            qdp::pow(mp.q(), std::popcount(nv & uni));
    }
    result *= fv;
  }
  // Decoration vertices inside the support couple through edges whose both
  // endpoints lie in the support (such an edge can be occupied from either
  // endpoint and must be counted once); sum their joint choices exactly.
  std::vector<u64> cverts;
  std::vector<std::vector<int>> ctv;
  u64 inside = all_nb & supp;
  while (inside) {
    u64 v = (u64)std::countr_zero(inside);
    inside &= inside - 1;
    std::vector<int> tv;
    for (int i = 0; i < k; ++i)
      if (nbm[i] >> v & 1) tv.push_back(i);
    cverts.push_back(v);
    ctv.push_back(std::move(tv));
  }
  if (!cverts.empty()) {
    Rational gsum = 0;
    std::vector<u32> pick(cverts.size(), 0);
    std::function<void(size_t)> rec = [&](size_t vi) {
      if (vi == cverts.size()) {
        EdgeMask em;
        int bsize = 0;
        for (size_t x = 0; x < cverts.size(); ++x) {
          bsize += std::popcount(pick[x]);
          for (size_t b = 0; b < ctv[x].size(); ++b)
            if (pick[x] >> b & 1)
              em |= edges_into(d, cverts[x], g.comps[ctv[x][b]]);
        }
        gsum += qdp::pow(mp.lambda, bsize) * qdp::pow(mp.q(), em.count());
        return;
      }
      for (u32 sub = 0; sub < (1u << ctv[vi].size()); ++sub) {
        pick[vi] = sub;
        rec(vi + 1);
      }
    };
    rec(0);
    result *= gsum;
  }
  return result;
}

Rational alpha_int(int ell, const Rational& lambda, const Rational& p) {
  if (ell < 1) throw ConfigError("alpha_int: ell >= 1 required");
  Rational opl = qdp::pow(Rational(1) + lambda, ell);
  return (Rational(1) + (opl - 1) * (Rational(1) - p)) / opl;
}

Rational delta_int(int ell, const Rational& lambda, const Rational& p) {
  return Rational(1) +
         (qdp::pow(Rational(1) + lambda, ell) - 1) * (Rational(1) - p);
}

Rational closed_form_weight(Scenario sc, const ModelParams& mp) {
  mp.validate();
  const Rational& lam = mp.lambda;
  Rational q = mp.q();
  Rational a1 = alpha_int(1, lam, mp.p);
  int d = mp.d;
  switch (sc) {
    case Scenario::I:
      return lam * qdp::pow(a1, d);
    case Scenario::II: {
      Rational ratio = (Rational(1) + lam * q * q) / (Rational(1) + lam * q);
      return lam * lam * qdp::pow(a1, 2 * d - 2) * ratio * ratio;
    }
    case Scenario::III:
      return qdp::pow(lam, mp.k) * qdp::pow(alpha_int(mp.k, lam, mp.p), d);
    case Scenario::IV: {
      Rational num = Rational(1) + 2 * lam * q + lam * lam * q;
      return lam * lam * qdp::pow(a1, 2 * d - 2) * num /
             qdp::pow(Rational(1) + lam, 2);
    }
  }
  throw ConfigError("closed_form_weight: invalid scenario");
}

bool incompatible(const Polymer& a, const Polymer& b) {
  if (a.d != b.d || !(a.defects == b.defects))
    throw ConfigError("incompatible: mismatched polymer models");
  Polymer u;
  u.d = a.d;
  u.defects = a.defects;
  u.comps.resize(a.k());
  for (int i = 0; i < a.k(); ++i) u.comps[i] = a.comps[i] | b.comps[i];
  return polymer_H_connected(u);
}

double weight_upper_bound(const Polymer& g, const ModelParams& mp) {
  mp.validate();
  int k = g.k();
  double alpha_k = to_double(alpha_int(k, mp.lambda, mp.p));
  return std::pow(to_double(mp.lambda), g.size()) *
         std::pow(alpha_k, (double)polymer_nbhd_size(g) / k);
}

bool weight_upper_bound_holds_exact(const Polymer& g, const ModelParams& mp) {
  int k = g.k();
  Rational w = polymer_weight_factorized(g, mp);
  Rational lhs = qdp::pow(w, k);
  Rational rhs = qdp::pow(qdp::pow(mp.lambda, g.size()), k) *
                 qdp::pow(alpha_int(k, mp.lambda, mp.p), polymer_nbhd_size(g));
  return lhs <= rhs;
}

std::string Polymer::to_json() const {
  nlohmann::json j;
  j["k"] = k();
  j["defects"] = defects.to_string();
  auto& cs = j["components"] = nlohmann::json::array();
  for (u64 c : comps) {
    nlohmann::json comp = nlohmann::json::array();
    u64 m = c;
    while (m) {
      comp.push_back(std::countr_zero(m));
      m &= m - 1;
    }
    cs.push_back(comp);
  }
  return j.dump();
}

}  // namespace qdp
