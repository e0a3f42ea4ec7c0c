#include "qdp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>

#include "qdp/budget.hpp"

namespace qdp {

namespace {

u64 factorial(int n) {
  u64 f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool edges_connect_all(int n, const std::vector<std::pair<int, int>>& edges,
                       u32 subset) {
  u32 seen = 1;
  bool grew = true;
  while (grew) {
    grew = false;
    for (size_t i = 0; i < edges.size(); ++i) {
      if (!(subset >> i & 1)) continue;
      u32 a = 1u << edges[i].first, b = 1u << edges[i].second;
      if ((seen & a) && !(seen & b)) { seen |= b; grew = true; }
      if ((seen & b) && !(seen & a)) { seen |= a; grew = true; }
    }
  }
  return std::popcount(seen) == n;
}

}  // namespace

Rational ursell(int vertices, const std::vector<std::pair<int, int>>& edges) {
  if (vertices < 1 || vertices > 8)
    throw BudgetError("ursell: 1 <= |V| <= 8 required");
  if (edges.size() > 24) throw BudgetError("ursell: more than 24 edges");
  long signed_count = 0;
  for (u32 S = 0; S < (1u << edges.size()); ++S)
    if (edges_connect_all(vertices, edges, S))
      signed_count += (std::popcount(S) % 2 == 0) ? 1 : -1;
  return Rational(signed_count) / Rational((unsigned long)factorial(vertices));
}

Rational ursell_recursive(int vertices,
                          const std::vector<std::pair<int, int>>& edges) {
  if (vertices < 1 || vertices > 16)
    throw BudgetError("ursell_recursive: 1 <= |V| <= 16 required");
  // A(W) = sum over all edge subsets inside W of signs = [E(W) = empty];
  // C(W) = signed connected-spanning count of W, via
  // C(W) = A(W) - sum_{W' proper, min(W) in W'} C(W') A(W \ W').
  std::vector<u32> adj(vertices, 0);
  for (auto [a, b] : edges) {
    adj[a] |= 1u << b;
    adj[b] |= 1u << a;
  }
  auto edgeless = [&](u32 W) {
    for (u32 m = W; m;) {
      int v = std::countr_zero(m);
      m &= m - 1;
      if (adj[v] & W & ~(~0u << v)) return false;
    }
    return true;
  };
  std::vector<long> C(1u << vertices, 0);
  for (u32 W = 1; W < (1u << vertices); ++W) {
    int v0 = std::countr_zero(W);
    long a_full = edgeless(W) ? 1 : 0;
    long sub = 0;
    u32 rest = W & ~(1u << v0);
    for (u32 t = rest; t; t = (t - 1) & rest) {
      u32 Wp = W & ~t;  // proper subset of W still containing v0
      sub += C[Wp] * (edgeless(t) ? 1 : 0);
    }
    C[W] = a_full - sub;
  }
  return Rational(C[(1u << vertices) - 1]) /
         Rational((unsigned long)factorial(vertices));
}

// ---------------------------------------------------------------------------
// Cluster enumeration over polymer multisets.
// ---------------------------------------------------------------------------
namespace {

struct Pool {
  std::vector<Polymer> polymers;
  std::vector<Rational> weights;
  std::vector<int> sizes;
  std::vector<u64> supports;
  std::vector<u32> spans;
};

Pool build_pool(int d, const DefectVector& defects, const ModelParams& mp,
                int max_size) {
  Pool pool;
  pool.polymers = enumerate_polymers(d, defects, max_size);
  pool.weights.reserve(pool.polymers.size());
  for (const auto& g : pool.polymers) {
    pool.weights.push_back(polymer_weight_factorized(g, mp));
    pool.sizes.push_back(g.size());
    pool.supports.push_back(g.support());
    u32 sp = 0;
    for (int i : g.span()) sp |= 1u << i;
    pool.spans.push_back(sp);
  }
  return pool;
}

}  // namespace

void for_each_cluster_term(int d, const DefectVector& defects,
                           const ModelParams& mp,
                           const ClusterEnumOptions& opt,
                           const std::function<void(const ClusterTerm&)>& f) {
  mp.validate();
  if (opt.max_total_size > Budgets::get().max_cluster_order)
    throw BudgetError("cluster enumeration: order exceeds budget");
  Pool pool = build_pool(d, defects, mp, opt.max_total_size);
  const int np = (int)pool.polymers.size();
  std::vector<int> ids;

  std::function<void(int, int)> rec = [&](int start, int left) {
    if (!ids.empty() && !(opt.size_exact && left != 0)) {
      u32 span = 0;
      u64 supp = 0;
      for (int id : ids) {
        span |= pool.spans[id];
        supp |= pool.supports[id];
      }
      bool keep = true;
      if (opt.span_exact_mask && span != *opt.span_exact_mask) keep = false;
      if (keep && opt.support_contains && !(supp >> *opt.support_contains & 1))
        keep = false;
      if (keep) {
        const int n = (int)ids.size();
        std::vector<std::pair<int, int>> hedges;
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b)
            if (incompatible(pool.polymers[ids[a]], pool.polymers[ids[b]]))
              hedges.emplace_back(a, b);
        if (edges_connect_all(n, hedges, (1u << hedges.size()) - 1)) {
          ClusterTerm term;
          term.polymer_ids = ids;
          term.total_size = opt.max_total_size - left;
          term.support = supp;
          term.span_mask = span;
          term.ursell_value = ursell(n, hedges);
          term.weight_product = Rational(1);
          for (int id : ids) term.weight_product *= pool.weights[id];
          u64 mult = factorial(n);
          for (int i = 0; i < n;) {
            int j = i;
            while (j < n && ids[j] == ids[i]) j++;
            mult /= factorial(j - i);
            i = j;
          }
          term.ordered_count = mult;
          f(term);
        }
      }
    }
    if (!left) return;
    for (int i = start; i < np; ++i) {
      if (pool.sizes[i] > left) continue;
      ids.push_back(i);
      rec(i, left - pool.sizes[i]);
      ids.pop_back();
    }
  };
  rec(0, opt.max_total_size);
}

Rational cluster_weight_sum(int d, const DefectVector& defects,
                            const ModelParams& mp,
                            const ClusterEnumOptions& opt) {
  Rational total = 0;
  for_each_cluster_term(d, defects, mp, opt, [&](const ClusterTerm& t) {
    total += Rational((unsigned long)t.ordered_count) * t.weight();
  });
  return total;
}

Rational truncated_log_Xi_direct(const ModelParams& mp,
                                 const DefectVector& defects, int order) {
  ClusterEnumOptions opt;
  opt.max_total_size = order;
  return cluster_weight_sum(mp.d, defects, mp, opt);
}

Rational truncated_log_Xi_symmetric(const ModelParams& mp,
                                    const DefectVector& defects, int order) {
  // sum_Gamma omega = sum_v sum_{Gamma: v in S(Gamma)} omega/|S(Gamma)|, and
  // the inner sum is constant on each parity class by vertex transitivity.
  Rational total = 0;
  for (u64 root : {u64(0), u64(1)}) {  // vertex 0 even, vertex 1 odd
    ClusterEnumOptions opt;
    opt.max_total_size = order;
    opt.support_contains = root;
    Rational g = 0;
    for_each_cluster_term(mp.d, defects, mp, opt, [&](const ClusterTerm& t) {
      g += Rational((unsigned long)t.ordered_count) * t.weight() /
           Rational((unsigned long)std::popcount(t.support));
    });
    total += g;
  }
  return Rational((unsigned long)(1ull << (mp.d - 1))) * total;
}

ASameDiff a_same_a_diff_closed(const ModelParams& mp) {
  mp.validate();
  const Rational& lam = mp.lambda;
  Rational q = mp.q();
  int d = mp.d;
  Rational a1 = alpha_int(1, lam, mp.p);
  Rational a2 = alpha_int(2, lam, mp.p);
  Rational half = Rational((unsigned long)(1ull << (d - 1)));
  ASameDiff out;
  out.a_same = half * lam * lam * (qdp::pow(a2, d) - qdp::pow(a1, 2 * d));
  out.a_diff = half * Rational(d) * qdp::pow(lam, 4) * qdp::pow(a1, 2 * d) *
               q * mp.p / qdp::pow(Rational(1) + lam * q, 2);
  return out;
}

ASameDiff a_same_a_diff_enumerated(const ModelParams& mp) {
  if (mp.d > 4)
    throw BudgetError("a_same_a_diff_enumerated: d <= 4 (use closed form)");
  ModelParams m2 = mp;
  m2.k = 2;
  ClusterEnumOptions opt;
  opt.max_total_size = 2;
  opt.size_exact = true;
  opt.span_exact_mask = 0b11;
  ASameDiff out;
  out.a_same =
      cluster_weight_sum(mp.d, DefectVector::with_even_count(2, 0), m2, opt);
  out.a_diff =
      cluster_weight_sum(mp.d, DefectVector::with_even_count(2, 1), m2, opt);
  return out;
}

Rational span_weight_sum(const ModelParams& mp, u32 defect_even_mask,
                         u32 span_mask, int order) {
  DefectVector dv;
  dv.sides.assign(mp.k, Side::odd);
  for (int i = 0; i < mp.k; ++i)
    if (defect_even_mask >> i & 1) dv.sides[i] = Side::even;
  ClusterEnumOptions opt;
  opt.max_total_size = order;
  opt.span_exact_mask = span_mask;
  return cluster_weight_sum(mp.d, dv, mp, opt);
}

Rational central_moment_truncated(const ModelParams& mp, int order) {
  mp.validate();
  const int k = mp.k;
  if (k < 2 || k > 4)
    throw ConfigError("central_moment_truncated: 2 <= k <= 4");
  if (order > Budgets::get().max_cluster_order)
    throw BudgetError("central_moment_truncated: order exceeds budget");
  std::vector<u32> sets;
  for (u32 s = 0; s < (1u << k); ++s)
    if (std::popcount(s) >= 2) sets.push_back(s);
  Rational total = 0;
  for (u32 D = 0; D < (1u << k); ++D) {
    std::map<u32, Rational> wcache;
    auto wtrunc = [&](u32 S) {
      auto it = wcache.find(S);
      if (it != wcache.end()) return it->second;
      Rational w = span_weight_sum(mp, D, S, order);
      wcache.emplace(S, w);
      return w;
    };
    // ordered sequences (S_1..S_n), n <= k, each |S_i| >= 2, union = [k]
    std::function<void(int, u32, const Rational&)> rec =
        [&](int n, u32 uni, const Rational& prod) {
          if (n >= 1 && uni == (1u << k) - 1)
            total += prod / Rational((unsigned long)factorial(n));
          if (n == k) return;
          for (u32 S : sets) {
            Rational w = wtrunc(S);
            if (w == 0) continue;
            rec(n + 1, uni | S, prod * w);
          }
        };
    rec(0, 0, Rational(1));
  }
  return total / Rational((unsigned long)(1ull << k));
}

std::vector<std::vector<Rational>> coefficient_polynomials(
    const Rational& lambda, const Rational& p, int order) {
  if (order < 2) throw ConfigError("coefficient_polynomials: order >= 2");
  std::vector<std::vector<Rational>> out;
  for (int i = 1; i < order; ++i) {
    int nodes_needed = 2 * i - 1;
    // d = 4 is the smallest dimension where the closure cap is vacuous for
    // the polymer sizes involved; the engine enumerates up to d = 6.
    std::vector<int> nodes;
    for (int d = 4; d <= 6 && (int)nodes.size() < nodes_needed; ++d)
      nodes.push_back(d);
    if ((int)nodes.size() < nodes_needed)
      throw ConfigError(
          "coefficient_polynomials: insufficient enumerable d values for "
          "order " +
          std::to_string(order));
    std::vector<Rational> ys;
    for (int d : nodes) {
      ModelParams mp;
      mp.d = d;
      mp.k = 1;
      mp.lambda = lambda;
      mp.p = p;
      ClusterEnumOptions opt;
      opt.max_total_size = i;
      opt.size_exact = true;
      Rational slice =
          cluster_weight_sum(d, DefectVector::all_even(1), mp, opt);
      Rational norm = Rational((unsigned long)(1ull << d)) * qdp::pow(alpha_int(1, lambda, p),
                                                     (unsigned long)(i * d));
      ys.push_back(slice / norm);
    }
    // exact Lagrange interpolation, assembled in the monomial basis
    int m = (int)nodes.size();
    std::vector<Rational> coeffs(m, Rational(0));
    for (int j = 0; j < m; ++j) {
      std::vector<Rational> basis{Rational(1)};
      Rational denom(1);
      for (int l = 0; l < m; ++l) {
        if (l == j) continue;
        std::vector<Rational> next(basis.size() + 1, Rational(0));
        for (size_t t = 0; t < basis.size(); ++t) {
          next[t + 1] += basis[t];
          next[t] -= basis[t] * Rational(nodes[l]);
        }
        basis = std::move(next);
        denom *= Rational(nodes[j] - nodes[l]);
      }
      for (size_t t = 0; t < basis.size(); ++t)
        coeffs[t] += ys[j] * basis[t] / denom;
    }
    while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    out.push_back(std::move(coeffs));
  }
  return out;
}

double cluster_tail_diagnostic(const ModelParams& mp,
                               const DefectVector& defects, int order) {
  double total = 0;
  ClusterEnumOptions opt;
  opt.max_total_size = order;
  for_each_cluster_term(mp.d, defects, mp, opt, [&](const ClusterTerm& t) {
    double w = std::abs(to_double(t.weight())) * (double)t.ordered_count;
    total += w * std::exp(t.total_size * std::pow((double)mp.d, -1.5));
  });
  double norm = std::exp2((double)mp.d) *
                std::pow(to_double(alpha_int(1, mp.lambda, mp.p)), mp.d);
  return total / norm;
}

std::string cluster_report_json(const ModelParams& mp,
                                const DefectVector& defects, int order) {
  std::map<int, std::pair<u64, Rational>> by_size;
  ClusterEnumOptions opt;
  opt.max_total_size = order;
  Rational total = 0;
  for_each_cluster_term(mp.d, defects, mp, opt, [&](const ClusterTerm& t) {
    auto& slot = by_size[t.total_size];
    slot.first += t.ordered_count;
    Rational w = Rational((unsigned long)t.ordered_count) * t.weight();
    slot.second += w;
    total += w;
  });
  nlohmann::json j;
  j["order"] = order;
  j["defects"] = defects.to_string();
  auto& terms = j["terms"] = nlohmann::json::array();
  for (const auto& [size, agg] : by_size)
    terms.push_back({{"size", size},
                     {"count", agg.first},
                     {"weight_sum", qdp::to_string(agg.second)}});
  j["total"] = qdp::to_string(total);
  j["total_double"] = to_double(total);
  return j.dump();
}

}  // namespace qdp
