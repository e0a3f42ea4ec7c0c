#include "qdp/exact.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <unordered_map>

#include "qdp/budget.hpp"
#include "qdp/parallel.hpp"

namespace qdp {

using u128 = unsigned __int128;

// ===========================================================================
// Branching weighted independent-set counter.
//
// W(mask) = sum over independent I subset mask of a^{|I|} b^{|mask \ I|},
// so Z(G[mask], a/b) = W(mask) / b^{|mask|}. Recursion:
//   W = b * W(mask-v) + a * b^{deg_mask(v)} * W(mask - N[v])
// with component factorization, isolated-vertex peeling and a memo keyed by
// the vertex mask. Values stay integral.
// ===========================================================================
namespace {

template <class V>
struct ValueOps;

template <>
struct ValueOps<u128> {
  static u128 from_ui(unsigned long x) { return x; }
  static u128 pow_base(unsigned long base, int e) {
    u128 r = 1;
    while (e--) r *= base;
    return r;
  }
};

template <>
struct ValueOps<BigInt> {
  static BigInt from_ui(unsigned long x) { return BigInt(x); }
  static BigInt pow_base(unsigned long base, int e) {
    return qdp::pow(BigInt(base), (unsigned long)e);
  }
};

// Open-addressed mask -> value memo. Key 0 never occurs: empty and
// single-vertex masks are resolved before memoization.
template <class V>
class MaskMap {
 public:
  MaskMap() : keys_(1024, 0), vals_(1024), shift_(54) {}
  V* find(u64 key) {
    size_t i = slot(key);
    while (keys_[i]) {
      if (keys_[i] == key) return &vals_[i];
      i = (i + 1) & (keys_.size() - 1);
    }
    return nullptr;
  }
  void insert(u64 key, V val) {
    if (++count_ * 10 > keys_.size() * 7) grow();
    size_t i = slot(key);
    while (keys_[i]) i = (i + 1) & (keys_.size() - 1);
    keys_[i] = key;
    vals_[i] = std::move(val);
  }

 private:
  size_t slot(u64 key) const {
    return (key * 0x9e3779b97f4a7c15ull) >> shift_;  // top bits mix best
  }
  void grow() {
    std::vector<u64> ok = std::move(keys_);
    std::vector<V> ov = std::move(vals_);
    keys_.assign(ok.size() * 2, 0);
    vals_.assign(ov.size() * 2, V{});
    shift_--;
    count_ = 0;
    for (size_t i = 0; i < ok.size(); ++i)
      if (ok[i]) insert(ok[i], std::move(ov[i]));
  }
  std::vector<u64> keys_;
  std::vector<V> vals_;
  int shift_;
  size_t count_ = 0;
};

template <class V>
class BranchCounter {
 public:
  BranchCounter(const std::vector<u64>& adj, unsigned long a, unsigned long b)
      : adj_(adj), a_(a), b_(b) {
    ab_pow_.resize(adj.size() + 1);
    b_pow_.resize(adj.size() + 1);
    ab_pow_[0] = b_pow_[0] = ValueOps<V>::from_ui(1);
    for (size_t i = 1; i < ab_pow_.size(); ++i) {
      ab_pow_[i] = ab_pow_[i - 1] * ValueOps<V>::from_ui(a + b);
      b_pow_[i] = b_pow_[i - 1] * ValueOps<V>::from_ui(b);
    }
  }

  V run(u64 mask) { return count(mask); }

 private:
  V count(u64 mask) {
    if (!mask) return ValueOps<V>::from_ui(1);
    if (++nodes_ > Budgets::get().max_counter_nodes)
      throw BudgetError("independent-set counter: node budget exceeded");
    // peel isolated vertices, locate a max-degree branch vertex
    u64 iso = 0;
    int best = -1, bestdeg = 0;
    for (u64 m = mask; m;) {
      int v = std::countr_zero(m);
      m &= m - 1;
      int deg = std::popcount(adj_[v] & mask);
      if (deg == 0)
        iso |= 1ull << v;
      else if (deg > bestdeg) {
        bestdeg = deg;
        best = v;
      }
    }
    if (iso) {
      V rest = count(mask & ~iso);
      return rest * ab_pow_[std::popcount(iso)];
    }
    if (V* hit = memo_.find(mask)) return *hit;
    // component factorization
    u64 comp = 0, frontier = 1ull << std::countr_zero(mask);
    while (frontier) {
      comp |= frontier;
      u64 nxt = 0;
      for (u64 f = frontier; f;) {
        int v = std::countr_zero(f);
        f &= f - 1;
        nxt |= adj_[v] & mask;
      }
      frontier = nxt & ~comp;
    }
    V r;
    if (comp != mask) {
      r = count(comp) * count(mask & ~comp);
    } else {
      V excl = count(mask & ~(1ull << best));
      V incl = count(mask & ~(adj_[best] | (1ull << best)));
      r = excl * ValueOps<V>::from_ui(b_) +
          incl * ValueOps<V>::from_ui(a_) * b_pow_[bestdeg];
    }
    memo_.insert(mask, r);
    return r;
  }

  const std::vector<u64>& adj_;
  unsigned long a_, b_;
  std::vector<V> ab_pow_, b_pow_;
  MaskMap<V> memo_;
  u64 nodes_ = 0;
};

BigInt bigint_from_u128(u128 x) {
  BigInt hi((unsigned long)(x >> 64));
  return (hi << 64) + BigInt((unsigned long)(x & ~0ull));
}

}  // namespace

BigInt is_count(const std::vector<u64>& adj, u64 mask) {
  BranchCounter<u128> c(adj, 1, 1);
  return bigint_from_u128(c.run(mask));
}

Rational weighted_is_partition(const std::vector<u64>& adj, u64 mask,
                               const Rational& lambda) {
  if (lambda <= 0) throw ConfigError("lambda must be positive");
  const BigInt& na = lambda.get_num();
  const BigInt& nb = lambda.get_den();
  int n = std::popcount(mask);
  if (na.fits_ulong_p() && nb.fits_ulong_p()) {
    unsigned long a = na.get_ui(), b = nb.get_ui();
    // u128 fast path when (a+b)^n cannot overflow
    double bits = n * std::log2((double)a + (double)b);
    if (bits < 126.0) {
      BranchCounter<u128> c(adj, a, b);
      Rational z(bigint_from_u128(c.run(mask)));
      return z / Rational(qdp::pow(BigInt(b), (unsigned long)n));
    }
    BranchCounter<BigInt> c(adj, a, b);
    return Rational(c.run(mask)) / Rational(qdp::pow(BigInt(b), (unsigned long)n));
  }
  throw BudgetError("lambda numerator/denominator must fit in 64 bits");
}

std::vector<u64> adjacency_masks(const Graph& g) {
  if (g.vertex_count() > 64)
    throw BudgetError("adjacency_masks: graph exceeds 64 vertices");
  std::vector<u64> adj(g.vertex_count(), 0);
  for (u64 v = 0; v < g.vertex_count(); ++v)
    g.for_each_neighbor(v, [&](u64 w) { adj[v] |= 1ull << w; });
  return adj;
}

// ===========================================================================
// Even-side indexing shared by the hypercube kernels.
// ===========================================================================
namespace {

struct EvenSideIndex {
  int d = 0, half = 0;
  std::vector<u32> evens, odds;       // index -> vertex id
  std::vector<int> odd_pos;           // vertex id -> odd index
  std::vector<std::array<int, 24>> even_nbrs;  // even index -> odd indices

  explicit EvenSideIndex(int d_) : d(d_), half(1 << (d_ - 1)) {
    odd_pos.assign(1ull << d, -1);
    for (u32 v = 0; v < (1u << d); ++v) {
      if (std::popcount(v) % 2 == 0)
        evens.push_back(v);
      else {
        odd_pos[v] = (int)odds.size();
        odds.push_back(v);
      }
    }
    even_nbrs.resize(half);
    for (int i = 0; i < half; ++i)
      for (int j = 0; j < d; ++j)
        even_nbrs[i][j] = odd_pos[evens[i] ^ (1u << j)];
  }
};

int kernel_segment_bits(int half) {
  int b = half - 10;
  if (b < 0) b = 0;
  if (b > 6) b = 6;
  return b;
}

struct KahanAcc {
  double sum = 0, comp = 0;
  void add(double x) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

// ===========================================================================
// Gray-code kernels.
// ===========================================================================

BigInt hypercube_is_count(int d, int workers) {
  if (d < 1 || d > 6) throw ConfigError("hypercube_is_count: d must be <= 6");
  EvenSideIndex ix(d);
  const int half = ix.half;
  const u64 total = 1ull << half;
  const int segbits = kernel_segment_bits(half);
  const u64 nseg = 1ull << segbits, seglen = total >> segbits;

  std::function<std::vector<u64>(u64)> job = [&](u64 s) {
    std::vector<u64> hist(half + 1, 0);
    std::vector<int> cnt(half, 0);
    int alive = half;
    u64 it0 = s * seglen;
    u64 gray = it0 ^ (it0 >> 1);
    for (u64 a = gray; a;) {  // initialize counters from segment start
      int u = std::countr_zero(a);
      a &= a - 1;
      for (int j = 0; j < d; ++j)
        if (cnt[ix.even_nbrs[u][j]]++ == 0) alive--;
    }
    hist[alive]++;
    for (u64 it = it0 + 1; it < it0 + seglen; ++it) {
      u64 g2 = it ^ (it >> 1);
      int u = std::countr_zero(g2 ^ gray);
      bool add = g2 & (g2 ^ gray);
      gray = g2;
      const auto& nu = ix.even_nbrs[u];
      if (add) {
        for (int j = 0; j < d; ++j)
          if (cnt[nu[j]]++ == 0) alive--;
      } else {
        for (int j = 0; j < d; ++j)
          if (--cnt[nu[j]] == 0) alive++;
      }
      hist[alive]++;
    }
    return hist;
  };
  auto hists = parallel_segments<std::vector<u64>>(nseg, workers, job);
  std::vector<u64> hist(half + 1, 0);
  for (const auto& h : hists)
    for (int z = 0; z <= half; ++z) hist[z] += h[z];
  BigInt out = 0;
  for (int z = 0; z <= half; ++z)
    if (hist[z]) out += BigInt(hist[z]) << z;
  return out;
}

Log2Real hypercube_postemp_logZ(const ModelParams& mp, int workers) {
  mp.validate();
  if (mp.d > 6) throw ConfigError("hypercube_postemp_logZ: d must be <= 6");
  const int d = mp.d;
  EvenSideIndex ix(d);
  const int half = ix.half;
  const u64 total = 1ull << half;
  const int segbits = kernel_segment_bits(half);
  const u64 nseg = 1ull << segbits, seglen = total >> segbits;

  // factor per odd vertex with c occupied neighbors: f[c] = 1 + lambda q^c.
  // Terms are scaled by the A = empty term f[0]^half; the scaled per-count
  // ratios (f[c]/f[0])^n stay in [0,1].
  const double lam = to_double(mp.lambda);
  const double q = to_double(mp.q());
  std::array<double, 7> f{};
  for (int c = 0; c <= d; ++c) f[c] = 1.0 + lam * std::pow(q, c);
  std::vector<std::array<double, 33>> tbl(d + 1);
  std::vector<double> lamp(half + 1);
  lamp[0] = 1;
  for (int n = 1; n <= half; ++n) lamp[n] = lamp[n - 1] * lam;
  for (int c = 0; c <= d; ++c) {
    tbl[c][0] = 1;
    for (int n = 1; n <= half; ++n) tbl[c][n] = tbl[c][n - 1] * (f[c] / f[0]);
  }

  std::function<double(u64)> job = [&](u64 s) {
    std::array<int, 33> cnt{};
    std::array<int, 7> hist{};
    hist[0] = half;
    int pcA = 0;
    u64 it0 = s * seglen;
    u64 gray = it0 ^ (it0 >> 1);
    for (u64 a = gray; a;) {
      int u = std::countr_zero(a);
      a &= a - 1;
      pcA++;
      for (int j = 0; j < d; ++j) {
        int v = ix.even_nbrs[u][j];
        hist[cnt[v]]--;
        hist[++cnt[v]]++;
      }
    }
    KahanAcc acc;
    auto term = [&] {
      double t = lamp[pcA];
      for (int c = 1; c <= d; ++c) t *= tbl[c][hist[c]];
      return t;
    };
    acc.add(term());
    for (u64 it = it0 + 1; it < it0 + seglen; ++it) {
      u64 g2 = it ^ (it >> 1);
      int u = std::countr_zero(g2 ^ gray);
      bool add = g2 & (g2 ^ gray);
      gray = g2;
      const auto& nu = ix.even_nbrs[u];
      if (add) {
        pcA++;
        for (int j = 0; j < d; ++j) {
          int v = nu[j];
          hist[cnt[v]]--;
          hist[++cnt[v]]++;
        }
      } else {
        pcA--;
        for (int j = 0; j < d; ++j) {
          int v = nu[j];
          hist[cnt[v]]--;
          hist[--cnt[v]]++;
        }
      }
      acc.add(term());
    }
    return acc.sum;
  };
  auto sums = parallel_segments<double>(nseg, workers, job);
  double total_sum = tree_reduce(sums, [](double a, double b) { return a + b; });
  double lg = half * qdp::log2(Rational(1) + mp.lambda) + std::log2(total_sum);
  return Log2Real::from_log2(lg);
}

Log2Real hardcore_on_sample_logZ(const SubgraphSample& s,
                                 const Rational& lambda, int workers) {
  const Graph& g = *s.base;
  if (g.hypercube_dim() < 1) throw ConfigError("sample must come from Q_d");
  const int d = g.hypercube_dim();
  if (d > 6) throw ConfigError("hardcore_on_sample_logZ: d must be <= 6");
  EvenSideIndex ix(d);
  const int half = ix.half;
  // retained neighbor lists, even index -> odd indices
  std::vector<std::vector<int>> nbr(half);
  {
    const auto& es = g.edges();
    for (size_t i = 0; i < es.size(); ++i)
      if (s.retained[i]) {
        u64 even_v = g.is_even(es[i].u) ? es[i].u : es[i].v;
        u64 odd_v = es[i].u ^ es[i].v ^ even_v;
        int ei = (int)(std::lower_bound(ix.evens.begin(), ix.evens.end(),
                                        (u32)even_v) -
                       ix.evens.begin());
        nbr[ei].push_back(ix.odd_pos[odd_v]);
      }
  }
  const u64 total = 1ull << half;
  const int segbits = kernel_segment_bits(half);
  const u64 nseg = 1ull << segbits, seglen = total >> segbits;
  const double lam = to_double(lambda);
  std::vector<double> lamp(half + 1), invopl(half + 1);
  lamp[0] = invopl[0] = 1;
  for (int n = 1; n <= half; ++n) {
    lamp[n] = lamp[n - 1] * lam;
    invopl[n] = invopl[n - 1] / (1.0 + lam);
  }

  std::function<double(u64)> job = [&](u64 seg) {
    std::array<int, 33> cnt{};
    int zc = half, pcA = 0;
    u64 it0 = seg * seglen;
    u64 gray = it0 ^ (it0 >> 1);
    for (u64 a = gray; a;) {
      int u = std::countr_zero(a);
      a &= a - 1;
      pcA++;
      for (int v : nbr[u])
        if (cnt[v]++ == 0) zc--;
    }
    KahanAcc acc;
    acc.add(lamp[pcA] * invopl[half - zc]);
    for (u64 it = it0 + 1; it < it0 + seglen; ++it) {
      u64 g2 = it ^ (it >> 1);
      int u = std::countr_zero(g2 ^ gray);
      bool add = g2 & (g2 ^ gray);
      gray = g2;
      if (add) {
        pcA++;
        for (int v : nbr[u])
          if (cnt[v]++ == 0) zc--;
      } else {
        pcA--;
        for (int v : nbr[u])
          if (--cnt[v] == 0) zc++;
      }
      acc.add(lamp[pcA] * invopl[half - zc]);
    }
    return acc.sum;
  };
  auto sums = parallel_segments<double>(nseg, workers, job);
  double total_sum = tree_reduce(sums, [](double a, double b) { return a + b; });
  double lg = half * qdp::log2(Rational(1) + lambda) + std::log2(total_sum);
  return Log2Real::from_log2(lg);
}

Rational hardcore_on_sample_exact(const SubgraphSample& s,
                                  const Rational& lambda) {
  auto adj = s.adjacency_masks();
  u64 full = s.base->vertex_count() == 64
                 ? ~0ull
                 : ((1ull << s.base->vertex_count()) - 1);
  return weighted_is_partition(adj, full, lambda);
}

// ===========================================================================
// Small-instance exact partition functions.
// ===========================================================================

BigInt count_independent_sets(const Graph& g, int workers) {
  if (g.hypercube_dim() >= 1) {
    if (g.hypercube_dim() > 6)
      throw BudgetError("count_independent_sets: hypercube cap is d=6");
    return hypercube_is_count(g.hypercube_dim(), workers);
  }
  auto adj = adjacency_masks(g);
  u64 full =
      g.vertex_count() == 64 ? ~0ull : ((1ull << g.vertex_count()) - 1);
  return is_count(adj, full);
}

Rational hardcore_partition(const Graph& g, const Rational& lambda) {
  if (g.hypercube_dim() > 6)
    throw BudgetError("hardcore_partition: hypercube cap is d=6");
  auto adj = adjacency_masks(g);
  u64 full =
      g.vertex_count() == 64 ? ~0ull : ((1ull << g.vertex_count()) - 1);
  return weighted_is_partition(adj, full, lambda);
}

namespace {

// Aggregated counts over subsets: cnt[s][m] = #{S : |S| = s, |E(S)| = m}.
// Parameter-free, so one enumeration serves any (lambda, p) evaluation.
std::vector<std::vector<u64>> subset_size_edge_counts(
    const std::vector<u64>& adj, int n, u64 max_edges) {
  std::vector<std::vector<u64>> cnt(n + 1, std::vector<u64>(max_edges + 1, 0));
  u64 mask = 0;
  int edges = 0;
  cnt[0][0]++;
  u64 gray = 0;
  for (u64 it = 1; it < (1ull << n); ++it) {
    u64 g2 = it ^ (it >> 1);
    int v = std::countr_zero(g2 ^ gray);
    bool add = g2 & (g2 ^ gray);
    gray = g2;
    if (add) {
      edges += std::popcount(adj[v] & mask);
      mask |= 1ull << v;
    } else {
      mask &= ~(1ull << v);
      edges -= std::popcount(adj[v] & mask);
    }
    cnt[std::popcount(mask)][edges]++;
  }
  return cnt;
}

}  // namespace

Rational evaluate_size_edge_counts(const std::vector<std::vector<u64>>& cnt,
                                   const Rational& lambda, const Rational& q) {
  size_t smax = cnt.size() - 1, mmax = cnt[0].size() - 1;
  std::vector<Rational> lp(smax + 1), qp(mmax + 1);
  lp[0] = qp[0] = Rational(1);
  for (size_t s = 1; s <= smax; ++s) lp[s] = lp[s - 1] * lambda;
  for (size_t m = 1; m <= mmax; ++m) qp[m] = qp[m - 1] * q;
  Rational z = 0;
  for (size_t s = 0; s <= smax; ++s)
    for (size_t m = 0; m <= mmax; ++m)
      if (cnt[s][m]) z += Rational((unsigned long)cnt[s][m]) * lp[s] * qp[m];
  return z;
}

Rational postemp_partition(const Graph& g, const ModelParams& mp) {
  mp.validate();
  if (g.hypercube_dim() >= 1 && g.vertex_count() > 24) {
    ModelParams k1 = mp;
    k1.k = 1;
    return ksystem_partition_bipartite(g, k1);
  }
  if (g.vertex_count() > 24)
    throw BudgetError("postemp_partition: explicit graphs capped at 24 vertices");
  auto adj = adjacency_masks(g);
  auto cnt = subset_size_edge_counts(adj, (int)g.vertex_count(), g.edge_count());
  return evaluate_size_edge_counts(cnt, mp.lambda, mp.q());
}

// --------------------------- Z_k: three routes ----------------------------

std::vector<std::vector<u64>> ksystem_tuple_counts(const Graph& g, int k) {
  const int n = (int)g.vertex_count();
  if (k * n > Budgets::get().max_enum_log2)
    throw BudgetError("ksystem tuples: 2^(k|V|) exceeds enumeration budget");
  if (g.edge_count() > 64)
    throw BudgetError("ksystem tuples: more than 64 edges");
  if (k > 3) throw BudgetError("ksystem tuples: k <= 3 supported");
  const auto& es = g.edges();
  const int ne = (int)es.size();
  // edge mask spanned by each subset
  std::vector<u64> adj = adjacency_masks(g);
  std::vector<u64> em(1ull << n, 0);
  std::vector<u64> edge_at(n, 0);  // v -> mask of edges incident to v
  for (int i = 0; i < ne; ++i) {
    edge_at[es[i].u] |= 1ull << i;
    edge_at[es[i].v] |= 1ull << i;
  }
  for (u64 S = 1; S < (1ull << n); ++S) {
    int v = std::countr_zero(S);
    u64 rest = S & (S - 1);
    u64 incident = 0;
    for (u64 a = adj[v] & rest; a;) {
      int w = std::countr_zero(a);
      a &= a - 1;
      incident |= edge_at[v] & edge_at[w];
    }
    em[S] = em[rest] | incident;
  }
  std::vector<int> pc(1ull << n);
  for (u64 S = 0; S < (1ull << n); ++S) pc[S] = std::popcount(S);

  const int stride = ne + 1;
  std::vector<u64> flat((k * n + 1) * stride, 0);
  const u64 N = 1ull << n;
  const u64* emp = em.data();
  const int* pcp = pc.data();
  u64* fl = flat.data();
  if (k == 1) {
    for (u64 a = 0; a < N; ++a)
      fl[pcp[a] * stride + std::popcount(emp[a])]++;
  } else if (k == 2) {
    for (u64 a = 0; a < N; ++a) {
      u64 ea = emp[a];
      u64* base = fl + pcp[a] * stride;
      for (u64 b = 0; b < N; ++b)
        base[pcp[b] * stride + std::popcount(ea | emp[b])]++;
    }
  } else {
    for (u64 a = 0; a < N; ++a)
      for (u64 b = 0; b < N; ++b) {
        u64 eab = emp[a] | emp[b];
        u64* base = fl + (pcp[a] + pcp[b]) * stride;
        for (u64 c = 0; c < N; ++c)
          base[pcp[c] * stride + std::popcount(eab | emp[c])]++;
      }
  }
  std::vector<std::vector<u64>> cnt(k * n + 1, std::vector<u64>(ne + 1, 0));
  for (int s = 0; s <= k * n; ++s)
    for (int m = 0; m <= ne; ++m) cnt[s][m] = flat[s * stride + m];
  return cnt;
}

Rational ksystem_partition_tuples(const Graph& g, const ModelParams& mp) {
  mp.validate();
  return evaluate_size_edge_counts(ksystem_tuple_counts(g, mp.k), mp.lambda,
                                   mp.q());
}

Rational ksystem_partition_bipartite(const Graph& g, const ModelParams& mp) {
  mp.validate();
  const int d = g.hypercube_dim();
  if (d < 1) throw ConfigError("ksystem bipartite: hypercube only");
  const int k = mp.k;
  const int half = 1 << (d - 1);
  if (k * half > Budgets::get().max_exact_enum_log2)
    throw BudgetError("ksystem bipartite: 2^(k 2^(d-1)) exceeds exact budget");
  if (k > 3) throw BudgetError("ksystem bipartite: k <= 3 supported");
  EvenSideIndex ix(d);

  const BigInt la = mp.lambda.get_num(), lb = mp.lambda.get_den();
  const BigInt qu = mp.q().get_num(), qw = mp.q().get_den();
  if (!la.fits_ulong_p() || !lb.fits_ulong_p() || !qu.fits_ulong_p() ||
      !qw.fits_ulong_p())
    throw BudgetError("ksystem bipartite: lambda/p components must fit 64 bits");

  // Integerized odd-vertex factor, indexed by the k neighborhood-overlap
  // masks: F'[t_1..t_k] = sum_b la^{|b|} lb^{k-|b|} qu^{e} qw^{d-e} with
  // e = |union over chosen t_i|. The common denominator (lb^k qw^d)^half is
  // divided out at the end.
  const int tbits = d;
  const u64 findex = 1ull << (tbits * k);
  std::vector<BigInt> fmpz(findex);
  std::vector<u64> fu64(findex, 0);
  bool fits_u64 = true;
  {
    std::vector<BigInt> lap(k + 1), lbp(k + 1), qup(d + 1), qwp(d + 1);
    lap[0] = lbp[0] = qup[0] = qwp[0] = 1;
    for (int i = 1; i <= k; ++i) {
      lap[i] = lap[i - 1] * la;
      lbp[i] = lbp[i - 1] * lb;
    }
    for (int i = 1; i <= d; ++i) {
      qup[i] = qup[i - 1] * qu;
      qwp[i] = qwp[i - 1] * qw;
    }
    for (u64 idx = 0; idx < findex; ++idx) {
      BigInt f = 0;
      for (u32 b = 0; b < (1u << k); ++b) {
        u64 uni = 0;
        for (int i = 0; i < k; ++i)
          if (b >> i & 1) uni |= (idx >> (i * tbits)) & ((1ull << tbits) - 1);
        int e = std::popcount(uni);
        f += lap[std::popcount(b)] * lbp[k - std::popcount(b)] * qup[e] *
             qwp[d - e];
      }
      fmpz[idx] = f;
      if (f.fits_ulong_p())
        fu64[idx] = f.get_ui();
      else
        fits_u64 = false;
    }
  }
  // per odd vertex: lookup from an even-side subset to its overlap mask
  std::vector<std::vector<u64>> lut(half, std::vector<u64>(1ull << half, 0));
  for (int oi = 0; oi < half; ++oi) {
    u32 ov = ix.odds[oi];
    u64 nbr_even_idx = 0;  // even-index mask of N(odd vertex)
    for (int j = 0; j < d; ++j) {
      u32 ev = ov ^ (1u << j);
      int ei = (int)(std::lower_bound(ix.evens.begin(), ix.evens.end(), ev) -
                     ix.evens.begin());
      nbr_even_idx |= 1ull << ei;
    }
    for (u64 A = 0; A < (1ull << half); ++A) {
      u64 t = 0;
      u64 rel = A & nbr_even_idx;
      int bit = 0;
      for (int j = 0; j < half; ++j)
        if (nbr_even_idx >> j & 1) {
          if (rel >> j & 1) t |= 1ull << bit;
          bit++;
        }
      lut[oi][A] = t;
    }
  }

  const int S = k * half;
  std::vector<BigInt> bucket(S + 1, BigInt(0));
  // u128 product fast path: half factors each < 2^maxbits
  double maxf = 0;
  for (u64 i = 0; i < findex; ++i)
    maxf = std::max(maxf, mpz_get_d(fmpz[i].get_mpz_t()));
  bool u128_ok = fits_u64 && half * std::log2(maxf) < 120.0;

  std::vector<u64> A(k, 0);
  std::vector<u128> acc128(S + 1, 0);
  auto flush = [&](int s) {
    if (acc128[s]) {
      bucket[s] += bigint_from_u128(acc128[s]);
      acc128[s] = 0;
    }
  };
  const u64 tuples = 1ull << (half * k);
  for (u64 code = 0;; ++code) {
    for (int i = 0; i < k; ++i)
      A[i] = (code >> (i * half)) & ((1ull << half) - 1);
    int s = 0;
    for (int i = 0; i < k; ++i) s += std::popcount(A[i]);
    if (u128_ok) {
      u128 prod = 1;
      for (int oi = 0; oi < half; ++oi) {
        u64 idx = 0;
        for (int i = 0; i < k; ++i) idx |= lut[oi][A[i]] << (i * tbits);
        prod *= fu64[idx];
      }
      if (acc128[s] >> 120) flush(s);
      acc128[s] += prod;
    } else {
      BigInt prod = 1;
      for (int oi = 0; oi < half; ++oi) {
        u64 idx = 0;
        for (int i = 0; i < k; ++i) idx |= lut[oi][A[i]] << (i * tbits);
        prod *= fmpz[idx];
      }
      bucket[s] += prod;
    }
    if (code + 1 == tuples) break;
  }
  for (int s = 0; s <= S; ++s) flush(s);

  BigInt num = 0;
  std::vector<BigInt> lap(S + 1), lbp(S + 1);
  lap[0] = lbp[0] = 1;
  for (int i = 1; i <= S; ++i) {
    lap[i] = lap[i - 1] * la;
    lbp[i] = lbp[i - 1] * lb;
  }
  for (int s = 0; s <= S; ++s) num += bucket[s] * lap[s] * lbp[S - s];
  BigInt per_vertex_den =
      qdp::pow(BigInt(qw), (unsigned long)d) * qdp::pow(BigInt(lb), (unsigned long)k);
  BigInt den = lbp[S] * qdp::pow(per_vertex_den, (unsigned long)half);
  Rational z(num);
  z /= Rational(den);
  return z;
}

std::vector<std::vector<BigInt>> ksystem_edge_expectation_buckets(
    const Graph& g, int k) {
  const auto& es = g.edges();
  const int ne = (int)es.size();
  const int n = (int)g.vertex_count();
  if (ne > 16) throw BudgetError("edge expectation: more than 16 edges");
  if (n > 16) throw BudgetError("edge expectation: more than 16 vertices");
  if (k > 3) throw BudgetError("edge expectation: k <= 3 supported");

  // bucket[m] = integer lambda-polynomial sum of Z(omega,lambda)^k over
  // retained sets omega with |omega| = m.
  std::vector<std::vector<BigInt>> bucket(ne + 1,
                                          std::vector<BigInt>(k * n + 1, 0));
  std::vector<u64> adj(n), c(n + 1), powk(k * n + 1);
  std::vector<char> indep(1ull << n);
  for (u64 omega = 0; omega < (1ull << ne); ++omega) {
    std::fill(adj.begin(), adj.end(), 0);
    for (u64 o = omega; o;) {
      int i = std::countr_zero(o);
      o &= o - 1;
      adj[es[i].u] |= 1ull << es[i].v;
      adj[es[i].v] |= 1ull << es[i].u;
    }
    // independence polynomial coefficients of (V, omega)
    std::fill(c.begin(), c.end(), 0);
    indep[0] = 1;
    c[0] = 1;
    for (u64 Smask = 1; Smask < (1ull << n); ++Smask) {
      int v = std::countr_zero(Smask);
      u64 rest = Smask & (Smask - 1);
      indep[Smask] = indep[rest] && !(adj[v] & rest);
      if (indep[Smask]) c[std::popcount(Smask)]++;
    }
    // k-th power by convolution (coefficients stay well under 2^63 here:
    // Z(omega,1) <= 2^16 so any product of three is <= 2^48)
    std::fill(powk.begin(), powk.end(), 0);
    if (k == 1) {
      for (int i = 0; i <= n; ++i) powk[i] = c[i];
    } else {
      std::vector<u64> sq(2 * n + 1, 0);
      for (int i = 0; i <= n; ++i)
        if (c[i])
          for (int j = 0; j <= n; ++j) sq[i + j] += c[i] * c[j];
      if (k == 2) {
        for (int i = 0; i <= 2 * n; ++i) powk[i] = sq[i];
      } else {
        for (int i = 0; i <= 2 * n; ++i)
          if (sq[i])
            for (int j = 0; j <= n; ++j)
              if (c[j]) powk[i + j] += sq[i] * c[j];
      }
    }
    auto& row = bucket[std::popcount(omega)];
    for (int i = 0; i <= k * n; ++i)
      if (powk[i]) row[i] += (unsigned long)powk[i];
  }
  return bucket;
}

Rational evaluate_edge_expectation_buckets(
    const std::vector<std::vector<BigInt>>& bucket, const Rational& lambda,
    const Rational& p) {
  const int ne = (int)bucket.size() - 1;
  const int maxdeg = (int)bucket[0].size() - 1;
  Rational q = Rational(1) - p;
  Rational z = 0;
  std::vector<Rational> pp(ne + 1), qp(ne + 1), lp(maxdeg + 1);
  pp[0] = qp[0] = lp[0] = Rational(1);
  for (int i = 1; i <= ne; ++i) {
    pp[i] = pp[i - 1] * p;
    qp[i] = qp[i - 1] * q;
  }
  for (int i = 1; i <= maxdeg; ++i) lp[i] = lp[i - 1] * lambda;
  for (int m = 0; m <= ne; ++m) {
    Rational inner = 0;
    for (int i = 0; i <= maxdeg; ++i)
      if (bucket[m][i] != 0) inner += Rational(bucket[m][i]) * lp[i];
    z += pp[m] * qp[ne - m] * inner;
  }
  return z;
}

Rational ksystem_partition_edge_expectation(const Graph& g,
                                            const ModelParams& mp) {
  mp.validate();
  return evaluate_edge_expectation_buckets(
      ksystem_edge_expectation_buckets(g, mp.k), mp.lambda, mp.p);
}

Rational ksystem_partition(const Graph& g, const ModelParams& mp) {
  if (g.hypercube_dim() >= 1 &&
      mp.k * (1 << (g.hypercube_dim() - 1)) <=
          Budgets::get().max_exact_enum_log2)
    return ksystem_partition_bipartite(g, mp);
  return ksystem_partition_tuples(g, mp);
}

std::vector<u64> independence_counts_masks(const std::vector<u64>& adj, int n) {
  std::vector<u64> c(n + 1, 0);
  std::vector<char> indep(1ull << n);
  indep[0] = 1;
  c[0] = 1;
  for (u64 S = 1; S < (1ull << n); ++S) {
    int v = std::countr_zero(S);
    u64 rest = S & (S - 1);
    indep[S] = indep[rest] && !(adj[v] & rest);
    if (indep[S]) c[std::popcount(S)]++;
  }
  return c;
}

}  // namespace qdp
