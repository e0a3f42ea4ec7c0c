#include "qdp/mc.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

#include "qdp/asymptotics.hpp"
#include "qdp/budget.hpp"
#include "qdp/exact.hpp"
#include "qdp/parallel.hpp"
#include "qdp/sample.hpp"

namespace qdp {

namespace {

double ipow(double x, int e) {
  double r = 1;
  while (e--) r *= x;
  return r;
}

double binom_d(int n, int k) {
  double r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

}  // namespace

void MomentAccumulator::add(double x) {
  MomentAccumulator single;
  single.n_ = 1;
  single.mean_ = x;
  *this = merged(*this, single);
}

MomentAccumulator MomentAccumulator::merged(const MomentAccumulator& a,
                                            const MomentAccumulator& b) {
  if (a.n_ == 0) return b;
  if (b.n_ == 0) return a;
  MomentAccumulator out;
  const double na = (double)a.n_, nb = (double)b.n_;
  const double n = na + nb;
  const double delta = b.mean_ - a.mean_;
  out.n_ = a.n_ + b.n_;
  out.mean_ = a.mean_ + delta * nb / n;
  // general pairwise update for sum (x-mean)^p, p = 2..6
  for (int p = 2; p <= 6; ++p) {
    double m = a.m_[p] + b.m_[p];
    for (int j = 1; j <= p - 2; ++j) {
      double term = binom_d(p, j) * (ipow(-nb * delta / n, j) * a.m_[p - j] +
                                     ipow(na * delta / n, j) * b.m_[p - j]);
      m += term;
    }
    double edge = ipow(na * nb * delta / n, p) *
                  (1.0 / ipow(nb, p - 1) - ipow(-1.0 / na, p - 1));
    out.m_[p] = m + edge;
  }
  return out;
}

double MomentAccumulator::central(int p) const {
  if (p < 2 || p > 6) throw ConfigError("central moment order must be 2..6");
  return n_ ? m_[p] / (double)n_ : 0.0;
}

double MomentAccumulator::variance_unbiased() const {
  return n_ > 1 ? m_[2] / (double)(n_ - 1) : 0.0;
}

double MomentAccumulator::skewness() const {
  double v = central(2);
  return v > 0 ? central(3) / std::pow(v, 1.5) : 0.0;
}

double MomentAccumulator::excess_kurtosis() const {
  double v = central(2);
  return v > 0 ? central(4) / (v * v) - 3.0 : 0.0;
}

// ---------------------------------------------------------------------------
// MC drivers. Samples are split into fixed blocks; per-block accumulators are
// combined by a deterministic pairwise tree, so worker count cannot change
// any reported digit.
// ---------------------------------------------------------------------------
namespace {

constexpr u64 kBlock = 256;

struct BlockStats {
  MomentAccumulator y, xd;
  std::vector<double> xd_samples;
};

}  // namespace

MomentEstimates run_mc(const ModelParams& mp, u64 samples, u64 seed,
                       const std::string& reference, int workers) {
  mp.validate();
  if (mp.d > 6) throw ConfigError("run_mc: d <= 6 required");
  if (samples <= 1) throw ConfigError("run_mc: need at least 2 samples");
  if (reference != "formula" && reference != "exact")
    throw ConfigError("run_mc: reference must be 'formula' or 'exact'");

  MomentEstimates est;
  est.d = mp.d;
  est.lambda = mp.lambda;
  est.p = mp.p;
  est.seed = seed;
  est.sample_count = samples;
  est.reference = reference;
  if (reference == "exact") {
    // true E Z = Z(Q_d, lambda, beta): exact rational kernel through d = 5,
    // float Gray-code kernel at d = 6
    if (mp.d <= 5) {
      ModelParams k1 = mp;
      k1.k = 1;
      est.reference_log2 =
          qdp::log2(ksystem_partition_bipartite(Graph::hypercube(mp.d), k1));
    } else {
      est.reference_log2 = hypercube_postemp_logZ(mp, workers).log2_value();
    }
  } else {
    est.reference_log2 =
        expectation_formula(mp.d, to_double(mp.lambda), to_double(mp.p), 1)
            .value_log2();
  }

  // X_d uses the fluctuation normalizer's center and scale, not the
  // requested reference
  const bool lambda_is_one = mp.lambda == 1;
  double xd_center_log2 = 0, xd_scale_log2 = 0;
  if (lambda_is_one) {
    auto [c, s] = xd_normalizer(mp.d, to_double(mp.p));
    est.xd_valid = true;
    xd_center_log2 = c;
    xd_scale_log2 = s;
  }

  Graph g = Graph::hypercube(mp.d);
  g.edges();  // materialize the canonical edge list once

  const u64 nblocks = (samples + kBlock - 1) / kBlock;
  std::function<BlockStats(u64)> job = [&](u64 b) {
    BlockStats bs;
    u64 lo = b * kBlock, hi = std::min(samples, lo + kBlock);
    for (u64 i = lo; i < hi; ++i) {
      auto s = sample_subgraph(g, mp.p, seed, i);
      Rational z = hardcore_on_sample_exact(s, mp.lambda);
      double y = std::exp2(qdp::log2(z) - est.reference_log2);
      bs.y.add(y);
      if (lambda_is_one) {
        double yc = std::exp2(qdp::log2(z) - xd_center_log2);
        double xd = (yc - 1.0) * std::exp2(-xd_scale_log2);
        bs.xd.add(xd);
        bs.xd_samples.push_back(xd);
      }
    }
    return bs;
  };
  auto blocks = parallel_segments<BlockStats>(nblocks, workers, job);
  BlockStats total = tree_reduce(std::move(blocks), [](BlockStats a, BlockStats b) {
    BlockStats out;
    out.y = MomentAccumulator::merged(a.y, b.y);
    out.xd = MomentAccumulator::merged(a.xd, b.xd);
    out.xd_samples = std::move(a.xd_samples);
    out.xd_samples.insert(out.xd_samples.end(), b.xd_samples.begin(),
                          b.xd_samples.end());
    return out;
  });

  const auto& acc = total.y;
  est.mean_y = acc.mean();
  est.var_y = acc.variance_unbiased();
  for (int p = 2; p <= 6; ++p) est.central_y[p] = acc.central(p);
  const double n = (double)samples;
  est.ci_mean_halfwidth = 1.96 * std::sqrt(acc.central(2) / n);
  double var_of_var =
      (acc.central(4) - acc.central(2) * acc.central(2)) / n;  // delta method
  est.ci_var_halfwidth = 1.96 * std::sqrt(std::max(0.0, var_of_var));
  est.degenerate = acc.central(2) <= 0;
  est.skewness = acc.skewness();
  est.excess_kurtosis = acc.excess_kurtosis();
  est.ci_skew_halfwidth = 1.96 * std::sqrt(6.0 / n);
  est.ci_kurt_halfwidth = 1.96 * std::sqrt(24.0 / n);
  if (lambda_is_one) {
    est.xd_mean = total.xd.mean();
    est.xd_sd = std::sqrt(total.xd.variance_unbiased());
    auto& xs = total.xd_samples;
    std::sort(xs.begin(), xs.end());
    const double qs[5] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (int i = 0; i < 5; ++i) {
      size_t idx = std::min(xs.size() - 1, (size_t)(qs[i] * (double)xs.size()));
      est.xd_quantiles[i] = xs[idx];
    }
  }
  return est;
}

WarmupEstimates warmup_statistic(const ModelParams& mp, int K, u64 samples,
                                 u64 seed, int workers) {
  mp.validate();
  if (mp.d > 6) throw ConfigError("warmup_statistic: d <= 6 required");
  if (K < 0 || K > 4) throw BudgetError("warmup_statistic: K <= 4");
  Graph g = Graph::hypercube(mp.d);
  g.edges();
  auto bp = *g.bipartition();
  auto evens = bp.first.to_vector();
  const int half = (int)evens.size();

  const u64 nblocks = (samples + kBlock - 1) / kBlock;
  using Accs = std::vector<MomentAccumulator>;  // k = 0..K, then total S
  std::function<Accs(u64)> job = [&](u64 b) {
    Accs accs(K + 2);
    u64 lo = b * kBlock, hi = std::min(samples, lo + kBlock);
    for (u64 i = lo; i < hi; ++i) {
      auto s = sample_subgraph(g, mp.p, seed, i);
      // degrees of even vertices in the sampled graph
      auto adj = s.adjacency_masks();
      // elementary symmetric polynomials of x_v = 2^{-deg(v)}, exact
      std::vector<Rational> e(K + 1, Rational(0));
      e[0] = 1;
      for (int vi = 0; vi < half; ++vi) {
        Rational x =
            Rational(1) / Rational((unsigned long)(1ull << std::popcount(adj[evens[vi]])));
        for (int k = std::min(vi + 1, K); k >= 1; --k) e[k] += e[k - 1] * x;
      }
      Rational total = 0;
      for (int k = 0; k <= K; ++k) {
        accs[k].add(to_double(e[k]));
        total += e[k];
      }
      accs[K + 1].add(to_double(total));
    }
    return accs;
  };
  auto blocks = parallel_segments<Accs>(nblocks, workers, job);
  Accs total = tree_reduce(std::move(blocks), [&](Accs a, Accs b) {
    Accs out(a.size());
    for (size_t i = 0; i < a.size(); ++i)
      out[i] = MomentAccumulator::merged(a[i], b[i]);
    return out;
  });

  WarmupEstimates est;
  est.d = mp.d;
  est.K = K;
  est.p = mp.p;
  est.seed = seed;
  est.sample_count = samples;
  double total_expected = 0;
  for (int k = 0; k <= K; ++k) {
    WarmupEstimates::PerK pk;
    pk.k = k;
    pk.mean = total[k].mean();
    pk.sd = std::sqrt(total[k].variance_unbiased());
    pk.ci_halfwidth = 1.96 * pk.sd / std::sqrt((double)samples);
    // E S_k = binom(n,k) (1 - p/2)^{kd}
    pk.expected = binom_d(half, k) *
                  std::pow(1.0 - to_double(mp.p) / 2.0, (double)k * mp.d);
    total_expected += pk.expected;
    est.per_k.push_back(pk);
  }
  WarmupEstimates::PerK tot;
  tot.k = -1;
  tot.mean = total[K + 1].mean();
  tot.sd = std::sqrt(total[K + 1].variance_unbiased());
  tot.ci_halfwidth = 1.96 * tot.sd / std::sqrt((double)samples);
  tot.expected = total_expected;
  est.per_k.push_back(tot);
  return est;
}

NormalitySummary normality_probe(const ModelParams& mp, u64 samples, u64 seed,
                                 int workers) {
  auto est = run_mc(mp, samples, seed, "formula", workers);
  NormalitySummary s;
  s.sample_count = samples;
  s.degenerate = est.degenerate;
  // CLT regime flag: p -> 1 side, above the lambda-dependent threshold
  s.p_in_regime =
      to_double(mp.p) >= to_double(p_star_exact(mp.lambda)) &&
      to_double(mp.p) >= 0.9;
  s.skewness = est.skewness;
  s.excess_kurtosis = est.excess_kurtosis;
  s.ci_skew_halfwidth = est.ci_skew_halfwidth;
  s.ci_kurt_halfwidth = est.ci_kurt_halfwidth;
  return s;
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------
std::string MomentEstimates::to_json() const {
  nlohmann::json j;
  j["params"] = {{"d", d},
                 {"lambda", qdp::to_string(lambda)},
                 {"p", qdp::to_string(p)},
                 {"seed", seed},
                 {"samples", sample_count},
                 {"reference", reference}};
  j["reference_log2"] = reference_log2;
  j["mean_y"] = mean_y;
  j["var_y"] = var_y;
  j["central_y"] = {{"2", central_y[2]},
                    {"3", central_y[3]},
                    {"4", central_y[4]},
                    {"5", central_y[5]},
                    {"6", central_y[6]}};
  j["ci_mean_halfwidth"] = ci_mean_halfwidth;
  j["ci_var_halfwidth"] = ci_var_halfwidth;
  j["skewness"] = skewness;
  j["excess_kurtosis"] = excess_kurtosis;
  j["ci_skew_halfwidth"] = ci_skew_halfwidth;
  j["ci_kurt_halfwidth"] = ci_kurt_halfwidth;
  j["degenerate"] = degenerate;
  if (xd_valid) {
    j["xd"] = {{"mean", xd_mean},
               {"sd", xd_sd},
               {"q05", xd_quantiles[0]},
               {"q25", xd_quantiles[1]},
               {"q50", xd_quantiles[2]},
               {"q75", xd_quantiles[3]},
               {"q95", xd_quantiles[4]}};
  }
  return j.dump();
}

std::string WarmupEstimates::to_json() const {
  nlohmann::json j;
  j["params"] = {{"d", d},
                 {"K", K},
                 {"p", qdp::to_string(p)},
                 {"seed", seed},
                 {"samples", sample_count}};
  auto& arr = j["statistics"] = nlohmann::json::array();
  for (const auto& pk : per_k)
    arr.push_back({{"k", pk.k},
                   {"mean", pk.mean},
                   {"sd", pk.sd},
                   {"ci_halfwidth", pk.ci_halfwidth},
                   {"expected", pk.expected}});
  return j.dump();
}

std::string NormalitySummary::to_json() const {
  nlohmann::json j;
  j["samples"] = sample_count;
  j["degenerate"] = degenerate;
  j["p_in_regime"] = p_in_regime;
  j["skewness"] = skewness;
  j["excess_kurtosis"] = excess_kurtosis;
  j["ci_skew_halfwidth"] = ci_skew_halfwidth;
  j["ci_kurt_halfwidth"] = ci_kurt_halfwidth;
  return j.dump();
}

}  // namespace qdp
