#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qdp/params.hpp"
#include "qdp/vertex_set.hpp"

namespace qdp {

// Streaming central-moment accumulator up to order 6, single pass and
// mergeable: combining two accumulators gives bit-identical results for a
// fixed combination tree, which the MC driver keys to the sample count (never
// the worker count).
class MomentAccumulator {
 public:
  void add(double x);
  static MomentAccumulator merged(const MomentAccumulator& a,
                                  const MomentAccumulator& b);

  u64 count() const { return n_; }
  double mean() const { return mean_; }
  // central moment E (x - mean)^p, p in 2..6
  double central(int p) const;
  double variance_unbiased() const;  // M2/(n-1)
  double skewness() const;
  double excess_kurtosis() const;

 private:
  u64 n_ = 0;
  double mean_ = 0;
  std::array<double, 7> m_{};  // m_[p] = sum (x - mean)^p for p = 2..6
};

struct MomentEstimates {
  // configuration
  int d = 0;
  Rational lambda, p;
  u64 seed = 0, sample_count = 0;
  std::string reference;  // "formula" | "exact"
  double reference_log2 = 0;

  // normalized variable Y = Z / 2^{reference_log2}
  double mean_y = 0, var_y = 0;
  std::array<double, 7> central_y{};  // [2..6]
  double ci_mean_halfwidth = 0;       // 95%, asymptotic normal
  double ci_var_halfwidth = 0;        // 95%, delta method
  double skewness = 0, excess_kurtosis = 0;
  double ci_skew_halfwidth = 0, ci_kurt_halfwidth = 0;  // normal approx
  bool degenerate = false;            // zero sample variance (e.g. p = 1)

  // X_d = (Y - 1) / scale, lambda = 1 context only
  bool xd_valid = false;
  double xd_mean = 0, xd_sd = 0;
  std::array<double, 5> xd_quantiles{};  // 5%, 25%, 50%, 75%, 95%

  std::string to_json() const;
};

MomentEstimates run_mc(const ModelParams& mp, u64 samples, u64 seed,
                       const std::string& reference, int workers);

// Warm-up statistic S_k = sum over even k-subsets of 2^{-sum of degrees};
// exact per sample, compared against binom(n,k)(1-p/2)^{kd}.
struct WarmupEstimates {
  int d = 0, K = 0;
  Rational p;
  u64 seed = 0, sample_count = 0;
  struct PerK {
    int k;
    double mean, sd, ci_halfwidth, expected;
  };
  std::vector<PerK> per_k;  // k = 0..K plus the total S as k = -1 entry
  std::string to_json() const;
};
WarmupEstimates warmup_statistic(const ModelParams& mp, int K, u64 samples,
                                 u64 seed, int workers);

struct NormalitySummary {
  u64 sample_count = 0;
  bool degenerate = false;
  bool p_in_regime = false;  // flagged: p -> 1 side of the CLT statement
  double skewness = 0, excess_kurtosis = 0;
  double ci_skew_halfwidth = 0, ci_kurt_halfwidth = 0;
  std::string to_json() const;
};
NormalitySummary normality_probe(const ModelParams& mp, u64 samples, u64 seed,
                                 int workers);

}  // namespace qdp
