#include "qdp/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>

#include "qdp/budget.hpp"

namespace qdp {

double AlphaParams::alpha(double x) const {
  return 1.0 - p * (1.0 - std::exp(-c() * x));
}

double AlphaParams::dalpha(double x) const {
  return -p * c() * std::exp(-c() * x);
}

double AlphaParams::f(double x) const {
  return std::pow(2.0 * alpha(x), 1.0 / x);
}

double alpha_real(double x, const AlphaParams& ap) {
  if (x <= 0) throw ConfigError("alpha: x > 0 required");
  return ap.alpha(x);
}

std::optional<double> x_star(const AlphaParams& ap) {
  if (ap.p <= 0 || ap.p >= 1) throw ConfigError("x_star: p in (0,1) required");
  if (ap.p <= 0.5) return std::nullopt;  // f strictly decreasing
  // g(x) = x alpha'_x - alpha_x log(2 alpha_x) increases strictly from
  // -log 2 to -(1-p) log(2-2p) > 0, so bisection is safe.
  auto g = [&](double x) {
    double a = ap.alpha(x);
    return x * ap.dalpha(x) - a * std::log(2.0 * a);
  };
  double lo = 1e-9, hi = 1.0;
  while (g(hi) <= 0) {
    hi *= 2;
    if (hi > 1e12) throw ConfigError("x_star: no sign change found");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    (g(mid) <= 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double FormulaReport::value_log2() const {
  double lg = leading_log2;
  for (const auto& [name, c] : corrections) lg += c * std::log2(std::exp(1.0));
  return lg;
}

std::string FormulaReport::to_json() const {
  nlohmann::json j;
  j["formula_id"] = formula_id;
  j["leading_log2"] = leading_log2;
  auto& cs = j["corrections"] = nlohmann::json::object();
  for (const auto& [name, c] : corrections) cs[name] = c;
  j["error_term_magnitude"] = error_term_magnitude;
  auto& ds = j["details"] = nlohmann::json::object();
  for (const auto& [name, v] : details) ds[name] = v;
  auto& fs = j["flags"] = nlohmann::json::object();
  for (const auto& [name, v] : flags) fs[name] = v;
  j["value_log2"] = value_log2();
  return j.dump();
}

Rational a_coefficient_exact(const Rational& lambda, const Rational& p) {
  Rational q = Rational(1) - p;
  Rational num = qdp::pow(Rational(1) + lambda, 2) *
                 qdp::pow(Rational(1) + lambda * q * q, 2);
  Rational den = 4 * qdp::pow(Rational(1) + lambda * q, 4);
  return num / den - rat(1, 4);
}

Rational a_coefficient_unit_fugacity(const Rational& p) {
  Rational q = Rational(1) - p;
  return qdp::pow(Rational(1) + q * q, 2) / qdp::pow(Rational(2) - p, 4) -
         rat(1, 4);
}

Rational sigma_sq_exact(int d, const Rational& lambda, const Rational& p) {
  Rational q = Rational(1) - p;
  Rational a1 = (Rational(1) + lambda * q) / (Rational(1) + lambda);
  Rational a2 = (Rational(1) + (qdp::pow(Rational(1) + lambda, 2) - 1) * q) /
                qdp::pow(Rational(1) + lambda, 2);
  Rational var_factor = p * q * lambda * lambda * Rational(d) /
                            qdp::pow(Rational(1) + lambda * q, 2) -
                        Rational(1);
  return rat(1, 4) * Rational((unsigned long)(1ull << d)) * lambda * lambda *
         (qdp::pow(a2, d) + var_factor * qdp::pow(a1, 2 * d));
}

Rational p_star_exact(const Rational& lambda) {
  return qdp::pow(Rational(1) + lambda, 2) /
         (2 * lambda * (Rational(2) + lambda));
}

namespace {

double alpha_int_d(int ell, double lambda, double p) {
  double opl = std::pow(1.0 + lambda, ell);
  return (1.0 + (opl - 1.0) * (1.0 - p)) / opl;
}

double binom2(double x) { return x * (x - 1) / 2; }

double dfact(int k) {  // (k-1)!! for even k
  double f = 1;
  for (int i = k - 1; i > 1; i -= 2) f *= i;
  return f;
}

}  // namespace

FormulaReport expectation_formula(int d, double lambda, double p, int order) {
  if (order < 1 || order > 2)
    throw ConfigError("expectation_formula: order must be 1 or 2");
  FormulaReport r;
  r.formula_id = "expectation";
  double a1 = alpha_int_d(1, lambda, p);
  r.leading_log2 = 1.0 + std::ldexp(1.0, d - 1) * std::log2(1.0 + lambda);
  double c1 = 0.5 * lambda * std::pow(2.0 * a1, d);
  r.corrections.emplace_back("size1", c1);
  if (order >= 2) {
    double a = (1.0 + lambda) * (1.0 + lambda) *
                   std::pow(1.0 + lambda * (1 - p) * (1 - p), 2) /
                   (4.0 * std::pow(1.0 + lambda * (1 - p), 4)) -
               0.25;
    double c2 = (a * binom2(d) - 0.25) * lambda * lambda *
                std::pow(2.0 * a1 * a1, d);
    r.corrections.emplace_back("size2", c2);
    r.details.emplace_back("a", a);
  }
  r.error_term_magnitude = std::pow((double)d, 4) * std::pow(lambda, 3) *
                           std::pow(2.0 * a1 * a1 * a1, d);
  r.flags.emplace_back(
      "lambda_p_in_range",
      lambda * p >= std::log((double)d) / std::cbrt((double)d));
  return r;
}

FormulaReport moment_ratio_formula(int d, double lambda, double p, int k) {
  if (k < 2) throw ConfigError("moment_ratio_formula: k >= 2 required");
  FormulaReport r;
  r.formula_id = "moment_ratio";
  double a1 = alpha_int_d(1, lambda, p);
  double a2 = alpha_int_d(2, lambda, p);
  double q = 1.0 - p;
  double a_same =
      0.5 * lambda * lambda * (std::pow(2 * a2, d) - std::pow(2 * a1 * a1, d));
  double a_diff = 0.5 * d * p * q * std::pow(lambda, 4) /
                  ((1 + lambda * q) * (1 + lambda * q)) *
                  std::pow(2 * a1 * a1, d);
  // 2^{-k} sum_m binom(k,m) exp[(C(m,2)+C(k-m,2)) A_same + m(k-m) A_diff]
  double lse = -std::numeric_limits<double>::infinity();
  double binom = 1;
  for (int m = 0; m <= k; ++m) {
    double e = std::log(binom) + (binom2(m) + binom2(k - m)) * a_same +
               (double)m * (k - m) * a_diff;
    if (lse == -std::numeric_limits<double>::infinity())
      lse = e;
    else if (lse > e)
      lse = lse + std::log1p(std::exp(e - lse));
    else
      lse = e + std::log1p(std::exp(lse - e));
    binom = binom * (k - m) / (m + 1);
  }
  r.leading_log2 = (lse - k * std::log(2.0)) * std::log2(std::exp(1.0));
  r.details.emplace_back("A_same", a_same);
  r.details.emplace_back("A_diff", a_diff);
  double eps = k == 2 ? a1 * a2 : alpha_int_d(3, lambda, p);
  r.error_term_magnitude = std::pow(lambda, 3) * std::pow((double)d, 4) *
                           std::exp2((double)d) * std::pow(eps, d);
  r.flags.emplace_back(
      "lambda_p_in_range",
      lambda * p >= k * k * std::log((double)d) / std::cbrt((double)d));
  return r;
}

FormulaReport central_moment_formula(int d, double lambda, double p, int k) {
  if (k < 2) throw ConfigError("central_moment_formula: k >= 2 required");
  FormulaReport r;
  r.formula_id = "central_moment";
  double a1 = alpha_int_d(1, lambda, p);
  double a2 = alpha_int_d(2, lambda, p);
  double ak = alpha_int_d(k, lambda, p);
  double q = 1.0 - p;
  double sigma_sq =
      0.25 * lambda * lambda *
      (std::pow(2 * a2, d) +
       (p * q * lambda * lambda * d / ((1 + lambda * q) * (1 + lambda * q)) -
        1.0) *
           std::pow(2 * a1 * a1, d));
  double span_term = std::pow(lambda / 2, k) * std::pow(2 * ak, d);
  double gauss_term =
      k % 2 == 0 && sigma_sq > 0 ? std::pow(sigma_sq, k / 2.0) * dfact(k) : 0.0;
  double value = span_term + (k % 2 == 0 ? gauss_term : 0.0);
  r.leading_log2 = std::log2(value);
  r.details.emplace_back("sigma_sq", sigma_sq);
  r.details.emplace_back("span_term", span_term);
  r.details.emplace_back("gauss_term", gauss_term);
  double pstar = (1 + lambda) * (1 + lambda) / (2 * lambda * (2 + lambda));
  r.details.emplace_back("p_star", pstar);
  r.error_term_magnitude =
      std::max(sigma_sq > 0 ? std::pow(sigma_sq, k / 2.0) : 0.0,
               std::exp2((double)d) * std::pow(ak, d));
  r.flags.emplace_back("p_above_threshold", p >= pstar);
  return r;
}

std::pair<double, double> xd_normalizer(int d, double p) {
  double center_log2 = 1.0 +
                       0.5 * std::pow(2.0 - p, d) * std::log2(std::exp(1.0)) +
                       std::ldexp(1.0, d - 1);
  double base = 2.0 - 1.5 * p;
  if (base <= 0) throw ConfigError("xd_normalizer: 2 - 3p/2 must be positive");
  double scale_log2 = 0.5 * d * std::log2(base);
  return {center_log2, scale_log2};
}

FormulaReport ks_jp_values(int d) {
  FormulaReport r;
  r.formula_id = "ks_jp";
  r.leading_log2 =
      1.0 + 0.5 * std::log2(std::exp(1.0)) + std::ldexp(1.0, d - 1);
  double corr = (3.0 * d * d - 3.0 * d - 2.0) / (8.0 * std::exp2((double)d));
  r.details.emplace_back("jp_correction", corr);
  r.details.emplace_back("value_with_correction_log2",
                         r.leading_log2 + std::log2(1.0 + corr));
  r.error_term_magnitude = std::pow((double)d, 4) * std::exp2(-2.0 * (double)d);
  return r;
}

double gtilde(double n, int d, int k, double lambda, double p) {
  if (n < 1) throw ConfigError("gtilde: n >= 1 required");
  double alpha_tilde = std::pow(alpha_int_d(k, lambda, p), 1.0 / k);
  double log_inv = -std::log(alpha_tilde);
  if (n <= d / 10.0)
    return (d * n - 3 * n * n) * log_inv - 7 * n * std::log((double)d);
  if (n <= std::pow((double)d, 4)) return 0.05 * d * n * log_inv;
  return n * std::pow((double)d, -1.5);
}

double kp_f(double n, int d) { return n * std::pow((double)d, -1.5); }

double kp_g(double n, int d, int k, double lambda, double p) {
  return kp_f(n, d) + gtilde(n, d, k, lambda, p);
}

}  // namespace qdp
