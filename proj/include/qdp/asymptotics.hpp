#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdp/rational.hpp"

namespace qdp {

// Numeric alpha algebra: alpha_x = 1 - p(1 - e^{-cx}) with c = log(1+lambda)
// coincides with alpha_ell = (1 + ((1+lambda)^ell - 1)(1-p)) / (1+lambda)^ell
// at integer x.
struct AlphaParams {
  double lambda = 1.0;
  double p = 1.0;
  double c() const { return std::log1p(lambda); }
  double alpha(double x) const;
  double dalpha(double x) const;   // d/dx alpha_x
  double f(double x) const;        // (2 alpha_x)^{1/x}
};

double alpha_real(double x, const AlphaParams& ap);  // errors on x <= 0

// Unique minimizer x* of f for p > 1/2 (root of x alpha' - alpha log(2 alpha));
// std::nullopt for p <= 1/2 where f is strictly decreasing.
std::optional<double> x_star(const AlphaParams& ap);

// Formula evaluation report. Reconstruction contract:
//   value = 2^{leading_log2} * exp(sum of corrections),
// with the displayed O(.) magnitude (constant 1) reported separately and
// never folded in. `details` and `flags` are informational only.
struct FormulaReport {
  std::string formula_id;
  double leading_log2 = 0;
  std::vector<std::pair<std::string, double>> corrections;
  double error_term_magnitude = 0;
  std::vector<std::pair<std::string, double>> details;
  std::vector<std::pair<std::string, bool>> flags;

  double value_log2() const;
  std::string to_json() const;
};

// Exact rational pieces shared by identity checks.
Rational a_coefficient_exact(const Rational& lambda, const Rational& p);
Rational a_coefficient_unit_fugacity(const Rational& p);  // lambda = 1 form
Rational sigma_sq_exact(int d, const Rational& lambda, const Rational& p);
// Threshold p* = (1+lambda)^2 / (2 lambda (2+lambda)).
Rational p_star_exact(const Rational& lambda);

// E Z(Q_{d,p},lambda): leading factor 2 (1+lambda)^{2^{d-1}}, corrections per
// order (1 or 2), error term O(d^4 lambda^3 2^d alpha_1^{3d}) with constant 1.
FormulaReport expectation_formula(int d, double lambda, double p, int order);

// E Z^k / (E Z)^k moment-ratio display; value carried in leading_log2.
FormulaReport moment_ratio_formula(int d, double lambda, double p, int k);

// k-th normalized central moment display and sigma^2.
FormulaReport central_moment_formula(int d, double lambda, double p, int k);

// Fluctuation normalizer: center 2 e^{(2-p)^d/2} 2^{2^{d-1}},
// scale (2-3p/2)^{d/2} (lambda = 1 context).
std::pair<double, double> xd_normalizer(int d, double p);

// Classical displays: 2 sqrt(e) 2^{2^{d-1}} and 1 + (3d^2-3d-2)/(8 2^d).
FormulaReport ks_jp_values(int d);

// Convergence-condition evaluators g~, f, g = f + g~.
double gtilde(double n, int d, int k, double lambda, double p);
double kp_f(double n, int d);
double kp_g(double n, int d, int k, double lambda, double p);

}  // namespace qdp
