#pragma once

#include <cmath>

#include "qdp/rational.hpp"

namespace qdp {

// Model parameters (d, k, lambda, p). All internal arithmetic uses (lambda, p)
// so that every small-instance computation stays rational; the inverse
// temperature enters only through p = 1 - e^{-beta} at the API boundary.
struct ModelParams {
  int d = 3;
  int k = 1;
  Rational lambda = Rational(1);
  Rational p = Rational(1);

  Rational q() const { return Rational(1) - p; }  // e^{-beta}

  void validate() const {
    if (d < 1) throw ConfigError("d must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (lambda <= 0) throw ConfigError("lambda must be positive");
    if (p < 0 || p > 1) throw ConfigError("p must lie in [0,1]");
  }
};

inline double beta_of_p(double p) { return -std::log1p(-p); }
inline double p_of_beta(double beta) { return -std::expm1(-beta); }

}  // namespace qdp
