#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>

#include "qdp/budget.hpp"

namespace qdp {

using BigInt = mpz_class;
using Rational = mpq_class;

inline Rational rat(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "num/den" or "num" (decimal digits, optional sign).
inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    Rational r;
    if (slash == std::string::npos) {
      r = Rational(s);
    } else {
      r = Rational(s.substr(0, slash) + "/" + s.substr(slash + 1));
    }
    r.canonicalize();
    return r;
  } catch (const std::invalid_argument&) {
    throw ConfigError("malformed rational: '" + s + "'");
  }
}

inline std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(mpq_numref(out.get_mpq_t()), mpq_numref(base.get_mpq_t()), e);
  mpz_pow_ui(mpq_denref(out.get_mpq_t()), mpq_denref(base.get_mpq_t()), e);
  return out;  // canonical because base is
}

inline BigInt pow(const BigInt& base, unsigned long e) {
  BigInt out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
  return out;
}

// log2 with ~1 ulp accuracy for positive big values.
inline double log2(const BigInt& z) {
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return (double)e + std::log2(m);
}

inline double log2(const Rational& r) {
  return log2(BigInt(r.get_num())) - log2(BigInt(r.get_den()));
}

inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace qdp
