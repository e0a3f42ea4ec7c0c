#pragma once

#include <cmath>
#include <limits>

#include "qdp/rational.hpp"

namespace qdp {

// Non-negative real carried as log2(value), with an explicit zero state.
// Partition-function magnitudes like 2^(2^(d-1)) make any fixed-width linear
// representation useless; all kernels that face such values report through
// this type.
class Log2Real {
 public:
  Log2Real() = default;  // zero
  static Log2Real from_log2(double lg) { return Log2Real(lg, false); }
  static Log2Real from_double(double v) {
    if (v < 0) throw ConfigError("Log2Real: negative value");
    return v == 0 ? Log2Real() : Log2Real(std::log2(v), false);
  }
  static Log2Real from_rational(const Rational& r) {
    if (r < 0) throw ConfigError("Log2Real: negative value");
    return r == 0 ? Log2Real() : Log2Real(qdp::log2(r), false);
  }
  static Log2Real from_bigint(const BigInt& z) {
    if (z < 0) throw ConfigError("Log2Real: negative value");
    return z == 0 ? Log2Real() : Log2Real(qdp::log2(z), false);
  }

  bool is_zero() const { return zero_; }
  double log2_value() const { return lg_; }  // -inf when zero
  double to_double() const { return zero_ ? 0.0 : std::exp2(lg_); }

  friend Log2Real operator*(const Log2Real& a, const Log2Real& b) {
    if (a.zero_ || b.zero_) return {};
    return from_log2(a.lg_ + b.lg_);
  }
  friend Log2Real operator/(const Log2Real& a, const Log2Real& b) {
    if (b.zero_) throw ConfigError("Log2Real: division by zero");
    if (a.zero_) return {};
    return from_log2(a.lg_ - b.lg_);
  }
  friend Log2Real operator+(const Log2Real& a, const Log2Real& b) {
    if (a.zero_) return b;
    if (b.zero_) return a;
    double hi = a.lg_ > b.lg_ ? a.lg_ : b.lg_;
    double lo = a.lg_ > b.lg_ ? b.lg_ : a.lg_;
    return from_log2(hi + std::log2(1.0 + std::exp2(lo - hi)));
  }

  Log2Real pow(double e) const {
    if (zero_) return e == 0 ? from_log2(0.0) : Log2Real();
    return from_log2(lg_ * e);
  }

  // |a/b - 1|, infinity if exactly one side is zero.
  static double rel_diff(const Log2Real& a, const Log2Real& b) {
    if (a.zero_ && b.zero_) return 0.0;
    if (a.zero_ || b.zero_) return std::numeric_limits<double>::infinity();
    return std::abs(std::exp2(a.lg_ - b.lg_) - 1.0);
  }

 private:
  Log2Real(double lg, bool zero) : lg_(lg), zero_(zero) {}
  double lg_ = -std::numeric_limits<double>::infinity();
  bool zero_ = true;
};

}  // namespace qdp
