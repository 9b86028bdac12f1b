#pragma once

#include <limits>
#include <optional>

#include "thermoshift/exact.hpp"

namespace thermoshift {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(double a, double b);

/// A non-negative quantity tracked in the log domain as an interval
/// [log_lo, log_hi], together with its exact value when every input was
/// exact.  Interval ends realize the spec's "for each choice of x in [u]"
/// quantifier; exact values make the rational-mode identities literal.
class Weight {
 public:
  Weight() : lo_(kNegInf), hi_(kNegInf) {}

  static Weight zero() { return Weight(); }
  static Weight one() { return exact(ExactNum(Rational(1))); }
  static Weight exact(ExactNum v);
  static Weight log_point(double v) { return log_interval(v, v); }
  static Weight log_interval(double lo, double hi);

  bool is_zero() const { return hi_ == kNegInf; }
  bool has_exact() const { return exact_.has_value(); }
  const ExactNum& exact_value() const { return *exact_; }

  double log_lo() const { return lo_; }
  double log_hi() const { return hi_; }
  double log_mid() const { return is_zero() ? kNegInf : (lo_ + hi_) / 2; }
  double width() const { return is_zero() ? 0.0 : hi_ - lo_; }

  Weight operator*(const Weight& o) const;
  Weight operator/(const Weight& o) const;  // ratio interval; o must be nonzero
  Weight& operator+=(const Weight& o);
  Weight operator+(const Weight& o) const {
    Weight r = *this;
    r += o;
    return r;
  }

  /// Exact equality when both sides are exact, else interval equality.
  bool same_value(const Weight& o) const;

 private:
  double lo_, hi_;
  std::optional<ExactNum> exact_;
};

}  // namespace thermoshift
