#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace thermoshift {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Natural log of a positive rational, stable for operands far outside
/// the double range.
double log_rational(const Rational& r);

double to_double(const Rational& r);

/// Parses "p", "p/q" or a plain decimal like "0.25" into a rational.
Rational parse_rational(const std::string& token);

/// Element of the real quadratic field Q(sqrt(d)), stored as a + b*sqrt(d)
/// with rational a, b and a squarefree-ish integer d >= 0.  d == 0 encodes a
/// plain rational.  Values with different nonzero radicals cannot be mixed;
/// callers check compatible() first and fall back to floating point.
class ExactNum {
 public:
  ExactNum() : a_(0), b_(0), d_(0) {}
  ExactNum(Rational a) : a_(std::move(a)), b_(0), d_(0) {}  // NOLINT(runtime/explicit)
  ExactNum(Rational a, Rational b, std::int64_t d);

  const Rational& rational_part() const { return a_; }
  const Rational& radical_part() const { return b_; }
  std::int64_t radical() const { return d_; }
  bool is_rational() const { return d_ == 0; }

  bool compatible(const ExactNum& o) const {
    return d_ == 0 || o.d_ == 0 || d_ == o.d_;
  }

  ExactNum operator+(const ExactNum& o) const;
  ExactNum operator-(const ExactNum& o) const;
  ExactNum operator*(const ExactNum& o) const;
  ExactNum operator/(const ExactNum& o) const;

  bool operator==(const ExactNum& o) const;
  bool operator!=(const ExactNum& o) const { return !(*this == o); }

  int sign() const;  // -1, 0, +1
  bool is_zero() const { return sign() == 0; }
  bool is_one() const;

  double value() const;       // double approximation
  double log_value() const;   // natural log; requires sign() > 0

  std::string str() const;

 private:
  Rational a_, b_;
  std::int64_t d_;
};

}  // namespace thermoshift
