#include "thermoshift/exact.hpp"

#include <cmath>
#include <sstream>

namespace thermoshift {

namespace mp = boost::multiprecision;

namespace {

double log_bigint(const BigInt& x) {
  if (x <= 0) throw Error("log of non-positive integer");
  if (x <= BigInt(1) << 52) return std::log(x.convert_to<double>());
  const unsigned bits = mp::msb(x);
  const unsigned shift = bits - 52;
  const BigInt mant = x >> shift;
  return std::log(mant.convert_to<double>()) + shift * std::log(2.0);
}

std::int64_t isqrt64(std::int64_t d) {
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(d)));
  while (r * r > d) --r;
  while ((r + 1) * (r + 1) <= d) ++r;
  return r;
}

}  // namespace

double log_rational(const Rational& r) {
  if (r <= 0) throw Error("log of non-positive rational");
  return log_bigint(mp::numerator(r)) - log_bigint(mp::denominator(r));
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

namespace {

// decimal only; a leading zero must not switch the base
BigInt parse_integer(const std::string& s, const std::string& token) {
  size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
  if (i == s.size()) throw Error("bad number '" + token + "'");
  BigInt v = 0;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9')
      throw Error("bad number '" + token + "'");
    v = v * 10 + (s[i] - '0');
  }
  return neg ? -v : v;
}

}  // namespace

Rational parse_rational(const std::string& token) {
  const auto slash = token.find('/');
  if (slash != std::string::npos) {
    const BigInt num = parse_integer(token.substr(0, slash), token);
    const BigInt den = parse_integer(token.substr(slash + 1), token);
    if (den == 0) throw Error("zero denominator in '" + token + "'");
    return Rational(num, den);
  }
  const auto dot = token.find('.');
  if (dot != std::string::npos) {
    const std::string digits = token.substr(0, dot) + token.substr(dot + 1);
    const auto frac_len = token.size() - dot - 1;
    BigInt den = 1;
    for (size_t i = 0; i < frac_len; ++i) den *= 10;
    return Rational(parse_integer(digits, token), den);
  }
  return Rational(parse_integer(token, token));
}

ExactNum::ExactNum(Rational a, Rational b, std::int64_t d)
    : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (d_ < 0) throw Error("negative radical");
  if (b_ == 0) {
    d_ = 0;
    return;
  }
  if (d_ == 0) {
    b_ = 0;
    return;
  }
  const std::int64_t r = isqrt64(d_);
  if (r * r == d_) {  // perfect square folds into the rational part
    a_ += b_ * r;
    b_ = 0;
    d_ = 0;
  }
}

ExactNum ExactNum::operator+(const ExactNum& o) const {
  if (!compatible(o)) throw Error("incompatible radicals");
  return ExactNum(a_ + o.a_, b_ + o.b_, d_ != 0 ? d_ : o.d_);
}

ExactNum ExactNum::operator-(const ExactNum& o) const {
  if (!compatible(o)) throw Error("incompatible radicals");
  return ExactNum(a_ - o.a_, b_ - o.b_, d_ != 0 ? d_ : o.d_);
}

ExactNum ExactNum::operator*(const ExactNum& o) const {
  if (!compatible(o)) throw Error("incompatible radicals");
  const std::int64_t d = d_ != 0 ? d_ : o.d_;
  return ExactNum(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, d);
}

ExactNum ExactNum::operator/(const ExactNum& o) const {
  if (!compatible(o)) throw Error("incompatible radicals");
  if (o.is_zero()) throw Error("exact division by zero");
  const std::int64_t d = d_ != 0 ? d_ : o.d_;
  // multiply by the conjugate of the denominator
  const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * d;
  if (norm == 0) throw Error("degenerate quadratic denominator");
  const ExactNum conj(o.a_, -o.b_, o.d_);
  ExactNum num = *this * conj;
  return ExactNum(num.a_ / norm, num.b_ / norm, d);
}

bool ExactNum::operator==(const ExactNum& o) const {
  if (!compatible(o)) return false;
  return a_ == o.a_ && b_ == o.b_;
}

int ExactNum::sign() const {
  const int sa = a_ == 0 ? 0 : (a_ > 0 ? 1 : -1);
  if (b_ == 0) return sa;
  const int sb = b_ > 0 ? 1 : -1;
  if (a_ == 0) return sb;
  if (sa == sb) return sa;
  // a and b*sqrt(d) compete: compare a^2 with b^2 d
  const Rational lhs = a_ * a_;
  const Rational rhs = b_ * b_ * d_;
  if (lhs == rhs) return 0;
  return lhs > rhs ? sa : sb;
}

bool ExactNum::is_one() const { return d_ == 0 && a_ == 1; }

double ExactNum::value() const {
  double v = to_double(a_);
  if (b_ != 0) v += to_double(b_) * std::sqrt(static_cast<double>(d_));
  return v;
}

double ExactNum::log_value() const {
  if (sign() <= 0) throw Error("log of non-positive exact value");
  if (b_ == 0) return log_rational(a_);
  // quadratic irrationals in this artifact stay well within double range
  return std::log(value());
}

std::string ExactNum::str() const {
  std::ostringstream os;
  os << a_;
  if (b_ != 0) os << (b_ > 0 ? "+" : "") << b_ << "*sqrt(" << d_ << ")";
  return os.str();
}

}  // namespace thermoshift
