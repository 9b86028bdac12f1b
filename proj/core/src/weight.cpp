#include "thermoshift/weight.hpp"

#include <algorithm>
#include <cmath>

namespace thermoshift {

double log_sum_exp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

Weight Weight::exact(ExactNum v) {
  const int s = v.sign();
  if (s < 0) throw Error("negative weight");
  Weight w;
  if (s == 0) return w;  // zero
  w.lo_ = w.hi_ = v.log_value();
  w.exact_ = std::move(v);
  return w;
}

Weight Weight::log_interval(double lo, double hi) {
  if (lo > hi) throw Error("inverted weight interval");
  Weight w;
  w.lo_ = lo;
  w.hi_ = hi;
  return w;
}

Weight Weight::operator*(const Weight& o) const {
  if (is_zero() || o.is_zero()) return zero();
  if (exact_ && o.exact_ && exact_->compatible(*o.exact_))
    return exact(*exact_ * *o.exact_);
  return log_interval(lo_ + o.lo_, hi_ + o.hi_);
}

Weight Weight::operator/(const Weight& o) const {
  if (o.is_zero()) throw Error("division by zero weight");
  if (is_zero()) return zero();
  if (exact_ && o.exact_ && exact_->compatible(*o.exact_))
    return exact(*exact_ / *o.exact_);
  return log_interval(lo_ - o.hi_, hi_ - o.lo_);
}

Weight& Weight::operator+=(const Weight& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (exact_ && o.exact_ && exact_->compatible(*o.exact_)) {
    *this = exact(*exact_ + *o.exact_);
    return *this;
  }
  exact_.reset();
  lo_ = log_sum_exp(lo_, o.lo_);
  hi_ = log_sum_exp(hi_, o.hi_);
  return *this;
}

bool Weight::same_value(const Weight& o) const {
  if (exact_ && o.exact_) return *exact_ == *o.exact_;
  return lo_ == o.lo_ && hi_ == o.hi_;
}

}  // namespace thermoshift
