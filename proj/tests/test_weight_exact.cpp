#include <doctest.h>

#include <cmath>

#include "thermoshift/exact.hpp"
#include "thermoshift/weight.hpp"

using namespace thermoshift;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("7") == Rational(7));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK_THROWS_AS(parse_rational("abc"), Error);
}

TEST_CASE("log of extreme rationals") {
  Rational huge = 1;
  for (int i = 0; i < 1000; ++i) huge *= 2;
  CHECK(log_rational(huge) == doctest::Approx(1000 * std::log(2.0)));
  CHECK(log_rational(Rational(1) / huge) ==
        doctest::Approx(-1000 * std::log(2.0)));
}

TEST_CASE("quadratic field arithmetic") {
  // golden ratio (1 + sqrt 5) / 2 satisfies x^2 = x + 1
  const ExactNum phi(Rational(1, 2), Rational(1, 2), 5);
  const ExactNum one{Rational(1)};
  CHECK(phi * phi == phi + one);
  CHECK((phi - phi).is_zero());
  CHECK((phi / phi).is_one());
  CHECK(phi.sign() == 1);
  // conjugate (1 - sqrt 5) / 2 is negative
  const ExactNum conj(Rational(1, 2), Rational(-1, 2), 5);
  CHECK(conj.sign() == -1);
  CHECK((phi * conj) == ExactNum(Rational(-1)));
  CHECK(phi.value() == doctest::Approx(1.6180339887498949));
  CHECK(phi.log_value() == doctest::Approx(std::log(1.6180339887498949)));
}

TEST_CASE("radical compatibility") {
  const ExactNum r2(Rational(0), Rational(1), 2);
  const ExactNum r5(Rational(0), Rational(1), 5);
  const ExactNum q{Rational(3)};
  CHECK(r2.compatible(q));
  CHECK(q.compatible(r5));
  CHECK_FALSE(r2.compatible(r5));
  CHECK((r2 * r2) == ExactNum(Rational(2)));
}

TEST_CASE("exact weights multiply and divide exactly") {
  const Weight a = Weight::exact(ExactNum(Rational(2, 3)));
  const Weight b = Weight::exact(ExactNum(Rational(3, 2)));
  const Weight p = a * b;
  REQUIRE(p.has_exact());
  CHECK(p.exact_value().is_one());
  CHECK(p.log_lo() == doctest::Approx(0.0));
  const Weight q = a / a;
  REQUIRE(q.has_exact());
  CHECK(q.exact_value().is_one());
  CHECK(q.width() == 0.0);
}

TEST_CASE("interval weights propagate widths") {
  const Weight a = Weight::log_interval(-1.0, -0.5);
  const Weight b = Weight::log_interval(0.25, 0.75);
  const Weight p = a * b;
  CHECK(p.log_lo() == doctest::Approx(-0.75));
  CHECK(p.log_hi() == doctest::Approx(0.25));
  CHECK_FALSE(p.has_exact());
  const Weight r = a / b;
  CHECK(r.log_lo() == doctest::Approx(-1.75));
  CHECK(r.log_hi() == doctest::Approx(-0.75));
}

TEST_CASE("weight sums are log-sum-exp intervals") {
  const Weight a = Weight::log_point(std::log(0.25));
  const Weight b = Weight::log_point(std::log(0.75));
  Weight s = a;
  s += b;
  CHECK(s.log_lo() == doctest::Approx(0.0));
  CHECK(s.log_hi() == doctest::Approx(0.0));

  const Weight ea = Weight::exact(ExactNum(Rational(1, 4)));
  const Weight eb = Weight::exact(ExactNum(Rational(3, 4)));
  const Weight es = ea + eb;
  REQUIRE(es.has_exact());
  CHECK(es.exact_value().is_one());
}

TEST_CASE("zero weight is absorbing for sums") {
  const Weight z = Weight::zero();
  CHECK(z.is_zero());
  const Weight w = Weight::log_point(1.5);
  Weight s = z;
  s += w;
  CHECK(s.log_lo() == doctest::Approx(1.5));
  CHECK((w * z).is_zero());
}

TEST_CASE("log_sum_exp handles infinities and magnitudes") {
  CHECK(log_sum_exp(0.0, kNegInf) == 0.0);
  CHECK(log_sum_exp(kNegInf, kNegInf) == kNegInf);
  CHECK(log_sum_exp(1000.0, 1000.0) ==
        doctest::Approx(1000.0 + std::log(2.0)));
  CHECK(log_sum_exp(-1000.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("same_value distinguishes exact from interval equality") {
  const Weight a = Weight::exact(ExactNum(Rational(1, 3)));
  const Weight b = Weight::exact(ExactNum(Rational(1, 3)));
  const Weight c = Weight::exact(ExactNum(Rational(1, 4)));
  CHECK(a.same_value(b));
  CHECK_FALSE(a.same_value(c));
}
