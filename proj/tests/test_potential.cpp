#include <doctest.h>

#include <cmath>
#include <memory>

#include "thermoshift/measure.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/subshift.hpp"

using namespace thermoshift;

namespace {

std::shared_ptr<const Subshift> golden_mean() {
  return std::make_shared<Subshift>(Subshift::from_matrix({{1, 1}, {1, 0}}));
}

std::shared_ptr<const Subshift> full2() {
  return std::make_shared<Subshift>(Subshift::from_forbidden(2, {}));
}

// brute-force partition sum through eval, log scale midpoints
double brute_log_z(const Potential& f, int n) {
  double s = kNegInf;
  for (const Word& u : f.shift().words(n))
    s = log_sum_exp(s, f.eval(u).w.log_mid());
  return s;
}

}  // namespace

TEST_CASE("zero potential partition sums count words") {
  auto x = golden_mean();
  auto f = AdditivePotential::zero(x);
  const Eval e = f->eval({0, 1, 0});
  CHECK(e.rep == 0.0);
  CHECK(e.w.width() == 0.0);
  CHECK(e.w.log_lo() == 0.0);
  const auto z4 = f->partition_sum(4);
  REQUIRE(z4.has_value());
  REQUIRE(z4->has_exact());
  CHECK(z4->exact_value() == ExactNum(Rational(8)));
}

TEST_CASE("probability weights give unit partition sums") {
  auto x = full2();
  std::map<Word, Weight> w;
  w[{0}] = Weight::exact(ExactNum(Rational(1, 2)));
  w[{1}] = Weight::exact(ExactNum(Rational(1, 2)));
  const AdditivePotential f(x, 1, std::move(w));
  for (int n = 1; n <= 10; ++n) {
    const auto z = f.partition_sum(n);
    REQUIRE(z.has_value());
    REQUIRE(z->has_exact());
    CHECK(z->exact_value().is_one());
  }
  CHECK(f.eval({0, 1, 1}).w.log_mid() == doctest::Approx(3 * std::log(0.5)));
}

TEST_CASE("additive closed form matches enumeration") {
  auto x = golden_mean();
  std::map<Word, Weight> w;
  w[{0}] = Weight::exact(ExactNum(Rational(1, 3)));
  w[{1}] = Weight::exact(ExactNum(Rational(2)));
  const AdditivePotential f(x, 1, std::move(w));
  for (int n = 1; n <= 8; ++n) {
    const auto z = f.partition_sum(n);
    REQUIRE(z.has_value());
    CHECK(z->log_mid() == doctest::Approx(brute_log_z(f, n)));
  }
}

TEST_CASE("diagonal cocycle reduces to symbol weights") {
  auto x = full2();
  const CocyclePotential f(x, {{{2, 0}, {0, 1}}, {{3, 0}, {0, 1}}}, 1.0,
                           MatrixNorm::MaxEntry);
  // max entry of diag(2^a 3^b, 1) is 2^#0 3^#1
  CHECK(f.eval({0, 0}).w.log_mid() == doctest::Approx(std::log(4.0)));
  CHECK(f.eval({0, 1}).w.log_mid() == doctest::Approx(std::log(6.0)));
  // Z_n = sum over words of 2^#0 3^#1 = 5^n
  for (int n = 1; n <= 6; ++n)
    CHECK(brute_log_z(f, n) == doctest::Approx(n * std::log(5.0)));
  const auto z = f.partition_sum(4);
  if (z) CHECK(z->log_mid() == doctest::Approx(4 * std::log(5.0)).epsilon(1e-9));
}

TEST_CASE("operator norm cocycle brackets the true norm") {
  auto x = full2();
  const CocyclePotential f(x, {{{2, 1}, {1, 1}}, {{1, 1}, {1, 2}}}, 1.0,
                           MatrixNorm::Operator2);
  // product over 01: [[2,1],[1,1]] * [[1,1],[1,2]] = [[3,4],[2,3]]
  // largest singular value: sqrt of the top eigenvalue of M^T M
  const double a = 13, b = 18, c = 25;  // M^T M = [[13,18],[18,25]]
  const double top = (a + c + std::sqrt((a - c) * (a - c) + 4 * b * b)) / 2;
  const double truth = 0.5 * std::log(top);
  const Eval e = f.eval({0, 1});
  CHECK(e.w.log_lo() <= truth + 1e-12);
  CHECK(e.w.log_hi() >= truth - 1e-12);
  CHECK(e.w.width() < 1e-6);
  // locally constant at its level: zero radius over the cylinder
  const VariationReport var = bounded_variation_check(f, 6);
  CHECK(var.max_radius < 1e-6);
  CHECK_FALSE(var.unbounded_trend);
}

TEST_CASE("constant sequence evaluates the quadratic") {
  auto x = full2();
  const ConstantSequencePotential f(x, {}, -1.0, 0.0, 0.0);
  CHECK(f.level_value(3) == -9.0);
  CHECK(f.eval({0, 1, 0}).rep == doctest::Approx(-9.0));
  const auto z = f.partition_sum(5);
  REQUIRE(z.has_value());
  CHECK(z->log_mid() == doctest::Approx(5 * std::log(2.0) - 25.0));
  // explicit values override the closed form
  const ConstantSequencePotential g(x, {-7.0}, -1.0, 0.0, 0.0);
  CHECK(g.level_value(1) == -7.0);
  CHECK(g.level_value(2) == -4.0);
}

TEST_CASE("measure potential sums to one") {
  auto x = full2();
  auto mu = MarkovMeasure::bernoulli(
      x, {ExactNum(Rational(1, 4)), ExactNum(Rational(3, 4))}, 8);
  const MeasurePotential f(x, std::move(mu));
  for (int n = 1; n <= 8; ++n) {
    const auto z = f.partition_sum(n);
    REQUIRE(z.has_value());
    REQUIRE(z->has_exact());
    CHECK(z->exact_value().is_one());
  }
}

TEST_CASE("structure defects match a brute-force oracle") {
  auto x = full2();
  const ConstantSequencePotential f(x, {}, -1.0, 0.0, 0.0);
  const auto [sub, sup] = structure_check(f, 4, 4);
  // log f_{m+n} - log f_m - log f_n = -2mn: subadditive with slack,
  // superadditive only up to 2 * 4 * 4
  CHECK(sub.defect == doctest::Approx(-2.0));
  CHECK(sub.constant == 0.0);
  CHECK_FALSE(sub.failed);
  CHECK(sup.defect == doctest::Approx(32.0));
  CHECK(sup.constant == doctest::Approx(32.0));
}

TEST_CASE("structure check on an additive family is tight") {
  auto x = golden_mean();
  std::map<Word, Weight> w;
  w[{0}] = Weight::exact(ExactNum(Rational(1, 2)));
  w[{1}] = Weight::exact(ExactNum(Rational(1, 3)));
  const AdditivePotential f(x, 1, std::move(w));
  const auto [sub, sup] = structure_check(f, 4, 4);
  CHECK(std::fabs(sub.defect) < 1e-9);
  CHECK(std::fabs(sup.defect) < 1e-9);
}

TEST_CASE("declared constants are audited") {
  auto x = full2();
  // +n^2 violates subadditivity by 2mn, so declaring it fails
  ConstantSequencePotential f(x, {}, 1.0, 0.0, 0.0);
  StructureDeclaration d;
  d.subadditive = true;
  d.constant = 0.0;
  f.declare_structure(d);
  const auto [sub, sup] = structure_check(f, 3, 3);
  CHECK(sub.declared);
  CHECK(sub.failed);
  CHECK_FALSE(sup.failed);
}

TEST_CASE("window two additive potential has level one variation") {
  auto x = full2();
  std::map<Word, Weight> w;
  w[{0, 0}] = Weight::exact(ExactNum(Rational(1, 5)));
  w[{0, 1}] = Weight::exact(ExactNum(Rational(1)));
  w[{1, 0}] = Weight::exact(ExactNum(Rational(1)));
  w[{1, 1}] = Weight::exact(ExactNum(Rational(5)));
  const AdditivePotential f(x, 2, std::move(w));
  // n sliding windows cross one symbol past the word, so every level keeps
  // exactly one free symbol: the radius is log 25 at each level
  const Eval e = f.eval({1, 1});
  CHECK(e.w.log_lo() == doctest::Approx(std::log(5.0)));
  CHECK(e.w.log_hi() == doctest::Approx(std::log(25.0)));
  const VariationReport var = bounded_variation_check(f, 5);
  REQUIRE(var.per_level.size() >= 2);
  CHECK(var.per_level[0] > 0.0);
  CHECK(var.per_level[1] == doctest::Approx(var.per_level[4]));
  CHECK_FALSE(var.unbounded_trend);
}
