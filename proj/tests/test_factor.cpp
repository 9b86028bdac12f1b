#include <doctest.h>

#include <cmath>
#include <memory>

#include "thermoshift/factor.hpp"
#include "thermoshift/measure.hpp"
#include "thermoshift/potential.hpp"

using namespace thermoshift;

namespace {

std::shared_ptr<const Subshift> full_shift(int k) {
  return std::make_shared<Subshift>(Subshift::from_forbidden(k, {}));
}

std::shared_ptr<const Subshift> golden_mean() {
  return std::make_shared<Subshift>(Subshift::from_matrix({{1, 1}, {1, 0}}));
}

std::shared_ptr<const FactorMap> three_to_two() {
  return std::make_shared<FactorMap>(full_shift(3), full_shift(2),
                                     std::vector<Symbol>{0, 0, 1}, 6);
}

}  // namespace

TEST_CASE("preimage counts of the collapsing map") {
  auto pi = three_to_two();
  // each 0 has two preimages, each 1 has one
  CHECK(pi->preimage_count({0, 0, 1}) == 4);
  CHECK(pi->preimage_count({1, 1}) == 1);
  for (int n = 1; n <= 12; ++n) {
    BigInt total = 0;
    for (const Word& y : pi->target().words(n))
      total += pi->preimage_count(y);
    BigInt expect = 1;
    for (int i = 0; i < n; ++i) expect *= 3;
    CHECK(total == expect);
  }
}

TEST_CASE("fibers enumerate what the count promises") {
  auto pi = three_to_two();
  const Word y = {0, 1, 0};
  const auto fib = pi->fiber(y);
  CHECK(BigInt(fib.size()) == pi->preimage_count(y));
  for (const Word& u : fib) CHECK(pi->apply(u) == y);
}

TEST_CASE("identity factor map is trivial") {
  auto x = full_shift(2);
  const FactorMap id(x, x, {0, 1}, 6);
  for (const Word& y : x->words(4)) CHECK(id.preimage_count(y) == 1);
  CHECK(id.apply({1, 0, 1}) == Word{1, 0, 1});
}

TEST_CASE("strict inclusions leave words outside the image") {
  // golden mean sits inside the full 2-shift symbol for symbol
  const FactorMap inc(golden_mean(), full_shift(2), {0, 1}, 4);
  CHECK(inc.in_image({0, 1, 0}));
  CHECK_FALSE(inc.in_image({1, 1}));
  CHECK(inc.preimage_count({1, 1}) == 0);
}

TEST_CASE("maps landing on forbidden words are rejected") {
  CHECK_THROWS_AS(FactorMap(full_shift(2), golden_mean(), {0, 1}, 4), Error);
  // wrong symbol range is also rejected
  CHECK_THROWS_AS(FactorMap(full_shift(3), full_shift(2), {0, 2, 1}, 4),
                  Error);
}

TEST_CASE("relative potential of the identity is the original") {
  auto x = full_shift(2);
  auto id = std::make_shared<FactorMap>(x, x, std::vector<Symbol>{0, 1}, 6);
  std::map<Word, Weight> w;
  w[{0}] = Weight::exact(ExactNum(Rational(1, 3)));
  w[{1}] = Weight::exact(ExactNum(Rational(2, 3)));
  auto g = std::make_shared<AdditivePotential>(x, 1, std::move(w));
  const RelativePotential rel(id, g);
  for (const Word& u : x->words(4)) {
    const Eval a = rel.eval(u);
    const Eval b = g->eval(u);
    CHECK(a.w.log_mid() == doctest::Approx(b.w.log_mid()));
  }
}

TEST_CASE("pushforward of the uniform bernoulli is the image bernoulli") {
  auto pi = three_to_two();
  auto src = pi->source_ptr();
  std::shared_ptr<const CylinderMeasure> mu = MarkovMeasure::bernoulli(
      src, std::vector<ExactNum>(3, ExactNum(Rational(1, 3))), 10);
  auto f = std::make_shared<MeasurePotential>(src, mu);
  const PushforwardPotential g(pi, f);
  // image measure: Bernoulli(2/3, 1/3)
  const std::vector<ExactNum> q = {ExactNum(Rational(2, 3)),
                                   ExactNum(Rational(1, 3))};
  for (const Word& y : pi->target().words(4)) {
    ExactNum expect{Rational(1)};
    for (Symbol a : y) expect = expect * q[a];
    const Eval e = g.eval(y);
    REQUIRE(e.w.has_exact());
    CHECK(e.w.exact_value() == expect);
  }
  const auto z = g.partition_sum(6);
  REQUIRE(z.has_value());
  REQUIRE(z->has_exact());
  CHECK(z->exact_value().is_one());
}

TEST_CASE("relative pressure of the zero potential counts the target") {
  auto pi = three_to_two();
  auto zero = AdditivePotential::zero(pi->target_ptr());
  const RelativePressureReport r =
      relative_pressure_check(pi, std::move(zero), 10);
  const double log2 = std::log(2.0);
  CHECK(r.f_bracket.lower <= log2 + 1e-9);
  CHECK(r.f_bracket.upper >= log2 - 1e-9);
  CHECK(r.g_bracket.lower <= log2 + 1e-9);
  CHECK(r.g_bracket.upper >= log2 - 1e-9);
  CHECK(r.overlap);
  CHECK(std::fabs(r.midpoint_gap) < 1e-6);
}

TEST_CASE("upper-only sweep of the relative sequence stays bounded") {
  auto pi = three_to_two();
  auto zero = AdditivePotential::zero(pi->target_ptr());
  const TheoremGeneralReport r = theorem_general_check(pi, std::move(zero), 4, 4);
  CHECK(r.right.verdict == Verdict::Bounded);
  CHECK(r.left.verdict == Verdict::Bounded);
  CHECK_FALSE(r.conclusion.empty());
}
