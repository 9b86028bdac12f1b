// Acceptance gate: one line per criterion, nonzero exit when any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "thermoshift/balance.hpp"
#include "thermoshift/config.hpp"
#include "thermoshift/factor.hpp"
#include "thermoshift/measure.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/runner.hpp"
#include "thermoshift/subshift.hpp"

using namespace thermoshift;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Criterion {
  int id;
  std::string what;
  bool ok = true;
  std::vector<std::string> details;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void require(bool cond, const std::string& msg) {
    if (!cond) {
      ok = false;
      details.push_back(msg);
    }
  }
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
  void finish(double budget_s = 0.0) {
    const double t = seconds();
    if (budget_s > 0.0 && t > budget_s) {
      ok = false;
      details.push_back("runtime " + std::to_string(t) + "s over budget " +
                        std::to_string(budget_s) + "s");
    }
    std::printf("criterion %2d: %s  %-55s (%.2fs)\n", id, ok ? "PASS" : "FAIL",
                what.c_str(), t);
    for (const auto& d : details) std::printf("              - %s\n", d.c_str());
    if (!ok) ++failures;
  }
};

std::shared_ptr<const Subshift> golden_mean() {
  return std::make_shared<Subshift>(Subshift::from_matrix({{1, 1}, {1, 0}}));
}

std::shared_ptr<const Subshift> full_shift(int k) {
  return std::make_shared<Subshift>(Subshift::from_forbidden(k, {}));
}

std::shared_ptr<const Subshift> four_point() {
  return std::make_shared<Subshift>(Subshift::from_forbidden(
      3, {{0, 0}, {0, 2}, {1, 0}, {2, 1}, {2, 2}, {0, 1, 1}, {1, 1, 2}}));
}

std::shared_ptr<const CylinderMeasure> four_point_measure(int depth) {
  std::vector<PeriodicPoint> pts = {
      {{}, {0, 1, 2}}, {{}, {1, 2, 0}}, {{}, {2, 0, 1}}, {{}, {1}}};
  std::vector<ExactNum> w(4, ExactNum(Rational(1, 4)));
  return std::make_shared<AtomicMeasure>(four_point(), std::move(pts),
                                         std::move(w), depth);
}

std::shared_ptr<const Potential> self_potential(
    std::shared_ptr<const CylinderMeasure> mu) {
  auto x = mu->shift_ptr();
  return std::make_shared<MeasurePotential>(std::move(x), std::move(mu));
}

std::shared_ptr<const Potential> noncomm_cocycle() {
  return std::make_shared<CocyclePotential>(
      full_shift(2),
      std::vector<std::vector<std::vector<double>>>{{{2, 1}, {1, 1}},
                                                    {{1, 1}, {1, 2}}},
      1.0, MatrixNorm::Operator2);
}

void criterion_1() {
  Criterion c{1, "four-point example reproduced exactly"};
  auto mu = four_point_measure(8);
  auto f = self_potential(mu);
  for (const Side side : {Side::Right, Side::Left}) {
    const CheckReport r =
        balanced_check(*f, side, BalanceMode::TwoSided, 8, 8);
    c.require(r.exact_unit && r.empirical_C == 1.0,
              "balance ratios not exactly one");
  }
  const GibbsReport g = gibbs_verify(*mu, *f, 0.0, 8);
  c.require(g.exact_unit && g.c_lower == 1.0 && g.c_upper == 1.0,
            "gibbs constant not exactly one");
  const QMCertificate q = qm_check(*f, 3, 2);
  c.require(!q.present, "connecting words unexpectedly present");
  // the pair 01, 11 cannot be glued by any word of length <= 3
  auto x = mu->shift_ptr();
  bool joinable = false;
  for (int k = 0; k <= 3 && !joinable; ++k)
    for (const Word& w : x->words(k))
      if (x->allowable(concat(concat(Word{0, 1}, w), Word{1, 1})))
        joinable = true;
  c.require(!joinable, "witness pair unexpectedly joinable");
  c.require(!x->irreducible(), "shift should not be irreducible");
  const EntropyBracket h = entropy(*mu, 6);
  c.require(h.lower == 0.0 && h.upper == 0.0, "entropy bracket not [0, 0]");
  c.finish();
}

void criterion_2() {
  Criterion c{2, "tautology suite over five invariant measures"};
  std::vector<std::shared_ptr<const CylinderMeasure>> measures;
  auto f2 = full_shift(2);
  measures.push_back(MarkovMeasure::bernoulli(
      f2, {ExactNum(Rational(1, 2)), ExactNum(Rational(1, 2))}, 8));
  measures.push_back(MarkovMeasure::bernoulli(
      f2, {ExactNum(Rational(1, 4)), ExactNum(Rational(3, 4))}, 8));
  measures.push_back(std::make_shared<MarkovMeasure>(
      golden_mean(),
      std::vector<std::vector<ExactNum>>{
          {ExactNum(Rational(1, 2)), ExactNum(Rational(1, 2))},
          {ExactNum(Rational(1)), ExactNum(Rational(0))}},
      std::vector<ExactNum>{ExactNum(Rational(2, 3)), ExactNum(Rational(1, 3))},
      8));
  measures.push_back(MarkovMeasure::parry(golden_mean(), 8));
  measures.push_back(four_point_measure(8));
  for (const auto& mu : measures) {
    auto f = self_potential(mu);
    const GibbsReport g = gibbs_verify(*mu, *f, 0.0, 8);
    c.require(g.exact_unit && g.c_lower == 1.0 && g.c_upper == 1.0,
              mu->describe() + ": gibbs constants not exactly one");
    const CheckReport b =
        balanced_check(*f, Side::Right, BalanceMode::TwoSided, 6, 6);
    c.require(b.exact_unit && b.empirical_C == 1.0,
              mu->describe() + ": balance constant not exactly one");
  }
  c.finish(10.0);
}

void criterion_3() {
  Criterion c{3, "golden-mean pressure oracle at depth 40"};
  auto f = AdditivePotential::zero(golden_mean());
  const PartitionTable t = partition_sums(*f, 40);
  BigInt a = 1, b = 2;  // Z_1 = F_3, Z_2 = F_4 follow after the seed
  bool fib = t.at(1).has_exact() && t.at(1).exact_value() == ExactNum(Rational(2));
  for (int n = 2; n <= 40; ++n) {
    const BigInt z = a + b;
    fib = fib && t.at(n).has_exact() &&
          t.at(n).exact_value() == ExactNum(Rational(z));
    a = b;
    b = z;
  }
  c.require(fib, "partition sums break the Fibonacci recurrence");
  const PressureBracket p = pressure_bracket(*f, 40);
  const double log_phi = std::log((1.0 + std::sqrt(5.0)) / 2.0);
  c.require(p.lower <= log_phi && log_phi <= p.upper,
            "bracket misses log((1+sqrt 5)/2)");
  c.require(p.upper - p.lower <= 1e-6, "bracket wider than 1e-6");
  c.finish(5.0);
}

void criterion_4() {
  Criterion c{4, "quadratic counterexample detected"};
  auto x = full_shift(2);
  const ConstantSequencePotential f(x, {}, -1.0, 0.0, 0.0);
  const auto [sub, sup] = structure_check(f, 5, 5);
  c.require(sub.defect <= 0.0 && !sub.failed,
            "subadditivity not certified");
  const BsmReport r = bsm_check(f, 10);
  bool closed_form = !r.direct.cells.empty();
  for (const RatioCell& cell : r.direct.cells) {
    const double expect = 2.0 * cell.m * cell.n;
    if (std::fabs(cell.min_log - expect) > 1e-9 ||
        std::fabs(cell.max_log - expect) > 1e-9)
      closed_form = false;
  }
  c.require(closed_form, "direct ratios differ from e^{2mn}");
  c.require(r.direct.verdict == Verdict::TrendUnbounded,
            "bsm verdict not TREND-UNBOUNDED");
  const CheckReport b =
      balanced_check(f, Side::Right, BalanceMode::TwoSided, 6, 6);
  c.require(b.verdict == Verdict::TrendUnbounded,
            "balance verdict not TREND-UNBOUNDED");
  c.finish();
}

std::vector<std::pair<std::string, std::shared_ptr<const Potential>>>
shipped_potentials() {
  std::vector<std::pair<std::string, std::shared_ptr<const Potential>>> v;
  auto f2 = full_shift(2);
  v.emplace_back("bernoulli-half",
                 self_potential(MarkovMeasure::bernoulli(
                     f2, {ExactNum(Rational(1, 2)), ExactNum(Rational(1, 2))},
                     10)));
  v.emplace_back("bernoulli-skew",
                 self_potential(MarkovMeasure::bernoulli(
                     f2, {ExactNum(Rational(1, 4)), ExactNum(Rational(3, 4))},
                     10)));
  v.emplace_back("parry", self_potential(MarkovMeasure::parry(golden_mean(), 10)));
  v.emplace_back("four-point", self_potential(four_point_measure(10)));
  v.emplace_back("zero-golden", AdditivePotential::zero(golden_mean()));
  v.emplace_back("zero-full", AdditivePotential::zero(f2));
  v.emplace_back("cocycle", noncomm_cocycle());
  v.emplace_back("diag-cocycle",
                 std::make_shared<CocyclePotential>(
                     f2,
                     std::vector<std::vector<std::vector<double>>>{
                         {{2, 0}, {0, 1}}, {{3, 0}, {0, 1}}},
                     1.0, MatrixNorm::MaxEntry));
  return v;
}

void criterion_5() {
  Criterion c{5, "balance constant dominates the direct bsm ratios"};
  for (const auto& [name, f] : shipped_potentials()) {
    const int range = name.find("cocycle") != std::string::npos ? 6 : 8;
    const CheckReport b =
        balanced_check(*f, Side::Right, BalanceMode::TwoSided, range, range);
    const double log_c = std::log(b.empirical_C);
    const BsmReport r = bsm_check(*f, 2 * range);
    for (const RatioCell& cell : r.direct.cells) {
      if (cell.m > range || cell.n > range) continue;
      const bool inside = cell.min_log >= -log_c - 1e-9 &&
                          cell.max_log <= log_c + 1e-9;
      c.require(inside, name + ": bsm ratio at (" + std::to_string(cell.m) +
                            "," + std::to_string(cell.n) +
                            ") escapes [1/C, C]");
      if (!inside) break;
    }
  }
  c.finish();
}

void criterion_6() {
  Criterion c{6, "bms and key1 sub-checks agree in verdict"};
  auto pairs = shipped_potentials();
  pairs.emplace_back(
      "quadratic", std::make_shared<ConstantSequencePotential>(
                       full_shift(2), std::vector<double>{}, -1.0, 0.0, 0.0));
  for (const auto& [name, f] : pairs) {
    const BsmReport r = bsm_check(*f, 10);
    c.require(r.direct.verdict == r.key1.verdict,
              name + ": verdicts disagree (" +
                  verdict_str(r.direct.verdict) + " vs " +
                  verdict_str(r.key1.verdict) + ")");
  }
  c.finish();
}

void criterion_7() {
  Criterion c{7, "gibbs construction converges to the parry measure"};
  auto f = AdditivePotential::zero(golden_mean());
  const GibbsBuildResult r = gibbs_build(*f, 20, 8, 3);
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  const double pi0 = (5.0 + std::sqrt(5.0)) / 10.0;
  const double p00 = 1.0 / phi, p01 = 1.0 / (phi * phi), p10 = 1.0;
  const auto parry_mass = [&](const Word& u) {
    double m = u[0] == 0 ? pi0 : 1.0 - pi0;
    for (size_t i = 0; i + 1 < u.size(); ++i) {
      if (u[i] == 0) m *= u[i + 1] == 0 ? p00 : p01;
      else m *= u[i + 1] == 0 ? p10 : 0.0;
    }
    return m;
  };
  auto x = f->shift_ptr();
  for (int d = 1; d <= 3; ++d)
    for (const Word& u : x->words(d)) {
      const Weight m = r.measure->mass(u);
      const double got = m.is_zero() ? 0.0 : std::exp(m.log_mid());
      if (std::fabs(got - parry_mass(u)) > 1e-2)
        c.require(false, "mass of " + word_str(u) + " off by more than 1e-2");
    }
  c.require(r.invariance_defect <= 1e-3, "invariance defect above 1e-3");
  c.finish(10.0);
}

void criterion_8() {
  Criterion c{8, "factor-map identities for the 3-to-2 collapse"};
  auto pi = std::make_shared<FactorMap>(full_shift(3), full_shift(2),
                                        std::vector<Symbol>{0, 0, 1}, 6);
  bool counts = true;
  for (int n = 1; n <= 12; ++n) {
    BigInt total = 0;
    for (const Word& y : pi->target().words(n))
      total += pi->preimage_count(y);
    BigInt expect = 1;
    for (int i = 0; i < n; ++i) expect *= 3;
    counts = counts && total == expect;
  }
  c.require(counts, "sum of preimage counts differs from 3^n");
  auto zero = AdditivePotential::zero(pi->target_ptr());
  const RelativePressureReport rp = relative_pressure_check(pi, std::move(zero), 12);
  const double log2 = std::log(2.0);
  c.require(rp.f_bracket.lower <= log2 + 1e-9 &&
                rp.f_bracket.upper >= log2 - 1e-9,
            "relative bracket misses log 2");
  c.require(rp.g_bracket.lower <= log2 + 1e-9 &&
                rp.g_bracket.upper >= log2 - 1e-9,
            "target bracket misses log 2");
  c.require(rp.overlap, "brackets do not overlap");
  auto src = pi->source_ptr();
  auto f = self_potential(MarkovMeasure::bernoulli(
      src, std::vector<ExactNum>(3, ExactNum(Rational(1, 3))), 10));
  const PushforwardPotential g(pi, f);
  const std::vector<ExactNum> q = {ExactNum(Rational(2, 3)),
                                   ExactNum(Rational(1, 3))};
  bool image = true;
  for (int n = 1; n <= 10 && image; ++n)
    for (const Word& y : pi->target().words(n)) {
      ExactNum expect{Rational(1)};
      for (Symbol a : y) expect = expect * q[a];
      const Eval e = g.eval(y);
      if (!e.w.has_exact() || e.w.exact_value() != expect) {
        image = false;
        break;
      }
    }
  c.require(image, "pushforward differs from the image bernoulli");
  c.finish();
}

void criterion_9() {
  Criterion c{9, "cocycle proof constant dominates the observed one"};
  auto f = noncomm_cocycle();
  const QMCertificate qm = qm_check(*f, 2, 6);
  c.require(qm.present, "no quasi-multiplicativity certificate");
  c.require(std::isfinite(qm.d_log), "gluing constant not finite");
  const VariationReport var = bounded_variation_check(*f, 6);
  const auto [sub, sup] = structure_check(*f, 6, 6);
  const CheckReport bal =
      balanced_check(*f, Side::Right, BalanceMode::TwoSided, 6, 6);
  c.require(std::isfinite(std::log(bal.empirical_C)),
            "observed balance constant not finite");
  const SubmultiAudit audit = submulti_audit(*f, qm, var, sub, bal);
  c.require(std::isfinite(audit.proof_c_log), "proof constant not finite");
  c.require(audit.within && audit.empirical_c_log <= audit.proof_c_log,
            "observed constant exceeds the proof-side constant");
  c.finish(60.0);
}

void criterion_10() {
  Criterion c{10, "full example suite is bit-identical across runs"};
  const fs::path cfg_dir(THERMOSHIFT_CONFIG_DIR);
  const fs::path base =
      fs::temp_directory_path() /
      ("thermoshift-acceptance-" + std::to_string(::getpid()));
  const fs::path old_cwd = fs::current_path();
  std::vector<std::string> configs;
  for (const auto& e : fs::directory_iterator(cfg_dir))
    if (e.path().extension() == ".cfg") configs.push_back(e.path().string());
  std::sort(configs.begin(), configs.end());
  c.require(configs.size() >= 5, "fewer than five shipped configs");
  const auto run_all = [&](const fs::path& dir) {
    fs::create_directories(dir);
    fs::current_path(dir);
    for (const auto& path : configs) {
      std::ostringstream log;
      const Config cfg = parse_config_file(path);
      if (run_config(cfg, RunOptions{}, log) != 0)
        c.require(false, path + " reported failures");
    }
    fs::current_path(old_cwd);
  };
  run_all(base / "a");
  run_all(base / "b");
  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  size_t compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(base / "a")) {
    if (!e.is_regular_file()) continue;
    const fs::path rel = fs::relative(e.path(), base / "a");
    const fs::path other = base / "b" / rel;
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) {
      c.require(false, "mismatch at " + rel.string());
      break;
    }
    ++compared;
  }
  c.require(compared > 0, "no report files produced");
  fs::remove_all(base);
  c.finish();
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all criteria passed\n");
  return failures == 0 ? 0 : 1;
}
