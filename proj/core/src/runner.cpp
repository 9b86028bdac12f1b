#include "thermoshift/runner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "thermoshift/balance.hpp"
#include "thermoshift/factor.hpp"
#include "thermoshift/measure.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/report.hpp"
#include "thermoshift/runner.hpp"

namespace thermoshift {

namespace {

Word parse_symbols(const std::string& s, const std::string& where) {
  Word w;
  for (const std::string& tok : split_ws(s)) {
    try {
      w.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Error(where + ": bad symbol '" + tok + "'");
    }
  }
  return w;
}

int parse_int(const std::string& s, const std::string& where) {
  try {
    return std::stoi(s);
  } catch (const std::exception&) {
    throw Error(where + ": bad integer '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error(where + ": bad number '" + s + "'");
  }
}

struct Context {
  const Config& cfg;
  size_t cap;
  bool rational;
  std::map<std::string, std::shared_ptr<const Subshift>> shifts;
  std::map<std::string, std::shared_ptr<const CylinderMeasure>> measures;
  std::map<std::string, std::shared_ptr<const Potential>> potentials;
  std::map<std::string, std::shared_ptr<const FactorMap>> maps;
  std::set<std::string> building;

  std::shared_ptr<const Subshift> shift(const std::string& name);
  std::shared_ptr<const CylinderMeasure> measure(const std::string& name);
  std::shared_ptr<const Potential> potential(const std::string& name);
  std::shared_ptr<const FactorMap> factor(const std::string& name);

  struct Guard {
    Context& ctx;
    std::string tag;
    Guard(Context& c, std::string t) : ctx(c), tag(std::move(t)) {
      if (!ctx.building.insert(tag).second)
        throw Error("circular definition involving " + tag);
    }
    ~Guard() { ctx.building.erase(tag); }
  };

  void require_float_ok(const ConfigSection& s, const std::string& why) {
    if (rational)
      throw Error("section [" + s.kind + " " + s.name +
                  "] needs floating arithmetic (" + why +
                  ") but rational mode is forced");
  }
};

std::shared_ptr<const Subshift> Context::shift(const std::string& name) {
  if (const auto it = shifts.find(name); it != shifts.end()) return it->second;
  const ConfigSection& s = cfg.require("shift", name);
  Guard g_(*this, "shift " + name);
  std::shared_ptr<const Subshift> x;
  if (const ConfigEntry* m = s.find("matrix")) {
    std::vector<std::vector<int>> rows;
    for (const std::string& row : split_list(m->value, ';')) {
      std::vector<int> r;
      for (const std::string& e : split_ws(row))
        r.push_back(parse_int(e, "matrix"));
      rows.push_back(std::move(r));
    }
    x = std::make_shared<Subshift>(Subshift::from_matrix(rows));
  } else {
    const int k = parse_int(s.get("alphabet"), "alphabet");
    std::vector<Word> forbidden;
    if (const ConfigEntry* f = s.find("forbidden"))
      for (const std::string& w : split_list(f->value, ';'))
        if (!w.empty()) forbidden.push_back(parse_symbols(w, "forbidden"));
    x = std::make_shared<Subshift>(Subshift::from_forbidden(k, forbidden));
  }
  shifts.emplace(name, x);
  return x;
}

std::shared_ptr<const CylinderMeasure> Context::measure(const std::string& name) {
  if (const auto it = measures.find(name); it != measures.end())
    return it->second;
  const ConfigSection& s = cfg.require("measure", name);
  Guard g_(*this, "measure " + name);
  auto x = shift(s.get("shift"));
  const int depth = parse_int(s.get_or("depth", "6"), "depth");
  const std::string kind = s.get("kind");
  std::shared_ptr<const CylinderMeasure> mu;
  if (kind == "bernoulli") {
    std::vector<ExactNum> p;
    for (const std::string& t : split_ws(s.get("p")))
      p.emplace_back(parse_rational(t));
    mu = MarkovMeasure::bernoulli(x, std::move(p), depth);
  } else if (kind == "markov") {
    std::vector<std::vector<ExactNum>> rows;
    for (const std::string& row : split_list(s.get("rows"), ';')) {
      std::vector<ExactNum> r;
      for (const std::string& t : split_ws(row))
        r.emplace_back(parse_rational(t));
      rows.push_back(std::move(r));
    }
    std::vector<ExactNum> pi;
    for (const std::string& t : split_ws(s.get("stationary")))
      pi.emplace_back(parse_rational(t));
    mu = std::make_shared<MarkovMeasure>(x, std::move(rows), std::move(pi),
                                         depth);
  } else if (kind == "parry") {
    if (rational && x->alphabet_size() != 2)
      require_float_ok(s, "maximal-entropy measure beyond two states");
    mu = MarkovMeasure::parry(x, depth);
  } else if (kind == "atomic") {
    std::vector<PeriodicPoint> points;
    std::vector<ExactNum> weights;
    for (const ConfigEntry* e : s.all("atom")) {
      const size_t colon = e->value.find(':');
      if (colon == std::string::npos)
        throw Error("atom needs '<weight> : <preperiod> / <period>' (line " +
                    std::to_string(e->line) + ")");
      weights.emplace_back(parse_rational(
          split_ws(e->value.substr(0, colon)).at(0)));
      const std::string rest = e->value.substr(colon + 1);
      const size_t slash = rest.find('/');
      if (slash == std::string::npos)
        throw Error("atom needs a '/' before the period (line " +
                    std::to_string(e->line) + ")");
      PeriodicPoint p;
      p.preperiod = parse_symbols(rest.substr(0, slash), "atom preperiod");
      p.period = parse_symbols(rest.substr(slash + 1), "atom period");
      points.push_back(std::move(p));
    }
    mu = std::make_shared<AtomicMeasure>(x, std::move(points),
                                         std::move(weights), depth);
  } else {
    throw Error("unknown measure kind '" + kind + "'");
  }
  measures.emplace(name, mu);
  return mu;
}

std::shared_ptr<const FactorMap> Context::factor(const std::string& name) {
  if (const auto it = maps.find(name); it != maps.end()) return it->second;
  const ConfigSection& s = cfg.require("factor", name);
  Guard g_(*this, "factor " + name);
  auto src = shift(s.get("source"));
  auto tgt = shift(s.get("target"));
  std::vector<Symbol> m = parse_symbols(s.get("map"), "map");
  const int vd = parse_int(s.get_or("verify_depth", "8"), "verify_depth");
  auto fm = std::make_shared<FactorMap>(src, tgt, std::move(m), vd, cap);
  maps.emplace(name, fm);
  return fm;
}

std::shared_ptr<const Potential> Context::potential(const std::string& name) {
  if (const auto it = potentials.find(name); it != potentials.end())
    return it->second;
  const ConfigSection& s = cfg.require("potential", name);
  Guard g_(*this, "potential " + name);
  const std::string family = s.get("family");
  std::shared_ptr<Potential> f;
  if (family == "zero") {
    f = AdditivePotential::zero(shift(s.get("shift")));
  } else if (family == "additive") {
    auto x = shift(s.get("shift"));
    const int window = parse_int(s.get_or("window", "1"), "window");
    std::map<Word, Weight> weights;
    for (const ConfigEntry* e : s.all("weight")) {
      const size_t colon = e->value.find(':');
      if (colon == std::string::npos)
        throw Error("weight needs '<word> : <value>' (line " +
                    std::to_string(e->line) + ")");
      weights[parse_symbols(e->value.substr(0, colon), "weight word")] =
          Weight::exact(ExactNum(parse_rational(
              split_ws(e->value.substr(colon + 1)).at(0))));
    }
    f = std::make_shared<AdditivePotential>(x, window, std::move(weights));
  } else if (family == "cocycle") {
    require_float_ok(s, "matrix norms");
    auto x = shift(s.get("shift"));
    std::vector<std::vector<std::vector<double>>> mats;
    for (const std::string& per_sym : split_list(s.get("matrices"), ';')) {
      std::vector<std::vector<double>> mat;
      for (const std::string& row : split_list(per_sym, ',')) {
        std::vector<double> r;
        for (const std::string& t : split_ws(row))
          r.push_back(parse_double(t, "matrices"));
        mat.push_back(std::move(r));
      }
      mats.push_back(std::move(mat));
    }
    const double t = parse_double(s.get_or("exponent", "1"), "exponent");
    const std::string norm = s.get_or("norm", "op2");
    f = std::make_shared<CocyclePotential>(
        x, std::move(mats), t,
        norm == "maxentry" ? MatrixNorm::MaxEntry : MatrixNorm::Operator2);
  } else if (family == "measure") {
    auto mu = measure(s.get("measure"));
    f = std::make_shared<MeasurePotential>(mu->shift_ptr(), mu);
  } else if (family == "constant") {
    require_float_ok(s, "per-level constants");
    auto x = shift(s.get("shift"));
    std::vector<double> values;
    if (const ConfigEntry* v = s.find("values"))
      for (const std::string& t : split_ws(v->value))
        values.push_back(parse_double(t, "values"));
    const auto quad = split_ws(s.get_or("quad", "0 0 0"));
    if (quad.size() != 3) throw Error("quad needs three coefficients");
    f = std::make_shared<ConstantSequencePotential>(
        x, std::move(values), parse_double(quad[0], "quad"),
        parse_double(quad[1], "quad"), parse_double(quad[2], "quad"));
  } else if (family == "relative") {
    f = std::make_shared<RelativePotential>(factor(s.get("map")),
                                            potential(s.get("target")));
  } else if (family == "pushforward") {
    f = std::make_shared<PushforwardPotential>(factor(s.get("map")),
                                               potential(s.get("source")), cap);
  } else {
    throw Error("unknown potential family '" + family + "'");
  }
  if (const ConfigEntry* d = s.find("declare")) {
    StructureDeclaration decl = f->declared_structure();
    if (d->value == "subadditive" || d->value == "both")
      decl.subadditive = true;
    if (d->value == "superadditive" || d->value == "both")
      decl.superadditive = true;
    decl.constant = parse_double(s.get_or("declare_c", "0"), "declare_c");
    f->declare_structure(decl);
  }
  potentials.emplace(name, f);
  return f;
}

// ------------------------------------------------------------ report pieces

ReportTable cells_table(const CheckReport& r) {
  ReportTable t;
  t.title = "ratios";
  t.columns = {"m", "n", "min_log", "max_log", "witness_min", "witness_max"};
  for (const auto& c : r.cells)
    t.rows.push_back({std::to_string(c.m), std::to_string(c.n),
                      fmt_double(c.min_log), fmt_double(c.max_log),
                      word_str(c.witness_min), word_str(c.witness_max)});
  return t;
}

void fill_check(Report& rep, const CheckReport& r) {
  rep.add("condition", condition_str(r.condition));
  rep.add("empirical_C", r.empirical_C);
  rep.add("empirical_K", std::to_string(r.empirical_K));
  rep.add("verdict", verdict_str(r.verdict));
  rep.add("exact_unit", r.exact_unit ? "true" : "false");
  rep.tables.push_back(cells_table(r));
  for (const auto& n : r.notes) rep.notes.push_back(n);
}

struct StructurePair {
  StructureCertificate sub, sup;
};

StructurePair certs_for(const Potential& f, const ConfigSection& job,
                        size_t cap) {
  const int range = parse_int(job.get_or("cert_range", "3"), "cert_range");
  auto [sub, sup] = structure_check(f, range, range, cap);
  return {sub, sup};
}

void fill_bracket(Report& rep, const std::string& prefix,
                  const PressureBracket& b) {
  rep.add(prefix + "lower", b.lower);
  rep.add(prefix + "upper", b.upper);
  rep.add(prefix + "point", b.point);
  rep.add(prefix + "levels", std::to_string(b.levels_used));
  rep.add(prefix + "lower_certified", b.lower_certified ? "true" : "false");
  rep.add(prefix + "upper_certified", b.upper_certified ? "true" : "false");
  rep.notes.push_back(prefix + "method: " + b.method_note);
}

// -------------------------------------------------------------------- jobs

void run_job(Context& ctx, const ConfigSection& job, Report& rep) {
  const std::string op = job.get("op");
  const size_t cap = ctx.cap;
  rep.title = op + " (" + job.name + ")";
  if (ctx.rational) rep.add("rational_mode", "true");

  if (op == "shift_info") {
    auto x = ctx.shift(job.get("shift"));
    const int depth = parse_int(job.get_or("depth", "8"), "depth");
    rep.add("alphabet", std::to_string(x->alphabet_size()));
    rep.add("memory", std::to_string(x->memory()));
    rep.add("states", std::to_string(x->states().size()));
    rep.add("irreducible", x->irreducible() ? "true" : "false");
    rep.add("pruned_nonextendable",
            x->had_nonextendable_words() ? "true" : "false");
    std::string reason;
    const auto k = x->specification_number(16, &reason);
    rep.add("specification_number", k ? std::to_string(*k) : "absent");
    if (!k) rep.add("specification_reason", reason);
    ReportTable t;
    t.title = "language";
    t.columns = {"n", "count", "words"};
    for (int n = 1; n <= depth; ++n) {
      std::string sample;
      try {
        const auto ws = x->words(n, 40);
        for (size_t i = 0; i < ws.size(); ++i)
          sample += (i ? " " : "") + word_str(ws[i]);
      } catch (const CapError&) {
        sample = "(large)";
      }
      t.rows.push_back({std::to_string(n), x->word_count(n).str(), sample});
    }
    rep.tables.push_back(std::move(t));
  } else if (op == "variation_check") {
    auto f = ctx.potential(job.get("potential"));
    const int depth = parse_int(job.get_or("depth", "8"), "depth");
    const auto v = bounded_variation_check(*f, depth, cap);
    rep.add("potential", f->describe());
    rep.add("max_radius", v.max_radius);
    rep.add("unbounded_trend", v.unbounded_trend ? "true" : "false");
    ReportTable t;
    t.title = "radii";
    t.columns = {"n", "max_radius"};
    for (size_t i = 0; i < v.per_level.size(); ++i)
      t.rows.push_back({std::to_string(i + 1), fmt_double(v.per_level[i])});
    rep.tables.push_back(std::move(t));
  } else if (op == "structure_check") {
    auto f = ctx.potential(job.get("potential"));
    const int mm = parse_int(job.get_or("max_m", "4"), "max_m");
    const int mn = parse_int(job.get_or("max_n", "4"), "max_n");
    const auto [sub, sup] = structure_check(*f, mm, mn, cap);
    rep.add("potential", f->describe());
    rep.add("subadditive_defect", sub.defect);
    rep.add("subadditive_constant", sub.constant);
    rep.add("subadditive_declared", sub.declared ? "true" : "false");
    rep.add("subadditive_failed", sub.failed ? "true" : "false");
    rep.add("superadditive_defect", sup.defect);
    rep.add("superadditive_constant", sup.constant);
    rep.add("superadditive_declared", sup.declared ? "true" : "false");
    rep.add("superadditive_failed", sup.failed ? "true" : "false");
  } else if (op == "partition_sums") {
    auto f = ctx.potential(job.get("potential"));
    const int depth = parse_int(job.get_or("depth", "12"), "depth");
    const auto t = partition_sums(*f, depth, cap);
    rep.add("potential", f->describe());
    ReportTable tab;
    tab.title = "partition";
    tab.columns = {"n", "logZ_lower", "logZ_upper", "exact"};
    for (int n = 1; n <= t.max_n(); ++n) {
      const Weight& z = t.at(n);
      tab.rows.push_back({std::to_string(n), fmt_double(z.log_lo()),
                          fmt_double(z.log_hi()),
                          z.has_exact() ? z.exact_value().str() : "-"});
    }
    rep.tables.push_back(std::move(tab));
  } else if (op == "pressure_bracket") {
    auto f = ctx.potential(job.get("potential"));
    const int depth = parse_int(job.get_or("depth", "20"), "depth");
    const auto certs = certs_for(*f, job, cap);
    const auto b = pressure_bracket(*f, depth, &certs.sub, &certs.sup, cap);
    rep.add("potential", f->describe());
    fill_bracket(rep, "", b);
  } else if (op == "bsm_check") {
    auto f = ctx.potential(job.get("potential"));
    const int depth = parse_int(job.get_or("depth", "12"), "depth");
    const auto certs = certs_for(*f, job, cap);
    const auto r = bsm_check(*f, depth, &certs.sub, &certs.sup, cap);
    rep.add("potential", f->describe());
    rep.add("p_used", r.p_used);
    rep.add("direct_verdict", verdict_str(r.direct.verdict));
    rep.add("direct_empirical_C", r.direct.empirical_C);
    rep.add("direct_exact_unit", r.direct.exact_unit ? "true" : "false");
    rep.add("key1_verdict", verdict_str(r.key1.verdict));
    rep.add("key1_empirical_C", r.key1.empirical_C);
    rep.add("key1_exact_unit", r.key1.exact_unit ? "true" : "false");
    fill_bracket(rep, "bracket_", r.bracket);
    auto ta = cells_table(r.direct);
    ta.title = "direct";
    rep.tables.push_back(std::move(ta));
    auto tb = cells_table(r.key1);
    tb.title = "key1";
    rep.tables.push_back(std::move(tb));
  } else if (op == "balanced_check") {
    auto f = ctx.potential(job.get("potential"));
    const Side side = job.get_or("side", "right") == "left" ? Side::Left
                                                            : Side::Right;
    const BalanceMode mode = job.get_or("mode", "two-sided") == "upper-only"
                                 ? BalanceMode::UpperOnly
                                 : BalanceMode::TwoSided;
    const int mm = parse_int(job.get_or("max_m", "6"), "max_m");
    const int mn = parse_int(job.get_or("max_n", "6"), "max_n");
    const auto r = balanced_check(*f, side, mode, mm, mn, cap);
    rep.add("potential", f->describe());
    fill_check(rep, r);
  } else if (op == "qm_check") {
    auto f = ctx.potential(job.get("potential"));
    const int k_max = parse_int(job.get_or("k_max", "3"), "k_max");
    const int range = parse_int(job.get_or("range", "4"), "range");
    const bool strict = job.get_or("strict", "false") == "true";
    const auto r = qm_check(*f, k_max, range, strict, cap);
    rep.add("potential", f->describe());
    rep.add("present", r.present ? "true" : "false");
    rep.add("k", std::to_string(r.k));
    rep.add("strict", r.strict ? "true" : "false");
    if (r.present) rep.add("d_log", r.d_log);
    if (!r.note.empty()) rep.notes.push_back(r.note);
    ReportTable t;
    t.title = "pairs";
    t.columns = {"u", "v", "best_w", "log_ratio"};
    for (const auto& p : r.pairs)
      t.rows.push_back({word_str(p.u), word_str(p.v),
                        p.best_w ? word_str(*p.best_w) : "absent",
                        p.best_w ? fmt_double(p.log_ratio) : "-"});
    rep.tables.push_back(std::move(t));
  } else if (op == "ss_check" || op == "sup_check") {
    auto f = ctx.potential(job.get("potential"));
    const int mm = parse_int(job.get_or("max_m", "5"), "max_m");
    const int mn = parse_int(job.get_or("max_n", "5"), "max_n");
    std::pair<CheckReport, CheckReport> pr =
        op == "ss_check"
            ? subadditive_characterization_check(
                  *f, parse_int(job.get_or("k", "0"), "k"), mm, mn, cap)
            : superadditive_characterization_check(*f, mm, mn, cap);
    rep.add("potential", f->describe());
    rep.add("follower_verdict", verdict_str(pr.first.verdict));
    rep.add("follower_empirical_C", pr.first.empirical_C);
    rep.add("follower_exact_unit", pr.first.exact_unit ? "true" : "false");
    rep.add("predecessor_verdict", verdict_str(pr.second.verdict));
    rep.add("predecessor_empirical_C", pr.second.empirical_C);
    rep.add("predecessor_exact_unit", pr.second.exact_unit ? "true" : "false");
    auto ta = cells_table(pr.first);
    ta.title = "follower";
    rep.tables.push_back(std::move(ta));
    auto tb = cells_table(pr.second);
    tb.title = "predecessor";
    rep.tables.push_back(std::move(tb));
    for (const auto& n : pr.first.notes) rep.notes.push_back(n);
    for (const auto& n : pr.second.notes) rep.notes.push_back(n);
  } else if (op == "ncl_check") {
    auto f = ctx.potential(job.get("potential"));
    const auto r = ncl_check(*f, parse_int(job.get_or("k", "0"), "k"),
                             parse_int(job.get_or("max_m", "4"), "max_m"),
                             parse_int(job.get_or("max_n", "4"), "max_n"), cap);
    rep.add("potential", f->describe());
    fill_check(rep, r);
  } else if (op == "gibbs_build") {
    auto f = ctx.potential(job.get("potential"));
    const int n_levels = parse_int(job.get_or("n_levels", "14"), "n_levels");
    const int cesaro = parse_int(job.get_or("cesaro", "6"), "cesaro");
    const int depth = parse_int(job.get_or("depth", "3"), "depth");
    std::optional<Verdict> verdict;
    if (const ConfigEntry* b = job.find("balance_range")) {
      const int r = parse_int(b->value, "balance_range");
      verdict =
          balanced_check(*f, Side::Right, BalanceMode::TwoSided, r, r, cap)
              .verdict;
    }
    const auto r = gibbs_build(*f, n_levels, cesaro, depth, verdict, cap);
    rep.add("potential", f->describe());
    rep.add("n_levels", std::to_string(r.n_levels));
    rep.add("cesaro_n", std::to_string(r.cesaro_n));
    rep.add("depth", std::to_string(r.depth));
    rep.add("invariance_defect", r.invariance_defect);
    rep.add("cauchy_defect", r.cauchy_defect);
    if (verdict) rep.add("balance_verdict", verdict_str(*verdict));
    for (const auto& n : r.notes) rep.notes.push_back(n);
    ReportTable t;
    t.title = "masses";
    t.columns = {"u", "mass", "log_mass"};
    for (int d = 1; d <= depth; ++d)
      for (const Word& u : f->shift().words(d, cap)) {
        const Weight m = r.measure->mass(u);
        t.rows.push_back(
            {word_str(u),
             m.is_zero() ? "0" : fmt_double(std::exp(m.log_mid())),
             m.is_zero() ? "-inf" : fmt_double(m.log_mid())});
      }
    rep.tables.push_back(std::move(t));
  } else if (op == "gibbs_verify") {
    auto mu = ctx.measure(job.get("measure"));
    auto f = ctx.potential(job.get("potential"));
    std::optional<double> p;
    if (const ConfigEntry* e = job.find("pressure"))
      p = parse_double(e->value, "pressure");
    const int depth = parse_int(job.get_or("depth", "6"), "depth");
    const bool upper_only = job.get_or("upper_only", "false") == "true";
    const auto r = gibbs_verify(*mu, *f, p, depth, upper_only, cap);
    rep.add("measure", mu->describe());
    rep.add("potential", f->describe());
    rep.add("p_used", r.p_used);
    rep.add("p_supplied", r.p_supplied ? "true" : "false");
    rep.add("c_lower", r.c_lower);
    rep.add("c_upper", r.c_upper);
    rep.add("exact_unit", r.exact_unit ? "true" : "false");
    rep.add("tested_depth", std::to_string(r.tested_depth));
    rep.add("upper_only", r.upper_only ? "true" : "false");
    rep.add("verdict", verdict_str(r.verdict));
    ReportTable t;
    t.title = "levels";
    t.columns = {"n", "log_ratio_min", "log_ratio_max"};
    for (size_t i = 0; i < r.per_level_hi.size(); ++i)
      t.rows.push_back({std::to_string(i + 1), fmt_double(r.per_level_lo[i]),
                        fmt_double(r.per_level_hi[i])});
    rep.tables.push_back(std::move(t));
    for (const auto& n : r.notes) rep.notes.push_back(n);
  } else if (op == "entropy") {
    auto mu = ctx.measure(job.get("measure"));
    if (!mu->invariant()) throw Error("entropy needs an invariant measure");
    const int depth = parse_int(job.get_or("depth", "6"), "depth");
    const auto r = entropy(*mu, depth, cap);
    rep.add("measure", mu->describe());
    rep.add("lower", r.lower);
    rep.add("upper", r.upper);
    rep.add("depth_used", std::to_string(r.depth_used));
    if (r.markov_closed_form)
      rep.add("markov_closed_form", *r.markov_closed_form);
  } else if (op == "potential_average") {
    auto mu = ctx.measure(job.get("measure"));
    if (!mu->invariant())
      throw Error("potential_average needs an invariant measure");
    auto f = ctx.potential(job.get("potential"));
    const int depth = parse_int(job.get_or("depth", "6"), "depth");
    const auto certs = certs_for(*f, job, cap);
    const auto r = potential_average(*mu, *f, depth, &certs.sub, &certs.sup,
                                     cap);
    rep.add("measure", mu->describe());
    rep.add("potential", f->describe());
    rep.add("value", r.value);
    rep.add("lower", r.lower);
    rep.add("upper", r.upper);
    rep.add("depth_used", std::to_string(r.depth_used));
    if (!r.note.empty()) rep.notes.push_back(r.note);
  } else if (op == "ergodicity") {
    auto mu = ctx.measure(job.get("measure"));
    std::string reason;
    int k;
    if (const ConfigEntry* e = job.find("k")) {
      k = parse_int(e->value, "k");
    } else {
      const auto sk = mu->shift().specification_number(16, &reason);
      if (!sk) throw Error("no specification number: " + reason);
      k = *sk;
    }
    const auto r = ergodicity_lower_bound(
        *mu, k, parse_int(job.get_or("max_m", "3"), "max_m"),
        parse_int(job.get_or("max_n", "3"), "max_n"),
        parse_int(job.get_or("l_max", "8"), "l_max"), cap);
    rep.add("measure", mu->describe());
    rep.add("spec_k", std::to_string(k));
    rep.add("min_ratio", r.min_ratio);
    rep.add("witness_u", word_str(r.witness_u));
    rep.add("witness_v", word_str(r.witness_v));
    rep.add("witness_l", std::to_string(r.witness_l));
    rep.add("pairs_tested", std::to_string(r.pairs_tested));
  } else if (op == "preimage_count") {
    auto fm = ctx.factor(job.get("map"));
    const int depth = parse_int(job.get_or("depth", "8"), "depth");
    rep.add("map", fm->describe());
    rep.add("surjective_depth", std::to_string(fm->surjective_depth()));
    if (const ConfigEntry* e = job.find("word")) {
      const Word y = parse_symbols(e->value, "word");
      rep.add("word", word_str(y));
      rep.add("count", fm->preimage_count(y).str());
    }
    ReportTable t;
    t.title = "totals";
    t.columns = {"n", "sum_phi", "source_count", "equal"};
    for (int n = 1; n <= depth; ++n) {
      BigInt total = 0;
      try {
        for (const Word& y : fm->target().words(n, cap))
          total += fm->preimage_count(y);
      } catch (const CapError&) {
        break;
      }
      const BigInt src = fm->source().word_count(n);
      t.rows.push_back({std::to_string(n), total.str(), src.str(),
                        total == src ? "yes" : "NO"});
    }
    rep.tables.push_back(std::move(t));
  } else if (op == "pushforward_eval") {
    auto fm = ctx.factor(job.get("map"));
    auto f = ctx.potential(job.get("source"));
    const PushforwardPotential g(fm, f, cap);
    const int depth = parse_int(job.get_or("depth", "5"), "depth");
    rep.add("map", fm->describe());
    rep.add("source_potential", f->describe());
    ReportTable t;
    t.title = "values";
    t.columns = {"y", "log_lower", "log_upper", "rep"};
    for (int n = 1; n <= depth; ++n)
      for (const Word& y : fm->target().words(n, cap)) {
        const Eval e = g.eval(y);
        t.rows.push_back({word_str(y), fmt_double(e.w.log_lo()),
                          fmt_double(e.w.log_hi()), fmt_double(e.rep)});
      }
    rep.tables.push_back(std::move(t));
  } else if (op == "relative_pressure") {
    auto fm = ctx.factor(job.get("map"));
    auto g = ctx.potential(job.get("target"));
    const int depth = parse_int(job.get_or("depth", "12"), "depth");
    const auto r = relative_pressure_check(fm, g, depth, cap);
    rep.add("map", fm->describe());
    rep.add("target_potential", g->describe());
    rep.add("spec_k", std::to_string(r.spec_k));
    fill_bracket(rep, "relative_", r.f_bracket);
    fill_bracket(rep, "target_", r.g_bracket);
    rep.add("overlap", r.overlap ? "true" : "false");
    rep.add("midpoint_gap", r.midpoint_gap);
    for (const auto& n : r.notes) rep.notes.push_back(n);
  } else if (op == "theorem_general") {
    auto fm = ctx.factor(job.get("map"));
    auto g = ctx.potential(job.get("target"));
    const auto r = theorem_general_check(
        fm, g, parse_int(job.get_or("max_m", "4"), "max_m"),
        parse_int(job.get_or("max_n", "4"), "max_n"), cap);
    rep.add("map", fm->describe());
    rep.add("target_potential", g->describe());
    rep.add("right_verdict", verdict_str(r.right.verdict));
    rep.add("right_empirical_C", r.right.empirical_C);
    rep.add("left_verdict", verdict_str(r.left.verdict));
    rep.add("left_empirical_C", r.left.empirical_C);
    rep.notes.push_back(r.conclusion);
    auto ta = cells_table(r.right);
    ta.title = "right";
    rep.tables.push_back(std::move(ta));
    auto tb = cells_table(r.left);
    tb.title = "left";
    rep.tables.push_back(std::move(tb));
  } else if (op == "submulti_audit") {
    auto f = ctx.potential(job.get("potential"));
    const int range = parse_int(job.get_or("range", "5"), "range");
    const int k_max = parse_int(job.get_or("k_max", "2"), "k_max");
    const auto qm = qm_check(*f, k_max, std::min(range, 4), false, cap);
    const auto var = bounded_variation_check(*f, range, cap);
    const auto [sub, sup] = structure_check(*f, range, range, cap);
    const auto bal =
        balanced_check(*f, Side::Right, BalanceMode::TwoSided, range, range,
                       cap);
    const auto a = submulti_audit(*f, qm, var, sub, bal, cap);
    rep.add("potential", f->describe());
    rep.add("qm_present", qm.present ? "true" : "false");
    rep.add("k", std::to_string(a.k));
    rep.add("log_M", a.m_log);
    rep.add("C_sub", a.c_sub);
    rep.add("log_D_prime", a.d_log);
    rep.add("log_D_second", a.d2_log);
    rep.add("log_Zk", a.zk_log);
    rep.add("proof_c_log", a.proof_c_log);
    rep.add("empirical_c_log", a.empirical_c_log);
    rep.add("within_proof_bound", a.within ? "true" : "false");
    rep.add("balanced_verdict", verdict_str(bal.verdict));
    if (!a.note.empty()) rep.notes.push_back(a.note);
  } else {
    throw Error("unknown op '" + op + "'");
  }
}

}  // namespace

int run_config(const Config& cfg, const RunOptions& opt, std::ostream& out) {
  size_t cap = Subshift::kDefaultCap;
  bool rational = false;
  if (const ConfigSection* s = cfg.find("settings", "")) {
    if (const ConfigEntry* e = s->find("cap"))
      cap = static_cast<size_t>(std::stoll(e->value));
    if (const ConfigEntry* e = s->find("rational"))
      rational = e->value == "true";
  }
  if (opt.cap_override) cap = *opt.cap_override;
  if (opt.force_rational) rational = true;

  Context ctx{cfg, cap, rational, {}, {}, {}, {}, {}};
  int failures = 0;
  int ran = 0;
  for (const ConfigSection& s : cfg.sections) {
    if (s.kind != "job") continue;
    if (!opt.job_filter.empty() &&
        std::find(opt.job_filter.begin(), opt.job_filter.end(), s.name) ==
            opt.job_filter.end())
      continue;
    ++ran;
    const std::string out_path = s.get_or("out", "reports/" + s.name + ".txt");
    try {
      Report rep;
      run_job(ctx, s, rep);
      write_report(rep, out_path);
      std::string verdict;
      for (const auto& [k, v] : rep.summary)
        if (k == "verdict") verdict = " verdict=" + v;
      out << "job " << s.name << ": ok " << s.get("op") << " -> " << out_path
          << verdict << "\n";
    } catch (const CapError& e) {
      ++failures;
      out << "job " << s.name << ": FAILED (cap): " << e.what() << "\n";
    } catch (const Error& e) {
      ++failures;
      out << "job " << s.name << ": FAILED: " << e.what() << "\n";
    }
  }
  out << ran << " job(s), " << failures << " failure(s)\n";
  return failures;
}

}  // namespace thermoshift
