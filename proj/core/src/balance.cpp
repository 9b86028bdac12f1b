#include "thermoshift/balance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "thermoshift/pressure.hpp"

namespace thermoshift {

std::string condition_str(Condition c) {
  switch (c) {
    case Condition::RB: return "RB";
    case Condition::LB: return "LB";
    case Condition::RBUpper: return "RB-upper-only";
    case Condition::LBUpper: return "LB-upper-only";
    case Condition::BMS: return "BMS";
    case Condition::KEY1: return "KEY1";
    case Condition::SS1: return "SS1";
    case Condition::SS2: return "SS2";
    case Condition::SUP1: return "SUP1";
    case Condition::SUP2: return "SUP2";
    case Condition::QM: return "QM";
    default: return "NCL";
  }
}

int empirical_k_from(const std::vector<double>& c_by_k) {
  for (size_t i = 0; i < c_by_k.size(); ++i) {
    if (i + 1 == c_by_k.size()) return static_cast<int>(i + 1);
    if (c_by_k[i] - c_by_k[i + 1] <= 0.05 * c_by_k[i])
      return static_cast<int>(i + 1);
  }
  return 1;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Weight side_sum(const Potential& f, const Word& u, int n, Direction dir,
                size_t cap) {
  Weight s = Weight::zero();
  for (const Word& v : f.shift().followers(u, n, dir, cap))
    s += f.eval(dir == Direction::Follower ? concat(u, v) : concat(v, u)).w;
  return s;
}

struct SweepScore {
  bool lower = true;   // the condition bounds the ratio from below
  bool upper = true;   // ... and/or from above
};

double cell_dev(const RatioCell& c, SweepScore sc) {
  double d = 0;
  if (sc.upper) d = std::max(d, c.max_log);
  if (sc.lower) d = std::max(d, -c.min_log);
  return d;
}

/// Shared (m, n) sweep over sum-ratio conditions with gap k.
CheckReport ratio_sweep(const Potential& f, Direction dir, int k, int max_m,
                        int max_n, Condition cond, SweepScore sc, size_t cap) {
  CheckReport r;
  r.condition = cond;
  const PartitionTable t = partition_sums(f, max_n, cap);
  bool exact_one = true;
  for (int m = 1; m <= max_m; ++m) {
    const auto us = f.shift().words(m, cap);
    for (int n = 1; n <= max_n; ++n) {
      RatioCell c;
      c.m = m;
      c.n = n;
      c.min_log = kInf;
      c.max_log = -kInf;
      for (const Word& u : us) {
        const Weight num = side_sum(f, u, n + k, dir, cap);
        const Weight den = f.eval(u).w * t.at(n);
        const Weight ratio = num / den;
        if (ratio.log_lo() < c.min_log) {
          c.min_log = ratio.log_lo();
          c.witness_min = u;
        }
        if (ratio.log_hi() > c.max_log) {
          c.max_log = ratio.log_hi();
          c.witness_max = u;
        }
        if (!(ratio.has_exact() && ratio.exact_value().is_one()))
          exact_one = false;
      }
      r.cells.push_back(c);
    }
  }
  r.exact_unit = exact_one && !r.cells.empty();
  double worst = 0;
  std::vector<double> by_n(max_n, 0.0);
  for (const auto& c : r.cells) {
    const double d = cell_dev(c, sc);
    worst = std::max(worst, d);
    by_n[c.n - 1] = std::max(by_n[c.n - 1], d);
  }
  r.empirical_C = std::exp(worst);
  r.verdict = verdict_from_series(by_n);
  std::vector<double> c_by_k;
  for (int kk = 1; kk <= max_n; ++kk) {
    double w = 0;
    for (const auto& c : r.cells)
      if (c.n >= kk) w = std::max(w, cell_dev(c, sc));
    c_by_k.push_back(std::exp(w));
  }
  r.empirical_K = empirical_k_from(c_by_k);
  return r;
}

}  // namespace

CheckReport balanced_check(const Potential& f, Side side, BalanceMode mode,
                           int max_m, int max_n, size_t cap) {
  const Direction dir =
      side == Side::Right ? Direction::Follower : Direction::Predecessor;
  const bool upper_only = mode == BalanceMode::UpperOnly;
  const Condition cond =
      side == Side::Right ? (upper_only ? Condition::RBUpper : Condition::RB)
                          : (upper_only ? Condition::LBUpper : Condition::LB);
  SweepScore sc;
  sc.lower = !upper_only;
  CheckReport r = ratio_sweep(f, dir, 0, max_m, max_n, cond, sc, cap);
  if (upper_only)
    r.notes.push_back("upper inequality scored only; lower extremes tabulated");
  return r;
}

QMCertificate qm_check(const Potential& f, int k_max, int max_range,
                       bool strict, size_t cap) {
  const Subshift& x = f.shift();
  QMCertificate cert;
  cert.strict = strict;
  std::vector<Word> all;
  for (int n = 1; n <= max_range; ++n)
    for (const Word& u : x.words(n, cap)) all.push_back(u);
  std::map<Word, double> hi_of;
  for (const Word& u : all) hi_of[u] = f.eval(u).w.log_hi();

  for (int k = 0; k <= k_max; ++k) {
    std::vector<Word> gaps;
    if (strict) {
      gaps = x.words(k, cap);
    } else {
      for (int i = 0; i <= k; ++i)
        for (const Word& w : x.words(i, cap)) gaps.push_back(w);
    }
    bool ok = true;
    double worst = kInf;
    std::vector<QMPair> pairs;
    std::string fail_note;
    for (const Word& u : all) {
      for (const Word& v : all) {
        QMPair p;
        p.u = u;
        p.v = v;
        p.log_ratio = -kInf;
        for (const Word& w : gaps) {
          Word uwv = concat(concat(u, w), v);
          if (!x.allowable(uwv)) continue;
          const double ratio =
              f.eval(uwv).w.log_lo() - hi_of[u] - hi_of[v];
          if (!p.best_w || ratio > p.log_ratio) {
            p.best_w = w;
            p.log_ratio = ratio;
          }
        }
        if (!p.best_w) {
          ok = false;
          if (fail_note.empty())
            fail_note = "no connecting word for u=" + word_str(u) +
                        " v=" + word_str(v) + " within gap budget " +
                        std::to_string(k);
        } else {
          worst = std::min(worst, p.log_ratio);
        }
        pairs.push_back(std::move(p));
      }
    }
    cert.k = k;
    cert.pairs = std::move(pairs);
    if (ok) {
      cert.present = true;
      cert.d_log = worst;
      return cert;
    }
    cert.note = fail_note;
  }
  cert.present = false;
  return cert;
}

std::pair<CheckReport, CheckReport> subadditive_characterization_check(
    const Potential& f, int k, int max_m, int max_n, size_t cap) {
  SweepScore sc;
  sc.upper = false;  // only the lower inequality is asserted
  CheckReport a = ratio_sweep(f, Direction::Follower, k, max_m, max_n,
                              Condition::SS1, sc, cap);
  CheckReport b = ratio_sweep(f, Direction::Predecessor, k, max_m, max_n,
                              Condition::SS2, sc, cap);
  for (CheckReport* r : {&a, &b}) {
    double lo = kInf;
    for (const auto& c : r->cells) lo = std::min(lo, c.min_log);
    std::ostringstream os;
    os << "gap k=" << k << "; empirical C1 = " << std::exp(std::min(lo, 0.0));
    r->notes.push_back(os.str());
  }
  return {std::move(a), std::move(b)};
}

std::pair<CheckReport, CheckReport> superadditive_characterization_check(
    const Potential& f, int max_m, int max_n, size_t cap) {
  std::string reason;
  const auto k = f.shift().specification_number(16, &reason);
  if (!k)
    throw Error("superadditive characterization needs a specification number: " +
                reason);
  SweepScore sc;
  sc.lower = false;  // only the upper inequality is asserted
  CheckReport a = ratio_sweep(f, Direction::Follower, *k, max_m, max_n,
                              Condition::SUP1, sc, cap);
  CheckReport b = ratio_sweep(f, Direction::Predecessor, *k, max_m, max_n,
                              Condition::SUP2, sc, cap);
  for (CheckReport* r : {&a, &b}) {
    std::ostringstream os;
    os << "specification number k=" << *k << "; empirical C1 = "
       << r->empirical_C;
    r->notes.push_back(os.str());
    if (r->verdict == Verdict::Bounded)
      r->notes.push_back(
          "bounded upper constants: the superadditive characterization "
          "yields a unique invariant ergodic Gibbs measure (cited, not "
          "verified numerically)");
  }
  return {std::move(a), std::move(b)};
}

CheckReport ncl_check(const Potential& f, int k, int max_m, int max_n,
                      size_t cap) {
  const Subshift& x = f.shift();
  CheckReport r;
  r.condition = Condition::NCL;
  const PartitionTable t = partition_sums(f, max_n, cap);
  const auto gaps = x.words(k, cap);
  bool disconnected = false;
  std::vector<double> by_n(max_n, 0.0);
  for (int m = 1; m <= max_m; ++m) {
    const auto us = x.words(m, cap);
    for (int n = 1; n <= max_n; ++n) {
      const auto vs = x.words(n, cap);
      RatioCell c;
      c.m = m;
      c.n = n;
      c.min_log = kInf;
      c.max_log = -kInf;
      for (const Word& u : us) {
        const Weight num_u = side_sum(f, u, n + k, Direction::Follower, cap);
        for (const Word& v : vs) {
          const Weight lhs = f.eval(v).w * num_u / t.at(n);
          Weight rhs = Weight::zero();
          for (const Word& g : gaps) {
            const Word ugv = concat(concat(u, g), v);
            if (x.allowable(ugv)) rhs += f.eval(ugv).w;
          }
          if (rhs.is_zero()) {
            if (!disconnected) {
              disconnected = true;
              r.notes.push_back("empty gluing sum for u=" + word_str(u) +
                                " v=" + word_str(v) + " at gap k=" +
                                std::to_string(k));
            }
            c.max_log = kInf;
            c.witness_max = u;
            continue;
          }
          const Weight ratio = lhs / rhs;
          if (ratio.log_lo() < c.min_log) {
            c.min_log = ratio.log_lo();
            c.witness_min = u;
          }
          if (ratio.log_hi() > c.max_log) {
            c.max_log = ratio.log_hi();
            c.witness_max = u;
          }
        }
      }
      r.cells.push_back(c);
      by_n[n - 1] = std::max(by_n[n - 1], std::max(0.0, c.max_log));
    }
  }
  double worst = 0;
  for (const auto& c : r.cells) worst = std::max(worst, c.max_log);
  r.empirical_C = std::exp(worst);
  if (disconnected) {
    r.verdict = Verdict::TrendUnbounded;
    r.empirical_C = kInf;
    r.notes.push_back("no finite constant exists over the tested range");
  } else {
    r.verdict = verdict_from_series(by_n);
  }
  return r;
}

namespace {

std::map<Word, Weight> cesaro_masses(const Potential& f, int n_levels,
                                     int cesaro_n, int depth, size_t cap) {
  // Average over a centered block of shifts: the approximant's head and
  // tail marginals are both biased, so the windows stay clear of each end.
  const int l_lo = (n_levels - depth - cesaro_n + 1) / 2;
  const int l_hi = l_lo + cesaro_n - 1;
  std::map<Word, Weight> acc;
  Weight z = Weight::zero();
  for (const Word& w : f.shift().words(n_levels, cap)) {
    const Weight wt = f.eval(w).w;
    z += wt;
    for (int l = l_lo; l <= l_hi; ++l)
      for (int d = 1; d <= depth; ++d) acc[subword(w, l, d)] += wt;
  }
  const Weight denom = z * Weight::exact(ExactNum(Rational(cesaro_n)));
  std::map<Word, Weight> masses;
  for (auto& [u, m] : acc) masses.emplace(u, m / denom);
  return masses;
}

}  // namespace

GibbsBuildResult gibbs_build(const Potential& f, int n_levels, int cesaro_n,
                             int depth, std::optional<Verdict> balance_verdict,
                             size_t cap) {
  if (depth < 1 || cesaro_n < 1 || n_levels < 2)
    throw Error("gibbs_build needs positive depth, averaging length, level");
  if (depth > n_levels - cesaro_n)
    throw Error("gibbs_build depth exceeds n_levels - cesaro_n");
  GibbsBuildResult r;
  r.n_levels = n_levels;
  r.cesaro_n = cesaro_n;
  r.depth = depth;
  if (balance_verdict && *balance_verdict == Verdict::TrendUnbounded)
    r.notes.push_back(
        "balance check trended unbounded; the approximant is not expected "
        "to converge");
  auto masses = cesaro_masses(f, n_levels, cesaro_n, depth, cap);
  const auto value = [](const Weight& w) {
    return w.is_zero() ? 0.0 : std::exp(w.log_mid());
  };
  for (int d = 1; d < depth; ++d) {
    for (const Word& u : f.shift().words(d, cap)) {
      const auto it = masses.find(u);
      const double mu = it == masses.end() ? 0.0 : value(it->second);
      double shifted = 0;
      for (Symbol a = 0; a < f.shift().alphabet_size(); ++a) {
        Word au;
        au.push_back(a);
        au.insert(au.end(), u.begin(), u.end());
        const auto jt = masses.find(au);
        if (jt != masses.end()) shifted += value(jt->second);
      }
      r.invariance_defect =
          std::max(r.invariance_defect, std::fabs(mu - shifted));
    }
  }
  if (depth <= n_levels - 2 - cesaro_n) {
    const auto m1 = cesaro_masses(f, n_levels - 1, cesaro_n, depth, cap);
    const auto m2 = cesaro_masses(f, n_levels - 2, cesaro_n, depth, cap);
    for (const Word& u : f.shift().words(depth, cap)) {
      const auto get = [&](const std::map<Word, Weight>& m) {
        const auto it = m.find(u);
        return it == m.end() ? 0.0 : value(it->second);
      };
      const double a = get(masses), b = get(m1), c = get(m2);
      r.cauchy_defect = std::max(
          {r.cauchy_defect, std::fabs(a - b), std::fabs(b - c),
           std::fabs(a - c)});
    }
  } else {
    r.notes.push_back("level drift not measurable at this depth");
  }
  r.measure = std::make_shared<TableMeasure>(f.shift_ptr(), std::move(masses),
                                             depth, false, true);
  return r;
}

SubmultiAudit submulti_audit(const Potential& f, const QMCertificate& qm,
                             const VariationReport& var,
                             const StructureCertificate& sub,
                             const CheckReport& balanced, size_t cap) {
  SubmultiAudit a;
  a.k = qm.k;
  a.m_log = var.max_radius;
  a.c_sub = sub.constant;
  a.empirical_c_log = std::log(balanced.empirical_C);
  if (!qm.present) {
    a.proof_c_log = kInf;
    a.within = false;
    a.note = "no quasi-multiplicativity certificate; proof constant infinite";
    return a;
  }
  a.d_log = std::min(qm.d_log, 0.0);
  a.zk_log =
      a.k == 0 ? 0.0 : partition_sums(f, a.k, cap).at(a.k).log_mid();
  double min_fk = 0.0;  // log of min f_k over X; f_0 = 1
  if (a.k > 0) {
    min_fk = kInf;
    for (const Word& u : f.shift().words(a.k, cap))
      min_fk = std::min(min_fk, f.eval(u).w.log_lo());
    a.note = "min f_k taken over the level-k cylinder minima";
  }
  double max_fi = 0.0;  // log of max over 0 <= i <= 2k of max f_i
  for (int i = 1; i <= 2 * a.k; ++i)
    for (const Word& u : f.shift().words(i, cap))
      max_fi = std::max(max_fi, f.eval(u).w.log_hi());
  a.d2_log = std::min(
      min_fk + 2 * a.d_log - a.c_sub - 2 * a.m_log - max_fi, a.d_log);
  const double lower_side = 4 * a.m_log + a.c_sub + a.zk_log - a.d2_log;
  const double upper_side = 2 * a.m_log + a.c_sub;
  a.proof_c_log = std::max(lower_side, upper_side);
  a.within = a.empirical_c_log <= a.proof_c_log + 1e-9;
  return a;
}

}  // namespace thermoshift
