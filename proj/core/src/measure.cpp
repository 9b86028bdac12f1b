#include "thermoshift/measure.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <sstream>

namespace thermoshift {

std::string verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "BOUNDED";
    case Verdict::TrendUnbounded: return "TREND-UNBOUNDED";
    default: return "INCONCLUSIVE";
  }
}

Verdict verdict_from_series(const std::vector<double>& s) {
  const size_t n = s.size();
  if (n < 3) return Verdict::Inconclusive;
  const size_t third = n / 3;
  double mid = kNegInf, last = kNegInf;
  for (size_t i = third; i < 2 * third; ++i) mid = std::max(mid, s[i]);
  for (size_t i = 2 * third; i < n; ++i) last = std::max(last, s[i]);
  if (last <= mid + std::log(2.0) + 1e-9) return Verdict::Bounded;
  bool growing = true;
  for (size_t i = n / 2; i + 1 < n; ++i)
    if (s[i + 1] <= s[i] + 1e-12) { growing = false; break; }
  return growing ? Verdict::TrendUnbounded : Verdict::Inconclusive;
}

namespace {

double approx(const Weight& w) {
  return w.is_zero() ? 0.0 : std::exp(w.log_mid());
}

bool masses_close(const Weight& a, const Weight& b, double tol) {
  if (a.has_exact() && b.has_exact() &&
      a.exact_value().compatible(b.exact_value()))
    return a.exact_value() == b.exact_value();
  return std::fabs(approx(a) - approx(b)) <= tol;
}

Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::TrendUnbounded || b == Verdict::TrendUnbounded)
    return Verdict::TrendUnbounded;
  if (a == Verdict::Inconclusive || b == Verdict::Inconclusive)
    return Verdict::Inconclusive;
  return Verdict::Bounded;
}

}  // namespace

void CylinderMeasure::verify(int depth, bool claim_invariant, double tol) {
  depth_ = depth;
  invariant_ = claim_invariant;
  Weight total = Weight::zero();
  for (const Word& u : shift_->words(1)) total += mass(u);
  if (!masses_close(total, Weight::one(), tol))
    throw Error("level-1 masses of " + describe() + " do not sum to 1");
  for (int n = 1; n < depth; ++n) {
    for (const Word& u : shift_->words(n)) {
      const Weight mu = mass(u);
      Weight right = Weight::zero();
      Weight left = Weight::zero();
      for (Symbol a = 0; a < shift_->alphabet_size(); ++a) {
        Word ua = u;
        ua.push_back(a);
        if (shift_->allowable(ua)) right += mass(ua);
        if (claim_invariant) {
          Word au;
          au.reserve(u.size() + 1);
          au.push_back(a);
          au.insert(au.end(), u.begin(), u.end());
          if (shift_->allowable(au)) left += mass(au);
        }
      }
      if (!masses_close(right, mu, tol))
        throw Error("masses of " + describe() + " inconsistent at " + word_str(u));
      if (claim_invariant && !masses_close(left, mu, tol))
        throw Error(describe() + " is not shift invariant at " + word_str(u));
    }
  }
}

// ------------------------------------------------------------------- Markov

MarkovMeasure::MarkovMeasure(std::shared_ptr<const Subshift> shift,
                             std::vector<std::vector<ExactNum>> transition,
                             std::vector<ExactNum> stationary, int depth)
    : CylinderMeasure(std::move(shift)), p_(std::move(transition)),
      pi_(std::move(stationary)) {
  if (shift_->memory() != 1)
    throw Error("Markov measures require a memory-1 shift");
  const size_t k = static_cast<size_t>(shift_->alphabet_size());
  if (p_.size() != k || pi_.size() != k)
    throw Error("transition matrix shape does not match the alphabet");
  for (size_t a = 0; a < k; ++a) {
    if (p_[a].size() != k)
      throw Error("transition matrix is not square");
    for (size_t b = 0; b < k; ++b) {
      const bool edge = shift_->allowable({static_cast<Symbol>(a),
                                           static_cast<Symbol>(b)});
      if (!edge && p_[a][b].sign() != 0)
        throw Error("transition mass on a forbidden 2-block");
      if (p_[a][b].sign() < 0) throw Error("negative transition probability");
    }
    if (pi_[a].sign() < 0) throw Error("negative stationary mass");
  }
  verify(depth, true);
}

Weight MarkovMeasure::mass(const Word& u) const {
  if (u.empty()) return Weight::one();
  for (Symbol a : u)
    if (a < 0 || a >= shift_->alphabet_size()) throw Error("symbol out of range");
  ExactNum m = pi_[u[0]];
  for (size_t i = 0; i + 1 < u.size(); ++i) {
    if (m.is_zero()) return Weight::zero();
    m = m * p_[u[i]][u[i + 1]];
  }
  if (m.is_zero()) return Weight::zero();
  return Weight::exact(m);
}

int MarkovMeasure::max_level() const { return INT_MAX; }

std::string MarkovMeasure::describe() const {
  std::ostringstream os;
  os << "markov(" << shift_->alphabet_size() << " states)";
  return os.str();
}

std::unique_ptr<MarkovMeasure> MarkovMeasure::bernoulli(
    std::shared_ptr<const Subshift> shift, std::vector<ExactNum> p, int depth) {
  const size_t k = p.size();
  std::vector<std::vector<ExactNum>> rows(k, p);
  return std::make_unique<MarkovMeasure>(std::move(shift), std::move(rows),
                                         std::move(p), depth);
}

namespace {

// exact stationary row vector of a rational stochastic matrix
std::vector<ExactNum> exact_stationary(
    const std::vector<std::vector<Rational>>& p) {
  const size_t k = p.size();
  // solve pi (P - I) = 0 with sum pi = 1: columns give k equations, replace
  // the last by the normalization
  std::vector<std::vector<Rational>> m(k, std::vector<Rational>(k + 1, 0));
  for (size_t b = 0; b + 1 < k; ++b) {
    for (size_t a = 0; a < k; ++a) m[b][a] = p[a][b];
    m[b][b] -= 1;
  }
  for (size_t a = 0; a < k; ++a) m[k - 1][a] = 1;
  m[k - 1][k] = 1;
  for (size_t col = 0, row = 0; col < k && row < k; ++col) {
    size_t piv = row;
    while (piv < k && m[piv][col] == 0) ++piv;
    if (piv == k) continue;
    std::swap(m[row], m[piv]);
    const Rational lead = m[row][col];
    for (auto& e : m[row]) e /= lead;
    for (size_t r = 0; r < k; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const Rational factor = m[r][col];
      for (size_t c = 0; c <= k; ++c) m[r][c] -= factor * m[row][c];
    }
    ++row;
  }
  std::vector<ExactNum> pi(k);
  for (size_t a = 0; a < k; ++a) pi[a] = ExactNum(m[a][k]);
  return pi;
}

}  // namespace

std::unique_ptr<MarkovMeasure> MarkovMeasure::parry(
    std::shared_ptr<const Subshift> shift, int depth) {
  if (shift->memory() != 1)
    throw Error("the maximal-entropy Markov measure needs a memory-1 shift");
  if (!shift->irreducible())
    throw Error("the maximal-entropy Markov measure needs irreducibility");
  const int k = shift->alphabet_size();
  std::vector<std::vector<int>> adj(k, std::vector<int>(k, 0));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b)
      adj[a][b] = shift->allowable({a, b}) ? 1 : 0;

  if (k == 2) {
    const int tr = adj[0][0] + adj[1][1];
    const int det = adj[0][0] * adj[1][1] - adj[0][1] * adj[1][0];
    const std::int64_t disc = static_cast<std::int64_t>(tr) * tr - 4 * det;
    const ExactNum lambda(Rational(tr, 2), Rational(1, 2), disc);
    ExactNum v0, v1, u0, u1;
    if (adj[0][1] != 0) {
      v0 = ExactNum(Rational(adj[0][1]));
      v1 = lambda - ExactNum(Rational(adj[0][0]));
    } else {
      v0 = lambda - ExactNum(Rational(adj[1][1]));
      v1 = ExactNum(Rational(adj[1][0]));
    }
    if (adj[1][0] != 0) {
      u0 = ExactNum(Rational(adj[1][0]));
      u1 = lambda - ExactNum(Rational(adj[0][0]));
    } else {
      u0 = lambda - ExactNum(Rational(adj[1][1]));
      u1 = ExactNum(Rational(adj[0][1]));
    }
    const ExactNum uv = u0 * v0 + u1 * v1;
    std::vector<ExactNum> v{v0, v1}, u{u0, u1};
    std::vector<std::vector<ExactNum>> trans(2, std::vector<ExactNum>(2));
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        trans[a][b] = adj[a][b] == 0
                          ? ExactNum()
                          : ExactNum(Rational(1)) * v[b] / (lambda * v[a]);
    std::vector<ExactNum> pi{u0 * v0 / uv, u1 * v1 / uv};
    return std::make_unique<MarkovMeasure>(std::move(shift), std::move(trans),
                                           std::move(pi), depth);
  }

  // larger graphs: floating eigen data rounded to rationals, rows
  // renormalized exactly, stationary vector re-solved exactly
  std::vector<double> v(k, 1.0);
  for (int it = 0; it < 400; ++it) {
    std::vector<double> nv(k, 0);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b) nv[a] += adj[a][b] * v[b];
    double nrm = 0;
    for (double e : nv) nrm = std::max(nrm, e);
    if (nrm == 0) throw Error("degenerate transition graph");
    for (double& e : nv) e /= nrm;
    v = std::move(nv);
  }
  double lambda = 0;
  for (int b = 0; b < k; ++b) lambda += adj[0][b] * v[b];
  lambda /= v[0];
  std::vector<std::vector<Rational>> trans(k, std::vector<Rational>(k, 0));
  for (int a = 0; a < k; ++a) {
    Rational row_sum = 0;
    for (int b = 0; b < k; ++b) {
      if (adj[a][b] == 0) continue;
      trans[a][b] = Rational(adj[a][b] * v[b] / (lambda * v[a]));
      row_sum += trans[a][b];
    }
    for (int b = 0; b < k; ++b) trans[a][b] /= row_sum;
  }
  const std::vector<ExactNum> pi = exact_stationary(trans);
  std::vector<std::vector<ExactNum>> exact_trans(k, std::vector<ExactNum>(k));
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) exact_trans[a][b] = ExactNum(trans[a][b]);
  return std::make_unique<MarkovMeasure>(std::move(shift),
                                         std::move(exact_trans), pi, depth);
}

// ------------------------------------------------------------------- atomic

AtomicMeasure::AtomicMeasure(std::shared_ptr<const Subshift> shift,
                             std::vector<PeriodicPoint> points,
                             std::vector<ExactNum> weights, int depth)
    : CylinderMeasure(std::move(shift)), points_(std::move(points)),
      weights_(std::move(weights)) {
  if (points_.empty() || points_.size() != weights_.size())
    throw Error("atomic measure needs matching points and weights");
  ExactNum total;
  for (const auto& w : weights_) {
    if (w.sign() < 0) throw Error("negative atom weight");
    total = total + w;
  }
  if (!total.is_one()) throw Error("atom weights must sum to 1");
  for (const auto& p : points_)
    if (p.period.empty()) throw Error("periodic point needs a nonempty period");
  try {
    verify(depth, true);
  } catch (const Error&) {
    verify(depth, false);
  }
}

Weight AtomicMeasure::mass(const Word& u) const {
  ExactNum m;
  for (size_t i = 0; i < points_.size(); ++i) {
    bool hit = true;
    for (size_t j = 0; j < u.size(); ++j)
      if (points_[i].at(j) != u[j]) { hit = false; break; }
    if (hit) m = m + weights_[i];
  }
  if (m.is_zero()) return Weight::zero();
  return Weight::exact(m);
}

int AtomicMeasure::max_level() const { return INT_MAX; }

std::string AtomicMeasure::describe() const {
  std::ostringstream os;
  os << "atomic(" << points_.size() << " points)";
  return os.str();
}

// -------------------------------------------------------------------- table

TableMeasure::TableMeasure(std::shared_ptr<const Subshift> shift,
                           std::map<Word, Weight> masses, int depth,
                           bool claim_invariant, bool verify_consistency)
    : CylinderMeasure(std::move(shift)), masses_(std::move(masses)) {
  if (verify_consistency) {
    verify(depth, claim_invariant);
  } else {
    depth_ = depth;
    invariant_ = claim_invariant;
  }
}

Weight TableMeasure::mass(const Word& u) const {
  if (u.empty()) return Weight::one();
  if (static_cast<int>(u.size()) > depth_)
    throw Error("mass requested beyond the table depth");
  const auto it = masses_.find(u);
  return it == masses_.end() ? Weight::zero() : it->second;
}

std::string TableMeasure::describe() const {
  std::ostringstream os;
  os << "table(depth " << depth_ << ")";
  return os.str();
}

// ------------------------------------------------------------------- checks

GibbsReport gibbs_verify(const CylinderMeasure& mu, const Potential& f,
                         std::optional<double> pressure, int depth,
                         bool upper_only, size_t cap) {
  GibbsReport r;
  r.upper_only = upper_only;
  r.tested_depth = depth = std::min(depth, mu.max_level());
  if (pressure) {
    r.p_used = *pressure;
    r.p_supplied = true;
  } else {
    Weight z;
    if (auto closed = f.partition_sum(depth)) {
      z = *closed;
    } else {
      z = Weight::zero();
      for (const Word& u : f.shift().words(depth, cap)) z += f.eval(u).w;
    }
    r.p_used = z.log_mid() / depth;
    r.notes.push_back("pressure estimated from the level partition sum");
  }
  bool zero_mass = false;
  bool all_exact_one = true;
  double hi_all = kNegInf, lo_all = -kNegInf;
  for (int n = 1; n <= depth; ++n) {
    const Weight enp =
        r.p_used == 0.0 ? Weight::one() : Weight::log_point(n * r.p_used);
    double hi = kNegInf, lo = -kNegInf;
    for (const Word& u : mu.shift().words(n, cap)) {
      const Weight m = mu.mass(u);
      if (m.is_zero()) {
        zero_mass = true;
        all_exact_one = false;
        continue;
      }
      const Weight ratio = m * enp / f.eval(u).w;
      hi = std::max(hi, ratio.log_hi());
      lo = std::min(lo, ratio.log_lo());
      if (!(ratio.has_exact() && ratio.exact_value().is_one()))
        all_exact_one = false;
    }
    r.per_level_hi.push_back(hi);
    r.per_level_lo.push_back(lo);
    hi_all = std::max(hi_all, hi);
    lo_all = std::min(lo_all, lo);
  }
  r.c_upper = std::exp(hi_all);
  r.c_lower = upper_only ? 0.0 : std::exp(lo_all);
  r.exact_unit = all_exact_one && !upper_only;
  std::vector<double> neg_lo;
  for (double v : r.per_level_lo) neg_lo.push_back(-v);
  r.verdict = verdict_from_series(r.per_level_hi);
  if (!upper_only)
    r.verdict = combine(r.verdict, verdict_from_series(neg_lo));
  if (zero_mass && !upper_only) {
    r.verdict = Verdict::TrendUnbounded;
    r.notes.push_back("zero-mass cylinder with positive density");
  }
  return r;
}

namespace {

double block_entropy(const CylinderMeasure& mu, int d, size_t cap) {
  if (d <= 0) return 0.0;
  double h = 0;
  for (const Word& u : mu.shift().words(d, cap)) {
    const Weight m = mu.mass(u);
    if (m.is_zero()) continue;
    h -= approx(m) * m.log_mid();
  }
  return h;
}

}  // namespace

EntropyBracket entropy(const CylinderMeasure& mu, int depth, size_t cap) {
  if (depth < 2) throw Error("entropy bracket needs depth >= 2");
  depth = std::min(depth, mu.max_level());
  EntropyBracket r;
  r.depth_used = depth;
  const double h0 = block_entropy(mu, depth - 2, cap);
  const double h1 = block_entropy(mu, depth - 1, cap);
  const double h2 = block_entropy(mu, depth, cap);
  r.lower = std::max(0.0, h2 - h1);
  r.upper = std::max(0.0, h1 - h0);
  if (r.lower > r.upper) r.lower = r.upper;  // numerical noise only
  if (const auto* mk = dynamic_cast<const MarkovMeasure*>(&mu)) {
    double h = 0;
    const auto& pi = mk->stationary();
    const auto& p = mk->transition();
    for (size_t a = 0; a < pi.size(); ++a)
      for (size_t b = 0; b < pi.size(); ++b)
        if (p[a][b].sign() > 0)
          h -= pi[a].value() * p[a][b].value() * p[a][b].log_value();
    r.markov_closed_form = h;
  }
  return r;
}

AverageBracket potential_average(const CylinderMeasure& mu, const Potential& f,
                                 int depth, const StructureCertificate* sub,
                                 const StructureCertificate* sup, size_t cap) {
  depth = std::min(depth, mu.max_level());
  AverageBracket r;
  r.depth_used = depth;
  double rep_sum = 0, lo_sum = 0, hi_sum = 0;
  for (const Word& u : mu.shift().words(depth, cap)) {
    const Weight m = mu.mass(u);
    if (m.is_zero()) continue;
    const double mv = approx(m);
    const Eval e = f.eval(u);
    rep_sum += mv * e.rep;
    lo_sum += mv * e.w.log_lo();
    hi_sum += mv * e.w.log_hi();
  }
  r.value = rep_sum / depth;
  r.upper = hi_sum / depth;
  r.lower = lo_sum / depth;
  std::vector<std::string> missing;
  if (sub)
    r.upper += sub->constant / depth;
  else
    missing.push_back("upper");
  if (sup)
    r.lower -= sup->constant / depth;
  else
    missing.push_back("lower");
  if (!missing.empty()) {
    std::ostringstream os;
    os << "uncertified sides:";
    for (const auto& s : missing) os << " " << s;
    os << " (finite-level value only)";
    r.note = os.str();
  }
  return r;
}

ErgodicityBound ergodicity_lower_bound(const CylinderMeasure& mu, int spec_k,
                                       int max_m, int max_n, int l_max,
                                       size_t cap) {
  const Subshift& x = mu.shift();
  ErgodicityBound r;
  double best = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= max_m; ++m) {
    const auto us = x.words(m, cap);
    for (int n = 1; n <= max_n; ++n) {
      const auto vs = x.words(n, cap);
      for (int l = m + 2 * spec_k + 1; l <= l_max; ++l) {
        if (l + n > mu.max_level()) break;
        for (const Word& u : us) {
          const double mu_u = approx(mu.mass(u));
          if (mu_u == 0) continue;
          std::map<Word, double> joint;
          for (const Word& e : x.followers(u, l - m + n, Direction::Follower,
                                           cap))
            joint[suffix(e, n)] += approx(mu.mass(concat(u, e)));
          for (const Word& v : vs) {
            const double mu_v = approx(mu.mass(v));
            if (mu_v == 0) continue;
            const auto it = joint.find(v);
            const double ratio =
                (it == joint.end() ? 0.0 : it->second) / (mu_u * mu_v);
            ++r.pairs_tested;
            if (ratio < best) {
              best = ratio;
              r.witness_u = u;
              r.witness_v = v;
              r.witness_l = l;
            }
          }
        }
      }
    }
  }
  r.min_ratio = r.pairs_tested == 0 ? 0.0 : best;
  return r;
}

}  // namespace thermoshift
