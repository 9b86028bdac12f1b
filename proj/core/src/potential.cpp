#include "thermoshift/potential.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "thermoshift/measure.hpp"

namespace thermoshift {

namespace {

// Z_n through the weighted transfer matrix, n >= memory.
Weight transfer_partition_sum(const Subshift& x, const TransferMatrix& tm, int n) {
  const int m = x.memory();
  std::vector<Weight> v(x.states().size(), Weight::one());
  for (int step = 0; step < n - m; ++step) {
    std::vector<Weight> nv(v.size(), Weight::zero());
    for (size_t s = 0; s < v.size(); ++s) {
      for (Symbol a = 0; a < x.alphabet_size(); ++a) {
        const int t = x.next_state(static_cast<int>(s), a);
        if (t < 0) continue;
        nv[s] += tm.edge[s][a] * v[t];
      }
    }
    v = std::move(nv);
  }
  Weight z = Weight::zero();
  for (size_t s = 0; s < v.size(); ++s) z += tm.init[s] * v[s];
  return z;
}

}  // namespace

// ---------------------------------------------------------------- additive

AdditivePotential::AdditivePotential(std::shared_ptr<const Subshift> shift,
                                     int window,
                                     std::map<Word, Weight> window_weights)
    : Potential(std::move(shift)), window_(window), weights_(std::move(window_weights)) {
  if (window_ < 1) throw Error("window must be >= 1");
  for (const Word& w : shift_->words(window_)) {
    if (!weights_.count(w))
      throw Error("additive potential misses window " + word_str(w));
    if (weights_.at(w).is_zero())
      throw Error("additive potential has zero weight on " + word_str(w));
  }
  declared_.subadditive = declared_.superadditive = true;  // exact additivity
}

std::unique_ptr<AdditivePotential> AdditivePotential::zero(
    std::shared_ptr<const Subshift> shift) {
  std::map<Word, Weight> w;
  for (Symbol a = 0; a < shift->alphabet_size(); ++a)
    if (shift->allowable({a})) w[{a}] = Weight::one();
  return std::make_unique<AdditivePotential>(std::move(shift), 1, std::move(w));
}

Weight AdditivePotential::window_weight(const Word& w) const {
  const auto it = weights_.find(w);
  if (it == weights_.end())
    throw Error("no weight for window " + word_str(w));
  return it->second;
}

Eval AdditivePotential::eval(const Word& u) const {
  const int n = static_cast<int>(u.size());
  if (n < 1) throw Error("eval needs |u| >= 1");
  if (window_ == 1) {
    Weight w = Weight::one();
    for (Symbol a : u) w = w * window_weight({a});
    return {w.log_hi(), w};
  }
  // windows overhang the cylinder; range over all admissible extensions
  const auto exts = shift_->followers(u, window_ - 1);
  if (exts.empty()) throw Error("word has no extension of window length");
  double lo = 0, hi = 0, rep = 0;
  bool first = true;
  for (const Word& e : exts) {
    const Word ue = concat(u, e);
    double total = 0;
    for (int i = 0; i < n; ++i)
      total += window_weight(subword(ue, i, window_)).log_mid();
    if (first) {
      rep = total;  // extensions come lexicographically sorted
      lo = hi = total;
      first = false;
    } else {
      lo = std::min(lo, total);
      hi = std::max(hi, total);
    }
  }
  return {rep, Weight::log_interval(lo, hi)};
}

std::optional<Weight> AdditivePotential::partition_sum(int n) const {
  if (window_ != 1) return std::nullopt;
  if (n < shift_->memory()) {
    Weight z = Weight::zero();
    for (const Word& u : shift_->words(n)) z += eval(u).w;
    return z;
  }
  return transfer_partition_sum(*shift_, *transfer_matrix(), n);
}

std::optional<TransferMatrix> AdditivePotential::transfer_matrix() const {
  if (window_ != 1) return std::nullopt;
  TransferMatrix tm;
  const auto& states = shift_->states();
  tm.edge.resize(states.size());
  for (size_t s = 0; s < states.size(); ++s) {
    tm.edge[s].assign(shift_->alphabet_size(), Weight::zero());
    for (Symbol a = 0; a < shift_->alphabet_size(); ++a)
      if (shift_->next_state(static_cast<int>(s), a) >= 0)
        tm.edge[s][a] = window_weight({a});
    Weight init = Weight::one();
    for (Symbol a : states[s]) init = init * window_weight({a});
    tm.init.push_back(init);
  }
  return tm;
}

std::string AdditivePotential::describe() const {
  std::ostringstream os;
  os << "additive(window=" << window_ << ")";
  return os.str();
}

// ----------------------------------------------------------------- cocycle

CocyclePotential::CocyclePotential(
    std::shared_ptr<const Subshift> shift,
    std::vector<std::vector<std::vector<double>>> matrices, double exponent,
    MatrixNorm norm)
    : Potential(std::move(shift)), matrices_(std::move(matrices)),
      exponent_(exponent), norm_(norm) {
  if (static_cast<int>(matrices_.size()) != shift_->alphabet_size())
    throw Error("need one matrix per symbol");
  dim_ = static_cast<int>(matrices_.front().size());
  for (const auto& mat : matrices_) {
    if (static_cast<int>(mat.size()) != dim_) throw Error("matrix dimensions differ");
    for (const auto& row : mat)
      if (static_cast<int>(row.size()) != dim_) throw Error("matrix not square");
  }
}

namespace {

double matrix_norm(const std::vector<std::vector<double>>& mat, MatrixNorm norm) {
  const int d = static_cast<int>(mat.size());
  if (norm == MatrixNorm::MaxEntry) {
    double v = 0;
    for (const auto& row : mat)
      for (double e : row) v = std::max(v, std::fabs(e));
    return v;
  }
  if (d == 1) return std::fabs(mat[0][0]);
  // largest singular value by power iteration on M^T M
  std::vector<double> v(d, 1.0 / std::sqrt(static_cast<double>(d)));
  double lambda = 0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> mv(d, 0), mtmv(d, 0);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) mv[i] += mat[i][j] * v[j];
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) mtmv[j] += mat[i][j] * mv[i];
    double nrm = 0;
    for (double e : mtmv) nrm += e * e;
    nrm = std::sqrt(nrm);
    if (nrm == 0) return 0;
    lambda = nrm;
    for (int j = 0; j < d; ++j) v[j] = mtmv[j] / nrm;
  }
  return std::sqrt(lambda);
}

}  // namespace

Eval CocyclePotential::eval(const Word& u) const {
  if (u.empty()) throw Error("eval needs |u| >= 1");
  std::vector<std::vector<double>> prod = matrices_[u[0]];
  double log_scale = 0;
  for (size_t i = 1; i < u.size(); ++i) {
    const auto& b = matrices_[u[i]];
    std::vector<std::vector<double>> next(dim_, std::vector<double>(dim_, 0));
    for (int r = 0; r < dim_; ++r)
      for (int c = 0; c < dim_; ++c)
        for (int t = 0; t < dim_; ++t) next[r][c] += prod[r][t] * b[t][c];
    double s = 0;
    for (const auto& row : next)
      for (double e : row) s = std::max(s, std::fabs(e));
    if (s == 0) throw Error("matrix product vanished on " + word_str(u));
    for (auto& row : next)
      for (double& e : row) e /= s;
    log_scale += std::log(s);
    prod = std::move(next);
  }
  const double nrm = matrix_norm(prod, norm_);
  if (nrm <= 0) throw Error("zero norm on " + word_str(u));
  const double logf = exponent_ * (std::log(nrm) + log_scale);
  if (!std::isfinite(logf)) throw Error("cocycle evaluation overflow");
  return {logf, Weight::log_point(logf)};
}

std::optional<Weight> CocyclePotential::partition_sum(int n) const {
  if (dim_ != 1) return std::nullopt;
  if (n < shift_->memory()) {
    Weight z = Weight::zero();
    for (const Word& u : shift_->words(n)) z += eval(u).w;
    return z;
  }
  return transfer_partition_sum(*shift_, *transfer_matrix(), n);
}

std::optional<TransferMatrix> CocyclePotential::transfer_matrix() const {
  if (dim_ != 1) return std::nullopt;
  TransferMatrix tm;
  const auto& states = shift_->states();
  const auto sym_weight = [&](Symbol a) {
    return Weight::log_point(exponent_ * std::log(std::fabs(matrices_[a][0][0])));
  };
  tm.edge.resize(states.size());
  for (size_t s = 0; s < states.size(); ++s) {
    tm.edge[s].assign(shift_->alphabet_size(), Weight::zero());
    for (Symbol a = 0; a < shift_->alphabet_size(); ++a)
      if (shift_->next_state(static_cast<int>(s), a) >= 0)
        tm.edge[s][a] = sym_weight(a);
    Weight init = Weight::one();
    for (Symbol a : states[s]) init = init * sym_weight(a);
    tm.init.push_back(init);
  }
  return tm;
}

std::string CocyclePotential::describe() const {
  std::ostringstream os;
  os << "cocycle(dim=" << dim_ << ",t=" << exponent_ << ",norm="
     << (norm_ == MatrixNorm::Operator2 ? "op2" : "maxentry") << ")";
  return os.str();
}

// ------------------------------------------------------------------ measure

MeasurePotential::MeasurePotential(std::shared_ptr<const Subshift> shift,
                                   std::shared_ptr<const CylinderMeasure> mu)
    : Potential(std::move(shift)), mu_(std::move(mu)) {}

Eval MeasurePotential::eval(const Word& u) const {
  if (u.empty()) throw Error("eval needs |u| >= 1");
  if (static_cast<int>(u.size()) > mu_->max_level())
    throw Error("measure-derived potential evaluated beyond the measure depth");
  const Weight w = mu_->mass(u);
  return {w.log_hi(), w};
}

std::optional<Weight> MeasurePotential::partition_sum(int n) const {
  if (n > mu_->max_level()) return std::nullopt;
  try {
    Weight z = Weight::zero();
    for (const Word& u : shift_->words(n)) z += mu_->mass(u);
    return z;
  } catch (const CapError&) {
    // level sums telescope to 1; consistency was verified at construction
    return Weight::one();
  }
}

std::string MeasurePotential::describe() const {
  return "measure-derived(" + mu_->describe() + ")";
}

// ----------------------------------------------------------------- constant

ConstantSequencePotential::ConstantSequencePotential(
    std::shared_ptr<const Subshift> shift, std::vector<double> values,
    double quad_a, double quad_b, double quad_c)
    : Potential(std::move(shift)), values_(std::move(values)), qa_(quad_a),
      qb_(quad_b), qc_(quad_c) {}

double ConstantSequencePotential::level_value(int n) const {
  if (n >= 1 && n <= static_cast<int>(values_.size())) return values_[n - 1];
  return qa_ * n * n + qb_ * n + qc_;
}

Eval ConstantSequencePotential::eval(const Word& u) const {
  if (u.empty()) throw Error("eval needs |u| >= 1");
  const double c = level_value(static_cast<int>(u.size()));
  return {c, Weight::log_point(c)};
}

std::optional<Weight> ConstantSequencePotential::partition_sum(int n) const {
  const Weight count = Weight::exact(ExactNum(Rational(shift_->word_count(n))));
  const double c = level_value(n);
  if (c == 0.0) return count;
  return count * Weight::log_point(c);
}

std::string ConstantSequencePotential::describe() const {
  std::ostringstream os;
  os << "constant-sequence(" << qa_ << "n^2" << (qb_ >= 0 ? "+" : "") << qb_
     << "n" << (qc_ >= 0 ? "+" : "") << qc_ << ")";
  return os.str();
}

// ------------------------------------------------------------------- checks

VariationReport bounded_variation_check(const Potential& f, int max_level,
                                        size_t cap) {
  VariationReport r;
  for (int n = 1; n <= max_level; ++n) {
    double worst = 0;
    for (const Word& u : f.shift().words(n, cap))
      worst = std::max(worst, f.eval(u).radius());
    r.per_level.push_back(worst);
    r.max_radius = std::max(r.max_radius, worst);
  }
  // strictly increasing radii over the last half signal an unbounded trend
  const size_t half = r.per_level.size() / 2;
  if (half >= 2) {
    bool increasing = r.per_level.back() > 0;
    for (size_t i = half; i + 1 < r.per_level.size(); ++i)
      if (r.per_level[i + 1] <= r.per_level[i]) increasing = false;
    r.unbounded_trend = increasing;
  }
  return r;
}

std::pair<StructureCertificate, StructureCertificate> structure_check(
    const Potential& f, int max_m, int max_n, size_t cap) {
  StructureCertificate sub{StructureKind::Subadditive, -kNegInf, 0, max_m, max_n,
                           false, false};
  StructureCertificate sup{StructureKind::Superadditive, -kNegInf, 0, max_m,
                           max_n, false, false};
  sub.defect = kNegInf;
  sup.defect = kNegInf;
  for (int m = 1; m <= max_m; ++m) {
    for (int n = 1; n <= max_n; ++n) {
      for (const Word& w : f.shift().words(m + n, cap)) {
        const Eval whole = f.eval(w);
        const Eval left = f.eval(prefix(w, m));
        const Eval right = f.eval(suffix(w, n));
        sub.defect = std::max(sub.defect, whole.w.log_hi() - left.w.log_lo() -
                                              right.w.log_lo());
        sup.defect = std::max(sup.defect, left.w.log_hi() + right.w.log_hi() -
                                              whole.w.log_lo());
      }
    }
  }
  const auto finish = [&](StructureCertificate& c, bool decl, double decl_c) {
    c.declared = decl;
    c.constant = std::max({c.defect, decl ? decl_c : 0.0, 0.0});
    if (decl && c.defect > decl_c + 1e-9) c.failed = true;
  };
  const auto& d = f.declared_structure();
  finish(sub, d.subadditive, d.constant);
  finish(sup, d.superadditive, d.constant);
  return {sub, sup};
}

}  // namespace thermoshift
