#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thermoshift/potential.hpp"
#include "thermoshift/subshift.hpp"
#include "thermoshift/weight.hpp"

namespace thermoshift {

enum class Verdict { Bounded, TrendUnbounded, Inconclusive };
std::string verdict_str(Verdict v);

/// Shared stabilization rule: a per-level series of log-scale extremes is
/// BOUNDED when the last third stays within a factor 2 (log 2 additively) of
/// the middle third, TREND-UNBOUNDED when it keeps growing instead.
Verdict verdict_from_series(const std::vector<double>& extremes);

/// A Borel probability measure seen through its cylinder masses.  Masses are
/// verified (level-1 sum, Kolmogorov consistency, invariance when claimed)
/// up to `depth` at construction; formula-backed measures keep answering
/// beyond the verified depth.
class CylinderMeasure {
 public:
  explicit CylinderMeasure(std::shared_ptr<const Subshift> shift)
      : shift_(std::move(shift)) {}
  virtual ~CylinderMeasure() = default;

  const Subshift& shift() const { return *shift_; }
  std::shared_ptr<const Subshift> shift_ptr() const { return shift_; }

  virtual Weight mass(const Word& u) const = 0;
  virtual std::string describe() const = 0;

  int depth() const { return depth_; }
  /// Largest level mass() answers for; INT_MAX for formula-backed measures.
  virtual int max_level() const { return depth_; }
  bool invariant() const { return invariant_; }

 protected:
  /// Checks level-1 normalization, consistency, and (if claimed) invariance
  /// up to `depth`; exact masses are checked exactly, floats to `tol`.
  void verify(int depth, bool claim_invariant, double tol = 1e-10);

  std::shared_ptr<const Subshift> shift_;
  int depth_ = 0;
  bool invariant_ = false;
};

class MarkovMeasure : public CylinderMeasure {
 public:
  /// transition[a][b] must be supported exactly on the allowable 2-blocks of
  /// a memory-1 shift; stationary must be a fixed row vector.
  MarkovMeasure(std::shared_ptr<const Subshift> shift,
                std::vector<std::vector<ExactNum>> transition,
                std::vector<ExactNum> stationary, int depth);

  static std::unique_ptr<MarkovMeasure> bernoulli(
      std::shared_ptr<const Subshift> shift, std::vector<ExactNum> p, int depth);
  /// Measure of maximal entropy of an irreducible memory-1 SFT.  Exact for
  /// two-state graphs (quadratic field), floating otherwise.
  static std::unique_ptr<MarkovMeasure> parry(
      std::shared_ptr<const Subshift> shift, int depth);

  Weight mass(const Word& u) const override;
  int max_level() const override;
  std::string describe() const override;
  const std::vector<std::vector<ExactNum>>& transition() const { return p_; }
  const std::vector<ExactNum>& stationary() const { return pi_; }

 private:
  std::vector<std::vector<ExactNum>> p_;
  std::vector<ExactNum> pi_;
};

struct PeriodicPoint {
  Word preperiod;  // may be empty
  Word period;     // nonempty
  Symbol at(size_t i) const {  // 0-based
    if (i < preperiod.size()) return preperiod[i];
    return period[(i - preperiod.size()) % period.size()];
  }
};

class AtomicMeasure : public CylinderMeasure {
 public:
  AtomicMeasure(std::shared_ptr<const Subshift> shift,
                std::vector<PeriodicPoint> points, std::vector<ExactNum> weights,
                int depth);
  Weight mass(const Word& u) const override;
  int max_level() const override;
  std::string describe() const override;

 private:
  std::vector<PeriodicPoint> points_;
  std::vector<ExactNum> weights_;
};

/// Measure given by an explicit word -> mass table (gibbs_build output,
/// loaded tables).
class TableMeasure : public CylinderMeasure {
 public:
  TableMeasure(std::shared_ptr<const Subshift> shift,
               std::map<Word, Weight> masses, int depth, bool claim_invariant,
               bool verify_consistency = true);
  Weight mass(const Word& u) const override;
  std::string describe() const override;

 private:
  std::map<Word, Weight> masses_;
};

struct GibbsReport {
  double p_used = 0.0;
  bool p_supplied = false;
  double c_lower = 1.0, c_upper = 1.0;  // extremes of mu[u] e^{nP} / f_n
  bool exact_unit = false;              // every ratio exactly 1
  int tested_depth = 0;
  bool upper_only = false;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<double> per_level_hi, per_level_lo;  // log-scale extremes
  std::vector<std::string> notes;
};

GibbsReport gibbs_verify(const CylinderMeasure& mu, const Potential& f,
                         std::optional<double> pressure, int depth,
                         bool upper_only = false,
                         size_t cap = Subshift::kDefaultCap);

struct EntropyBracket {
  double lower = 0.0, upper = 0.0;  // consecutive conditional entropies
  int depth_used = 0;
  std::optional<double> markov_closed_form;
};

EntropyBracket entropy(const CylinderMeasure& mu, int depth,
                       size_t cap = Subshift::kDefaultCap);

struct AverageBracket {
  double value = 0.0;  // (1/n) sum mass * rep at n = depth
  double lower = 0.0, upper = 0.0;
  int depth_used = 0;
  std::string note;
};

AverageBracket potential_average(const CylinderMeasure& mu, const Potential& f,
                                 int depth,
                                 const StructureCertificate* sub = nullptr,
                                 const StructureCertificate* sup = nullptr,
                                 size_t cap = Subshift::kDefaultCap);

struct ErgodicityBound {
  double min_ratio = 0.0;  // min of mu([u] cap sigma^-l [v]) / (mu[u] mu[v])
  Word witness_u, witness_v;
  int witness_l = 0;
  int pairs_tested = 0;
};

/// Mixing lower bound over |u| <= max_m, |v| <= max_n, m + 2k < l <= l_max.
ErgodicityBound ergodicity_lower_bound(const CylinderMeasure& mu, int spec_k,
                                       int max_m, int max_n, int l_max,
                                       size_t cap = Subshift::kDefaultCap);

}  // namespace thermoshift
