#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "thermoshift/check.hpp"
#include "thermoshift/measure.hpp"
#include "thermoshift/potential.hpp"

namespace thermoshift {

enum class Side { Right, Left };
enum class BalanceMode { TwoSided, UpperOnly };

/// Ratio sweep of the right/left balance condition over u in B_m, m <= max_m,
/// n <= max_n, interval-widened.  Upper-only mode scores only the upper
/// inequality (the other side is still tabulated).
CheckReport balanced_check(const Potential& f, Side side, BalanceMode mode,
                           int max_m, int max_n,
                           size_t cap = Subshift::kDefaultCap);

struct QMPair {
  Word u, v;
  std::optional<Word> best_w;
  double log_ratio = 0.0;  // log f(uwv) - log f(u) - log f(v), widened down
};

struct QMCertificate {
  bool present = false;
  int k = 0;  // gap budget in force (smallest workable, or k_max when absent)
  double d_log = 0.0;  // worst best-case ratio; valid when present
  bool strict = false;  // gap length exactly k instead of <= k
  std::vector<QMPair> pairs;
  std::string note;
};

/// Searches connecting words for every pair |u|, |v| <= max_range.  Absent
/// (present = false) when some pair admits no connecting word within the
/// budget; the offending pair is recorded.
QMCertificate qm_check(const Potential& f, int k_max, int max_range,
                       bool strict = false,
                       size_t cap = Subshift::kDefaultCap);

/// Lower-bound sum conditions equivalent to right/left balance for
/// subadditive sequences; first of the pair is the follower-side check,
/// second the predecessor side.
std::pair<CheckReport, CheckReport> subadditive_characterization_check(
    const Potential& f, int k, int max_m, int max_n,
    size_t cap = Subshift::kDefaultCap);

/// Upper-bound sum conditions for superadditive sequences; the gap is the
/// shift's specification number and the check refuses when it is absent.
std::pair<CheckReport, CheckReport> superadditive_characterization_check(
    const Potential& f, int max_m, int max_n,
    size_t cap = Subshift::kDefaultCap);

/// Cross-quotient condition tying the follower sums to the gap-k gluing
/// sums; an empty right-hand side for a reachable pair is an unbounded
/// verdict with the pair as witness.
CheckReport ncl_check(const Potential& f, int k, int max_m, int max_n,
                      size_t cap = Subshift::kDefaultCap);

struct GibbsBuildResult {
  std::shared_ptr<TableMeasure> measure;
  double invariance_defect = 0.0;
  /// Max cylinder-mass drift across rebuilds at the last three levels.
  double cauchy_defect = 0.0;
  int n_levels = 0, cesaro_n = 0, depth = 0;
  std::vector<std::string> notes;
};

/// Atomic approximant at level n_levels with f-proportional weights,
/// averaged over the first cesaro_n shift pushforwards, truncated to the
/// requested depth.
GibbsBuildResult gibbs_build(const Potential& f, int n_levels, int cesaro_n,
                             int depth,
                             std::optional<Verdict> balance_verdict = {},
                             size_t cap = Subshift::kDefaultCap);

struct SubmultiAudit {
  int k = 0;
  double m_log = 0.0;      // log of the variation bound M
  double c_sub = 0.0;      // subadditivity constant
  double d_log = 0.0;      // log D' (clamped <= 0)
  double d2_log = 0.0;     // log D''
  double zk_log = 0.0;     // log Z_k
  double proof_c_log = 0.0;
  double empirical_c_log = 0.0;
  bool within = false;
  std::string note;
};

/// Assembles the proof-side balance constant from the quasi-multiplicativity
/// data and compares it against the observed one.
SubmultiAudit submulti_audit(const Potential& f, const QMCertificate& qm,
                             const VariationReport& var,
                             const StructureCertificate& sub,
                             const CheckReport& balanced,
                             size_t cap = Subshift::kDefaultCap);

}  // namespace thermoshift
