#pragma once

#include <string>
#include <vector>

#include "thermoshift/measure.hpp"
#include "thermoshift/word.hpp"

namespace thermoshift {

enum class Condition {
  RB, LB, RBUpper, LBUpper, BMS, KEY1, SS1, SS2, SUP1, SUP2, QM, NCL
};
std::string condition_str(Condition c);

/// One (m, n) cell of a ratio sweep: extremes of the log-ratio over all
/// admissible word choices, with the words attaining them.
struct RatioCell {
  int m = 0, n = 0;
  double min_log = 0.0, max_log = 0.0;
  Word witness_min, witness_max;
};

struct CheckReport {
  Condition condition = Condition::RB;
  std::vector<RatioCell> cells;
  /// Smallest C >= 1 covering every tested ratio on the side(s) the
  /// condition bounds.
  double empirical_C = 1.0;
  /// Least K at which dropping the levels n < K stops improving the
  /// constant by more than 5%.
  int empirical_K = 1;
  Verdict verdict = Verdict::Inconclusive;
  bool exact_unit = false;  // every tested ratio is exactly 1
  std::vector<std::string> notes;
};

/// 5% stabilization rule shared by every check: c_by_k[i] is the constant
/// when only levels n >= i + 1 count; returns the least such K.
int empirical_k_from(const std::vector<double>& c_by_k);

}  // namespace thermoshift
