#pragma once

#include <memory>
#include <string>
#include <vector>

#include "thermoshift/check.hpp"
#include "thermoshift/potential.hpp"
#include "thermoshift/pressure.hpp"
#include "thermoshift/subshift.hpp"

namespace thermoshift {

/// One-block factor map between subshifts.  Image containment is verified up
/// to `verify_depth` at construction; surjectivity onto B_1(target) is
/// required, deeper surjectivity is recorded.
class FactorMap {
 public:
  FactorMap(std::shared_ptr<const Subshift> source,
            std::shared_ptr<const Subshift> target,
            std::vector<Symbol> symbol_map, int verify_depth = 8,
            size_t cap = Subshift::kDefaultCap);

  const Subshift& source() const { return *src_; }
  const Subshift& target() const { return *tgt_; }
  std::shared_ptr<const Subshift> source_ptr() const { return src_; }
  std::shared_ptr<const Subshift> target_ptr() const { return tgt_; }

  Word apply(const Word& u) const;
  /// phi_n(y): number of source words of length |y| mapping onto y, by a
  /// count sweep over source states (no word enumeration).
  BigInt preimage_count(const Word& y) const;
  bool in_image(const Word& y) const { return preimage_count(y) > 0; }
  /// Source words over y, enumerated (capped).
  std::vector<Word> fiber(const Word& y, size_t cap = Subshift::kDefaultCap) const;

  /// Deepest level at which every target word was seen attained.
  int surjective_depth() const { return surjective_depth_; }
  int verified_depth() const { return verified_depth_; }
  std::string describe() const;

 private:
  std::shared_ptr<const Subshift> src_, tgt_;
  std::vector<Symbol> map_;
  int verified_depth_ = 0;
  int surjective_depth_ = 0;
};

/// f_n = (g_n of pi) / (phi_n of pi), the relative sequence over a target
/// potential.
class RelativePotential : public Potential {
 public:
  RelativePotential(std::shared_ptr<const FactorMap> map,
                    std::shared_ptr<const Potential> g);
  Eval eval(const Word& u) const override;
  std::optional<Weight> partition_sum(int n) const override;
  std::string describe() const override;
  const FactorMap& map() const { return *map_; }
  const Potential& target_potential() const { return *g_; }

 private:
  std::shared_ptr<const FactorMap> map_;
  std::shared_ptr<const Potential> g_;
};

/// g_n over [y] = sum of f_n over the fiber words of y.
class PushforwardPotential : public Potential {
 public:
  PushforwardPotential(std::shared_ptr<const FactorMap> map,
                       std::shared_ptr<const Potential> f,
                       size_t cap = Subshift::kDefaultCap);
  Eval eval(const Word& y) const override;
  std::optional<Weight> partition_sum(int n) const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const FactorMap> map_;
  std::shared_ptr<const Potential> f_;
  size_t cap_;
};

struct RelativePressureReport {
  PressureBracket f_bracket, g_bracket;
  bool overlap = false;
  double midpoint_gap = 0.0;
  int spec_k = 0;
  std::vector<std::string> notes;
};

/// Brackets the pressures of the relative sequence and of the target
/// potential and reports their intersection.  Requires the source to have a
/// specification number.
RelativePressureReport relative_pressure_check(
    std::shared_ptr<const FactorMap> map, std::shared_ptr<const Potential> g,
    int max_n, size_t cap = Subshift::kDefaultCap);

struct TheoremGeneralReport {
  CheckReport right, left;  // upper-only sweeps of the relative sequence
  std::string conclusion;
};

TheoremGeneralReport theorem_general_check(
    std::shared_ptr<const FactorMap> map, std::shared_ptr<const Potential> g,
    int max_m, int max_n, size_t cap = Subshift::kDefaultCap);

}  // namespace thermoshift
