#pragma once

#include <string>
#include <vector>

#include "thermoshift/check.hpp"
#include "thermoshift/potential.hpp"

namespace thermoshift {

struct PartitionTable {
  std::vector<Weight> z;  // z[i] holds Z_{i+1}
  int max_n() const { return static_cast<int>(z.size()); }
  const Weight& at(int n) const;
};

/// Z_n(F) for n <= max_n, through the closed form when the potential has
/// one, otherwise by enumeration over B_n.
PartitionTable partition_sums(const Potential& f, int max_n,
                              size_t cap = Subshift::kDefaultCap);

struct PressureBracket {
  double lower = 0.0, upper = 0.0;
  double point = 0.0;  // (1/N) log Z_N at the deepest level
  int levels_used = 0;
  bool lower_certified = false, upper_certified = false;
  std::string method_note;
};

/// Two-sided pressure bracket.  The upper side is the Fekete bound from a
/// subadditivity certificate; the lower side uses the observed
/// supermultiplicativity defect of the partition sums.  When the potential
/// carries per-symbol transfer weights on an irreducible shift, eigenvalue
/// bounds (min/max of (Wv)_i / v_i over a positive iterate v) are
/// intersected in; those are rigorous for any nonnegative matrix.
PressureBracket pressure_bracket(const Potential& f, int max_n,
                                 const StructureCertificate* sub = nullptr,
                                 const StructureCertificate* sup = nullptr,
                                 size_t cap = Subshift::kDefaultCap);

struct BsmReport {
  CheckReport direct;  // Z_m Z_n / Z_{m+n} ratios
  CheckReport key1;    // e^{nP} / Z_n ratios at the bracket midpoint
  double p_used = 0.0;
  PressureBracket bracket;
};

BsmReport bsm_check(const Potential& f, int max_n,
                    const StructureCertificate* sub = nullptr,
                    const StructureCertificate* sup = nullptr,
                    size_t cap = Subshift::kDefaultCap);

}  // namespace thermoshift
