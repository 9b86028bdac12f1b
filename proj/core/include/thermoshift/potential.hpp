#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "thermoshift/subshift.hpp"
#include "thermoshift/weight.hpp"
#include "thermoshift/word.hpp"

namespace thermoshift {

class CylinderMeasure;
class FactorMap;

/// Evaluation of f_{|u|} over the cylinder [u]: rep is log f at the
/// lexicographically least point of [u], w brackets the full range.
struct Eval {
  double rep = 0.0;
  Weight w;
  double radius() const { return w.width(); }
};

enum class StructureKind { Subadditive, Superadditive };

struct StructureDeclaration {
  bool subadditive = false;
  bool superadditive = false;
  double constant = 0.0;  // C of the almost-(sub/super)additivity bound
};

struct StructureCertificate {
  StructureKind kind = StructureKind::Subadditive;
  /// Max observed violation of the chain inequality, log scale; <= 0 means
  /// the inequality held with slack over the tested range.
  double defect = 0.0;
  /// Constant usable downstream: max(defect, declared C, 0).
  double constant = 0.0;
  int max_m = 0, max_n = 0;
  bool declared = false;
  bool failed = false;  // declared constant contradicted by the data
};

/// Per-symbol transfer weights for potentials whose partition sums reduce to
/// a weighted walk on the recoded graph.
struct TransferMatrix {
  // entry weight for taking symbol a out of state s; indexing [s][a]
  std::vector<std::vector<Weight>> edge;
  // weight accumulated by the initial m-block of each state
  std::vector<Weight> init;
};

/// A sequence F = {log f_n} evaluated on cylinders.  f_0 is identically 1.
class Potential {
 public:
  explicit Potential(std::shared_ptr<const Subshift> shift)
      : shift_(std::move(shift)) {}
  virtual ~Potential() = default;

  const Subshift& shift() const { return *shift_; }
  std::shared_ptr<const Subshift> shift_ptr() const { return shift_; }

  virtual Eval eval(const Word& u) const = 0;
  virtual std::string describe() const = 0;

  /// Closed-form Z_n when available (counts, per-symbol weights, measures).
  virtual std::optional<Weight> partition_sum(int n) const { return std::nullopt; }
  /// Weighted transfer matrix when the sequence is generated by per-symbol
  /// weights; enables eigenvalue-style pressure bounds.
  virtual std::optional<TransferMatrix> transfer_matrix() const { return std::nullopt; }

  const StructureDeclaration& declared_structure() const { return declared_; }
  void declare_structure(StructureDeclaration d) { declared_ = d; }

 protected:
  std::shared_ptr<const Subshift> shift_;
  StructureDeclaration declared_;
};

/// Locally constant additive family: f_n(x) = exp(sum of log-weights of the
/// sliding windows of length `window`).
class AdditivePotential : public Potential {
 public:
  AdditivePotential(std::shared_ptr<const Subshift> shift, int window,
                    std::map<Word, Weight> window_weights);
  static std::unique_ptr<AdditivePotential> zero(std::shared_ptr<const Subshift> shift);

  Eval eval(const Word& u) const override;
  std::optional<Weight> partition_sum(int n) const override;
  std::optional<TransferMatrix> transfer_matrix() const override;
  std::string describe() const override;

 private:
  Weight window_weight(const Word& w) const;
  int window_;
  std::map<Word, Weight> weights_;
};

enum class MatrixNorm { Operator2, MaxEntry };

/// f_n over [u] = ||A_{u_1} ... A_{u_n}||^t, locally constant at level n.
class CocyclePotential : public Potential {
 public:
  CocyclePotential(std::shared_ptr<const Subshift> shift,
                   std::vector<std::vector<std::vector<double>>> matrices,
                   double exponent, MatrixNorm norm);

  Eval eval(const Word& u) const override;
  std::optional<Weight> partition_sum(int n) const override;
  std::optional<TransferMatrix> transfer_matrix() const override;
  std::string describe() const override;

  int dim() const { return dim_; }
  double exponent() const { return exponent_; }

 private:
  std::vector<std::vector<std::vector<double>>> matrices_;
  double exponent_;
  MatrixNorm norm_;
  int dim_;
};

/// f_n over [u] = mu[u].
class MeasurePotential : public Potential {
 public:
  MeasurePotential(std::shared_ptr<const Subshift> shift,
                   std::shared_ptr<const CylinderMeasure> mu);
  Eval eval(const Word& u) const override;
  std::optional<Weight> partition_sum(int n) const override;
  std::string describe() const override;
  const CylinderMeasure& measure() const { return *mu_; }

 private:
  std::shared_ptr<const CylinderMeasure> mu_;
};

/// Explicit per-level constants: f_n identically exp(c_n) on X.
class ConstantSequencePotential : public Potential {
 public:
  /// c_n = quad_a * n^2 + quad_b * n + quad_c, overridden by explicit values
  /// where provided.
  ConstantSequencePotential(std::shared_ptr<const Subshift> shift,
                            std::vector<double> values, double quad_a,
                            double quad_b, double quad_c);
  Eval eval(const Word& u) const override;
  std::optional<Weight> partition_sum(int n) const override;
  std::string describe() const override;
  double level_value(int n) const;

 private:
  std::vector<double> values_;
  double qa_, qb_, qc_;
};

struct VariationReport {
  double max_radius = 0.0;
  bool unbounded_trend = false;
  std::vector<double> per_level;
};

/// Bounded-variation certificate: max cylinder radius per level up to N.
VariationReport bounded_variation_check(const Potential& f, int max_level,
                                        size_t cap = Subshift::kDefaultCap);

/// Worst-case sub/superadditivity defects over all splits of words of
/// length m + n, m <= max_m, n <= max_n.
std::pair<StructureCertificate, StructureCertificate> structure_check(
    const Potential& f, int max_m, int max_n,
    size_t cap = Subshift::kDefaultCap);

}  // namespace thermoshift
