#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "causal/expression.hpp"
#include "causal/graph.hpp"

namespace causal {

/// Dense non-negative table over named axes, row-major with the last axis
/// varying fastest. A table without axes is a scalar.
class ProbabilityTable {
 public:
  ProbabilityTable() : values_{1.0} {}
  ProbabilityTable(std::vector<std::string> axes, std::vector<std::size_t> cardinalities,
                   std::vector<double> values);

  static ProbabilityTable scalar(double value);
  /// A table of `fill` over the given axes.
  static ProbabilityTable constant(std::vector<std::string> axes, std::vector<std::size_t> cardinalities,
                                   double fill);

  const std::vector<std::string>& axes() const noexcept { return axes_; }
  const std::vector<std::size_t>& cardinalities() const noexcept { return cards_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool has_axis(const std::string& name) const;
  std::size_t cardinality(const std::string& name) const;

  /// Value at a full assignment of this table's axes (extra keys ignored).
  double at(const std::map<std::string, std::size_t>& assignment) const;

  /// Pointwise product, broadcasting over the union of axes.
  ProbabilityTable multiply(const ProbabilityTable& other) const;
  /// Pointwise quotient. Throws EvaluationError naming the first zero cell
  /// of the divisor.
  ProbabilityTable divide(const ProbabilityTable& other) const;
  ProbabilityTable sum_out(const std::vector<std::string>& names) const;
  /// Sums out every axis not in `keep`.
  ProbabilityTable marginal(const std::vector<std::string>& keep) const;
  /// Fixes `name` to `value` and drops the axis.
  ProbabilityTable restrict(const std::string& name, std::size_t value) const;
  /// Reorders to `axes`, broadcasting over axes this table lacks. Every
  /// current axis must be listed.
  ProbabilityTable aligned(const std::vector<std::string>& axes,
                           const std::vector<std::size_t>& cardinalities) const;

  double total() const;
  double min() const;
  double max() const;

  /// Human readable cell label such as "X=0,Y=1".
  std::string describe(std::size_t flat_index) const;

 private:
  std::vector<std::size_t> strides() const;

  std::vector<std::string> axes_;
  std::vector<std::size_t> cards_;
  std::vector<double> values_;
};

/// Largest absolute entrywise difference after aligning both tables onto the
/// union of their axes.
double max_abs_difference(const ProbabilityTable& a, const ProbabilityTable& b);

/// One conditional table P(variable | parents), variable as last axis.
struct ConditionalTable {
  std::string variable;
  std::vector<std::string> parents;
  ProbabilityTable table;
};

/// Name of the latent standing for the bidirected edge a <-> b.
std::string latent_name(const Variable& a, const Variable& b);

/// A discrete model compatible with a semi-Markovian graph: one latent per
/// bidirected edge, one conditional table per variable.
struct DiscreteModel {
  std::map<std::string, std::size_t> cardinality;
  std::vector<std::string> latents;
  std::vector<ConditionalTable> tables;  // latents first, then observed in topological order

  const ConditionalTable& table_for(const std::string& variable) const;
};

/// Strictly positive random model: rows drawn uniformly from the simplex,
/// floored at 1e-3 and renormalised. Throws ArgumentError if cardinality < 2.
DiscreteModel random_model(const CausalGraph& g, std::size_t cardinality, std::uint64_t seed);

/// Joint over the observed variables in declaration order, latents summed
/// out. Throws StructuralError when the model does not match the graph.
ProbabilityTable joint_distribution(const DiscreteModel& m, const CausalGraph& g);

/// P(v | c) computed from a joint.
ProbabilityTable conditional(const ProbabilityTable& joint, const std::string& v, const VarSet& c);

ProbabilityTable eval_atomic(const AtomicExpression& a, const ProbabilityTable& joint);
ProbabilityTable eval_expression(const Expression& b, const ProbabilityTable& joint);
ProbabilityTable eval_expression(const QuotientExpression& q, const ProbabilityTable& joint);

/// P_x(y) for one assignment of x, as a table over y.
ProbabilityTable interventional_truth(const DiscreteModel& m, const CausalGraph& g,
                                      const std::map<Variable, std::size_t>& x_assignment,
                                      const VarSet& y);
/// P_x(y) for every assignment of x, as a table over y and x.
ProbabilityTable interventional_truth(const DiscreteModel& m, const CausalGraph& g, const VarSet& x,
                                      const VarSet& y);

struct TrialResult {
  std::uint64_t seed = 0;
  double max_deviation = 0.0;
};

struct EquivalenceReport {
  std::vector<TrialResult> trials;  // sorted by seed
  double tolerance = 0.0;

  bool passed() const;
  double worst() const;
  /// One line per trial: "trial seed=S max_deviation=D ok|FAIL".
  std::string to_text() const;
};

struct OracleOptions {
  std::size_t trials = 10;
  double tolerance = 1e-9;
  std::uint64_t seed = 1;
  std::size_t cardinality = 2;
};

/// Evaluates both expressions under `trials` random models of g. Throws
/// ArgumentError when the free variables differ. A summed term that no other
/// term mentions sums to one, so its conditioners do not count as free.
EquivalenceReport assert_equivalent(const QuotientExpression& e1, const QuotientExpression& e2,
                                    const CausalGraph& g, const OracleOptions& options = {});
EquivalenceReport assert_equivalent(const Expression& e1, const Expression& e2, const CausalGraph& g,
                                    const OracleOptions& options = {});

}  // namespace causal
