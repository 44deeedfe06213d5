#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causal/graph.hpp"
#include "causal/variable.hpp"

namespace causal {

/// A conditional probability term P(variable | conditioners).
struct Term {
  Variable variable;
  VarSet conditioners;

  Term() = default;
  /// Throws ArgumentError if `variable` is one of its own conditioners.
  Term(Variable v, VarSet c);

  friend bool operator==(const Term&, const Term&) = default;
};

/// Sum over `sum_set` of the product of `terms`.
class AtomicExpression {
 public:
  AtomicExpression() = default;
  /// Throws ArgumentError on repeated term variables or a summation
  /// variable without a term.
  AtomicExpression(std::vector<Term> terms, VarSet sum_set = {});

  const std::vector<Term>& terms() const noexcept { return terms_; }
  const VarSet& sum_set() const noexcept { return sum_set_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// V[A]: the variables that have a term.
  VarSet variables() const;
  /// Every variable mentioned, as term variable or conditioner.
  VarSet mentioned() const;
  /// mentioned() minus the summation set.
  VarSet free_variables() const;

  /// Pointer to the term for `v`, or nullptr.
  const Term* term_for(const Variable& v) const;

  /// The same terms sorted by descending rank (the induced ordering).
  AtomicExpression ordered(const TopologicalOrder& order) const;

  friend bool operator==(const AtomicExpression&, const AtomicExpression&) = default;

 private:
  std::vector<Term> terms_;
  VarSet sum_set_;
};

struct QuotientExpression;

/// Sum over `sum_set` of the product of sub-expressions, quotient factors
/// and atomic expressions. An expression with no factors has value 1.
///
/// `fractions` lets a quotient appear as a factor inside a product, which is
/// how nested conditionals produced by identification are represented.
struct Expression {
  std::vector<Expression> children;
  std::vector<QuotientExpression> fractions;
  std::vector<AtomicExpression> atomics;
  VarSet sum_set;

  Expression() = default;
  Expression(std::vector<Expression> children, std::vector<AtomicExpression> atomics,
             VarSet sum_set = {});
  explicit Expression(AtomicExpression atomic);

  bool empty() const noexcept;
  VarSet mentioned() const;
  VarSet free_variables() const;

  friend bool operator==(const Expression&, const Expression&);
};

struct QuotientExpression {
  Expression numerator;
  Expression denominator;

  QuotientExpression() = default;
  QuotientExpression(Expression num, Expression den)
      : numerator(std::move(num)), denominator(std::move(den)) {}

  VarSet free_variables() const;

  friend bool operator==(const QuotientExpression&, const QuotientExpression&) = default;
};

/// An(V)_G ⊆ C ⊆ V^π for every term. Throws LookupError for variables that
/// are not vertices of g.
bool is_pi_consistent(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order);

/// Term variables of `a` in descending rank.
std::vector<Variable> induced_order(const AtomicExpression& a, const TopologicalOrder& order);

/// Order-insensitive structural equality.
bool canonical_equal(const Term& x, const Term& y);
bool canonical_equal(const AtomicExpression& x, const AtomicExpression& y);
bool canonical_equal(const Expression& x, const Expression& y);
bool canonical_equal(const QuotientExpression& x, const QuotientExpression& y);

/// A string that is equal for two values exactly when canonical_equal is.
std::string canonical_key(const AtomicExpression& a);
std::string canonical_key(const Expression& e);
std::string canonical_key(const QuotientExpression& q);

enum class Style { plain, latex };

/// Terms are printed by descending rank, conditioners and summation
/// variables by ascending rank. Without an order, names decide.
std::string render(const Term& t, Style style, const TopologicalOrder* order = nullptr);
std::string render(const AtomicExpression& a, Style style, const TopologicalOrder* order = nullptr);
std::string render(const Expression& e, Style style, const TopologicalOrder* order = nullptr);
std::string render(const QuotientExpression& q, Style style, const TopologicalOrder* order = nullptr);

/// Parses the plain grammar produced by render(..., Style::plain):
///   P(A|B,C)              a term, alone it is a one-term atomic
///   sum_{X,Y} P(..) P(..) an atomic with a summation
///   [ ... ]               an atomic group inside a product
///   { ... }               a nested expression
///   {(...)/(...)}         a quotient factor
///   (...) / (...)         a top-level quotient
/// Throws ParseError with the offending column.
QuotientExpression parse_expression(std::string_view text);

/// Flattens nested structure without changing the value: hoists sum-free
/// children, merges sums of a lone child into its parent, folds sum-free
/// atomics into a neighbouring atomic with a sum, and drops empty factors.
Expression normalize(Expression e);

}  // namespace causal
