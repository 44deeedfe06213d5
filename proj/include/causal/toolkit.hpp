#pragma once

#include <utility>

#include "causal/expression.hpp"
#include "causal/graph.hpp"
#include "causal/simplification.hpp"

namespace causal {

/// Simplifies every atomic in the expression tree, splits sum-free results
/// into single-term atomics and hoists sum-free leaf children into their
/// parent. Atomics that are not pi-consistent are left alone.
Expression deconstruct(const Expression& b, const SimplifyContext& ctx);
Expression deconstruct(const Expression& b, const CausalGraph& g, const TopologicalOrder& order);

/// deconstruct, then pulls terms that do not involve the enclosing
/// summation variables out of the sums.
Expression extract(const Expression& b, const SimplifyContext& ctx);
Expression extract(const Expression& b, const CausalGraph& g, const TopologicalOrder& order);

/// Extracts both sides and, when neither keeps a top-level sum, cancels
/// equal children and equal atomics between numerator and denominator.
std::pair<Expression, Expression> q_simplify(const Expression& b1, const Expression& b2,
                                             const SimplifyContext& ctx);
std::pair<Expression, Expression> q_simplify(const Expression& b1, const Expression& b2,
                                             const CausalGraph& g, const TopologicalOrder& order);

/// q_simplify on a quotient, also reaching into quotient factors.
QuotientExpression simplify_quotient(const QuotientExpression& q, const SimplifyContext& ctx);
QuotientExpression simplify_quotient(const QuotientExpression& q, const CausalGraph& g,
                                     const TopologicalOrder& order);

}  // namespace causal
