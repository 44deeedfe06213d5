#pragma once

#include <map>
#include <string>
#include <vector>

#include "causal/expression.hpp"
#include "causal/graph.hpp"

namespace causal {

/// The graphs and order a simplification runs against. `graph` is the
/// subgraph the expression lives in; `model` is the full model graph used
/// for the independence of inserted variables from the summation variable.
struct SimplifyContext {
  const CausalGraph& graph;
  const CausalGraph& model;
  const TopologicalOrder& order;

  SimplifyContext(const CausalGraph& g, const TopologicalOrder& o) : graph(g), model(g), order(o) {}
  SimplifyContext(const CausalGraph& g, const CausalGraph& m, const TopologicalOrder& o)
      : graph(g), model(m), order(o) {}
};

/// Progress of building the joint term P(J | D) for one summation variable.
struct JoinState {
  std::vector<Variable> joined;               // J, in join order
  VarSet conditioning;                        // D
  std::vector<Variable> inserted;             // R
  std::vector<VarSet> inserted_conditioners;  // I, parallel to `inserted`
  VarSet missing;                             // M

  VarSet joined_set() const { return VarSet(joined.begin(), joined.end()); }

  friend bool operator==(const JoinState&, const JoinState&) = default;
};

enum class VariableStatus { eliminated, retained };

struct SimplificationOutcome {
  AtomicExpression expression;
  VarSet eliminated;
  std::map<Variable, VariableStatus> status;  // one entry per original summation variable
  /// The completed join state for every eliminated variable.
  std::map<Variable, JoinState> certificates;
  /// The expression each elimination started from.
  std::map<Variable, AtomicExpression> sources;
  std::vector<std::string> log;
};

/// Removes as many summation variables as possible. Throws ContractViolation
/// when `a` is not pi-consistent and LookupError on unknown variables.
SimplificationOutcome simplify(const AtomicExpression& a, const SimplifyContext& ctx);
SimplificationOutcome simplify(const AtomicExpression& a, const CausalGraph& g,
                               const TopologicalOrder& order);

/// Joins the term P(v | c) into the state. A state with the same J signals
/// failure. `sum_var` is the current summation variable.
JoinState join(const JoinState& state, const Variable& v, const VarSet& c, const Variable& sum_var,
               const SimplifyContext& ctx, std::vector<std::string>* log = nullptr);

/// Inserts a term for the missing variable `m`. Returns the state unchanged
/// on failure.
JoinState insert(const JoinState& state, const Variable& m, const Variable& sum_var,
                 const SimplifyContext& ctx, std::vector<std::string>* log = nullptr);

/// Sums `eliminate` out of the completed joint and divides out the inserted
/// terms. Returns `a` unchanged when an inserted term does not cancel.
AtomicExpression factorize(const JoinState& state, const AtomicExpression& a, const Variable& eliminate,
                           const SimplifyContext& ctx);

/// Summation variables of `a` in descending rank; j is 1-based into this.
std::vector<Variable> summation_order(const AtomicExpression& a, const TopologicalOrder& order);

/// Vertices of the graph without a term in `a`, ranked strictly between the
/// j-th summation variable and the highest term variable.
VarSet get_missing(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order,
                   std::size_t j);

/// 1-based position in the induced ordering of the term for the j-th
/// summation variable.
std::size_t index_of(const AtomicExpression& a, const TopologicalOrder& order, std::size_t j);

}  // namespace causal
