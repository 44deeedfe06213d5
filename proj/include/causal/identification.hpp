#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "causal/expression.hpp"
#include "causal/graph.hpp"

namespace causal {

/// P_x(y | z).
struct CausalQuery {
  VarSet y;
  VarSet x;
  VarSet z;

  /// Throws ArgumentError when y is empty or the sets overlap, naming the
  /// shared variable.
  void validate() const;
};

enum class Procedure { id, idc };

/// One fired line of ID or IDC.
struct TraceStep {
  Procedure procedure = Procedure::id;
  int line = 0;
  VarSet vertices;  // vertex set of the graph at this call
  VarSet y;
  VarSet x;
  VarSet z;
};

/// Non-identifiability witness: the graph of the failing call and its
/// C-component subgraph.
struct Hedge {
  CausalGraph f;
  CausalGraph f_prime;
};

class IdentifyResult {
 public:
  static IdentifyResult success(QuotientExpression e, std::vector<TraceStep> trace);
  static IdentifyResult failure(Hedge h, std::vector<TraceStep> trace);

  bool identified() const noexcept { return expression_.has_value(); }
  /// Throws ContractViolation on a failed result.
  const QuotientExpression& expression() const;
  /// Throws ContractViolation on a successful result.
  const Hedge& hedge() const;
  const std::vector<TraceStep>& trace() const noexcept { return trace_; }

 private:
  std::optional<QuotientExpression> expression_;
  std::optional<Hedge> hedge_;
  std::vector<TraceStep> trace_;
};

/// ID. With `order` null, topological_order(g) is used.
IdentifyResult id(const VarSet& y, const VarSet& x, const CausalGraph& g,
                  const TopologicalOrder* order = nullptr);

/// IDC. Conditioning variables are tried in ascending rank for the
/// action/observation exchange.
IdentifyResult idc(const VarSet& y, const VarSet& x, const VarSet& z, const CausalGraph& g,
                   const TopologicalOrder* order = nullptr);

/// idc when q.z is non-empty, id otherwise.
IdentifyResult identify(const CausalQuery& q, const CausalGraph& g,
                        const TopologicalOrder* order = nullptr);

const std::vector<TraceStep>& trace(const IdentifyResult& r);

/// One line per step: "ID line 4  V={..}  y={..}  x={..}".
std::string render_trace(const std::vector<TraceStep>& steps, const TopologicalOrder* order = nullptr);

/// `P(Y,Z1|do(X))` or `P(Y|do(X),Z2)`. Throws ParseError on malformed text
/// and ArgumentError on overlapping roles.
CausalQuery parse_query(std::string_view text);

}  // namespace causal
