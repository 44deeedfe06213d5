#include "fixtures.hpp"

#include "causal/errors.hpp"

namespace fixtures {

using namespace causal;

std::string data_path(const std::string& file) { return std::string(CAUSAL_TEST_DATA) + "/" + file; }

CausalGraph load(const std::string& file) { return read_graph_file(data_path(file)); }

TopologicalOrder motivating_derivation_order() {
  return TopologicalOrder({Variable("Z2"), Variable("X"), Variable("Z1"), Variable("Z3"), Variable("Y")});
}

TopologicalOrder motivating_simplification_order() {
  return TopologicalOrder({Variable("Z2"), Variable("X"), Variable("Z3"), Variable("Z1"), Variable("Y")});
}

AtomicExpression atomic(const std::string& text) {
  auto q = parse_expression(text);
  if (!q.denominator.empty() || q.numerator.atomics.size() != 1 || !q.numerator.children.empty() ||
      !q.numerator.sum_set.empty()) {
    throw ArgumentError("not a single atomic expression: " + text);
  }
  return q.numerator.atomics.front();
}

Expression expression(const std::string& text) {
  auto q = parse_expression(text);
  if (!q.denominator.empty()) throw ArgumentError("unexpected quotient: " + text);
  return q.numerator;
}

QuotientExpression quotient(const std::string& text) { return parse_expression(text); }

}  // namespace fixtures
