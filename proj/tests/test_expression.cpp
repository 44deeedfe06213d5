#include <doctest.h>

#include "causal/errors.hpp"
#include "causal/expression.hpp"
#include "fixtures.hpp"

using namespace causal;
using namespace causal::literals;

TEST_CASE("terms and atomics validate") {
  CHECK_THROWS_AS(Term("A"_v, vars({"A"})), ArgumentError);
  CHECK_THROWS_AS(AtomicExpression({Term("A"_v, {}), Term("A"_v, vars({"B"}))}), ArgumentError);
  CHECK_THROWS_AS(AtomicExpression({Term("A"_v, {})}, vars({"B"})), ArgumentError);
}

TEST_CASE("free variables") {
  auto a = fixtures::atomic(fixtures::a1);
  CHECK(a.variables() == vars({"Y", "Z3", "X", "Z2"}));
  CHECK(a.free_variables() == vars({"Z1", "Z2", "Z3"}));
  auto q = fixtures::quotient(fixtures::motivating_effect);
  CHECK(q.free_variables() == vars({"X", "Y", "Z1", "Z2", "Z3"}));
}

TEST_CASE("pi-consistency") {
  auto g = fixtures::load("motivating.g");
  auto order = fixtures::motivating_simplification_order();
  CHECK(is_pi_consistent(fixtures::atomic(fixtures::a1), g, order));
  CHECK_FALSE(is_pi_consistent(fixtures::atomic("P(Y|Z1) P(Z1)"), g, order));
  CHECK_FALSE(is_pi_consistent(fixtures::atomic("P(Z2|Y) P(Y|X,Z1,Z2,Z3)"), g, order));
}

TEST_CASE("induced order") {
  auto order = fixtures::motivating_simplification_order();
  auto omega = induced_order(fixtures::atomic(fixtures::a1), order);
  CHECK(omega == std::vector<Variable>{"Y"_v, "Z3"_v, "X"_v, "Z2"_v});
}

TEST_CASE("canonical equality ignores order") {
  auto x = fixtures::atomic("sum_{X} P(A|X,B) P(X)");
  auto y = fixtures::atomic("sum_{X} P(X) P(A|B,X)");
  CHECK(canonical_equal(x, y));
  CHECK_FALSE(canonical_equal(x, fixtures::atomic("sum_{X} P(A|X) P(X)")));
  CHECK(canonical_equal(fixtures::expression("P(A) [sum_{X} P(B|X) P(X)]"),
                        fixtures::expression("[sum_{X} P(X) P(B|X)] P(A)")));
}

TEST_CASE("plain rendering round trips") {
  auto order = fixtures::motivating_simplification_order();
  for (const char* text : {fixtures::a1, fixtures::a2, fixtures::motivating_effect, fixtures::motivating_simplified}) {
    auto q = fixtures::quotient(text);
    auto again = parse_expression(render(q, Style::plain, &order));
    CHECK(canonical_equal(q, again));
  }
}

TEST_CASE("rendering") {
  auto order = fixtures::motivating_simplification_order();
  auto e = fixtures::expression(fixtures::motivating_simplified);
  CHECK(render(e, Style::plain, &order) == "P(Z1|Z2,X) P(Z2) [sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2)]");
  CHECK(render(e, Style::latex, &order) ==
        "P(Z_1|Z_2,X)P(Z_2)\\sum_{X} P(Y|Z_2,X,Z_3,Z_1)P(Z_3|Z_2,X)P(X|Z_2)");
  CHECK(render(Expression{}, Style::plain) == "1");
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_expression("P(A|"), ParseError);
  CHECK_THROWS_AS(parse_expression("sum_{X} P(A)"), ParseError);
  try {
    parse_expression("P(A) Q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.column() == 6);
  }
}

TEST_CASE("normalize keeps structure simple") {
  Expression inner(fixtures::atomic("P(A)"));
  Expression outer;
  outer.children.push_back(inner);
  auto n = normalize(outer);
  CHECK(n.children.empty());
  CHECK(n.atomics.size() == 1);
}
