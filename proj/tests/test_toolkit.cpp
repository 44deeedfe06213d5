#include <doctest.h>

#include "causal/oracle.hpp"
#include "causal/toolkit.hpp"
#include "fixtures.hpp"

using namespace causal;
using namespace causal::literals;

namespace {

const char* const b1 =
    "[P(Z1|Z2,X)] [P(Z3|Z2)] [sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)] "
    "[sum_{X,Z3,Y} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)]";
const char* const b2 = "[sum_{X,Y} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)]";

}  // namespace

TEST_CASE("deconstruct splits simplified atomics") {
  auto g = fixtures::load("motivating.g");
  auto order = fixtures::motivating_simplification_order();
  auto d2 = deconstruct(fixtures::expression(b2), g, order);
  CHECK(canonical_equal(d2, fixtures::expression("[P(Z3|Z2)] [P(Z2)]")));
  auto d1 = deconstruct(fixtures::expression(b1), g, order);
  CHECK(canonical_equal(
      d1, fixtures::expression("[P(Z1|Z2,X)] [P(Z3|Z2)] [P(Z2)] "
                               "[sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2) P(Z2)]")));
}

TEST_CASE("extract pulls independent terms out of sums") {
  auto g = fixtures::load("motivating.g");
  auto order = fixtures::motivating_simplification_order();
  auto e = extract(fixtures::expression(b1), g, order);
  CHECK(canonical_equal(
      e, fixtures::expression("[P(Z1|Z2,X)] [P(Z3|Z2)] [P(Z2)] [P(Z2)] "
                              "[sum_{X} P(Y|Z2,X,Z3,Z1) P(Z3|Z2,X) P(X|Z2)]")));
}

TEST_CASE("extract under a sum wraps the independent part") {
  auto g = parse_graph("A -> B\nC -> B\n");
  auto order = topological_order(g);
  auto e = extract(fixtures::expression("sum_{A} [P(C)] [P(B|A,C)] [P(A)]"), g, order);
  REQUIRE(e.children.size() == 1);
  CHECK(e.sum_set.empty());
  CHECK(canonical_equal(e.atomics.front(), fixtures::atomic("P(C)")));
  CHECK(e.children.front().sum_set == vars({"A"}));
  auto value = assert_equivalent(e, fixtures::expression("sum_{A} [P(C)] [P(B|A,C)] [P(A)]"), g);
  CHECK(value.passed());
}

TEST_CASE("q-simplify cancels common atomics") {
  auto g = fixtures::load("motivating.g");
  auto order = fixtures::motivating_simplification_order();
  auto [n, d] = q_simplify(fixtures::expression(b1), fixtures::expression(b2), g, order);
  CHECK(d.empty());
  CHECK(canonical_equal(n, fixtures::expression(fixtures::motivating_simplified)));
}

TEST_CASE("q-simplify leaves summed sides alone") {
  auto g = parse_graph("A -> B\n");
  auto order = topological_order(g);
  auto [n, d] = q_simplify(fixtures::expression("sum_{A} {P(B|A) P(A)}"),
                           fixtures::expression("sum_{A} {P(B|A) P(A)}"), g, order);
  CHECK_FALSE(n.empty());
  CHECK_FALSE(d.empty());
}

TEST_CASE("cancellation is a multiset difference") {
  auto g = parse_graph("A -> B\n");
  auto order = topological_order(g);
  auto [n, d] = q_simplify(fixtures::expression("[P(A)] [P(A)] [P(B|A)]"), fixtures::expression("[P(A)]"), g,
                           order);
  CHECK(n.atomics.size() == 2);
  CHECK(d.empty());
}

TEST_CASE("full quotient simplification") {
  auto g = fixtures::load("motivating.g");
  auto order = fixtures::motivating_simplification_order();
  auto raw = fixtures::quotient(fixtures::motivating_effect);
  auto out = simplify_quotient(raw, g, order);
  CHECK(canonical_equal(out, fixtures::quotient(fixtures::motivating_simplified)));
  CHECK(assert_equivalent(raw, out, g).passed());
}
