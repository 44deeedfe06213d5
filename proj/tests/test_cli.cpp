#include <doctest.h>

#include <sstream>

#include "causal/cli.hpp"
#include "fixtures.hpp"

namespace {

struct Run {
  int status;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = causal::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

}  // namespace

TEST_CASE("latex output of the motivating example") {
  auto r = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y,Z1,Z2,Z3|do(X))", "--format", "latex",
                 "--order", "Z2,X,Z3,Z1,Y"});
  CHECK(r.status == 0);
  CHECK(r.out.find("simplified: P(Z_1|Z_2,X)P(Z_2)\\sum_{X} P(Y|Z_2,X,Z_3,Z_1)P(Z_3|Z_2,X)P(X|Z_2)") !=
        std::string::npos);
}

TEST_CASE("bow arc exits with the hedge") {
  auto r = call({"--graph", fixtures::data_path("bowarc.g"), "--query", "P(Y|do(X))"});
  CHECK(r.status == 2);
  CHECK(r.out.find("hedge F  = {X,Y}") != std::string::npos);
  CHECK(r.out.find("hedge F' = {Y}") != std::string::npos);
}

TEST_CASE("insertion graph with verification") {
  auto r = call({"--graph", fixtures::data_path("insertion.g"), "--query", "P(X|do(W))", "--verify", "--trials", "10"});
  CHECK(r.status == 0);
  auto line = r.out.substr(r.out.find("simplified: ") + 12);
  line = line.substr(0, line.find('\n'));
  CHECK(causal::canonical_equal(causal::parse_expression(line), fixtures::quotient(fixtures::insertion_simplified)));
  std::size_t ok = 0;
  for (auto pos = r.out.find(" ok\n"); pos != std::string::npos; pos = r.out.find(" ok\n", pos + 1)) ++ok;
  CHECK(ok == 10);
  CHECK(r.out.find("verification passed") != std::string::npos);
}

TEST_CASE("trace and identification only") {
  auto r = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y,Z1,Z2,Z3|do(X))", "--trace",
                 "--no-simplify"});
  CHECK(r.status == 0);
  CHECK(r.out.find("ID line 4") != std::string::npos);
  CHECK(r.out.find("simplified:") == std::string::npos);
}

TEST_CASE("input errors exit with 1") {
  CHECK(call({"--query", "P(Y|do(X))"}).status == 1);
  CHECK(call({"--graph", "/nonexistent/graph.g", "--query", "P(Y|do(X))"}).status == 1);
  auto unknown = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Q|do(X))"});
  CHECK(unknown.status == 1);
  CHECK(unknown.err.find("1:3: unknown variable 'Q'") != std::string::npos);
  auto bad = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y|do(X)"});
  CHECK(bad.status == 1);
  auto overlap = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y,X|do(X))"});
  CHECK(overlap.status == 1);
  CHECK(overlap.err.find("'X'") != std::string::npos);
  auto order = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y|do(X))", "--order", "Y,X,Z1,Z2,Z3"});
  CHECK(order.status == 1);
  CHECK(call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y|do(X))", "--format", "html"}).status == 1);
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args{"--graph", fixtures::data_path("chain.g"), "--query", "P(Y|do(X))", "--verify"};
  CHECK(call(args).out == call(args).out);
}

TEST_CASE("plain output parses back") {
  auto r = call({"--graph", fixtures::data_path("motivating.g"), "--query", "P(Y,Z1,Z2,Z3|do(X))"});
  auto line = r.out.substr(r.out.find("identified: ") + 12);
  line = line.substr(0, line.find('\n'));
  CHECK(causal::canonical_equal(causal::parse_expression(line), fixtures::quotient(fixtures::motivating_effect)));
}
