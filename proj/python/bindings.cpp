#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "causal/errors.hpp"
#include "causal/expression.hpp"
#include "causal/graph.hpp"
#include "causal/identification.hpp"
#include "causal/oracle.hpp"
#include "causal/toolkit.hpp"

namespace py = pybind11;
using namespace causal;

namespace {

VarSet to_set(const std::vector<std::string>& names) {
  VarSet out;
  for (const auto& n : names) out.emplace(n);
  return out;
}

std::vector<std::string> to_names(const std::vector<Variable>& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.name());
  return out;
}

std::vector<std::string> to_names(const VarSet& vs) { return to_names(std::vector<Variable>(vs.begin(), vs.end())); }

TopologicalOrder order_for(const CausalGraph& g, const std::optional<std::vector<std::string>>& order) {
  if (!order) return topological_order(g);
  std::vector<Variable> seq;
  for (const auto& n : *order) seq.emplace_back(n);
  return TopologicalOrder::checked(g, std::move(seq));
}

Style style_of(const std::string& name) {
  if (name == "plain") return Style::plain;
  if (name == "latex") return Style::latex;
  throw ArgumentError("unknown format '" + name + "'");
}

struct Identified {
  bool identified = false;
  std::optional<QuotientExpression> expression;
  std::vector<std::string> hedge_f;
  std::vector<std::string> hedge_f_prime;
  std::string trace;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Causal effect identification and expression simplification";

  auto error = py::register_exception<Error>(m, "CausalError");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", error.ptr());
  py::register_exception<LookupError>(m, "LookupError", error.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", error.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", error.ptr());
  py::register_exception<EvaluationError>(m, "EvaluationError", error.ptr());

  py::class_<CausalGraph>(m, "Graph")
      .def_static("parse", [](const std::string& text) { return parse_graph(text); })
      .def_static("read", [](const std::string& path) { return read_graph_file(path); })
      .def_property_readonly("vertices", [](const CausalGraph& g) { return to_names(g.vertices()); })
      .def("parents", [](const CausalGraph& g, const std::string& v) { return to_names(g.parents(Variable(v))); })
      .def("siblings", [](const CausalGraph& g, const std::string& v) { return to_names(g.siblings(Variable(v))); })
      .def("topological_order", [](const CausalGraph& g) { return to_names(topological_order(g).sequence()); })
      .def("c_components",
           [](const CausalGraph& g) {
             std::vector<std::vector<std::string>> out;
             for (const auto& c : c_components(g)) out.push_back(to_names(c));
             return out;
           })
      .def(
          "d_separated",
          [](const CausalGraph& g, const std::vector<std::string>& xs, const std::vector<std::string>& ys,
             const std::vector<std::string>& zs) { return d_separated(g, to_set(xs), to_set(ys), to_set(zs)); },
          py::arg("xs"), py::arg("ys"), py::arg("zs") = std::vector<std::string>{})
      .def("to_text", [](const CausalGraph& g) { return to_text(g); })
      .def("__len__", &CausalGraph::size)
      .def("__eq__", [](const CausalGraph& a, const CausalGraph& b) { return a == b; });

  py::class_<QuotientExpression>(m, "Expression")
      .def_static("parse", [](const std::string& text) { return parse_expression(text); })
      .def(
          "render",
          [](const QuotientExpression& q, const std::string& format) { return render(q, style_of(format)); },
          py::arg("format") = "plain")
      .def_property_readonly("free_variables",
                             [](const QuotientExpression& q) { return to_names(q.free_variables()); })
      .def("equals", [](const QuotientExpression& a, const QuotientExpression& b) { return canonical_equal(a, b); })
      .def("__str__", [](const QuotientExpression& q) { return render(q, Style::plain); })
      .def("__repr__", [](const QuotientExpression& q) { return "Expression('" + render(q, Style::plain) + "')"; });

  py::class_<Identified>(m, "Identification")
      .def_readonly("identified", &Identified::identified)
      .def_readonly("expression", &Identified::expression)
      .def_readonly("hedge_f", &Identified::hedge_f)
      .def_readonly("hedge_f_prime", &Identified::hedge_f_prime)
      .def_readonly("trace", &Identified::trace)
      .def("__bool__", [](const Identified& r) { return r.identified; });

  m.def(
      "identify",
      [](const CausalGraph& g, const std::string& query, const std::optional<std::vector<std::string>>& order) {
        const auto o = order_for(g, order);
        const auto r = causal::identify(parse_query(query), g, &o);
        Identified out;
        out.identified = r.identified();
        out.trace = render_trace(r.trace(), &o);
        if (r.identified()) {
          out.expression = r.expression();
        } else {
          out.hedge_f = to_names(o.ascending(r.hedge().f.vertex_set()));
          out.hedge_f_prime = to_names(o.ascending(r.hedge().f_prime.vertex_set()));
        }
        return out;
      },
      py::arg("graph"), py::arg("query"), py::arg("order") = std::nullopt,
      "Identifies a query such as 'P(Y|do(X))'.");

  m.def(
      "simplify",
      [](const CausalGraph& g, const QuotientExpression& q, const std::optional<std::vector<std::string>>& order) {
        return simplify_quotient(q, g, order_for(g, order));
      },
      py::arg("graph"), py::arg("expression"), py::arg("order") = std::nullopt,
      "Removes summation variables wherever the graph allows.");

  py::class_<EquivalenceReport>(m, "EquivalenceReport")
      .def_property_readonly("passed", &EquivalenceReport::passed)
      .def_property_readonly("worst", &EquivalenceReport::worst)
      .def_property_readonly("trials", [](const EquivalenceReport& r) { return r.trials.size(); })
      .def("to_text", &EquivalenceReport::to_text)
      .def("__bool__", &EquivalenceReport::passed);

  m.def(
      "assert_equivalent",
      [](const QuotientExpression& a, const QuotientExpression& b, const CausalGraph& g, std::size_t trials,
         double tolerance, std::uint64_t seed) {
        OracleOptions options;
        options.trials = trials;
        options.tolerance = tolerance;
        options.seed = seed;
        return causal::assert_equivalent(a, b, g, options);
      },
      py::arg("a"), py::arg("b"), py::arg("graph"), py::arg("trials") = 10, py::arg("tolerance") = 1e-9,
      py::arg("seed") = 1, "Compares two expressions numerically under random models of the graph.");
}
