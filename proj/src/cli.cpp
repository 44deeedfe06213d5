#include "causal/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iomanip>
#include <optional>
#include <sstream>

#include "causal/errors.hpp"
#include "causal/identification.hpp"
#include "causal/oracle.hpp"
#include "causal/toolkit.hpp"

namespace causal::cli {

namespace {

struct Options {
  std::string graph;
  std::string query;
  std::string format = "plain";
  bool no_simplify = false;
  bool verify = false;
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  double tol = 1e-9;
  bool trace = false;
  std::string order;
};

std::string show(const VarSet& vs, const TopologicalOrder& order) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : order.ascending(vs)) {
    out += (first ? "" : ",") + v.name();
    first = false;
  }
  return out + "}";
}

TopologicalOrder parse_order(const std::string& text, const CausalGraph& g) {
  std::vector<Variable> seq;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(',', start);
    if (end == std::string::npos) end = text.size();
    auto name = text.substr(start, end - start);
    name.erase(0, name.find_first_not_of(" \t"));
    name.erase(name.find_last_not_of(" \t") + 1);
    if (!is_valid_name(name)) throw ArgumentError("--order: bad variable name at column " + std::to_string(start + 1));
    seq.emplace_back(name);
    start = end + 1;
  }
  return TopologicalOrder::checked(g, std::move(seq));
}

void check_known(const CausalQuery& q, const CausalGraph& g, const std::string& text) {
  for (const auto* set : {&q.y, &q.x, &q.z}) {
    for (const auto& v : *set) {
      if (g.contains(v)) continue;
      std::size_t col = 1;
      for (std::size_t pos = text.find(v.name()); pos != std::string::npos; pos = text.find(v.name(), pos + 1)) {
        const bool left = pos == 0 || !is_valid_name(text.substr(pos - 1, 1));
        const auto after = pos + v.name().size();
        const bool right = after >= text.size() || !is_valid_name(text.substr(after, 1));
        if (left && right) {
          col = pos + 1;
          break;
        }
      }
      throw ParseError("unknown variable '" + v.name() + "'", 1, col);
    }
  }
}

/// P_x(y | z) from the model, as a table over y, z and x.
ProbabilityTable truth_for(const CausalQuery& q, const DiscreteModel& m, const CausalGraph& g) {
  auto joint = interventional_truth(m, g, q.x, set_union(q.y, q.z));
  if (q.z.empty()) return joint;
  std::vector<std::string> keep;
  for (const auto& v : set_union(q.z, q.x)) keep.push_back(v.name());
  return joint.divide(joint.marginal(keep));
}

EquivalenceReport verify(const CausalQuery& q, const QuotientExpression& raw, const QuotientExpression& simplified,
                         const CausalGraph& g, const Options& opt) {
  EquivalenceReport report;
  report.tolerance = opt.tol;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const auto seed = opt.seed + t;
    const auto model = random_model(g, 2, seed);
    const auto joint = joint_distribution(model, g);
    const auto truth = truth_for(q, model, g);
    const auto d = std::max(max_abs_difference(eval_expression(raw, joint), truth),
                            max_abs_difference(eval_expression(simplified, joint), truth));
    report.trials.push_back({seed, d});
  }
  return report;
}

void print_hedge(const Hedge& h, const TopologicalOrder& order, std::ostream& out) {
  out << "not identifiable\n";
  out << "hedge F  = " << show(h.f.vertex_set(), order) << '\n';
  std::istringstream f(to_text(h.f));
  for (std::string line; std::getline(f, line);) out << "  " << line << '\n';
  out << "hedge F' = " << show(h.f_prime.vertex_set(), order) << '\n';
  std::istringstream fp(to_text(h.f_prime));
  for (std::string line; std::getline(fp, line);) out << "  " << line << '\n';
}

int execute(const Options& opt, std::ostream& out, std::ostream& err) {
  const auto g = read_graph_file(opt.graph);
  CausalQuery q;
  try {
    q = parse_query(opt.query);
    check_known(q, g, opt.query);
  } catch (const ParseError& e) {
    err << "error: --query " << e.what() << '\n';
    return exit_input_error;
  }
  const auto order = opt.order.empty() ? topological_order(g) : parse_order(opt.order, g);
  const auto style = opt.format == "latex" ? Style::latex : Style::plain;

  const auto result = identify(q, g, &order);
  if (opt.trace) {
    out << "trace:\n";
    std::istringstream lines(render_trace(result.trace(), &order));
    for (std::string line; std::getline(lines, line);) out << "  " << line << '\n';
  }
  if (!result.identified()) {
    print_hedge(result.hedge(), order, out);
    return exit_not_identifiable;
  }

  const auto& raw = result.expression();
  out << "identified: " << render(raw, style, &order) << '\n';
  QuotientExpression simplified = raw;
  if (!opt.no_simplify) {
    simplified = simplify_quotient(raw, g, order);
    out << "simplified: " << render(simplified, style, &order) << '\n';
  }
  if (opt.verify) {
    const auto report = verify(q, raw, simplified, g, opt);
    out << report.to_text();
    out << "verification " << (report.passed() ? "passed" : "FAILED") << ": " << report.trials.size()
        << " trials, worst deviation " << std::scientific << std::setprecision(3) << report.worst()
        << std::defaultfloat << '\n';
    if (!report.passed()) {
      err << "error: expression disagrees with the interventional distribution\n";
      return exit_input_error;
    }
  }
  return exit_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Identify and simplify causal effects in semi-Markovian graphs", "causal-id"};
  app.add_option("--graph", opt.graph, "Graph file")->required();
  app.add_option("--query", opt.query, "Query such as \"P(Y|do(X),Z)\"")->required();
  app.add_option("--format", opt.format, "Output style")->check(CLI::IsMember({"plain", "latex"}));
  app.add_flag("--no-simplify", opt.no_simplify, "Identification only");
  app.add_flag("--verify", opt.verify, "Check against random models");
  app.add_option("--trials", opt.trials, "Number of random models")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "Seed of the first model");
  app.add_option("--tol", opt.tol, "Largest allowed deviation")->check(CLI::NonNegativeNumber);
  app.add_flag("--trace", opt.trace, "Print the fired lines of the identification algorithm");
  app.add_option("--order", opt.order, "Topological order, e.g. \"A,B,C\"");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_input_error;
  }

  try {
    return execute(opt, out, err);
  } catch (const ParseError& e) {
    err << "error: " << opt.graph << ":" << e.what() << '\n';
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
  }
  return exit_input_error;
}

}  // namespace causal::cli
