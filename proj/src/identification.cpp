#include "causal/identification.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <variant>

#include "causal/errors.hpp"

namespace causal {

void CausalQuery::validate() const {
  if (y.empty()) throw ArgumentError("query has no outcome variables");
  auto check = [](const VarSet& a, const VarSet& b, const char* ra, const char* rb) {
    auto both = set_intersection(a, b);
    if (!both.empty()) {
      throw ArgumentError("variable '" + both.begin()->name() + "' is both " + ra + " and " + rb);
    }
  };
  check(y, x, "an outcome", "an intervention");
  check(y, z, "an outcome", "a condition");
  check(x, z, "an intervention", "a condition");
}

IdentifyResult IdentifyResult::success(QuotientExpression e, std::vector<TraceStep> trace) {
  IdentifyResult r;
  r.expression_ = std::move(e);
  r.trace_ = std::move(trace);
  return r;
}

IdentifyResult IdentifyResult::failure(Hedge h, std::vector<TraceStep> trace) {
  IdentifyResult r;
  r.hedge_ = std::move(h);
  r.trace_ = std::move(trace);
  return r;
}

const QuotientExpression& IdentifyResult::expression() const {
  if (!expression_) throw ContractViolation("the effect is not identifiable; no expression");
  return *expression_;
}

const Hedge& IdentifyResult::hedge() const {
  if (!hedge_) throw ContractViolation("the effect is identifiable; no hedge");
  return *hedge_;
}

const std::vector<TraceStep>& trace(const IdentifyResult& r) { return r.trace(); }

namespace {

struct Fail {
  Hedge hedge;
};

/// The distribution argument of ID.
struct Distribution {
  enum class Kind { observed, product, general };
  Kind kind = Kind::observed;
  VarSet vars;
  std::vector<Term> chain;  // product: ascending rank, one term per variable
  Expression expr;          // general
};

using Factor = std::variant<Term, Expression>;

void append_factor(Expression& target, Factor f) {
  if (auto* t = std::get_if<Term>(&f)) {
    target.atomics.emplace_back(std::vector<Term>{std::move(*t)});
    return;
  }
  auto& e = std::get<Expression>(f);
  if (!e.sum_set.empty()) {
    target.children.push_back(std::move(e));
    return;
  }
  for (auto& c : e.children) target.children.push_back(std::move(c));
  for (auto& q : e.fractions) target.fractions.push_back(std::move(q));
  for (auto& a : e.atomics) target.atomics.push_back(std::move(a));
}

void append_flat(Expression& target, Expression src) {
  append_factor(target, Factor(std::move(src)));
}

QuotientExpression flatten(Expression e) {
  e = normalize(std::move(e));
  if (!e.sum_set.empty()) return QuotientExpression(std::move(e), Expression{});
  Expression num;
  Expression den;
  num.children = std::move(e.children);
  num.atomics = std::move(e.atomics);
  for (auto& f : e.fractions) {
    auto top = flatten(std::move(f.numerator));
    auto bottom = flatten(std::move(f.denominator));
    append_flat(num, std::move(top.numerator));
    append_flat(num, std::move(bottom.denominator));
    append_flat(den, std::move(top.denominator));
    append_flat(den, std::move(bottom.numerator));
  }
  return QuotientExpression(normalize(std::move(num)), normalize(std::move(den)));
}

class Identifier {
 public:
  explicit Identifier(const TopologicalOrder& pi) : pi_(pi) {}

  std::vector<TraceStep>& steps() { return steps_; }

  Expression run(const VarSet& y, const VarSet& x, const Distribution& p, const CausalGraph& g) {
    const VarSet v = g.vertex_set();

    // line 1
    if (x.empty()) {
      record(1, v, y, x);
      return joint_marginal(p, g, y);
    }

    // line 2
    const VarSet anc = ancestors(g, y, true);
    if (anc != v) {
      record(2, v, y, x);
      return run(y, set_intersection(x, anc), marginal(p, anc), induced_subgraph(g, anc));
    }

    // line 3
    const VarSet w = set_difference(set_difference(v, x), ancestors(mutilate(g, x, {}), y, true));
    if (!w.empty()) {
      record(3, v, y, x);
      return run(y, set_union(x, w), p, g);
    }

    // line 4
    const auto components = ordered_components(induced_subgraph(g, set_difference(v, x)));
    if (components.size() > 1) {
      record(4, v, y, x);
      Expression product;
      for (const auto& s : components) product.children.push_back(run(s, set_difference(v, s), p, g));
      product.sum_set = set_difference(v, set_union(y, x));
      return normalize(std::move(product));
    }

    const VarSet& s = components.front();
    const auto whole = ordered_components(g);

    // line 5
    if (whole.size() == 1) {
      record(5, v, y, x);
      throw Fail{Hedge{g, induced_subgraph(g, s)}};
    }

    // line 6
    if (std::find(whole.begin(), whole.end(), s) != whole.end()) {
      record(6, v, y, x);
      std::vector<Factor> factors;
      for (const auto& vi : pi_.ascending(s)) factors.push_back(conditional(p, g, vi));
      return product_of(std::move(factors), set_difference(s, y));
    }

    // line 7
    for (const auto& sp : whole) {
      if (!is_subset(s, sp)) continue;
      record(7, v, y, x);
      std::vector<Factor> factors;
      for (const auto& vi : pi_.ascending(sp)) factors.push_back(conditional(p, g, vi));
      Distribution next;
      next.vars = sp;
      if (std::all_of(factors.begin(), factors.end(),
                      [](const Factor& f) { return std::holds_alternative<Term>(f); })) {
        next.kind = Distribution::Kind::product;
        for (auto& f : factors) next.chain.push_back(std::get<Term>(f));
      } else {
        next.kind = Distribution::Kind::general;
        next.expr = product_of(std::move(factors), {});
      }
      return run(y, set_intersection(x, sp), next, induced_subgraph(g, sp));
    }
    throw ContractViolation("no C-component of the graph contains the remaining component");
  }

 private:
  void record(int line, const VarSet& v, const VarSet& y, const VarSet& x) {
    steps_.push_back(TraceStep{Procedure::id, line, v, y, x, {}});
  }

  std::vector<VarSet> ordered_components(const CausalGraph& g) const {
    auto comps = c_components(g);
    auto top = [this](const VarSet& c) {
      std::size_t r = 0;
      for (const auto& v : c) r = std::max(r, pi_.rank(v));
      return r;
    };
    std::stable_sort(comps.begin(), comps.end(),
                     [&](const VarSet& a, const VarSet& b) { return top(a) < top(b); });
    return comps;
  }

  VarSet predecessors(const CausalGraph& g, const Variable& v) const {
    VarSet out;
    const auto r = pi_.rank(v);
    for (const auto& u : g.vertices()) {
      if (pi_.rank(u) < r) out.insert(u);
    }
    return out;
  }

  /// P(v | predecessors of v in g) under p.
  Factor conditional(const Distribution& p, const CausalGraph& g, const Variable& v) const {
    switch (p.kind) {
      case Distribution::Kind::observed: {
        VarSet preds = predecessors(g, v);
        const VarSet anc = ancestors(g, v, false);
        for (const auto& c : pi_.descending(set_difference(preds, anc))) {
          VarSet rest = preds;
          rest.erase(c);
          if (d_separated(g, {v}, {c}, rest)) preds = std::move(rest);
        }
        return Term(v, std::move(preds));
      }
      case Distribution::Kind::product:
        for (const auto& t : p.chain) {
          if (t.variable == v) return t;
        }
        throw ContractViolation("no chain term for '" + v.name() + "'");
      case Distribution::Kind::general: {
        VarSet preds = predecessors(g, v);
        VarSet joint = preds;
        joint.insert(v);
        Expression top = marginal_expression(p, joint);
        if (preds.empty()) return top;
        Expression q;
        q.fractions.emplace_back(std::move(top), marginal_expression(p, preds));
        return q;
      }
    }
    return Term{};
  }

  Expression product_of(std::vector<Factor> factors, const VarSet& sum) const {
    if (std::all_of(factors.begin(), factors.end(),
                    [](const Factor& f) { return std::holds_alternative<Term>(f); })) {
      std::vector<Term> terms;
      for (auto& f : factors) terms.push_back(std::get<Term>(std::move(f)));
      return Expression(AtomicExpression(std::move(terms), sum));
    }
    Expression out;
    for (auto& f : factors) append_factor(out, std::move(f));
    out.sum_set = sum;
    return normalize(std::move(out));
  }

  bool is_prefix(const Distribution& p, const VarSet& keep) const {
    bool dropped = false;
    for (const auto& t : p.chain) {
      if (!keep.count(t.variable)) {
        dropped = true;
      } else if (dropped) {
        return false;
      }
    }
    return true;
  }

  Distribution marginal(const Distribution& p, const VarSet& keep) const {
    if (keep == p.vars) return p;
    Distribution out;
    out.vars = keep;
    switch (p.kind) {
      case Distribution::Kind::observed:
        out.kind = Distribution::Kind::observed;
        break;
      case Distribution::Kind::product:
        if (is_prefix(p, keep)) {
          out.kind = Distribution::Kind::product;
          for (const auto& t : p.chain) {
            if (keep.count(t.variable)) out.chain.push_back(t);
          }
        } else {
          out.kind = Distribution::Kind::general;
          out.expr = Expression(AtomicExpression(p.chain, set_difference(p.vars, keep)));
        }
        break;
      case Distribution::Kind::general: {
        out.kind = Distribution::Kind::general;
        Expression e;
        e.children.push_back(p.expr);
        e.sum_set = set_difference(p.vars, keep);
        out.expr = normalize(std::move(e));
        break;
      }
    }
    return out;
  }

  /// The value of marginal(p, keep) as an expression. Only used for
  /// general distributions.
  Expression marginal_expression(const Distribution& p, const VarSet& keep) const {
    Expression e;
    e.children.push_back(p.expr);
    e.sum_set = set_difference(p.vars, keep);
    return normalize(std::move(e));
  }

  Expression joint_marginal(const Distribution& p, const CausalGraph& g, const VarSet& y) const {
    const VarSet sum = set_difference(p.vars, y);
    switch (p.kind) {
      case Distribution::Kind::observed: {
        std::vector<Term> terms;
        for (const auto& v : pi_.ascending(p.vars)) terms.push_back(std::get<Term>(conditional(p, g, v)));
        return Expression(AtomicExpression(std::move(terms), sum));
      }
      case Distribution::Kind::product:
        return Expression(AtomicExpression(p.chain, sum));
      case Distribution::Kind::general:
        return marginal_expression(p, y);
    }
    return {};
  }

  const TopologicalOrder& pi_;
  std::vector<TraceStep> steps_;
};

TopologicalOrder resolve_order(const CausalGraph& g, const TopologicalOrder* order) {
  if (!order) return topological_order(g);
  return TopologicalOrder::checked(g, order->sequence());
}

void require_vertices(const CausalGraph& g, const VarSet& vs) {
  for (const auto& v : vs) g.index(v);
}

}  // namespace

IdentifyResult id(const VarSet& y, const VarSet& x, const CausalGraph& g, const TopologicalOrder* order) {
  CausalQuery{y, x, {}}.validate();
  require_vertices(g, y);
  require_vertices(g, x);
  const auto pi = resolve_order(g, order);
  Identifier ider(pi);
  Distribution p;
  p.vars = g.vertex_set();
  try {
    auto e = ider.run(y, x, p, g);
    return IdentifyResult::success(flatten(std::move(e)), std::move(ider.steps()));
  } catch (Fail& f) {
    return IdentifyResult::failure(std::move(f.hedge), std::move(ider.steps()));
  }
}

IdentifyResult idc(const VarSet& y, const VarSet& x, const VarSet& z, const CausalGraph& g,
                   const TopologicalOrder* order) {
  CausalQuery{y, x, z}.validate();
  require_vertices(g, y);
  require_vertices(g, x);
  require_vertices(g, z);
  const auto pi = resolve_order(g, order);

  std::vector<TraceStep> steps;
  VarSet xs = x;
  VarSet zs = z;
  bool moved = true;
  while (moved) {
    moved = false;
    for (const auto& zv : pi.ascending(zs)) {
      VarSet rest = zs;
      rest.erase(zv);
      const auto cut = mutilate(g, xs, {zv});
      if (d_separated(cut, y, {zv}, set_union(xs, rest))) {
        steps.push_back(TraceStep{Procedure::idc, 1, g.vertex_set(), y, xs, zs});
        xs.insert(zv);
        zs = std::move(rest);
        moved = true;
        break;
      }
    }
  }
  steps.push_back(TraceStep{Procedure::idc, 2, g.vertex_set(), y, xs, zs});

  Identifier ider(pi);
  Distribution p;
  p.vars = g.vertex_set();
  Expression inner;
  try {
    inner = ider.run(set_union(y, zs), xs, p, g);
  } catch (Fail& f) {
    steps.insert(steps.end(), ider.steps().begin(), ider.steps().end());
    return IdentifyResult::failure(std::move(f.hedge), std::move(steps));
  }
  steps.insert(steps.end(), ider.steps().begin(), ider.steps().end());

  auto joint = flatten(std::move(inner));
  if (zs.empty()) return IdentifyResult::success(std::move(joint), std::move(steps));

  // P' / sum_y P'  with  P' = n / d  becomes  n / (d * sum_y (n / d)).
  Expression normalizer;
  if (joint.denominator.empty()) {
    normalizer.children.push_back(joint.numerator);
  } else {
    normalizer.fractions.push_back(joint);
  }
  normalizer.sum_set = y;
  Expression den;
  append_flat(den, joint.denominator);
  den.children.push_back(normalize(std::move(normalizer)));
  return IdentifyResult::success(
      QuotientExpression(std::move(joint.numerator), normalize(std::move(den))), std::move(steps));
}

IdentifyResult identify(const CausalQuery& q, const CausalGraph& g, const TopologicalOrder* order) {
  if (q.z.empty()) return id(q.y, q.x, g, order);
  return idc(q.y, q.x, q.z, g, order);
}

std::string render_trace(const std::vector<TraceStep>& steps, const TopologicalOrder* order) {
  auto list = [order](const VarSet& vs) {
    std::vector<Variable> seq(vs.begin(), vs.end());
    if (order) {
      std::vector<Variable> known;
      for (const auto& v : order->sequence()) {
        if (vs.count(v)) known.push_back(v);
      }
      if (known.size() == seq.size()) seq = std::move(known);
    }
    std::string out = "{";
    for (std::size_t i = 0; i < seq.size(); ++i) {
      if (i) out += ",";
      out += seq[i].name();
    }
    return out + "}";
  };
  std::ostringstream out;
  for (const auto& s : steps) {
    out << (s.procedure == Procedure::id ? "ID" : "IDC") << " line " << s.line << "  V=" << list(s.vertices)
        << "  y=" << list(s.y) << "  x=" << list(s.x);
    if (s.procedure == Procedure::idc) out << "  z=" << list(s.z);
    out << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

class QueryParser {
 public:
  explicit QueryParser(std::string_view text) : text_(text) {}

  CausalQuery parse() {
    CausalQuery q;
    expect('P');
    expect('(');
    q.y = names();
    skip();
    if (peek() == '|') {
      ++pos_;
      bool seen_do = false;
      while (true) {
        skip();
        if (text_.substr(pos_, 3) == "do(" || text_.substr(pos_, 3) == "do ") {
          if (seen_do) fail("more than one do(...) clause");
          seen_do = true;
          pos_ += 2;
          expect('(');
          q.x = names();
          expect(')');
        } else {
          auto start = pos_;
          auto v = name();
          if (!q.z.insert(v).second) {
            pos_ = start;
            fail("variable '" + v.name() + "' listed twice");
          }
        }
        skip();
        if (peek() != ',') break;
        ++pos_;
      }
    }
    expect(')');
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    q.validate();
    return q;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, 1, pos_ + 1); }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Variable name() {
    skip();
    auto start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_) fail("expected a variable name");
    return Variable(std::string(text_.substr(start, pos_ - start)));
  }

  VarSet names() {
    VarSet out;
    while (true) {
      auto start = pos_;
      auto v = name();
      if (!out.insert(v).second) {
        pos_ = start;
        fail("variable '" + v.name() + "' listed twice");
      }
      skip();
      if (peek() != ',') break;
      ++pos_;
    }
    return out;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

CausalQuery parse_query(std::string_view text) { return QueryParser(text).parse(); }

}  // namespace causal
