#include "causal/toolkit.hpp"

#include <algorithm>

namespace causal {

namespace {

bool simplifiable(const AtomicExpression& a, const SimplifyContext& ctx) {
  for (const auto& v : a.mentioned()) {
    if (!ctx.graph.contains(v) || !ctx.order.contains(v)) return false;
  }
  return is_pi_consistent(a, ctx.graph, ctx.order);
}

Expression deconstruct_pass(const Expression& b, const SimplifyContext& ctx) {
  Expression out;
  out.sum_set = b.sum_set;
  for (const auto& y : b.atomics) {
    AtomicExpression reduced = simplifiable(y, ctx) ? simplify(y, ctx).expression : y;
    if (!reduced.sum_set().empty()) {
      out.atomics.push_back(std::move(reduced));
      continue;
    }
    for (const auto& t : reduced.terms()) out.atomics.emplace_back(std::vector<Term>{t});
  }
  for (const auto& f : b.fractions) {
    out.fractions.emplace_back(deconstruct_pass(f.numerator, ctx), deconstruct_pass(f.denominator, ctx));
  }
  for (const auto& child : b.children) {
    auto x = deconstruct_pass(child, ctx);
    if (x.children.empty() && x.sum_set.empty()) {
      for (auto& a : x.atomics) out.atomics.push_back(std::move(a));
      for (auto& f : x.fractions) out.fractions.push_back(std::move(f));
    } else {
      out.children.push_back(std::move(x));
    }
  }
  return out;
}

bool touches(const Term& t, const VarSet& sum) {
  return sum.count(t.variable) || !disjoint(t.conditioners, sum);
}

Expression extract_body(Expression b, const SimplifyContext& ctx) {
  if (b.sum_set.empty()) {
    for (auto& child : b.children) child = extract_body(deconstruct(child, ctx), ctx);
    for (auto& f : b.fractions) {
      f.numerator = extract_body(deconstruct(f.numerator, ctx), ctx);
      f.denominator = extract_body(deconstruct(f.denominator, ctx), ctx);
    }
    std::vector<AtomicExpression> pulled;
    for (auto& a : b.atomics) {
      if (a.sum_set().empty()) continue;
      std::vector<Term> keep;
      for (const auto& t : a.terms()) {
        if (touches(t, a.sum_set())) {
          keep.push_back(t);
        } else {
          pulled.emplace_back(std::vector<Term>{t});
        }
      }
      if (keep.size() != a.terms().size()) a = AtomicExpression(std::move(keep), a.sum_set());
    }
    for (auto& a : pulled) b.atomics.push_back(std::move(a));
    return b;
  }

  std::vector<AtomicExpression> outside;
  std::vector<AtomicExpression> inside;
  for (auto& a : b.atomics) {
    bool independent = a.sum_set().empty();
    for (const auto& t : a.terms()) {
      if (touches(t, b.sum_set)) independent = false;
    }
    (independent ? outside : inside).push_back(std::move(a));
  }
  if (outside.empty()) {
    b.atomics = std::move(inside);
    return b;
  }
  b.atomics = std::move(inside);
  Expression wrapper;
  wrapper.children.push_back(std::move(b));
  wrapper.atomics = std::move(outside);
  return wrapper;
}

template <typename T>
void cancel_common(std::vector<T>& xs, std::vector<T>& ys) {
  std::size_t i = 0;
  while (i < xs.size() && !ys.empty()) {
    auto match = std::find_if(ys.begin(), ys.end(), [&](const T& y) { return canonical_equal(xs[i], y); });
    if (match != ys.end()) {
      ys.erase(match);
      xs.erase(xs.begin() + static_cast<std::ptrdiff_t>(i));
      i = 0;
    } else {
      ++i;
    }
  }
}

Expression simplify_fractions(Expression e, const SimplifyContext& ctx) {
  for (auto& child : e.children) child = simplify_fractions(std::move(child), ctx);
  for (auto& f : e.fractions) {
    auto [n, d] = q_simplify(simplify_fractions(std::move(f.numerator), ctx),
                             simplify_fractions(std::move(f.denominator), ctx), ctx);
    f.numerator = std::move(n);
    f.denominator = std::move(d);
  }
  return e;
}

}  // namespace

Expression deconstruct(const Expression& b, const SimplifyContext& ctx) {
  auto once = deconstruct_pass(b, ctx);
  if (canonical_equal(once, b)) return once;
  auto twice = deconstruct_pass(once, ctx);
  return twice;
}

Expression deconstruct(const Expression& b, const CausalGraph& g, const TopologicalOrder& order) {
  return deconstruct(b, SimplifyContext(g, order));
}

Expression extract(const Expression& b, const SimplifyContext& ctx) {
  return extract_body(deconstruct(b, ctx), ctx);
}

Expression extract(const Expression& b, const CausalGraph& g, const TopologicalOrder& order) {
  return extract(b, SimplifyContext(g, order));
}

std::pair<Expression, Expression> q_simplify(const Expression& b1, const Expression& b2,
                                             const SimplifyContext& ctx) {
  auto n = extract(b1, ctx);
  auto d = extract(b2, ctx);
  if (!n.sum_set.empty() || !d.sum_set.empty()) return {std::move(n), std::move(d)};
  cancel_common(n.children, d.children);
  cancel_common(n.fractions, d.fractions);
  cancel_common(n.atomics, d.atomics);
  return {std::move(n), std::move(d)};
}

std::pair<Expression, Expression> q_simplify(const Expression& b1, const Expression& b2,
                                             const CausalGraph& g, const TopologicalOrder& order) {
  return q_simplify(b1, b2, SimplifyContext(g, order));
}

QuotientExpression simplify_quotient(const QuotientExpression& q, const SimplifyContext& ctx) {
  auto [n, d] = q_simplify(simplify_fractions(q.numerator, ctx), simplify_fractions(q.denominator, ctx), ctx);
  return QuotientExpression(std::move(n), std::move(d));
}

QuotientExpression simplify_quotient(const QuotientExpression& q, const CausalGraph& g,
                                     const TopologicalOrder& order) {
  return simplify_quotient(q, SimplifyContext(g, order));
}

}  // namespace causal
