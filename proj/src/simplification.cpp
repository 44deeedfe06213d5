#include "causal/simplification.hpp"

#include <algorithm>

#include "causal/errors.hpp"

namespace causal {

namespace {

std::string show(const VarSet& vs, const TopologicalOrder& order) {
  std::string out = "{";
  bool first = true;
  for (const auto& v : order.ascending(vs)) {
    if (!first) out += ",";
    out += v.name();
    first = false;
  }
  return out + "}";
}

/// Subsets by ascending size, then lexicographically by rank.
std::vector<VarSet> candidate_subsets(const VarSet& pool, const TopologicalOrder& order) {
  const auto items = order.ascending(pool);
  const auto n = items.size();
  std::vector<VarSet> out;
  std::vector<std::size_t> pick;
  for (std::size_t size = 0; size <= n; ++size) {
    pick.resize(size);
    for (std::size_t i = 0; i < size; ++i) pick[i] = i;
    while (true) {
      VarSet s;
      for (auto i : pick) s.insert(items[i]);
      out.push_back(std::move(s));
      // next combination
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == n - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t k = i; k < size; ++k) pick[k] = pick[k - 1] + 1;
    }
  }
  return out;
}

/// (xs _||_ ys | zs). Conditioned members drop out of both sides; a shared
/// remaining variable is never independent of itself.
bool independent(const CausalGraph& g, const VarSet& xs, const VarSet& ys, const VarSet& zs) {
  const auto x = set_difference(xs, zs);
  const auto y = set_difference(ys, zs);
  if (!disjoint(x, y)) return false;
  return d_separated(g, x, y, zs);
}

void note(std::vector<std::string>* log, std::string line) {
  if (log) log->push_back(std::move(line));
}

}  // namespace

std::vector<Variable> summation_order(const AtomicExpression& a, const TopologicalOrder& order) {
  return order.descending(a.sum_set());
}

std::size_t index_of(const AtomicExpression& a, const TopologicalOrder& order, std::size_t j) {
  const auto sums = summation_order(a, order);
  if (j == 0 || j > sums.size()) throw ArgumentError("summation index out of range");
  const auto omega = induced_order(a, order);
  auto it = std::find(omega.begin(), omega.end(), sums[j - 1]);
  if (it == omega.end()) {
    throw ContractViolation("summation variable '" + sums[j - 1].name() + "' has no term");
  }
  return static_cast<std::size_t>(it - omega.begin()) + 1;
}

VarSet get_missing(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order,
                   std::size_t j) {
  const auto sums = summation_order(a, order);
  if (j == 0 || j > sums.size()) throw ArgumentError("summation index out of range");
  const auto omega = induced_order(a, order);
  const auto low = order.rank(sums[j - 1]);
  const auto high = order.rank(omega.front());
  const auto present = a.variables();
  VarSet out;
  for (const auto& u : g.vertices()) {
    if (present.count(u)) continue;
    const auto r = order.rank(u);
    if (r > low && r < high) out.insert(u);
  }
  return out;
}

JoinState insert(const JoinState& state, const Variable& m, const Variable& sum_var,
                 const SimplifyContext& ctx, std::vector<std::string>* log) {
  const auto& g = ctx.graph;
  const VarSet joined = state.joined_set();
  const VarSet anc_star = ancestors(g, m, true);
  const VarSet anc = ancestors(g, m, false);
  const VarSet pool = set_difference(strictly_below(ctx.order, joined), anc_star);
  for (const auto& p : candidate_subsets(pool, ctx.order)) {
    const VarSet a = symmetric_difference(set_union(anc_star, p), state.conditioning);
    const VarSet b = set_union(anc, p);
    if (independent(g, joined, a, set_difference(state.conditioning, a)) &&
        independent(ctx.model, {m}, {sum_var}, set_difference(b, {sum_var}))) {
      JoinState next = state;
      next.joined.push_back(m);
      next.conditioning = b;
      next.inserted.push_back(m);
      next.inserted_conditioners.push_back(b);
      next.missing.erase(m);
      note(log, "insert " + m.name() + " with " + show(b, ctx.order));
      return next;
    }
  }
  note(log, "insert " + m.name() + " failed");
  return state;
}

JoinState join(const JoinState& state, const Variable& v, const VarSet& c, const Variable& sum_var,
               const SimplifyContext& ctx, std::vector<std::string>* log) {
  if (state.joined.empty()) {
    JoinState next = state;
    next.joined = {v};
    next.conditioning = c;
    note(log, "join " + v.name() + " as the first term, D=" + show(c, ctx.order));
    return next;
  }
  const auto& g = ctx.graph;
  const VarSet joined = state.joined_set();
  const VarSet anc_star = ancestors(g, v, true);
  const VarSet anc = ancestors(g, v, false);
  const VarSet pool = set_difference(strictly_below(ctx.order, joined), anc_star);
  for (const auto& p : candidate_subsets(pool, ctx.order)) {
    const VarSet a = symmetric_difference(set_union(anc_star, p), state.conditioning);
    const VarSet b = symmetric_difference(set_union(anc, p), c);
    if (independent(g, joined, a, set_difference(state.conditioning, a)) &&
        independent(g, {v}, b, set_difference(c, b))) {
      JoinState next = state;
      next.joined.push_back(v);
      next.conditioning = set_union(anc, p);
      note(log, "join " + v.name() + " with P=" + show(p, ctx.order) +
                    ", D=" + show(next.conditioning, ctx.order));
      return next;
    }
  }
  for (const auto& m : ctx.order.ascending(state.missing)) {
    if (!state.conditioning.count(m) || c.count(m)) continue;
    auto next = insert(state, m, sum_var, ctx, log);
    if (next.joined.size() > state.joined.size()) return next;
  }
  note(log, "join " + v.name() + " failed");
  return state;
}

AtomicExpression factorize(const JoinState& state, const AtomicExpression& a, const Variable& eliminate,
                           const SimplifyContext& ctx) {
  const auto& order = ctx.order;
  const auto current = a.ordered(order);
  const auto& terms = current.terms();

  VarSet rest = state.joined_set();
  if (!rest.erase(eliminate)) return a;
  const VarSet inserted(state.inserted.begin(), state.inserted.end());

  auto conditioning_of = [&](const Variable& q) {
    VarSet f = state.conditioning;
    for (const auto& other : rest) {
      if (order.rank(other) < order.rank(q)) f.insert(other);
    }
    return f;
  };

  for (std::size_t r = 0; r < state.inserted.size(); ++r) {
    const auto& var = state.inserted[r];
    const VarSet recorded = set_difference(state.inserted_conditioners[r], {eliminate});
    const VarSet f = conditioning_of(var);
    if (f == recorded) continue;
    if (!independent(ctx.model, {var}, symmetric_difference(f, recorded), set_intersection(f, recorded))) {
      return a;
    }
  }

  std::vector<Term> out;
  for (const auto& q : order.descending(set_difference(rest, inserted))) {
    out.emplace_back(q, conditioning_of(q));
  }
  const VarSet joined = state.joined_set();
  for (const auto& t : terms) {
    if (!joined.count(t.variable)) out.push_back(t);
  }
  AtomicExpression result(std::move(out), set_difference(a.sum_set(), {eliminate}));

  // The new terms may not introduce variables the input never mentioned.
  if (!is_subset(result.mentioned(), set_difference(a.mentioned(), {eliminate}))) return a;
  return result.ordered(order);
}

SimplificationOutcome simplify(const AtomicExpression& a, const SimplifyContext& ctx) {
  for (const auto& v : a.mentioned()) ctx.graph.index(v);
  if (!is_pi_consistent(a, ctx.graph, ctx.order)) {
    throw ContractViolation("atomic expression " + render(a, Style::plain, &ctx.order) +
                            " is not consistent with the topological order");
  }

  SimplificationOutcome outcome;
  for (const auto& s : a.sum_set()) outcome.status[s] = VariableStatus::retained;

  AtomicExpression current = a.ordered(ctx.order);
  std::size_t j = 0;
  while (j < current.sum_set().size()) {
    const AtomicExpression backup = current;
    ++j;
    const auto sums = summation_order(current, ctx.order);
    const Variable target = sums[j - 1];
    const auto i = index_of(current, ctx.order, j);
    JoinState state;
    state.missing = get_missing(current, ctx.graph, ctx.order, j);
    outcome.log.push_back("eliminate " + target.name() + ": M=" + show(state.missing, ctx.order));

    std::size_t k = 1;
    while (k <= i) {
      const auto& term = current.terms()[k - 1];
      auto next = join(state, term.variable, term.conditioners, target, ctx, &outcome.log);
      if (next.joined.size() == state.joined.size()) break;
      const bool inserted = next.inserted.size() > state.inserted.size();
      state = std::move(next);
      if (!inserted) ++k;
    }
    if (k != i + 1) {
      outcome.log.push_back("keep " + target.name());
      continue;
    }
    auto reduced = factorize(state, current, target, ctx);
    if (reduced == current) {
      current = backup;
      outcome.log.push_back("factorize failed for " + target.name());
      continue;
    }
    outcome.sources.insert_or_assign(target, current);
    current = std::move(reduced);
    outcome.eliminated.insert(target);
    outcome.status[target] = VariableStatus::eliminated;
    outcome.certificates[target] = state;
    outcome.log.push_back("eliminated " + target.name() + ": " + render(current, Style::plain, &ctx.order));
    j = 0;
  }
  outcome.expression = std::move(current);
  return outcome;
}

SimplificationOutcome simplify(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order) {
  return simplify(a, SimplifyContext(g, order));
}

}  // namespace causal
