#include "brute.hpp"

#include <algorithm>
#include <functional>

#include "causal/oracle.hpp"

namespace brute {

using namespace causal;

CausalGraph random_graph(std::mt19937_64& rng, const GraphShape& shape) {
  std::uniform_int_distribution<std::size_t> size(shape.min_vertices, shape.max_vertices);
  const auto n = size(rng);
  std::vector<Variable> causal_order;
  for (std::size_t i = 0; i < n; ++i) causal_order.emplace_back(std::string(1, static_cast<char>('A' + i)));

  std::bernoulli_distribution coin(shape.edge_probability);
  std::vector<Edge> directed;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) directed.emplace_back(causal_order[i], causal_order[j]);
    }
  }
  std::vector<Edge> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(causal_order[i], causal_order[j]);
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  std::uniform_int_distribution<std::size_t> confounders(0, shape.max_bidirected);
  pairs.resize(std::min(pairs.size(), confounders(rng)));

  auto declared = causal_order;
  std::shuffle(declared.begin(), declared.end(), rng);
  return CausalGraph(std::move(declared), std::move(directed), std::move(pairs));
}

std::vector<CausalGraph> corpus(std::uint64_t seed, std::size_t count, const GraphShape& shape) {
  std::mt19937_64 rng(seed);
  std::vector<CausalGraph> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_graph(rng, shape));
  return out;
}

bool d_separated(const CausalGraph& g, const VarSet& xs, const VarSet& ys, const VarSet& zs) {
  // Latent-expanded DAG: observed vertices keep their indices, one extra
  // node per bidirected edge.
  const auto n = g.size();
  std::vector<std::vector<std::size_t>> parents = g.parent_indices();
  for (const auto& [a, b] : g.bidirected_edges()) {
    const auto u = parents.size();
    parents.emplace_back();
    parents[g.index(a)].push_back(u);
    parents[g.index(b)].push_back(u);
  }
  const auto total = parents.size();
  std::vector<std::vector<std::size_t>> children(total);
  for (std::size_t v = 0; v < total; ++v) {
    for (auto p : parents[v]) children[p].push_back(v);
  }
  std::vector<bool> in_z(total, false);
  for (const auto& z : zs) in_z[g.index(z)] = true;
  // opens[v]: v or a descendant of v is conditioned on
  std::vector<bool> opens(total, false);
  for (std::size_t v = 0; v < total; ++v) {
    std::vector<std::size_t> stack{v};
    std::vector<bool> seen(total, false);
    while (!stack.empty()) {
      auto w = stack.back();
      stack.pop_back();
      if (seen[w]) continue;
      seen[w] = true;
      if (in_z[w]) opens[v] = true;
      for (auto c : children[w]) stack.push_back(c);
    }
  }
  std::vector<bool> is_target(total, false);
  for (const auto& y : ys) is_target[g.index(y)] = true;

  auto is_parent = [&](std::size_t p, std::size_t c) {
    return std::find(parents[c].begin(), parents[c].end(), p) != parents[c].end();
  };
  std::vector<bool> on_path(total, false);
  std::vector<std::size_t> path;

  std::function<bool(std::size_t)> connected = [&](std::size_t v) -> bool {
    if (path.size() >= 2) {
      // check the node before v, now that both of its edges are known
      const auto prev = path[path.size() - 2];
      const auto mid = path.back();
      const bool collider = is_parent(prev, mid) && is_parent(v, mid);
      if (collider ? !opens[mid] : in_z[mid]) return false;
    }
    if (v < n && is_target[v]) return true;
    path.push_back(v);
    on_path[v] = true;
    std::vector<std::size_t> next = parents[v];
    next.insert(next.end(), children[v].begin(), children[v].end());
    for (auto w : next) {
      if (!on_path[w] && connected(w)) return true;
    }
    on_path[v] = false;
    path.pop_back();
    return false;
  };

  for (const auto& x : xs) {
    path.clear();
    std::fill(on_path.begin(), on_path.end(), false);
    const auto s = g.index(x);
    path.push_back(s);
    on_path[s] = true;
    std::vector<std::size_t> next = parents[s];
    next.insert(next.end(), children[s].begin(), children[s].end());
    for (auto w : next) {
      if (connected(w)) return false;
    }
  }
  return true;
}

std::vector<VarSet> subsets(const VarSet& pool) {
  const std::vector<Variable> items(pool.begin(), pool.end());
  std::vector<VarSet> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
    VarSet s;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (mask & (std::size_t{1} << i)) s.insert(items[i]);
    }
    out.push_back(std::move(s));
  }
  return out;
}

AtomicExpression random_consistent_atomic(std::mt19937_64& rng, const CausalGraph& g,
                                          const TopologicalOrder& order) {
  std::bernoulli_distribution coin(0.5);
  std::bernoulli_distribution mostly(0.75);
  std::vector<Term> terms;
  VarSet chosen;
  for (const auto& v : g.vertices()) {
    if (mostly(rng)) chosen.insert(v);
  }
  if (chosen.size() < 2) return {};
  for (const auto& v : order.descending(chosen)) {
    VarSet c = ancestors(g, v, false);
    for (const auto& u : order.below(v)) {
      if (!c.count(u) && mostly(rng)) c.insert(u);
    }
    terms.emplace_back(v, std::move(c));
  }
  VarSet sum;
  for (const auto& v : chosen) {
    if (coin(rng)) sum.insert(v);
  }
  if (sum.empty()) return {};
  return AtomicExpression(std::move(terms), std::move(sum));
}

VarSet missing_between(const AtomicExpression& a, const TopologicalOrder& order,
                       const Variable& v) {
  const auto present = a.variables();
  std::size_t top = 0;
  for (const auto& t : a.terms()) top = std::max(top, order.rank(t.variable));
  const auto low = order.rank(v);
  VarSet out;
  for (const auto& u : a.mentioned()) {
    const auto r = order.rank(u);
    if (!present.count(u) && r > low && r < top) out.insert(u);
  }
  return out;
}

namespace {

std::vector<ProbabilityTable> joints_for(const CausalGraph& g, std::uint64_t seed, std::size_t models) {
  std::vector<ProbabilityTable> out;
  for (std::size_t i = 0; i < models; ++i) out.push_back(joint_distribution(random_model(g, 2, seed + i), g));
  return out;
}

std::vector<std::string> names(const VarSet& vs) {
  std::vector<std::string> out;
  for (const auto& v : vs) out.push_back(v.name());
  return out;
}

bool factorizes_on(const std::vector<ProbabilityTable>& joints, const VarSet& lhs_vars, const VarSet& d,
                   const std::vector<Term>& factors) {
  for (const auto& joint : joints) {
    const auto lhs = joint.marginal(names(set_union(lhs_vars, d))).divide(joint.marginal(names(d)));
    ProbabilityTable rhs;
    for (const auto& t : factors) rhs = rhs.multiply(conditional(joint, t.variable.name(), t.conditioners));
    if (max_abs_difference(lhs, rhs) > 1e-9) return false;
  }
  return true;
}

}  // namespace

bool factorizes(const CausalGraph& g, const VarSet& lhs_vars, const VarSet& d, const std::vector<Term>& factors,
                std::uint64_t seed, std::size_t models) {
  return factorizes_on(joints_for(g, seed, models), lhs_vars, d, factors);
}

namespace {

struct Range {
  VarSet vars;   // mentioned variables from v up to the highest term
  VarSet below;  // mentioned variables strictly below v
};

Range range_of(const AtomicExpression& a, const TopologicalOrder& order, const Variable& v) {
  const auto low = order.rank(v);
  std::size_t top = 0;
  for (const auto& t : a.terms()) top = std::max(top, order.rank(t.variable));
  Range out;
  for (const auto& u : a.mentioned()) {
    const auto r = order.rank(u);
    if (r >= low && r <= top) out.vars.insert(u);
    if (r < low) out.below.insert(u);
  }
  return out;
}

// Tries every D in `ds` and every E_U for the `open` variables (screened by
// the independence condition) on top of the fixed `base` factors.
bool search_sets(const CausalGraph& g, const Variable& v, const VarSet& lhs_vars, const std::vector<Term>& base,
                 const VarSet& open, const std::vector<VarSet>& ds) {
  const std::vector<Variable> ms(open.begin(), open.end());
  std::vector<std::vector<VarSet>> candidates;
  for (const auto& u : ms) {
    std::vector<VarSet> ok;
    for (const auto& e : subsets(set_difference(g.vertex_set(), {u}))) {
      if (causal::d_separated(g, {u}, {v}, set_difference(e, {v}))) ok.push_back(e);
    }
    if (ok.empty()) return false;
    candidates.push_back(std::move(ok));
  }

  const auto screen = joints_for(g, 11, 1);
  const auto confirm = joints_for(g, 23, 3);
  std::vector<std::size_t> pick(ms.size(), 0);
  for (const auto& d : ds) {
    std::fill(pick.begin(), pick.end(), 0);
    while (true) {
      auto factors = base;
      for (std::size_t i = 0; i < ms.size(); ++i) factors.emplace_back(ms[i], candidates[i][pick[i]]);
      if (factorizes_on(screen, lhs_vars, d, factors) && factorizes_on(confirm, lhs_vars, d, factors)) {
        return true;
      }
      std::size_t k = 0;
      while (k < ms.size() && ++pick[k] == candidates[k].size()) pick[k++] = 0;
      if (k == ms.size()) break;
    }
  }
  return false;
}

}  // namespace

bool has_simplification_sets(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order,
                             const Variable& v) {
  const auto range = range_of(a, order, v);
  std::vector<Term> base;
  for (const auto& t : a.terms()) {
    if (range.vars.count(t.variable)) base.push_back(t);
  }
  return search_sets(g, v, range.vars, base, missing_between(a, order, v), subsets(range.below));
}

bool certificate_holds(const AtomicExpression& before, const JoinState& state, const CausalGraph& g,
                       const TopologicalOrder& order, const Variable& v) {
  const auto range = range_of(before, order, v);
  const auto missing = missing_between(before, order, v);
  const auto joined = state.joined_set();
  const VarSet inserted(state.inserted.begin(), state.inserted.end());

  // D members above v may only be missing variables; they get their own
  // factor like any other missing variable not inserted.
  const auto d = set_intersection(state.conditioning, range.below);
  if (!is_subset(set_difference(state.conditioning, d), missing)) return false;

  std::vector<Term> base;
  for (const auto& t : before.terms()) {
    if (!range.vars.count(t.variable)) continue;
    if (!joined.count(t.variable)) return false;
    base.push_back(t);
  }
  for (std::size_t i = 0; i < state.inserted.size(); ++i) {
    const auto& u = state.inserted[i];
    const auto& e = state.inserted_conditioners[i];
    if (!missing.count(u)) return false;
    if (!causal::d_separated(g, {u}, {v}, set_difference(e, {v}))) return false;
    base.emplace_back(u, e);
  }
  return search_sets(g, v, range.vars, base, set_difference(missing, inserted), {d});
}

VarSet unseparable_missing(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order,
                           const Variable& v) {
  VarSet out;
  for (const auto& u : missing_between(a, order, v)) {
    bool any = false;
    for (const auto& e : subsets(set_difference(g.vertex_set(), {u}))) {
      if (causal::d_separated(g, {u}, {v}, set_difference(e, {v}))) {
        any = true;
        break;
      }
    }
    if (!any) out.insert(u);
  }
  return out;
}

}  // namespace brute
