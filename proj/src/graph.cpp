#include "causal/graph.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>

#include "causal/errors.hpp"

namespace causal {

namespace {

void add_unique(std::vector<std::size_t>& list, std::size_t value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

std::vector<std::size_t> to_indices(const CausalGraph& g, const VarSet& vs) {
  std::vector<std::size_t> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(g.index(v));
  return out;
}

}  // namespace

CausalGraph::CausalGraph(std::vector<Variable> vertices, std::vector<Edge> directed,
                         std::vector<Edge> bidirected)
    : vertices_(std::move(vertices)) {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!index_.emplace(vertices_[i], i).second) {
      throw StructuralError("duplicate vertex '" + vertices_[i].name() + "'");
    }
  }
  parents_.resize(vertices_.size());
  children_.resize(vertices_.size());
  siblings_.resize(vertices_.size());

  auto endpoint = [this](const Variable& v) {
    auto it = index_.find(v);
    if (it == index_.end()) {
      throw StructuralError("edge endpoint '" + v.name() + "' is not a vertex");
    }
    return it->second;
  };

  for (const auto& [from, to] : directed) {
    auto a = endpoint(from);
    auto b = endpoint(to);
    if (a == b) throw StructuralError("self-loop at '" + from.name() + "'");
    add_unique(parents_[b], a);
    add_unique(children_[a], b);
  }
  for (const auto& [x, y] : bidirected) {
    auto a = endpoint(x);
    auto b = endpoint(y);
    if (a == b) throw StructuralError("bidirected self-loop at '" + x.name() + "'");
    add_unique(siblings_[a], b);
    add_unique(siblings_[b], a);
  }
  for (auto& list : parents_) std::sort(list.begin(), list.end());
  for (auto& list : children_) std::sort(list.begin(), list.end());
  for (auto& list : siblings_) std::sort(list.begin(), list.end());
}

std::size_t CausalGraph::index(const Variable& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) throw LookupError("unknown variable '" + v.name() + "'");
  return it->second;
}

std::vector<Edge> CausalGraph::directed_edges() const {
  std::vector<Edge> out;
  for (std::size_t child = 0; child < vertices_.size(); ++child) {
    for (auto parent : parents_[child]) out.emplace_back(vertices_[parent], vertices_[child]);
  }
  return out;
}

std::vector<Edge> CausalGraph::bidirected_edges() const {
  std::vector<Edge> out;
  for (std::size_t a = 0; a < vertices_.size(); ++a) {
    for (auto b : siblings_[a]) {
      if (a < b) out.emplace_back(vertices_[a], vertices_[b]);
    }
  }
  return out;
}

VarSet CausalGraph::parents(const Variable& v) const {
  VarSet out;
  for (auto p : parents_[index(v)]) out.insert(vertices_[p]);
  return out;
}

VarSet CausalGraph::children(const Variable& v) const {
  VarSet out;
  for (auto c : children_[index(v)]) out.insert(vertices_[c]);
  return out;
}

VarSet CausalGraph::siblings(const Variable& v) const {
  VarSet out;
  for (auto s : siblings_[index(v)]) out.insert(vertices_[s]);
  return out;
}

bool operator==(const CausalGraph& a, const CausalGraph& b) {
  return a.vertices_ == b.vertices_ && a.parents_ == b.parents_ && a.siblings_ == b.siblings_;
}

// ---------------------------------------------------------------------------

TopologicalOrder::TopologicalOrder(std::vector<Variable> sequence) : sequence_(std::move(sequence)) {
  for (std::size_t i = 0; i < sequence_.size(); ++i) {
    if (!rank_.emplace(sequence_[i], i).second) {
      throw ArgumentError("variable '" + sequence_[i].name() + "' appears twice in the order");
    }
  }
}

TopologicalOrder TopologicalOrder::checked(const CausalGraph& g, std::vector<Variable> sequence) {
  TopologicalOrder order(std::move(sequence));
  if (order.size() != g.size()) {
    throw ArgumentError("order has " + std::to_string(order.size()) + " variables, graph has " +
                        std::to_string(g.size()));
  }
  for (const auto& v : g.vertices()) {
    if (!order.contains(v)) throw ArgumentError("order is missing vertex '" + v.name() + "'");
  }
  for (const auto& [parent, child] : g.directed_edges()) {
    if (order.rank(parent) > order.rank(child)) {
      throw ArgumentError("order places '" + child.name() + "' before its parent '" +
                          parent.name() + "'");
    }
  }
  return order;
}

std::size_t TopologicalOrder::rank(const Variable& v) const {
  auto it = rank_.find(v);
  if (it == rank_.end()) throw LookupError("variable '" + v.name() + "' is not in the order");
  return it->second;
}

std::vector<Variable> TopologicalOrder::ascending(const VarSet& vs) const {
  std::vector<Variable> out(vs.begin(), vs.end());
  std::sort(out.begin(), out.end(),
            [this](const Variable& a, const Variable& b) { return rank(a) < rank(b); });
  return out;
}

std::vector<Variable> TopologicalOrder::descending(const VarSet& vs) const {
  auto out = ascending(vs);
  std::reverse(out.begin(), out.end());
  return out;
}

TopologicalOrder TopologicalOrder::restricted(const VarSet& keep) const {
  std::vector<Variable> seq;
  for (const auto& v : sequence_) {
    if (keep.count(v)) seq.push_back(v);
  }
  return TopologicalOrder(std::move(seq));
}

VarSet TopologicalOrder::below(const Variable& v) const {
  auto r = rank(v);
  return VarSet(sequence_.begin(), sequence_.begin() + static_cast<std::ptrdiff_t>(r));
}

// ---------------------------------------------------------------------------

TopologicalOrder topological_order(const CausalGraph& g) {
  const auto n = g.size();
  std::vector<std::size_t> indegree(n);
  for (std::size_t v = 0; v < n; ++v) indegree[v] = g.parent_indices()[v].size();

  // Min-heap on declaration index gives the stable tie-breaking.
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<Variable> seq;
  seq.reserve(n);
  while (!ready.empty()) {
    auto v = ready.top();
    ready.pop();
    seq.push_back(g.vertices()[v]);
    for (auto c : g.child_indices()[v]) {
      if (--indegree[c] == 0) ready.push(c);
    }
  }
  if (seq.size() != n) {
    // Any vertex left with positive indegree that still has a remaining parent
    // chain lies on or below a cycle; walk parents until one repeats.
    std::size_t start = 0;
    while (indegree[start] == 0) ++start;
    std::vector<bool> seen(n, false);
    auto v = start;
    while (!seen[v]) {
      seen[v] = true;
      for (auto p : g.parent_indices()[v]) {
        if (indegree[p] > 0) {
          v = p;
          break;
        }
      }
    }
    throw StructuralError("directed cycle through '" + g.vertices()[v].name() + "'");
  }
  return TopologicalOrder(std::move(seq));
}

VarSet ancestors(const CausalGraph& g, const VarSet& vs, bool inclusive) {
  std::vector<bool> mark(g.size(), false);
  std::vector<std::size_t> stack;
  for (const auto& v : vs) {
    auto i = g.index(v);
    for (auto p : g.parent_indices()[i]) stack.push_back(p);
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (mark[v]) continue;
    mark[v] = true;
    for (auto p : g.parent_indices()[v]) {
      if (!mark[p]) stack.push_back(p);
    }
  }
  VarSet out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mark[i]) out.insert(g.vertices()[i]);
  }
  if (inclusive) out.insert(vs.begin(), vs.end());
  return out;
}

VarSet ancestors(const CausalGraph& g, const Variable& v, bool inclusive) {
  return ancestors(g, VarSet{v}, inclusive);
}

VarSet descendants(const CausalGraph& g, const Variable& v, bool inclusive) {
  std::vector<bool> mark(g.size(), false);
  std::vector<std::size_t> stack(g.child_indices()[g.index(v)]);
  while (!stack.empty()) {
    auto u = stack.back();
    stack.pop_back();
    if (mark[u]) continue;
    mark[u] = true;
    for (auto c : g.child_indices()[u]) stack.push_back(c);
  }
  VarSet out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (mark[i]) out.insert(g.vertices()[i]);
  }
  if (inclusive) out.insert(v);
  return out;
}

CausalGraph induced_subgraph(const CausalGraph& g, const VarSet& keep) {
  for (const auto& v : keep) g.index(v);
  std::vector<Variable> vs;
  for (const auto& v : g.vertices()) {
    if (keep.count(v)) vs.push_back(v);
  }
  std::vector<Edge> directed;
  for (auto& e : g.directed_edges()) {
    if (keep.count(e.first) && keep.count(e.second)) directed.push_back(e);
  }
  std::vector<Edge> bidirected;
  for (auto& e : g.bidirected_edges()) {
    if (keep.count(e.first) && keep.count(e.second)) bidirected.push_back(e);
  }
  return CausalGraph(std::move(vs), std::move(directed), std::move(bidirected));
}

CausalGraph mutilate(const CausalGraph& g, const VarSet& cut_incoming, const VarSet& cut_outgoing) {
  for (const auto& v : cut_incoming) g.index(v);
  for (const auto& v : cut_outgoing) g.index(v);
  std::vector<Edge> directed;
  for (auto& e : g.directed_edges()) {
    if (cut_incoming.count(e.second) || cut_outgoing.count(e.first)) continue;
    directed.push_back(e);
  }
  std::vector<Edge> bidirected;
  for (auto& e : g.bidirected_edges()) {
    if (cut_incoming.count(e.first) || cut_incoming.count(e.second)) continue;
    bidirected.push_back(e);
  }
  return CausalGraph(g.vertices(), std::move(directed), std::move(bidirected));
}

std::vector<VarSet> c_components(const CausalGraph& g) {
  const auto n = g.size();
  std::vector<int> component(n, -1);
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t s = 0; s < n; ++s) {
    if (component[s] >= 0) continue;
    const int id = static_cast<int>(members.size());
    members.emplace_back();
    std::vector<std::size_t> stack{s};
    component[s] = id;
    while (!stack.empty()) {
      auto v = stack.back();
      stack.pop_back();
      members[id].push_back(v);
      for (auto w : g.sibling_indices()[v]) {
        if (component[w] < 0) {
          component[w] = id;
          stack.push_back(w);
        }
      }
    }
  }

  const auto order = topological_order(g);
  std::vector<std::pair<std::size_t, VarSet>> keyed;
  for (auto& list : members) {
    VarSet set;
    std::size_t top = 0;
    for (auto v : list) {
      set.insert(g.vertices()[v]);
      top = std::max(top, order.rank(g.vertices()[v]));
    }
    keyed.emplace_back(top, std::move(set));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<VarSet> out;
  out.reserve(keyed.size());
  for (auto& [key, set] : keyed) out.push_back(std::move(set));
  return out;
}

bool d_separated(const CausalGraph& g, const VarSet& xs, const VarSet& ys, const VarSet& zs) {
  if (!disjoint(xs, ys) || !disjoint(xs, zs) || !disjoint(ys, zs)) {
    throw ArgumentError("d-separation sets must be pairwise disjoint");
  }
  const auto xi = to_indices(g, xs);
  const auto yi = to_indices(g, ys);
  const auto zi = to_indices(g, zs);
  if (xi.empty() || yi.empty()) return true;

  // Latent expansion: one extra vertex per bidirected edge, parent of both ends.
  const auto n = g.size();
  std::vector<std::vector<std::size_t>> parents = g.parent_indices();
  for (std::size_t a = 0; a < n; ++a) {
    for (auto b : g.sibling_indices()[a]) {
      if (a < b) {
        const auto latent = parents.size();
        parents.emplace_back();
        parents[a].push_back(latent);
        parents[b].push_back(latent);
      }
    }
  }
  const auto total = parents.size();

  // Ancestral closure of xs, ys, zs.
  std::vector<bool> in_anc(total, false);
  std::vector<std::size_t> stack;
  for (auto v : xi) stack.push_back(v);
  for (auto v : yi) stack.push_back(v);
  for (auto v : zi) stack.push_back(v);
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (in_anc[v]) continue;
    in_anc[v] = true;
    for (auto p : parents[v]) stack.push_back(p);
  }

  // Moral graph of the ancestral subgraph.
  std::vector<std::vector<std::size_t>> adj(total);
  for (std::size_t v = 0; v < total; ++v) {
    if (!in_anc[v]) continue;
    const auto& ps = parents[v];
    for (std::size_t i = 0; i < ps.size(); ++i) {
      adj[v].push_back(ps[i]);
      adj[ps[i]].push_back(v);
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        adj[ps[i]].push_back(ps[j]);
        adj[ps[j]].push_back(ps[i]);
      }
    }
  }

  std::vector<bool> blocked(total, false);
  for (auto v : zi) blocked[v] = true;
  std::vector<bool> target(total, false);
  for (auto v : yi) target[v] = true;
  std::vector<bool> seen(total, false);
  for (auto v : xi) {
    seen[v] = true;
    stack.push_back(v);
  }
  while (!stack.empty()) {
    auto v = stack.back();
    stack.pop_back();
    if (target[v]) return false;
    for (auto w : adj[v]) {
      if (!seen[w] && !blocked[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return true;
}

VarSet strictly_below(const TopologicalOrder& order, const VarSet& vs) {
  if (vs.empty()) throw ArgumentError("strictly_below is undefined for an empty set");
  std::size_t lowest = order.size();
  for (const auto& v : vs) lowest = std::min(lowest, order.rank(v));
  return VarSet(order.sequence().begin(),
                order.sequence().begin() + static_cast<std::ptrdiff_t>(lowest));
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

CausalGraph parse_graph(std::string_view text) {
  std::vector<Variable> vertices;
  VarSet declared;
  std::vector<Edge> directed;
  std::vector<Edge> bidirected;

  auto declare = [&](std::string_view name, std::size_t line, std::size_t column) {
    if (!is_valid_name(name)) {
      throw ParseError("invalid vertex name '" + std::string(name) + "'", line, column);
    }
    Variable v{std::string(name)};
    if (declared.insert(v).second) vertices.push_back(v);
    return v;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    ++line_no;
    pos = eol + 1;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    auto line = trim(raw);
    if (line.empty()) continue;
    const auto column_of = [&](std::string_view part) {
      return static_cast<std::size_t>(part.data() - raw.data()) + 1;
    };

    if (line.substr(0, 5) == "node " || line.substr(0, 5) == "node\t") {
      auto name = trim(line.substr(5));
      declare(name, line_no, column_of(name));
      continue;
    }
    std::string_view op;
    auto at = line.find("<->");
    if (at != std::string_view::npos) {
      op = "<->";
    } else if ((at = line.find("->")) != std::string_view::npos) {
      op = "->";
    } else {
      throw ParseError("expected 'A -> B', 'A <-> B' or 'node A'", line_no, column_of(line));
    }
    auto lhs = trim(line.substr(0, at));
    auto rhs = trim(line.substr(at + op.size()));
    if (lhs.empty()) throw ParseError("missing edge source", line_no, column_of(line));
    if (rhs.empty()) throw ParseError("missing edge target", line_no, column_of(line) + at);
    auto a = declare(lhs, line_no, column_of(lhs));
    auto b = declare(rhs, line_no, column_of(rhs));
    if (a == b) throw ParseError("self-loop at '" + a.name() + "'", line_no, column_of(lhs));
    (op == "->" ? directed : bidirected).emplace_back(a, b);
    if (eol == text.size()) break;
  }
  CausalGraph g(std::move(vertices), std::move(directed), std::move(bidirected));
  topological_order(g);
  return g;
}

CausalGraph read_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read graph file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::string to_text(const CausalGraph& g) {
  std::ostringstream out;
  for (const auto& v : g.vertices()) out << "node " << v.name() << '\n';
  for (const auto& [a, b] : g.directed_edges()) out << a.name() << " -> " << b.name() << '\n';
  for (const auto& [a, b] : g.bidirected_edges()) out << a.name() << " <-> " << b.name() << '\n';
  return out.str();
}

}  // namespace causal
