#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causal/variable.hpp"

namespace causal {

using Edge = std::pair<Variable, Variable>;

struct VariableHash {
  std::size_t operator()(const Variable& v) const noexcept {
    return std::hash<std::string>{}(v.name());
  }
};

/// Semi-Markovian causal graph: a DAG over observed variables plus bidirected
/// edges standing for unobserved common causes. Immutable once built.
///
/// Vertex declaration order is significant: it breaks ties in
/// topological_order and therefore fixes the output of identification.
class CausalGraph {
 public:
  CausalGraph() = default;

  /// Throws StructuralError on self-loops or edges with unknown endpoints,
  /// and on duplicate vertex names. Duplicate edges are merged. Acyclicity is
  /// checked by topological_order, not here.
  CausalGraph(std::vector<Variable> vertices, std::vector<Edge> directed,
              std::vector<Edge> bidirected = {});

  const std::vector<Variable>& vertices() const noexcept { return vertices_; }
  VarSet vertex_set() const { return VarSet(vertices_.begin(), vertices_.end()); }
  std::size_t size() const noexcept { return vertices_.size(); }
  bool contains(const Variable& v) const { return index_.count(v) != 0; }

  /// Directed edges as (parent, child), in declaration order of the child's
  /// parents.
  std::vector<Edge> directed_edges() const;
  /// Bidirected edges, each listed once with the earlier-declared endpoint
  /// first.
  std::vector<Edge> bidirected_edges() const;

  VarSet parents(const Variable& v) const;
  VarSet children(const Variable& v) const;
  VarSet siblings(const Variable& v) const;  // bidirected neighbours

  // Index-based access used by the graph algorithms.
  std::size_t index(const Variable& v) const;
  const std::vector<std::vector<std::size_t>>& parent_indices() const noexcept { return parents_; }
  const std::vector<std::vector<std::size_t>>& child_indices() const noexcept { return children_; }
  const std::vector<std::vector<std::size_t>>& sibling_indices() const noexcept { return siblings_; }

  friend bool operator==(const CausalGraph& a, const CausalGraph& b);

 private:
  std::vector<Variable> vertices_;
  std::unordered_map<Variable, std::size_t, VariableHash> index_;
  std::vector<std::vector<std::size_t>> parents_;
  std::vector<std::vector<std::size_t>> children_;
  std::vector<std::vector<std::size_t>> siblings_;
};

/// A permutation of a set of variables with O(1) rank lookup. Rank 0 is the
/// earliest (lowest) variable.
class TopologicalOrder {
 public:
  TopologicalOrder() = default;
  explicit TopologicalOrder(std::vector<Variable> sequence);

  /// Validates that `sequence` is a permutation of g's vertices respecting
  /// every directed edge.
  static TopologicalOrder checked(const CausalGraph& g, std::vector<Variable> sequence);

  const std::vector<Variable>& sequence() const noexcept { return sequence_; }
  std::size_t size() const noexcept { return sequence_.size(); }
  bool contains(const Variable& v) const { return rank_.count(v) != 0; }
  std::size_t rank(const Variable& v) const;
  bool less(const Variable& a, const Variable& b) const { return rank(a) < rank(b); }

  /// Members of `vs` sorted by ascending rank.
  std::vector<Variable> ascending(const VarSet& vs) const;
  /// Members of `vs` sorted by descending rank (the induced ordering).
  std::vector<Variable> descending(const VarSet& vs) const;
  /// The order restricted to the members of `keep`.
  TopologicalOrder restricted(const VarSet& keep) const;

  /// All variables ranked strictly below `v`.
  VarSet below(const Variable& v) const;

 private:
  std::vector<Variable> sequence_;
  std::unordered_map<Variable, std::size_t, VariableHash> rank_;
};

/// Kahn's algorithm; among ready vertices the earliest declared wins.
/// Throws StructuralError naming a vertex on a cycle.
TopologicalOrder topological_order(const CausalGraph& g);

VarSet ancestors(const CausalGraph& g, const Variable& v, bool inclusive);
/// Union of the ancestors of every member of `vs`.
VarSet ancestors(const CausalGraph& g, const VarSet& vs, bool inclusive);
VarSet descendants(const CausalGraph& g, const Variable& v, bool inclusive);

/// G[keep]: the vertices of `keep` (in the original declaration order) and
/// every edge between them.
CausalGraph induced_subgraph(const CausalGraph& g, const VarSet& keep);

/// Removes directed edges into and bidirected edges at `cut_incoming`
/// vertices, and directed edges out of `cut_outgoing` vertices.
CausalGraph mutilate(const CausalGraph& g, const VarSet& cut_incoming, const VarSet& cut_outgoing);

/// Connected components of the bidirected part, ordered by ascending rank of
/// each component's highest-ranked member under topological_order(g).
std::vector<VarSet> c_components(const CausalGraph& g);

/// (xs _||_ ys | zs) in g, with every bidirected edge read as a latent common
/// parent. Empty xs or ys are trivially separated. Throws ArgumentError on
/// overlapping sets and LookupError on unknown variables.
bool d_separated(const CausalGraph& g, const VarSet& xs, const VarSet& ys, const VarSet& zs);

/// Vertices ranked below every member of `vs`. Throws ArgumentError on an
/// empty set.
VarSet strictly_below(const TopologicalOrder& order, const VarSet& vs);

/// Parses the line-oriented graph format:
///   A -> B      directed edge
///   A <-> B     bidirected edge
///   node A      vertex declaration
///   # comment
/// Vertices are declared in order of first appearance. The graph is checked
/// for cycles.
CausalGraph parse_graph(std::string_view text);
CausalGraph read_graph_file(const std::filesystem::path& path);

/// Inverse of parse_graph, preserving declaration order.
std::string to_text(const CausalGraph& g);

}  // namespace causal
