#pragma once

#include <compare>
#include <initializer_list>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace causal {

/// Name of an observed random variable. Equality and ordering are by name;
/// ordering by topological rank is provided by TopologicalOrder.
class Variable {
 public:
  Variable() = default;
  explicit Variable(std::string name);

  const std::string& name() const noexcept { return name_; }

  friend auto operator<=>(const Variable&, const Variable&) = default;
  friend bool operator==(const Variable&, const Variable&) = default;

 private:
  std::string name_;
};

std::ostream& operator<<(std::ostream& os, const Variable& v);

using VarSet = std::set<Variable>;

/// Builds a set from plain names: vars({"X", "Z2"}).
VarSet vars(std::initializer_list<std::string_view> names);

/// True for names made of ASCII alphanumerics and underscores.
bool is_valid_name(std::string_view name);

VarSet set_union(const VarSet& a, const VarSet& b);
VarSet set_intersection(const VarSet& a, const VarSet& b);
VarSet set_difference(const VarSet& a, const VarSet& b);
VarSet symmetric_difference(const VarSet& a, const VarSet& b);
bool is_subset(const VarSet& sub, const VarSet& super);
bool disjoint(const VarSet& a, const VarSet& b);

namespace literals {
inline Variable operator""_v(const char* s, std::size_t n) { return Variable(std::string(s, n)); }
}  // namespace literals

}  // namespace causal
