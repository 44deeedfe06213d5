#include "causal/variable.hpp"

#include <algorithm>
#include <iterator>

#include "causal/errors.hpp"

namespace causal {

Variable::Variable(std::string name) : name_(std::move(name)) {
  if (name_.empty()) throw ArgumentError("variable name must not be empty");
}

std::ostream& operator<<(std::ostream& os, const Variable& v) { return os << v.name(); }

VarSet vars(std::initializer_list<std::string_view> names) {
  VarSet out;
  for (auto n : names) out.emplace(std::string(n));
  return out;
}

bool is_valid_name(std::string_view name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  });
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

VarSet set_intersection(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

VarSet set_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

VarSet symmetric_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::inserter(out, out.end()));
  return out;
}

bool is_subset(const VarSet& sub, const VarSet& super) {
  return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

bool disjoint(const VarSet& a, const VarSet& b) {
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      return false;
    }
  }
  return true;
}

}  // namespace causal
