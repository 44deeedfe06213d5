#include "causal/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>

#include "causal/errors.hpp"

namespace causal {

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& cards) {
  std::vector<std::size_t> out(cards.size(), 1);
  for (std::size_t i = cards.size(); i-- > 1;) out[i - 1] = out[i] * cards[i];
  return out;
}

std::size_t volume(const std::vector<std::size_t>& cards) {
  return std::accumulate(cards.begin(), cards.end(), std::size_t{1}, std::multiplies<>());
}

/// Stride of each target axis inside `table`, 0 where the table lacks it.
std::vector<std::size_t> projected(const ProbabilityTable& table, const std::vector<std::string>& target,
                                   const std::vector<std::size_t>& table_strides) {
  std::vector<std::size_t> out(target.size(), 0);
  const auto& axes = table.axes();
  for (std::size_t i = 0; i < target.size(); ++i) {
    auto it = std::find(axes.begin(), axes.end(), target[i]);
    if (it != axes.end()) out[i] = table_strides[static_cast<std::size_t>(it - axes.begin())];
  }
  return out;
}

template <typename F>
void for_each_cell(const std::vector<std::size_t>& cards, F&& f) {
  std::vector<std::size_t> counter(cards.size(), 0);
  const auto n = volume(cards);
  for (std::size_t flat = 0; flat < n; ++flat) {
    f(flat, counter);
    for (std::size_t k = cards.size(); k-- > 0;) {
      if (++counter[k] < cards[k]) break;
      counter[k] = 0;
    }
  }
}

std::size_t offset(const std::vector<std::size_t>& counter, const std::vector<std::size_t>& strides) {
  std::size_t out = 0;
  for (std::size_t k = 0; k < counter.size(); ++k) out += counter[k] * strides[k];
  return out;
}

}  // namespace

ProbabilityTable::ProbabilityTable(std::vector<std::string> axes, std::vector<std::size_t> cardinalities,
                                   std::vector<double> values)
    : axes_(std::move(axes)), cards_(std::move(cardinalities)), values_(std::move(values)) {
  if (axes_.size() != cards_.size()) throw ArgumentError("axes and cardinalities differ in length");
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (cards_[i] == 0) throw ArgumentError("axis '" + axes_[i] + "' has cardinality 0");
    for (std::size_t j = 0; j < i; ++j) {
      if (axes_[i] == axes_[j]) throw ArgumentError("axis '" + axes_[i] + "' appears twice");
    }
  }
  if (values_.size() != volume(cards_)) throw ArgumentError("table has the wrong number of values");
  for (double v : values_) {
    if (!(v >= 0.0)) throw ArgumentError("table entries must be non-negative");
  }
}

ProbabilityTable ProbabilityTable::scalar(double value) { return ProbabilityTable({}, {}, {value}); }

ProbabilityTable ProbabilityTable::constant(std::vector<std::string> axes, std::vector<std::size_t> cardinalities,
                                            double fill) {
  const auto n = volume(cardinalities);
  return ProbabilityTable(std::move(axes), std::move(cardinalities), std::vector<double>(n, fill));
}

std::vector<std::size_t> ProbabilityTable::strides() const { return strides_of(cards_); }

bool ProbabilityTable::has_axis(const std::string& name) const {
  return std::find(axes_.begin(), axes_.end(), name) != axes_.end();
}

std::size_t ProbabilityTable::cardinality(const std::string& name) const {
  auto it = std::find(axes_.begin(), axes_.end(), name);
  if (it == axes_.end()) throw LookupError("table has no axis '" + name + "'");
  return cards_[static_cast<std::size_t>(it - axes_.begin())];
}

double ProbabilityTable::at(const std::map<std::string, std::size_t>& assignment) const {
  const auto st = strides();
  std::size_t flat = 0;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    auto it = assignment.find(axes_[i]);
    if (it == assignment.end()) throw ArgumentError("no value for axis '" + axes_[i] + "'");
    if (it->second >= cards_[i]) throw ArgumentError("value out of range for axis '" + axes_[i] + "'");
    flat += it->second * st[i];
  }
  return values_[flat];
}

ProbabilityTable ProbabilityTable::multiply(const ProbabilityTable& other) const {
  auto axes = axes_;
  auto cards = cards_;
  for (std::size_t i = 0; i < other.axes_.size(); ++i) {
    if (!has_axis(other.axes_[i])) {
      axes.push_back(other.axes_[i]);
      cards.push_back(other.cards_[i]);
    } else if (cardinality(other.axes_[i]) != other.cards_[i]) {
      throw ArgumentError("axis '" + other.axes_[i] + "' has mismatched cardinality");
    }
  }
  const auto sa = projected(*this, axes, strides());
  const auto sb = projected(other, axes, other.strides());
  std::vector<double> values(volume(cards));
  for_each_cell(cards, [&](std::size_t flat, const std::vector<std::size_t>& c) {
    values[flat] = values_[offset(c, sa)] * other.values_[offset(c, sb)];
  });
  return ProbabilityTable(std::move(axes), std::move(cards), std::move(values));
}

ProbabilityTable ProbabilityTable::divide(const ProbabilityTable& other) const {
  auto axes = axes_;
  auto cards = cards_;
  for (std::size_t i = 0; i < other.axes_.size(); ++i) {
    if (!has_axis(other.axes_[i])) {
      axes.push_back(other.axes_[i]);
      cards.push_back(other.cards_[i]);
    }
  }
  const auto sa = projected(*this, axes, strides());
  const auto sb = projected(other, axes, other.strides());
  std::vector<double> values(volume(cards));
  for_each_cell(cards, [&](std::size_t flat, const std::vector<std::size_t>& c) {
    const auto ib = offset(c, sb);
    if (other.values_[ib] == 0.0) {
      throw EvaluationError("division by zero at cell " + other.describe(ib));
    }
    values[flat] = values_[offset(c, sa)] / other.values_[ib];
  });
  return ProbabilityTable(std::move(axes), std::move(cards), std::move(values));
}

ProbabilityTable ProbabilityTable::marginal(const std::vector<std::string>& keep) const {
  std::vector<std::string> axes;
  std::vector<std::size_t> cards;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (std::find(keep.begin(), keep.end(), axes_[i]) != keep.end()) {
      axes.push_back(axes_[i]);
      cards.push_back(cards_[i]);
    }
  }
  if (axes.size() == axes_.size()) return *this;
  ProbabilityTable out = constant(axes, cards, 0.0);
  const auto target = strides_of(cards);
  std::vector<std::size_t> into(axes_.size(), 0);
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    auto it = std::find(axes.begin(), axes.end(), axes_[i]);
    if (it != axes.end()) into[i] = target[static_cast<std::size_t>(it - axes.begin())];
  }
  for_each_cell(cards_, [&](std::size_t flat, const std::vector<std::size_t>& c) {
    out.values_[offset(c, into)] += values_[flat];
  });
  return out;
}

ProbabilityTable ProbabilityTable::sum_out(const std::vector<std::string>& names) const {
  std::vector<std::string> keep;
  for (const auto& a : axes_) {
    if (std::find(names.begin(), names.end(), a) == names.end()) keep.push_back(a);
  }
  return marginal(keep);
}

ProbabilityTable ProbabilityTable::restrict(const std::string& name, std::size_t value) const {
  auto it = std::find(axes_.begin(), axes_.end(), name);
  if (it == axes_.end()) return *this;
  const auto pos = static_cast<std::size_t>(it - axes_.begin());
  if (value >= cards_[pos]) throw ArgumentError("value out of range for axis '" + name + "'");
  auto axes = axes_;
  auto cards = cards_;
  axes.erase(axes.begin() + static_cast<std::ptrdiff_t>(pos));
  cards.erase(cards.begin() + static_cast<std::ptrdiff_t>(pos));
  const auto st = strides();
  std::vector<std::size_t> from;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (i != pos) from.push_back(st[i]);
  }
  std::vector<double> values(volume(cards));
  for_each_cell(cards, [&](std::size_t flat, const std::vector<std::size_t>& c) {
    values[flat] = values_[offset(c, from) + value * st[pos]];
  });
  return ProbabilityTable(std::move(axes), std::move(cards), std::move(values));
}

ProbabilityTable ProbabilityTable::aligned(const std::vector<std::string>& axes,
                                           const std::vector<std::size_t>& cardinalities) const {
  for (const auto& a : axes_) {
    if (std::find(axes.begin(), axes.end(), a) == axes.end()) {
      throw ArgumentError("alignment target lacks axis '" + a + "'");
    }
  }
  const auto src = projected(*this, axes, strides());
  std::vector<double> values(volume(cardinalities));
  for_each_cell(cardinalities, [&](std::size_t flat, const std::vector<std::size_t>& c) {
    values[flat] = values_[offset(c, src)];
  });
  return ProbabilityTable(axes, cardinalities, std::move(values));
}

double ProbabilityTable::total() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }
double ProbabilityTable::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ProbabilityTable::max() const { return *std::max_element(values_.begin(), values_.end()); }

std::string ProbabilityTable::describe(std::size_t flat_index) const {
  if (axes_.empty()) return "(scalar)";
  const auto st = strides();
  std::string out;
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (i) out += ",";
    out += axes_[i] + "=" + std::to_string((flat_index / st[i]) % cards_[i]);
  }
  return out;
}

double max_abs_difference(const ProbabilityTable& a, const ProbabilityTable& b) {
  auto axes = a.axes();
  auto cards = a.cardinalities();
  for (std::size_t i = 0; i < b.axes().size(); ++i) {
    if (!a.has_axis(b.axes()[i])) {
      axes.push_back(b.axes()[i]);
      cards.push_back(b.cardinalities()[i]);
    }
  }
  const auto x = a.aligned(axes, cards);
  const auto y = b.aligned(axes, cards);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(x.values()[i] - y.values()[i]));
  return worst;
}

// ---------------------------------------------------------------------------

std::string latent_name(const Variable& a, const Variable& b) { return "U[" + a.name() + "," + b.name() + "]"; }

const ConditionalTable& DiscreteModel::table_for(const std::string& variable) const {
  for (const auto& t : tables) {
    if (t.variable == variable) return t;
  }
  throw LookupError("model has no table for '" + variable + "'");
}

namespace {

std::vector<std::string> model_parents(const CausalGraph& g, const Variable& v) {
  std::vector<std::string> out;
  for (auto p : g.parent_indices()[g.index(v)]) out.push_back(g.vertices()[p].name());
  for (const auto& [a, b] : g.bidirected_edges()) {
    if (a == v || b == v) out.push_back(latent_name(a, b));
  }
  return out;
}

ProbabilityTable random_cpt(const std::string& variable, const std::vector<std::string>& parents,
                            const std::map<std::string, std::size_t>& card, std::mt19937_64& rng) {
  std::vector<std::string> axes = parents;
  axes.push_back(variable);
  std::vector<std::size_t> cards;
  for (const auto& a : axes) cards.push_back(card.at(a));
  const auto k = cards.back();
  const auto rows = volume(cards) / k;
  std::exponential_distribution<double> draw(1.0);
  std::vector<double> values;
  values.reserve(rows * k);
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<double> row(k);
    for (auto& x : row) x = draw(rng);
    double sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& x : row) x = std::max(x / sum, 1e-3);
    sum = std::accumulate(row.begin(), row.end(), 0.0);
    for (auto& x : row) values.push_back(x / sum);
  }
  return ProbabilityTable(std::move(axes), std::move(cards), std::move(values));
}

}  // namespace

DiscreteModel random_model(const CausalGraph& g, std::size_t cardinality, std::uint64_t seed) {
  if (cardinality < 2) throw ArgumentError("cardinality must be at least 2");
  std::mt19937_64 rng(seed);
  DiscreteModel m;
  for (const auto& v : g.vertices()) m.cardinality[v.name()] = cardinality;
  for (const auto& [a, b] : g.bidirected_edges()) {
    auto name = latent_name(a, b);
    m.latents.push_back(name);
    m.cardinality[name] = cardinality;
  }
  for (const auto& u : m.latents) m.tables.push_back({u, {}, random_cpt(u, {}, m.cardinality, rng)});
  const auto order = topological_order(g);
  for (const auto& v : order.sequence()) {
    auto parents = model_parents(g, v);
    auto table = random_cpt(v.name(), parents, m.cardinality, rng);
    m.tables.push_back({v.name(), std::move(parents), std::move(table)});
  }
  return m;
}

namespace {

void check_model(const DiscreteModel& m, const CausalGraph& g) {
  for (const auto& v : g.vertices()) {
    const auto& t = m.table_for(v.name());
    if (t.parents != model_parents(g, v)) {
      throw StructuralError("model table for '" + v.name() + "' does not match the graph's parents");
    }
  }
  if (m.tables.size() != g.size() + m.latents.size()) {
    throw StructuralError("model has tables for variables outside the graph");
  }
}

std::vector<std::string> names_in_graph_order(const CausalGraph& g, const VarSet& vs) {
  std::vector<std::string> out;
  for (const auto& v : g.vertices()) {
    if (vs.count(v)) out.push_back(v.name());
  }
  return out;
}

}  // namespace

ProbabilityTable joint_distribution(const DiscreteModel& m, const CausalGraph& g) {
  check_model(m, g);
  ProbabilityTable joint;
  for (const auto& t : m.tables) joint = joint.multiply(t.table);
  joint = joint.sum_out(m.latents);
  std::vector<std::string> axes;
  std::vector<std::size_t> cards;
  for (const auto& v : g.vertices()) {
    axes.push_back(v.name());
    cards.push_back(m.cardinality.at(v.name()));
  }
  return joint.aligned(axes, cards);
}

ProbabilityTable conditional(const ProbabilityTable& joint, const std::string& v, const VarSet& c) {
  std::vector<std::string> cond;
  for (const auto& x : c) cond.push_back(x.name());
  for (const auto& name : cond) {
    if (!joint.has_axis(name)) throw EvaluationError("joint has no variable '" + name + "'");
  }
  if (!joint.has_axis(v)) throw EvaluationError("joint has no variable '" + v + "'");
  auto both = cond;
  both.push_back(v);
  return joint.marginal(both).divide(joint.marginal(cond));
}

ProbabilityTable eval_atomic(const AtomicExpression& a, const ProbabilityTable& joint) {
  ProbabilityTable out;
  for (const auto& t : a.terms()) out = out.multiply(conditional(joint, t.variable.name(), t.conditioners));
  std::vector<std::string> sums;
  for (const auto& s : a.sum_set()) sums.push_back(s.name());
  return out.sum_out(sums);
}

ProbabilityTable eval_expression(const Expression& b, const ProbabilityTable& joint) {
  ProbabilityTable out;
  for (const auto& c : b.children) out = out.multiply(eval_expression(c, joint));
  for (const auto& f : b.fractions) out = out.multiply(eval_expression(f, joint));
  for (const auto& a : b.atomics) out = out.multiply(eval_atomic(a, joint));
  for (const auto& s : b.sum_set) {
    if (out.has_axis(s.name())) {
      out = out.sum_out({s.name()});
    } else if (joint.has_axis(s.name())) {
      out = out.multiply(ProbabilityTable::scalar(static_cast<double>(joint.cardinality(s.name()))));
    } else {
      throw EvaluationError("joint has no variable '" + s.name() + "'");
    }
  }
  return out;
}

ProbabilityTable eval_expression(const QuotientExpression& q, const ProbabilityTable& joint) {
  return eval_expression(q.numerator, joint).divide(eval_expression(q.denominator, joint));
}

ProbabilityTable interventional_truth(const DiscreteModel& m, const CausalGraph& g,
                                      const std::map<Variable, std::size_t>& x_assignment, const VarSet& y) {
  check_model(m, g);
  for (const auto& v : y) g.index(v);
  ProbabilityTable product;
  for (const auto& t : m.tables) {
    Variable self_check = Variable(t.variable);
    if (x_assignment.count(self_check)) continue;
    auto table = t.table;
    for (const auto& [x, value] : x_assignment) table = table.restrict(x.name(), value);
    product = product.multiply(table);
  }
  const auto keep = names_in_graph_order(g, y);
  std::vector<std::size_t> cards;
  for (const auto& name : keep) cards.push_back(m.cardinality.at(name));
  return product.marginal(keep).aligned(keep, cards);
}

ProbabilityTable interventional_truth(const DiscreteModel& m, const CausalGraph& g, const VarSet& x,
                                      const VarSet& y) {
  check_model(m, g);
  for (const auto& v : x) g.index(v);
  for (const auto& v : y) g.index(v);
  ProbabilityTable product;
  for (const auto& t : m.tables) {
    if (x.count(Variable(t.variable))) continue;
    product = product.multiply(t.table);
  }
  const auto keep = names_in_graph_order(g, set_union(y, x));
  std::vector<std::size_t> cards;
  for (const auto& name : keep) cards.push_back(m.cardinality.at(name));
  return product.marginal(keep).aligned(keep, cards);
}

// ---------------------------------------------------------------------------

bool EquivalenceReport::passed() const {
  return std::all_of(trials.begin(), trials.end(),
                     [this](const TrialResult& t) { return t.max_deviation <= tolerance; });
}

double EquivalenceReport::worst() const {
  double w = 0.0;
  for (const auto& t : trials) w = std::max(w, t.max_deviation);
  return w;
}

std::string EquivalenceReport::to_text() const {
  std::ostringstream out;
  for (const auto& t : trials) {
    out << "trial seed=" << t.seed << " max_deviation=" << std::scientific << std::setprecision(3)
        << t.max_deviation << (t.max_deviation <= tolerance ? " ok" : " FAIL") << '\n';
    out << std::defaultfloat;
  }
  return out.str();
}

namespace {

/// Free variables once every summed term that nothing else mentions has
/// been dropped; such a term sums to one.
VarSet live_free_variables(const AtomicExpression& a) {
  std::vector<Term> terms = a.terms();
  VarSet sum = a.sum_set();
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
      if (!sum.count(it->variable)) continue;
      const bool elsewhere = std::any_of(terms.begin(), terms.end(), [&](const Term& t) {
        return t.conditioners.count(it->variable) != 0;
      });
      if (elsewhere) continue;
      sum.erase(it->variable);
      terms.erase(it);
      changed = true;
      break;
    }
  }
  VarSet out;
  for (const auto& t : terms) {
    if (!sum.count(t.variable)) out.insert(t.variable);
    for (const auto& c : t.conditioners) {
      if (!sum.count(c)) out.insert(c);
    }
  }
  return out;
}

VarSet live_free_variables(const Expression& e);

VarSet live_free_variables(const QuotientExpression& q) {
  return set_union(live_free_variables(q.numerator), live_free_variables(q.denominator));
}

VarSet live_free_variables(const Expression& e) {
  VarSet out;
  for (const auto& c : e.children) out = set_union(out, live_free_variables(c));
  for (const auto& f : e.fractions) out = set_union(out, live_free_variables(f));
  for (const auto& a : e.atomics) out = set_union(out, live_free_variables(a));
  return set_difference(out, e.sum_set);
}

}  // namespace

EquivalenceReport assert_equivalent(const QuotientExpression& e1, const QuotientExpression& e2,
                                    const CausalGraph& g, const OracleOptions& options) {
  const auto f1 = live_free_variables(e1);
  const auto f2 = live_free_variables(e2);
  if (f1 != f2) {
    auto diff = symmetric_difference(f1, f2);
    throw ArgumentError("expressions have different free variables (e.g. '" + diff.begin()->name() + "')");
  }
  EquivalenceReport report;
  report.tolerance = options.tolerance;
  for (std::size_t t = 0; t < options.trials; ++t) {
    const auto seed = options.seed + t;
    const auto model = random_model(g, options.cardinality, seed);
    const auto joint = joint_distribution(model, g);
    const auto d = max_abs_difference(eval_expression(e1, joint), eval_expression(e2, joint));
    report.trials.push_back({seed, d});
  }
  std::sort(report.trials.begin(), report.trials.end(),
            [](const TrialResult& a, const TrialResult& b) { return a.seed < b.seed; });
  return report;
}

EquivalenceReport assert_equivalent(const Expression& e1, const Expression& e2, const CausalGraph& g,
                                    const OracleOptions& options) {
  return assert_equivalent(QuotientExpression(e1, Expression{}), QuotientExpression(e2, Expression{}), g,
                           options);
}

}  // namespace causal
