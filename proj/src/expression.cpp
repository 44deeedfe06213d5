#include "causal/expression.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "causal/errors.hpp"

namespace causal {

Term::Term(Variable v, VarSet c) : variable(std::move(v)), conditioners(std::move(c)) {
  if (conditioners.count(variable)) {
    throw ArgumentError("term P(" + variable.name() + "|...) conditions on its own variable");
  }
}

AtomicExpression::AtomicExpression(std::vector<Term> terms, VarSet sum_set)
    : terms_(std::move(terms)), sum_set_(std::move(sum_set)) {
  VarSet seen;
  for (const auto& t : terms_) {
    if (t.conditioners.count(t.variable)) {
      throw ArgumentError("term P(" + t.variable.name() + "|...) conditions on its own variable");
    }
    if (!seen.insert(t.variable).second) {
      throw ArgumentError("two terms for variable '" + t.variable.name() + "'");
    }
  }
  for (const auto& s : sum_set_) {
    if (!seen.count(s)) {
      throw ArgumentError("summation variable '" + s.name() + "' has no term");
    }
  }
}

VarSet AtomicExpression::variables() const {
  VarSet out;
  for (const auto& t : terms_) out.insert(t.variable);
  return out;
}

VarSet AtomicExpression::mentioned() const {
  VarSet out;
  for (const auto& t : terms_) {
    out.insert(t.variable);
    out.insert(t.conditioners.begin(), t.conditioners.end());
  }
  return out;
}

VarSet AtomicExpression::free_variables() const { return set_difference(mentioned(), sum_set_); }

const Term* AtomicExpression::term_for(const Variable& v) const {
  for (const auto& t : terms_) {
    if (t.variable == v) return &t;
  }
  return nullptr;
}

AtomicExpression AtomicExpression::ordered(const TopologicalOrder& order) const {
  auto terms = terms_;
  std::stable_sort(terms.begin(), terms.end(), [&](const Term& a, const Term& b) {
    return order.rank(a.variable) > order.rank(b.variable);
  });
  AtomicExpression out;
  out.terms_ = std::move(terms);
  out.sum_set_ = sum_set_;
  return out;
}

// ---------------------------------------------------------------------------

Expression::Expression(std::vector<Expression> children_, std::vector<AtomicExpression> atomics_,
                       VarSet sum_set_)
    : children(std::move(children_)), atomics(std::move(atomics_)), sum_set(std::move(sum_set_)) {}

Expression::Expression(AtomicExpression atomic) { atomics.push_back(std::move(atomic)); }

bool Expression::empty() const noexcept {
  return children.empty() && fractions.empty() && atomics.empty();
}

VarSet Expression::mentioned() const {
  VarSet out = sum_set;
  for (const auto& c : children) {
    auto m = c.mentioned();
    out.insert(m.begin(), m.end());
  }
  for (const auto& f : fractions) {
    auto a = f.numerator.mentioned();
    auto b = f.denominator.mentioned();
    out.insert(a.begin(), a.end());
    out.insert(b.begin(), b.end());
  }
  for (const auto& a : atomics) {
    auto m = a.mentioned();
    out.insert(m.begin(), m.end());
  }
  return out;
}

VarSet Expression::free_variables() const {
  VarSet out;
  for (const auto& c : children) {
    auto m = c.free_variables();
    out.insert(m.begin(), m.end());
  }
  for (const auto& f : fractions) {
    auto m = f.free_variables();
    out.insert(m.begin(), m.end());
  }
  for (const auto& a : atomics) {
    auto m = a.free_variables();
    out.insert(m.begin(), m.end());
  }
  return set_difference(out, sum_set);
}

bool operator==(const Expression& a, const Expression& b) {
  return a.children == b.children && a.fractions == b.fractions && a.atomics == b.atomics &&
         a.sum_set == b.sum_set;
}

VarSet QuotientExpression::free_variables() const {
  return set_union(numerator.free_variables(), denominator.free_variables());
}

// ---------------------------------------------------------------------------

bool is_pi_consistent(const AtomicExpression& a, const CausalGraph& g, const TopologicalOrder& order) {
  for (const auto& t : a.terms()) {
    g.index(t.variable);
    for (const auto& c : t.conditioners) g.index(c);
    if (!is_subset(ancestors(g, t.variable, false), t.conditioners)) return false;
    const auto rank = order.rank(t.variable);
    for (const auto& c : t.conditioners) {
      if (order.rank(c) >= rank) return false;
    }
  }
  return true;
}

std::vector<Variable> induced_order(const AtomicExpression& a, const TopologicalOrder& order) {
  return order.descending(a.variables());
}

// ---------------------------------------------------------------------------

namespace {

std::string names(const VarSet& vs) {
  std::string out;
  for (const auto& v : vs) {
    if (!out.empty()) out += ',';
    out += v.name();
  }
  return out;
}

std::string joined_sorted(std::vector<std::string> keys) {
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (auto& k : keys) {
    out += k;
    out += ';';
  }
  return out;
}

std::string term_key(const Term& t) { return t.variable.name() + "|" + names(t.conditioners); }

}  // namespace

std::string canonical_key(const AtomicExpression& a) {
  std::vector<std::string> keys;
  for (const auto& t : a.terms()) keys.push_back(term_key(t));
  return "A{" + joined_sorted(std::move(keys)) + "}S{" + names(a.sum_set()) + "}";
}

std::string canonical_key(const Expression& e) {
  std::vector<std::string> children;
  for (const auto& c : e.children) children.push_back(canonical_key(c));
  std::vector<std::string> fractions;
  for (const auto& f : e.fractions) fractions.push_back(canonical_key(f));
  std::vector<std::string> atomics;
  for (const auto& a : e.atomics) atomics.push_back(canonical_key(a));
  return "E[" + joined_sorted(std::move(children)) + "|" + joined_sorted(std::move(fractions)) +
         "|" + joined_sorted(std::move(atomics)) + "|S{" + names(e.sum_set) + "}]";
}

std::string canonical_key(const QuotientExpression& q) {
  return "Q(" + canonical_key(q.numerator) + "/" + canonical_key(q.denominator) + ")";
}

bool canonical_equal(const Term& x, const Term& y) { return x == y; }

bool canonical_equal(const AtomicExpression& x, const AtomicExpression& y) {
  return canonical_key(x) == canonical_key(y);
}

bool canonical_equal(const Expression& x, const Expression& y) {
  return canonical_key(x) == canonical_key(y);
}

bool canonical_equal(const QuotientExpression& x, const QuotientExpression& y) {
  return canonical_key(x) == canonical_key(y);
}

// ---------------------------------------------------------------------------

namespace {

struct RankKey {
  const TopologicalOrder* order;

  bool operator()(const Variable& a, const Variable& b) const {
    const bool ia = order && order->contains(a);
    const bool ib = order && order->contains(b);
    if (ia && ib) return order->rank(a) < order->rank(b);
    if (ia != ib) return ia;
    return a.name() < b.name();
  }
};

std::vector<Variable> ascending(const VarSet& vs, const TopologicalOrder* order) {
  std::vector<Variable> out(vs.begin(), vs.end());
  std::stable_sort(out.begin(), out.end(), RankKey{order});
  return out;
}

std::string display_name(const Variable& v, Style style) {
  const auto& n = v.name();
  if (style == Style::plain) return n;
  auto digits = n.size();
  while (digits > 0 && std::isdigit(static_cast<unsigned char>(n[digits - 1]))) --digits;
  if (digits == 0 || digits == n.size() || n[digits - 1] == '_') return n;
  auto suffix = n.substr(digits);
  return n.substr(0, digits) + "_" + (suffix.size() == 1 ? suffix : "{" + suffix + "}");
}

std::string name_list(const VarSet& vs, Style style, const TopologicalOrder* order) {
  std::string out;
  for (const auto& v : ascending(vs, order)) {
    if (!out.empty()) out += ',';
    out += display_name(v, style);
  }
  return out;
}

std::string sum_prefix(const VarSet& vs, Style style, const TopologicalOrder* order) {
  if (vs.empty()) return {};
  if (style == Style::latex) return "\\sum_{" + name_list(vs, style, order) + "} ";
  return "sum_{" + name_list(vs, style, order) + "} ";
}

std::vector<Term> terms_descending(const AtomicExpression& a, const TopologicalOrder* order) {
  auto terms = a.terms();
  std::stable_sort(terms.begin(), terms.end(), [&](const Term& x, const Term& y) {
    return RankKey{order}(y.variable, x.variable);
  });
  return terms;
}

std::string term_body(const AtomicExpression& a, Style style, const TopologicalOrder* order) {
  std::string out;
  for (const auto& t : terms_descending(a, order)) {
    if (!out.empty() && style == Style::plain) out += ' ';
    out += render(t, style, order);
  }
  return out;
}

/// Sum-free atomics first (highest leading variable first), then the rest.
std::vector<const AtomicExpression*> atomic_order(const std::vector<AtomicExpression>& atomics,
                                                  const TopologicalOrder* order) {
  std::vector<const AtomicExpression*> out;
  for (const auto& a : atomics) out.push_back(&a);
  auto lead = [&](const AtomicExpression* a) -> std::optional<Variable> {
    auto terms = terms_descending(*a, order);
    if (terms.empty()) return std::nullopt;
    return terms.front().variable;
  };
  std::stable_sort(out.begin(), out.end(), [&](const AtomicExpression* x, const AtomicExpression* y) {
    const bool sx = !x->sum_set().empty();
    const bool sy = !y->sum_set().empty();
    if (sx != sy) return !sx;
    auto lx = lead(x);
    auto ly = lead(y);
    if (!lx || !ly) return lx.has_value() && !ly.has_value();
    if (*lx != *ly) return RankKey{order}(*ly, *lx);
    return canonical_key(*x) < canonical_key(*y);
  });
  return out;
}

template <typename T>
std::vector<const T*> by_key(const std::vector<T>& items) {
  std::vector<const T*> out;
  for (const auto& i : items) out.push_back(&i);
  std::stable_sort(out.begin(), out.end(),
                   [](const T* a, const T* b) { return canonical_key(*a) < canonical_key(*b); });
  return out;
}

bool is_single_atomic(const Expression& e) {
  return e.children.empty() && e.fractions.empty() && e.atomics.size() == 1 && e.sum_set.empty();
}

std::string body(const Expression& e, Style style, const TopologicalOrder* order);

std::string plain_body(const Expression& e, const TopologicalOrder* order) {
  if (is_single_atomic(e)) {
    const auto& a = e.atomics.front();
    if (a.empty()) return "[]";
    return sum_prefix(a.sum_set(), Style::plain, order) + term_body(a, Style::plain, order);
  }
  const auto atomics = atomic_order(e.atomics, order);
  // Bare terms may stand for singleton atomics only if some other factor
  // keeps the body from reading as one atomic.
  const bool bare_ok = !e.children.empty() || !e.fractions.empty() ||
                       std::any_of(atomics.begin(), atomics.end(), [](const AtomicExpression* a) {
                         return !(a->sum_set().empty() && a->terms().size() == 1);
                       });
  std::vector<std::string> parts;
  for (const auto* a : atomics) {
    if (bare_ok && a->sum_set().empty() && a->terms().size() == 1) {
      parts.push_back(render(a->terms().front(), Style::plain, order));
    } else {
      parts.push_back("[" + sum_prefix(a->sum_set(), Style::plain, order) +
                      term_body(*a, Style::plain, order) + "]");
    }
  }
  for (const auto* f : by_key(e.fractions)) {
    parts.push_back("{(" + body(f->numerator, Style::plain, order) + ")/(" +
                    body(f->denominator, Style::plain, order) + ")}");
  }
  for (const auto* c : by_key(e.children)) {
    parts.push_back("{" + body(*c, Style::plain, order) + "}");
  }
  std::string out = sum_prefix(e.sum_set, Style::plain, order);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ' ';
    out += parts[i];
  }
  if (out.empty()) return "1";
  if (parts.empty()) out += "1";
  return out;
}

std::string latex_body(const Expression& e, const TopologicalOrder* order) {
  const auto atomics = atomic_order(e.atomics, order);
  std::vector<std::string> parts;
  std::vector<bool> open_sum;
  for (const auto* a : atomics) {
    parts.push_back(sum_prefix(a->sum_set(), Style::latex, order) + term_body(*a, Style::latex, order));
    open_sum.push_back(!a->sum_set().empty());
  }
  for (const auto* f : by_key(e.fractions)) {
    parts.push_back("\\frac{" + body(f->numerator, Style::latex, order) + "}{" +
                    body(f->denominator, Style::latex, order) + "}");
    open_sum.push_back(false);
  }
  for (const auto* c : by_key(e.children)) {
    parts.push_back("\\left(" + body(*c, Style::latex, order) + "\\right)");
    open_sum.push_back(false);
  }
  std::string out = sum_prefix(e.sum_set, Style::latex, order);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (open_sum[i] && i + 1 < parts.size()) {
      out += "\\left(" + parts[i] + "\\right)";
    } else {
      out += parts[i];
    }
  }
  if (parts.empty()) out += "1";
  return out;
}

std::string body(const Expression& e, Style style, const TopologicalOrder* order) {
  return style == Style::plain ? plain_body(e, order) : latex_body(e, order);
}

}  // namespace

std::string render(const Term& t, Style style, const TopologicalOrder* order) {
  std::string out = "P(" + display_name(t.variable, style);
  if (!t.conditioners.empty()) out += "|" + name_list(t.conditioners, style, order);
  return out + ")";
}

std::string render(const AtomicExpression& a, Style style, const TopologicalOrder* order) {
  if (a.empty()) return "1";
  return sum_prefix(a.sum_set(), style, order) + term_body(a, style, order);
}

std::string render(const Expression& e, Style style, const TopologicalOrder* order) {
  return body(e, style, order);
}

std::string render(const QuotientExpression& q, Style style, const TopologicalOrder* order) {
  if (q.denominator.empty() && q.denominator.sum_set.empty()) return render(q.numerator, style, order);
  if (style == Style::latex) {
    return "\\frac{" + render(q.numerator, style, order) + "}{" + render(q.denominator, style, order) +
           "}";
  }
  return "(" + render(q.numerator, style, order) + ") / (" + render(q.denominator, style, order) + ")";
}

// ---------------------------------------------------------------------------

namespace {

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view text) : text_(text) {}

  QuotientExpression parse() {
    skip();
    QuotientExpression out;
    // A leading '(' is a quotient side unless the whole text is a body.
    if (peek() == '(') {
      auto save = pos_;
      ++pos_;
      auto num = parse_body(')');
      expect(')');
      skip();
      if (peek() == '/') {
        ++pos_;
        skip();
        expect('(');
        auto den = parse_body(')');
        expect(')');
        skip();
        if (pos_ != text_.size()) fail("unexpected trailing input");
        return QuotientExpression(std::move(num), std::move(den));
      }
      pos_ = save;
    }
    out.numerator = parse_body('\0');
    skip();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, 1, pos_ + 1);
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool at_word(std::string_view w) const { return text_.substr(pos_, w.size()) == w; }

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

  VarSet name_list(char close) {
    VarSet out;
    skip();
    if (peek() == close) return out;
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

  VarSet sum_list() {
    pos_ += 4;  // "sum_"
    expect('{');
    auto out = name_list('}');
    expect('}');
    return out;
  }

  Term term() {
    auto start = pos_;
    expect('P');
    expect('(');
    auto v = name();
    VarSet cond;
    skip();
    if (peek() == '|') {
      ++pos_;
      cond = name_list(')');
    }
    expect(')');
    try {
      return Term(v, std::move(cond));
    } catch (const ArgumentError& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  AtomicExpression atomic(VarSet sum, std::vector<Term> terms, std::size_t start) {
    try {
      return AtomicExpression(std::move(terms), std::move(sum));
    } catch (const ArgumentError& e) {
      pos_ = start;
      fail(e.what());
    }
  }

  bool at_term() {
    skip();
    return peek() == 'P' && pos_ + 1 < text_.size() &&
           (text_[pos_ + 1] == '(' || std::isspace(static_cast<unsigned char>(text_[pos_ + 1])));
  }

  // [sum_{..}] P.. P..  inside brackets
  AtomicExpression bracket_atomic() {
    auto start = pos_;
    ++pos_;  // '['
    skip();
    VarSet sum;
    if (at_word("sum_")) sum = sum_list();
    std::vector<Term> terms;
    while (at_term()) terms.push_back(term());
    expect(']');
    return atomic(std::move(sum), std::move(terms), start);
  }

  Expression parse_body(char close) {
    skip();
    auto start = pos_;
    Expression e;
    if (peek() == '1') {
      auto save = pos_;
      ++pos_;
      skip();
      if (peek() == close || (close == '\0' && pos_ == text_.size())) return e;
      pos_ = save;
    }
    VarSet sum;
    if (at_word("sum_")) sum = sum_list();
    std::vector<Term> bare;
    bool structured = false;
    while (true) {
      skip();
      const char c = peek();
      if (c == close || (close == '\0' && pos_ == text_.size())) break;
      if (at_term()) {
        bare.push_back(term());
      } else if (c == '[') {
        structured = true;
        e.atomics.push_back(bracket_atomic());
      } else if (c == '{') {
        structured = true;
        ++pos_;
        skip();
        if (peek() == '(') {
          ++pos_;
          auto num = parse_body(')');
          expect(')');
          expect('/');
          expect('(');
          auto den = parse_body(')');
          expect(')');
          e.fractions.emplace_back(std::move(num), std::move(den));
        } else {
          e.children.push_back(parse_body('}'));
        }
        expect('}');
      } else if (c == '1') {
        ++pos_;
      } else {
        fail(c == '\0' ? "unexpected end of input" : std::string("unexpected '") + c + "'");
      }
    }
    if (!structured) {
      if (!bare.empty()) e.atomics.push_back(atomic(std::move(sum), std::move(bare), start));
      else e.sum_set = std::move(sum);
      return e;
    }
    for (auto& t : bare) e.atomics.emplace_back(std::vector<Term>{std::move(t)});
    e.sum_set = std::move(sum);
    return e;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

QuotientExpression parse_expression(std::string_view text) { return ExpressionParser(text).parse(); }

// ---------------------------------------------------------------------------

namespace {

bool is_empty_factor(const Expression& e) { return e.empty() && e.sum_set.empty(); }

void merge_sum_free_atomics(Expression& e) {
  if (e.sum_set.empty() || !e.children.empty() || !e.fractions.empty()) return;
  if (e.atomics.size() == 1) {
    auto& a = e.atomics.front();
    if (disjoint(a.sum_set(), e.sum_set) && is_subset(e.sum_set, a.variables())) {
      auto terms = a.terms();
      e.atomics.front() = AtomicExpression(std::move(terms), set_union(a.sum_set(), e.sum_set));
      e.sum_set.clear();
    }
    return;
  }
  // Several sum-free atomics over distinct variables become one atomic.
  std::vector<Term> terms;
  VarSet seen;
  for (const auto& a : e.atomics) {
    if (!a.sum_set().empty()) return;
    for (const auto& t : a.terms()) {
      if (!seen.insert(t.variable).second) return;
      terms.push_back(t);
    }
  }
  if (!is_subset(e.sum_set, seen)) return;
  e.atomics = {AtomicExpression(std::move(terms), e.sum_set)};
  e.sum_set.clear();
}

}  // namespace

Expression normalize(Expression e) {
  std::vector<Expression> children;
  for (auto& c : e.children) {
    auto n = normalize(std::move(c));
    if (is_empty_factor(n)) continue;
    if (n.sum_set.empty()) {
      for (auto& cc : n.children) children.push_back(std::move(cc));
      for (auto& f : n.fractions) e.fractions.push_back(std::move(f));
      for (auto& a : n.atomics) e.atomics.push_back(std::move(a));
    } else {
      children.push_back(std::move(n));
    }
  }
  e.children = std::move(children);
  for (auto& f : e.fractions) {
    f.numerator = normalize(std::move(f.numerator));
    f.denominator = normalize(std::move(f.denominator));
  }
  e.fractions.erase(std::remove_if(e.fractions.begin(), e.fractions.end(),
                                   [](const QuotientExpression& q) {
                                     return is_empty_factor(q.numerator) &&
                                            is_empty_factor(q.denominator);
                                   }),
                    e.fractions.end());
  e.atomics.erase(std::remove_if(e.atomics.begin(), e.atomics.end(),
                                 [](const AtomicExpression& a) { return a.empty(); }),
                  e.atomics.end());

  if (e.children.size() == 1 && e.fractions.empty() && e.atomics.empty() &&
      disjoint(e.sum_set, e.children.front().sum_set)) {
    auto child = std::move(e.children.front());
    child.sum_set = set_union(child.sum_set, e.sum_set);
    return normalize(std::move(child));
  }
  merge_sum_free_atomics(e);
  return e;
}

}  // namespace causal
