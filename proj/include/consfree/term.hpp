#pragma once

// First-order terms, signatures, substitutions, matching and positions.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace consfree {

enum class SymbolKind { defined, constructor };

struct Symbol {
  std::string name;
  std::size_t arity = 0;
  SymbolKind kind = SymbolKind::constructor;

  bool is_defined() const { return kind == SymbolKind::defined; }
  bool operator==(const Symbol&) const = default;
};

using SymbolPtr = std::shared_ptr<const Symbol>;

inline SymbolPtr make_symbol(std::string name, std::size_t arity, SymbolKind kind) {
  if (name.empty()) throw std::invalid_argument("symbol name must be non-empty");
  return std::make_shared<const Symbol>(Symbol{std::move(name), arity, kind});
}

/// A path of 1-based child indices from the root; empty is the root.
using Position = std::vector<std::size_t>;

inline std::string position_to_string(const Position& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p[i]);
  }
  return out + "]";
}

class InvalidPosition : public std::out_of_range {
 public:
  explicit InvalidPosition(const Position& p)
      : std::out_of_range("invalid position " + position_to_string(p)) {}
};

inline std::size_t hash_combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

/// Immutable first-order term with structural sharing. Copies are cheap.
class Term {
  struct Node {
    SymbolPtr head;  // null for variables
    std::string var;
    std::vector<Term> args;
    std::size_t hash = 0;
    std::size_t size = 1;
    bool ground = false;
    bool data = false;
  };

 public:
  static Term var(std::string name) {
    if (name.empty()) throw std::invalid_argument("variable name must be non-empty");
    auto n = std::make_shared<Node>();
    n->hash = hash_combine(0x51ed27, std::hash<std::string>{}(name));
    n->var = std::move(name);
    return Term(std::move(n));
  }

  static Term app(SymbolPtr head, std::vector<Term> args = {}) {
    if (!head) throw std::invalid_argument("null head symbol");
    if (args.size() != head->arity) {
      throw std::invalid_argument("symbol " + head->name + " expects " + std::to_string(head->arity) +
                                  " arguments, got " + std::to_string(args.size()));
    }
    auto n = std::make_shared<Node>();
    std::size_t h = hash_combine(std::hash<std::string>{}(head->name), head->arity);
    bool ground = true;
    bool data = !head->is_defined();
    for (const auto& a : args) {
      h = hash_combine(h, a.hash());
      n->size += a.size();
      ground = ground && a.is_ground();
      data = data && a.is_data();
    }
    n->hash = h;
    n->ground = ground;
    n->data = data && ground;
    n->head = std::move(head);
    n->args = std::move(args);
    return Term(std::move(n));
  }

  bool is_var() const { return node_->head == nullptr; }
  const std::string& var_name() const { return node_->var; }
  const Symbol& head() const { return *node_->head; }
  const SymbolPtr& head_ptr() const { return node_->head; }
  /// Name of the head symbol, or of the variable.
  const std::string& name() const { return is_var() ? node_->var : node_->head->name; }
  std::span<const Term> args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  /// 0-based argument access.
  const Term& arg(std::size_t i) const { return node_->args.at(i); }

  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }
  bool is_ground() const { return is_var() ? false : node_->ground; }
  /// Ground and built from constructors only.
  bool is_data() const { return !is_var() && node_->data; }
  bool is_defined_rooted() const { return !is_var() && node_->head->is_defined(); }
  bool is_constructor_rooted() const { return !is_var() && !node_->head->is_defined(); }
  bool same_node(const Term& o) const { return node_ == o.node_; }

  std::string to_string() const {
    std::string out;
    append_to(out);
    return out;
  }

  void append_to(std::string& out) const {
    out += name();
    if (is_var() || node_->args.empty()) return;
    out += '(';
    for (std::size_t i = 0; i < node_->args.size(); ++i) {
      if (i) out += ',';
      node_->args[i].append_to(out);
    }
    out += ')';
  }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
    if (a.is_var() != b.is_var()) return false;
    if (a.is_var()) return a.node_->var == b.node_->var;
    if (a.node_->head != b.node_->head && !(*a.node_->head == *b.node_->head)) return false;
    return std::equal(a.node_->args.begin(), a.node_->args.end(), b.node_->args.begin());
  }

  /// Total order: variables first, then by head name, arity and arguments.
  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (a.is_var() != b.is_var()) return a.is_var() ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.is_var()) return a.node_->var <=> b.node_->var;
    if (auto c = a.node_->head->name <=> b.node_->head->name; c != 0) return c;
    if (auto c = a.arity() <=> b.arity(); c != 0) return c;
    if (auto c = a.node_->head->kind <=> b.node_->head->kind; c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i) {
      if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

using TermSet = std::set<Term>;

inline std::string to_string(const TermSet& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : s) {
    if (!first) out += ", ";
    first = false;
    t.append_to(out);
  }
  return out + "}";
}

/// Every subterm occurrence in pre-order, left to right; the first is `t`.
inline std::vector<Term> subterms(const Term& t) {
  std::vector<Term> out;
  out.reserve(t.size());
  std::vector<const Term*> stack{&t};
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    out.push_back(*cur);
    auto args = cur->args();
    for (auto it = args.rbegin(); it != args.rend(); ++it) stack.push_back(&*it);
  }
  return out;
}

/// Positions of `t` in the same order as `subterms`.
inline std::vector<Position> positions(const Term& t) {
  std::vector<Position> out;
  out.reserve(t.size());
  Position cur;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    out.push_back(cur);
    for (std::size_t i = 0; i < u.arity(); ++i) {
      cur.push_back(i + 1);
      walk(u.arg(i));
      cur.pop_back();
    }
  };
  walk(t);
  return out;
}

inline const Term& subterm_at(const Term& t, const Position& p) {
  const Term* cur = &t;
  for (std::size_t i : p) {
    if (i == 0 || i > cur->arity()) throw InvalidPosition(p);
    cur = &cur->arg(i - 1);
  }
  return *cur;
}

inline Term replace_at(const Term& t, const Position& p, const Term& u, std::size_t depth = 0) {
  if (depth == p.size()) return u;
  const std::size_t i = p[depth];
  if (t.is_var() || i == 0 || i > t.arity()) throw InvalidPosition(p);
  std::vector<Term> args(t.args().begin(), t.args().end());
  args[i - 1] = replace_at(args[i - 1], p, u, depth + 1);
  return Term::app(t.head_ptr(), std::move(args));
}

/// `u` is a (non-strict) subterm of `t`.
inline bool contains(const Term& t, const Term& u) {
  if (t == u) return true;
  for (const auto& a : t.args())
    if (contains(a, u)) return true;
  return false;
}

inline bool strictly_contains(const Term& t, const Term& u) {
  for (const auto& a : t.args())
    if (contains(a, u)) return true;
  return false;
}

/// Variable names in order of first occurrence.
inline std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> out;
  for (const auto& s : subterms(t))
    if (s.is_var() && std::find(out.begin(), out.end(), s.var_name()) == out.end()) out.push_back(s.var_name());
  return out;
}

inline std::size_t occurrences(const Term& t, const std::string& var) {
  std::size_t n = 0;
  for (const auto& s : subterms(t))
    if (s.is_var() && s.var_name() == var) ++n;
  return n;
}

inline bool is_linear(const Term& t) {
  std::set<std::string> seen;
  for (const auto& s : subterms(t))
    if (s.is_var() && !seen.insert(s.var_name()).second) return false;
  return true;
}

inline bool is_data(const Term& t) { return t.is_data(); }

using Substitution = std::map<std::string, Term>;

inline Term substitute(const Substitution& sigma, const Term& t) {
  if (sigma.empty()) return t;
  if (t.is_var()) {
    auto it = sigma.find(t.var_name());
    return it == sigma.end() ? t : it->second;
  }
  if (t.is_ground()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(substitute(sigma, a));
  return Term::app(t.head_ptr(), std::move(args));
}

namespace detail {
inline bool match_into(const Term& pattern, const Term& subject, Substitution& sigma) {
  if (pattern.is_var()) {
    auto [it, inserted] = sigma.emplace(pattern.var_name(), subject);
    return inserted || it->second == subject;
  }
  if (subject.is_var()) return false;
  if (pattern.name() != subject.name() || pattern.arity() != subject.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match_into(pattern.arg(i), subject.arg(i), sigma)) return false;
  return true;
}
}  // namespace detail

/// Syntactic matching: `sigma` with substitute(sigma, pattern) == subject, if any.
inline std::optional<Substitution> match(const Term& pattern, const Term& subject) {
  Substitution sigma;
  if (!detail::match_into(pattern, subject, sigma)) return std::nullopt;
  return sigma;
}

class RuleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Rule {
  Term lhs;
  Term rhs;

  Rule(Term l, Term r) : lhs(std::move(l)), rhs(std::move(r)) {
    if (lhs.is_var()) throw RuleError("left-hand side is a variable: " + lhs.to_string());
    auto lv = variables(lhs);
    for (const auto& v : variables(rhs)) {
      if (std::find(lv.begin(), lv.end(), v) == lv.end())
        throw RuleError("variable " + v + " of the right-hand side does not occur on the left: " + to_string());
    }
  }

  const Symbol& root() const { return lhs.head(); }
  std::string to_string() const { return lhs.to_string() + " -> " + rhs.to_string(); }
};

namespace detail {
inline bool rename_equal(const Term& a, const Term& b, std::map<std::string, std::string>& fwd,
                         std::map<std::string, std::string>& bwd) {
  if (a.is_var() != b.is_var()) return false;
  if (a.is_var()) {
    auto [f, fi] = fwd.emplace(a.var_name(), b.var_name());
    auto [g, gi] = bwd.emplace(b.var_name(), a.var_name());
    return f->second == b.var_name() && g->second == a.var_name();
  }
  if (a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!rename_equal(a.arg(i), b.arg(i), fwd, bwd)) return false;
  return true;
}
}  // namespace detail

/// Rule equality modulo a bijective renaming of variables.
inline bool equal_up_to_renaming(const Rule& a, const Rule& b) {
  std::map<std::string, std::string> fwd, bwd;
  return detail::rename_equal(a.lhs, b.lhs, fwd, bwd) && detail::rename_equal(a.rhs, b.rhs, fwd, bwd);
}

class SignatureError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite rule set over an ordered signature. A symbol is defined iff it is
/// the root of some left-hand side.
class Trs {
 public:
  Trs() = default;

  Trs(std::vector<SymbolPtr> signature, std::vector<Rule> rules)
      : signature_(std::move(signature)), rules_(std::move(rules)) {
    for (std::size_t i = 0; i < signature_.size(); ++i) {
      if (!by_name_.emplace(signature_[i]->name, i).second)
        throw SignatureError("duplicate symbol " + signature_[i]->name);
    }
    std::set<std::string> roots;
    for (const auto& r : rules_) {
      roots.insert(r.lhs.name());
      check_symbols(r.lhs);
      check_symbols(r.rhs);
    }
    for (const auto& s : signature_) {
      if (s->is_defined() != roots.contains(s->name))
        throw SignatureError("symbol " + s->name + (s->is_defined() ? " is declared defined but roots no rule"
                                                                    : " roots a rule but is a constructor"));
    }
  }

  /// Builds the signature from the rules, in order of first occurrence, with
  /// `extra` symbols appended when absent.
  static Trs from_rules(std::vector<Rule> rules, const std::vector<SymbolPtr>& extra = {}) {
    std::vector<SymbolPtr> sig;
    std::set<std::string> seen;
    auto add = [&](const SymbolPtr& s) {
      if (seen.insert(s->name).second) sig.push_back(s);
    };
    for (const auto& r : rules)
      for (const auto* side : {&r.lhs, &r.rhs})
        for (const auto& t : subterms(*side))
          if (!t.is_var()) add(t.head_ptr());
    for (const auto& s : extra) add(s);
    return Trs(std::move(sig), std::move(rules));
  }

  const std::vector<SymbolPtr>& signature() const { return signature_; }
  const std::vector<Rule>& rules() const { return rules_; }

  SymbolPtr find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : signature_[it->second];
  }

  const SymbolPtr& symbol(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) throw SignatureError("unknown symbol " + std::string(name));
    return signature_[it->second];
  }

  std::vector<SymbolPtr> defined() const {
    std::vector<SymbolPtr> out;
    for (const auto& s : signature_)
      if (s->is_defined()) out.push_back(s);
    return out;
  }

  std::vector<SymbolPtr> constructors() const {
    std::vector<SymbolPtr> out;
    for (const auto& s : signature_)
      if (!s->is_defined()) out.push_back(s);
    return out;
  }

  std::size_t max_defined_arity() const {
    std::size_t k = 0;
    for (const auto& s : signature_)
      if (s->is_defined()) k = std::max(k, s->arity);
    return k;
  }

  /// Indices of the rules rooted at `name`, in file order.
  std::vector<std::size_t> rules_for(std::string_view name) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < rules_.size(); ++i)
      if (rules_[i].lhs.name() == name) out.push_back(i);
    return out;
  }

 private:
  void check_symbols(const Term& t) const {
    for (const auto& s : subterms(t)) {
      if (s.is_var()) continue;
      auto it = by_name_.find(s.name());
      if (it == by_name_.end()) throw SignatureError("symbol " + s.name() + " is not in the signature");
      if (!(*signature_[it->second] == s.head()))
        throw SignatureError("symbol " + s.name() + " is used inconsistently with the signature");
    }
  }

  std::vector<SymbolPtr> signature_;
  std::vector<Rule> rules_;
  std::unordered_map<std::string, std::size_t> by_name_;
};

}  // namespace consfree

template <>
struct std::hash<consfree::Term> {
  std::size_t operator()(const consfree::Term& t) const noexcept { return t.hash(); }
};
