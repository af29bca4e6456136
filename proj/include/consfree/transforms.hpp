#pragma once

// Semantics-preserving rewrites of cons-free systems:
//  - semi-linearization: every argument of a defined symbol is copied
//    count(f,i) times so that each rule may hand out distinct copies of a
//    duplicated argument variable, making every rule semi-linear;
//  - bottom extension: a fresh constant `bot` and rules f(x1..xn) -> bot,
//    after which every ground term has a call-by-value data normal form.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/tabulation.hpp"
#include "consfree/term.hpp"
#include "consfree/trs_format.hpp"

namespace consfree {

class NotConstrained : public std::invalid_argument {
 public:
  NotConstrained(const std::string& msg, std::vector<std::size_t> forcing)
      : std::invalid_argument(msg), forcing_rules_(std::move(forcing)) {}
  const std::vector<std::size_t>& forcing_rules() const { return forcing_rules_; }

 private:
  std::vector<std::size_t> forcing_rules_;
};

class TransformError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// count(f, i) for every defined f and 1-based argument index i.
class CountTable {
 public:
  std::size_t count(const std::string& f, std::size_t i) const { return counts_.at(f).at(i - 1); }
  const std::vector<std::size_t>& counts(const std::string& f) const { return counts_.at(f); }
  bool has(const std::string& f) const { return counts_.contains(f); }
  std::size_t total(const std::string& f) const {
    std::size_t n = 0;
    for (auto c : counts_.at(f)) n += c;
    return n;
  }
  void set(const std::string& f, std::vector<std::size_t> c) { counts_[f] = std::move(c); }
  const std::map<std::string, std::vector<std::size_t>>& all() const { return counts_; }

 private:
  std::map<std::string, std::vector<std::size_t>> counts_;
};

inline void require_cons_free_constrained(const Trs& trs) {
  if (auto v = check_cons_free(trs); !v.empty())
    throw NotConsFree("system is not cons-free: rule " + std::to_string(v.front().rule_index) + ": " +
                      v.front().message);
  auto rep = check_constrained(trs);
  if (!rep.ok()) {
    const auto& r = trs.rules()[rep.forcing_rules.front()];
    throw NotConstrained("system is not constrained: rule " + std::to_string(rep.forcing_rules.front()) + " (" +
                             r.to_string() + ") must be semi-linear because " + r.lhs.name() +
                             " occurs above a DV variable",
                         rep.forcing_rules);
  }
}

/// count(f,i) = max({varcount(f,i,rule)} ∪ {1}), where varcount is the number
/// of occurrences in the rhs of the i-th lhs argument when it is a variable
/// of a rule for f, and 1 otherwise.
inline CountTable compute_counts(const Trs& trs) {
  require_cons_free_constrained(trs);
  CountTable table;
  for (const auto& f : trs.defined()) {
    std::vector<std::size_t> c(f->arity, 1);
    for (std::size_t ri : trs.rules_for(f->name)) {
      const auto& rule = trs.rules()[ri];
      for (std::size_t i = 0; i < f->arity; ++i) {
        const auto& li = rule.lhs.arg(i);
        if (li.is_var()) c[i] = std::max(c[i], occurrences(rule.rhs, li.var_name()));
      }
    }
    table.set(f->name, std::move(c));
  }
  return table;
}

/// Correspondence between a signature and its argument-copying image.
struct SignatureMap {
  std::vector<SymbolPtr> original;
  std::vector<SymbolPtr> transformed;
  /// For each defined symbol, the 0-based offset of each argument block.
  std::map<std::string, std::vector<std::size_t>> offsets;

  const SymbolPtr& image(const std::string& name) const {
    for (const auto& s : transformed)
      if (s->name == name) return s;
    throw SignatureError("symbol " + name + " has no image");
  }
};

inline SignatureMap make_signature_map(const Trs& trs, const CountTable& counts) {
  SignatureMap m;
  m.original = trs.signature();
  for (const auto& s : trs.signature()) {
    if (!s->is_defined()) {
      m.transformed.push_back(s);
      continue;
    }
    std::vector<std::size_t> off;
    std::size_t acc = 0;
    for (std::size_t i = 1; i <= s->arity; ++i) {
      off.push_back(acc);
      acc += counts.count(s->name, i);
    }
    m.offsets.emplace(s->name, std::move(off));
    m.transformed.push_back(make_symbol(s->name, acc, SymbolKind::defined));
  }
  return m;
}

class PhiProvisoError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Copies the i-th argument of every defined symbol count(f,i) times.
/// Constructor-rooted subterms must be free of defined symbols.
inline Term phi(const SignatureMap& sigmap, const CountTable& counts, const Term& t) {
  if (t.is_var()) return t;
  if (!t.head().is_defined()) {
    for (const auto& s : subterms(t))
      if (s.is_defined_rooted())
        throw PhiProvisoError("defined symbol " + s.name() + " below constructor in " + t.to_string());
    return t;
  }
  std::vector<Term> args;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    Term a = phi(sigmap, counts, t.arg(i));
    for (std::size_t j = 0; j < counts.count(t.name(), i + 1); ++j) args.push_back(a);
  }
  return Term::app(sigmap.image(t.name()), std::move(args));
}

struct TransformResult {
  Trs trs;
  /// rule_map[i] is the index of the image of original rule i.
  std::vector<std::size_t> rule_map;
  /// Indices of rules with no original counterpart.
  std::vector<std::size_t> added;
};

namespace detail {

inline std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  while (taken.contains(base)) base += "'";
  return base;
}

inline std::set<std::string> symbol_names(const Trs& trs) {
  std::set<std::string> out;
  for (const auto& s : trs.signature()) out.insert(s->name);
  return out;
}

// Replaces the k-th pre-order occurrence of variable v by replacements[v][k].
inline Term distribute(const Term& t, const std::map<std::string, std::vector<Term>>& replacements,
                       std::map<std::string, std::size_t>& seen) {
  if (t.is_var()) {
    auto it = replacements.find(t.var_name());
    if (it == replacements.end()) return t;
    return it->second.at(seen[t.var_name()]++);
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(distribute(a, replacements, seen));
  return Term::app(t.head_ptr(), std::move(args));
}

}  // namespace detail

/// Semi-linearization with rule correspondence. Adds start' wrapper rules
/// when the system has the decision interface.
inline TransformResult semi_linearize_detailed(const Trs& trs) {
  auto counts = compute_counts(trs);
  auto sigmap = make_signature_map(trs, counts);
  auto names = detail::symbol_names(trs);

  std::vector<Rule> rules;
  for (const auto& rule : trs.rules()) {
    const auto& f = rule.lhs.head();
    std::set<std::string> taken = names;
    for (const auto& v : variables(rule.lhs)) taken.insert(v);

    std::vector<Term> lhs_args;
    std::map<std::string, std::vector<Term>> copies;
    for (std::size_t i = 1; i <= f.arity; ++i) {
      const Term& li = rule.lhs.arg(i - 1);
      std::vector<Term> block{li};
      std::string base = li.is_var() ? li.var_name() : "arg" + std::to_string(i);
      for (std::size_t j = 2; j <= counts.count(f.name, i); ++j) {
        auto v = detail::fresh_name(base + "__" + std::to_string(j), taken);
        taken.insert(v);
        block.push_back(Term::var(v));
      }
      if (li.is_var()) copies.emplace(li.var_name(), block);
      lhs_args.insert(lhs_args.end(), block.begin(), block.end());
    }
    std::map<std::string, std::size_t> seen;
    Term rhs = detail::distribute(rule.rhs, copies, seen);
    rules.emplace_back(Term::app(sigmap.image(f.name), std::move(lhs_args)), phi(sigmap, counts, rhs));
  }

  TransformResult res{Trs{}, {}, {}};
  for (std::size_t i = 0; i < rules.size(); ++i) res.rule_map.push_back(i);

  std::vector<SymbolPtr> signature = sigmap.transformed;
  if (has_decision_interface(trs)) {
    auto start = trs.symbol("start");
    auto wrapper = make_symbol(detail::fresh_name("start'", names), 1, SymbolKind::defined);
    signature.push_back(wrapper);
    for (const auto& c : trs.constructors()) {
      std::set<std::string> taken = names;
      taken.insert(wrapper->name);
      std::vector<Term> xs;
      for (std::size_t j = 1; j <= c->arity; ++j) {
        auto v = detail::fresh_name("x" + std::to_string(j), taken);
        taken.insert(v);
        xs.push_back(Term::var(v));
      }
      Term arg = Term::app(c, xs);
      res.added.push_back(rules.size());
      rules.emplace_back(Term::app(wrapper, {arg}), phi(sigmap, counts, Term::app(start, {arg})));
    }
  }
  res.trs = Trs(std::move(signature), std::move(rules));
  return res;
}

inline Trs semi_linearize(const Trs& trs) { return semi_linearize_detailed(trs).trs; }

inline constexpr const char* bottom_name = "bot";

/// Adds the constant `bot` and f(x1..xn) -> bot for every defined f, after
/// the original rules. B sets of the result contain `bot` as rhs data.
inline TransformResult bottom_extend_detailed(const Trs& trs) {
  if (trs.find(bottom_name)) throw TransformError("symbol bot already exists");
  auto names = detail::symbol_names(trs);
  auto bot = make_symbol(bottom_name, 0, SymbolKind::constructor);
  names.insert(bottom_name);

  TransformResult res{Trs{}, {}, {}};
  std::vector<Rule> rules = trs.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) res.rule_map.push_back(i);
  for (const auto& f : trs.defined()) {
    std::set<std::string> taken = names;
    std::vector<Term> xs;
    for (std::size_t j = 1; j <= f->arity; ++j) {
      auto v = detail::fresh_name("x" + std::to_string(j), taken);
      taken.insert(v);
      xs.push_back(Term::var(v));
    }
    res.added.push_back(rules.size());
    rules.emplace_back(Term::app(f, std::move(xs)), Term::app(bot));
  }
  auto signature = trs.signature();
  signature.push_back(bot);
  res.trs = Trs(std::move(signature), std::move(rules));
  return res;
}

inline Trs bottom_extend(const Trs& trs) { return bottom_extend_detailed(trs).trs; }

}  // namespace consfree
