#pragma once

// Static analyses: cons-freeness, semi-linearity, constrainedness, the data
// universe B_s and B-safety.

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "consfree/term.hpp"

namespace consfree {

struct Violation {
  std::size_t rule_index;
  int condition;  // 1: linear lhs, 2: constructor arguments, 3: no new data on the rhs
  Term subterm;
  std::string message;
};

/// All violations of the three cons-free conditions, rule by rule. Empty
/// means the system is cons-free.
inline std::vector<Violation> check_cons_free(const Trs& trs) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < trs.rules().size(); ++i) {
    const auto& rule = trs.rules()[i];
    std::set<std::string> seen, reported;
    for (const auto& s : subterms(rule.lhs)) {
      if (s.is_var() && !seen.insert(s.var_name()).second && reported.insert(s.var_name()).second)
        out.push_back({i, 1, s, "variable " + s.var_name() + " occurs more than once on the left-hand side"});
    }
    for (const auto& arg : rule.lhs.args()) {
      for (const auto& s : subterms(arg)) {
        if (s.is_defined_rooted()) {
          out.push_back({i, 2, s, "left-hand side argument contains defined symbol " + s.name()});
          break;
        }
      }
    }
    for (const auto& t : subterms(rule.rhs)) {
      if (!t.is_constructor_rooted() || t.is_data() || strictly_contains(rule.lhs, t)) continue;
      out.push_back({i, 3, t, "constructor term " + t.to_string() +
                                  " is neither data nor a strict subterm of the left-hand side"});
    }
  }
  return out;
}

class MalformedLhs : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The direct arguments of `lhs` that are variables.
inline std::set<std::string> dv(const Term& lhs) {
  if (lhs.is_var()) throw MalformedLhs("DV is undefined for the variable " + lhs.var_name());
  std::set<std::string> out;
  for (const auto& a : lhs.args())
    if (a.is_var()) out.insert(a.var_name());
  return out;
}

/// Every DV variable of the lhs occurs at most once in the rhs.
inline bool check_semi_linear(const Rule& rule) {
  for (const auto& x : dv(rule.lhs))
    if (occurrences(rule.rhs, x) > 1) return false;
  return true;
}

struct ConstrainedWitness {
  std::set<std::string> a_set;
};

struct ConstrainedReport {
  /// Roots of right-hand side terms that strictly contain a DV variable.
  std::set<std::string> required;
  /// Non-semi-linear rules whose root is forced into A.
  std::vector<std::size_t> forcing_rules;

  bool ok() const { return forcing_rules.empty(); }
  std::optional<ConstrainedWitness> witness() const {
    if (!ok()) return std::nullopt;
    return ConstrainedWitness{required};
  }
};

/// Decides constrainedness via the least admissible A: any A must contain the
/// required roots, and growing A only adds semi-linearity obligations.
/// Expects a cons-free system.
inline ConstrainedReport check_constrained(const Trs& trs) {
  ConstrainedReport report;
  for (const auto& rule : trs.rules()) {
    auto vars = dv(rule.lhs);
    if (vars.empty()) continue;
    for (const auto& t : subterms(rule.rhs)) {
      if (t.is_var()) continue;
      bool hit = false;
      for (const auto& x : vars) hit = hit || strictly_contains(t, Term::var(x));
      if (!hit) continue;
      // Cons-freeness forbids a constructor above a DV variable.
      if (!t.is_defined_rooted())
        throw std::logic_error("constructor " + t.name() + " above a DV variable in " + rule.to_string() +
                               "; run check_cons_free first");
      report.required.insert(t.name());
    }
  }
  for (std::size_t i = 0; i < trs.rules().size(); ++i) {
    const auto& rule = trs.rules()[i];
    if (report.required.contains(rule.lhs.name()) && !check_semi_linear(rule)) report.forcing_rules.push_back(i);
  }
  return report;
}

/// Subterm-closed, deduplicated set of data terms with stable indices.
class BSet {
 public:
  BSet() = default;

  /// Adds `t` and all its subterms (pre-order). Non-data subterms are skipped.
  void add_closure(const Term& t) {
    for (const auto& s : subterms(t))
      if (s.is_data()) insert(s);
  }

  std::size_t size() const { return items_.size(); }
  const std::vector<Term>& items() const { return items_; }
  const Term& operator[](std::size_t i) const { return items_[i]; }
  bool contains(const Term& t) const { return index_.contains(t); }

  std::optional<std::uint32_t> index_of(const Term& t) const {
    auto it = index_.find(t);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  /// Sum of node counts of the members.
  std::size_t total_size() const {
    std::size_t n = 0;
    for (const auto& t : items_) n += t.size();
    return n;
  }

 private:
  void insert(const Term& t) {
    if (index_.emplace(t, static_cast<std::uint32_t>(items_.size())).second) items_.push_back(t);
  }

  std::vector<Term> items_;
  std::unordered_map<Term, std::uint32_t, TermHash> index_;
};

/// Data subterms of the right-hand sides, in rule order.
inline BSet compute_rhs_data(const Trs& trs) {
  BSet b;
  for (const auto& r : trs.rules()) b.add_closure(r.rhs);
  return b;
}

/// B_s: data subterms of `s`, then data subterms of every right-hand side.
inline BSet compute_B(const Trs& trs, const Term& s) {
  BSet b;
  b.add_closure(s);
  for (const auto& r : trs.rules()) b.add_closure(r.rhs);
  return b;
}

inline bool is_b_safe(const BSet& b, const Term& t) {
  if (b.contains(t)) return true;
  if (!t.is_defined_rooted()) return false;
  for (const auto& a : t.args())
    if (!is_b_safe(b, a)) return false;
  return true;
}

}  // namespace consfree
