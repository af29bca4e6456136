#pragma once

// Unrestricted and call-by-value rewriting, a budgeted breadth-first
// reachability oracle over the reduction graph, and reduction traces.

#include <cstdint>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "consfree/term.hpp"
#include "consfree/trs_format.hpp"

namespace consfree {

enum class Strategy { full, cbv };

inline const char* to_string(Strategy s) { return s == Strategy::full ? "full" : "cbv"; }

struct ReductionStep {
  Position position;
  std::size_t rule_index;
  Term before;
  Term after;
};

namespace detail {

inline bool args_are_data(const Term& t) {
  for (const auto& a : t.args())
    if (!a.is_data()) return false;
  return true;
}

inline void collect_steps(const Trs& trs, const Term& root, const Term& t, Position& pos, Strategy strategy,
                          std::vector<ReductionStep>& out) {
  if (t.is_var()) return;
  if (t.is_defined_rooted() && (strategy == Strategy::full || args_are_data(t))) {
    for (std::size_t ri : trs.rules_for(t.name())) {
      const auto& rule = trs.rules()[ri];
      if (auto sigma = match(rule.lhs, t)) out.push_back({pos, ri, root, replace_at(root, pos, substitute(*sigma, rule.rhs))});
    }
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    pos.push_back(i + 1);
    collect_steps(trs, root, t.arg(i), pos, strategy, out);
    pos.pop_back();
  }
}

}  // namespace detail

/// All one-step successors; positions in pre-order, rules in file order.
inline std::vector<ReductionStep> steps(const Trs& trs, const Term& t, Strategy strategy) {
  std::vector<ReductionStep> out;
  Position pos;
  detail::collect_steps(trs, t, t, pos, strategy, out);
  return out;
}

inline std::vector<ReductionStep> step_full(const Trs& trs, const Term& t) { return steps(trs, t, Strategy::full); }

/// Steps at redexes whose arguments are all data. A nullary redex qualifies.
inline std::vector<ReductionStep> step_cbv(const Trs& trs, const Term& t) { return steps(trs, t, Strategy::cbv); }

struct Budgets {
  std::size_t max_terms = 200000;
  std::size_t max_term_size = 2000;
};

enum class Truncation { none, step_budget, size_budget };

inline const char* to_string(Truncation t) {
  switch (t) {
    case Truncation::none: return "none";
    case Truncation::step_budget: return "step_budget";
    case Truncation::size_budget: return "size_budget";
  }
  return "?";
}

struct ReachabilityResult {
  TermSet results;
  bool complete = true;
  std::size_t explored = 0;
  Truncation truncated_by = Truncation::none;

  bool operator==(const ReachabilityResult&) const = default;
};

class BudgetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Breadth-first search of the reduction graph from `s`, collecting every
/// data term met. `complete` is set only if the whole graph was explored.
inline ReachabilityResult reachable_data(const Trs& trs, const Term& s, Strategy strategy, Budgets budgets = {}) {
  if (budgets.max_terms == 0 || budgets.max_term_size == 0) throw BudgetError("budgets must be positive");
  ReachabilityResult res;
  std::unordered_set<Term, TermHash> visited;
  std::deque<Term> frontier;
  if (s.size() > budgets.max_term_size) {
    res.complete = false;
    res.truncated_by = Truncation::size_budget;
    return res;
  }
  visited.insert(s);
  frontier.push_back(s);
  while (!frontier.empty()) {
    Term cur = frontier.front();
    frontier.pop_front();
    if (cur.is_data()) {
      res.results.insert(cur);
      continue;
    }
    for (auto& st : steps(trs, cur, strategy)) {
      if (visited.contains(st.after)) continue;
      if (st.after.size() > budgets.max_term_size) {
        res.complete = false;
        if (res.truncated_by == Truncation::none) res.truncated_by = Truncation::size_budget;
        continue;
      }
      if (visited.size() >= budgets.max_terms) {
        res.complete = false;
        res.truncated_by = Truncation::step_budget;
        frontier.clear();
        break;
      }
      visited.insert(st.after);
      frontier.push_back(std::move(st.after));
    }
  }
  // Data terms still queued when the step budget hit were reached as well.
  res.explored = visited.size();
  for (const auto& t : visited)
    if (t.is_data()) res.results.insert(t);
  return res;
}

enum class Verdict { yes, no, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::yes: return "yes";
    case Verdict::no: return "no";
    case Verdict::unknown: return "unknown";
  }
  return "?";
}

inline Verdict verdict_from(const ReachabilityResult& r, const Term& target) {
  if (r.results.contains(target)) return Verdict::yes;
  return r.complete ? Verdict::no : Verdict::unknown;
}

/// Decision-interface acceptance by exhaustive search.
inline Verdict accepts(const Trs& trs, std::string_view bits, Strategy strategy, Budgets budgets = {}) {
  auto ds = decision_symbols(trs);
  auto start = Term::app(ds.start, {encode_list(ds, bits)});
  return verdict_from(reachable_data(trs, start, strategy, budgets), Term::app(ds.yes));
}

/// A reduction sequence stored as (position, rule) pairs; intermediate terms
/// are rebuilt on demand.
struct Trace {
  Term start;
  std::vector<std::pair<Position, std::size_t>> steps;

  /// Terms after each step; the first element is `start`.
  std::vector<Term> materialize(const Trs& trs) const {
    std::vector<Term> out{start};
    for (const auto& [pos, ri] : steps) {
      const auto& rule = trs.rules().at(ri);
      const Term& redex = subterm_at(out.back(), pos);
      auto sigma = match(rule.lhs, redex);
      if (!sigma) throw std::logic_error("trace step does not apply: rule " + std::to_string(ri));
      out.push_back(replace_at(out.back(), pos, substitute(*sigma, rule.rhs)));
    }
    return out;
  }
};

enum class Pick { first, random };

/// Follows one reduction path, taking the first (or a seeded random)
/// enabled step each time, for at most `max_steps` steps.
inline Trace reduce(const Trs& trs, const Term& s, Strategy strategy, std::size_t max_steps, Pick pick = Pick::first,
                    std::uint64_t seed = 0) {
  Trace tr{s, {}};
  std::mt19937_64 rng(seed);
  Term cur = s;
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto st = steps(trs, cur, strategy);
    if (st.empty()) break;
    std::size_t k = 0;
    if (pick == Pick::random) k = std::uniform_int_distribution<std::size_t>(0, st.size() - 1)(rng);
    tr.steps.emplace_back(st[k].position, st[k].rule_index);
    cur = st[k].after;
  }
  return tr;
}

/// One line per step: `<position> <rule-index> <term-after>`.
inline std::string export_trace(const Trs& trs, const Trace& tr) {
  auto terms = tr.materialize(trs);
  std::string out;
  for (std::size_t i = 0; i < tr.steps.size(); ++i) {
    out += position_to_string(tr.steps[i].first) + " " + std::to_string(tr.steps[i].second) + " " +
           terms[i + 1].to_string() + "\n";
  }
  return out;
}

}  // namespace consfree
