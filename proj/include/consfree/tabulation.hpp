#pragma once

// Polynomial-time tabulation of call-by-value normal forms for cons-free
// systems. Confirmed[f(s1..sn) ≈ t] is computed as the least fixpoint of the
// update "some rule f(l..) -> r matches with gamma and t ∈ NF(r gamma)",
// either over every key (full mode, generation by generation) or over the
// keys reachable from the start term (demand mode, worklist order). Both
// modes agree on every key they share.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/term.hpp"
#include "consfree/trs_format.hpp"

namespace consfree {

/// Growable bitset over BSet indices.
class IndexSet {
 public:
  bool insert(std::uint32_t i) {
    std::size_t w = i / 64;
    if (w >= words_.size()) words_.resize(w + 1, 0);
    std::uint64_t bit = std::uint64_t{1} << (i % 64);
    if (words_[w] & bit) return false;
    words_[w] |= bit;
    ++count_;
    return true;
  }
  bool contains(std::uint32_t i) const {
    std::size_t w = i / 64;
    return w < words_.size() && (words_[w] >> (i % 64)) & 1U;
  }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int b = std::countr_zero(bits);
        f(static_cast<std::uint32_t>(w * 64 + b));
        bits &= bits - 1;
      }
    }
  }
  std::vector<std::uint32_t> to_vector() const {
    std::vector<std::uint32_t> out;
    for_each([&](std::uint32_t i) { out.push_back(i); });
    return out;
  }
  /// Returns true if anything was added.
  bool merge(const IndexSet& o) {
    bool grew = false;
    o.for_each([&](std::uint32_t i) { grew = insert(i) || grew; });
    return grew;
  }
  friend bool operator==(const IndexSet& a, const IndexSet& b) {
    return a.count_ == b.count_ && a.to_vector() == b.to_vector();
  }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t count_ = 0;
};

enum class TabulationMode { full, demand, automatic };

inline const char* to_string(TabulationMode m) {
  switch (m) {
    case TabulationMode::full: return "full";
    case TabulationMode::demand: return "demand";
    case TabulationMode::automatic: return "auto";
  }
  return "?";
}

struct TabulationOptions {
  TabulationMode mode = TabulationMode::full;
  /// automatic mode runs the full table when it has at most this many keys.
  std::size_t full_key_limit = 1u << 20;
  /// full mode refuses tables with more keys than this.
  std::size_t max_full_keys = 1u << 26;
};

class TableTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

struct TabulationStats {
  std::size_t input_size = 0;
  std::size_t max_arity = 0;
  std::size_t generations = 0;
  std::uint64_t basic_ops = 0;
  /// input_size^(3 max_arity + 3).
  double bound_value = 0;
  std::size_t defined_count = 0;
  std::size_t b_size = 0;
  std::size_t keys = 0;
  TabulationMode mode = TabulationMode::full;
};

class NotConsFree : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotBSafe : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfirmedTable;
using TabulationObserver = std::function<void(const ConfirmedTable&)>;

ConfirmedTable run_tabulation(const Trs& trs, const Term& s, TabulationOptions options = {},
                              const TabulationObserver& observer = {});

class ConfirmedTable {
 public:
  struct Entry {
    std::uint32_t symbol;  // index into defined()
    std::vector<std::uint32_t> args;
    IndexSet values;
    /// (value, generation at which it became YES), in confirmation order.
    std::vector<std::pair<std::uint32_t, std::size_t>> history;
  };

  const BSet& b() const { return b_; }
  const std::vector<SymbolPtr>& defined() const { return defined_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t generation() const { return generation_; }
  std::uint64_t ops() const { return ops_; }
  const TabulationStats& stats() const { return stats_; }
  TabulationMode mode() const { return mode_; }
  const Term& start_term() const { return start_; }

  const Entry* find(std::string_view f, const std::vector<std::uint32_t>& args) const {
    auto si = symbol_index(f);
    if (!si) return nullptr;
    auto it = index_.find(make_key(*si, args));
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  /// Confirmed[call ≈ value] for a call f(data...) and a data value.
  bool confirmed(const Term& call, const Term& value) const {
    auto e = entry_for(call);
    auto v = b_.index_of(value);
    return e && v && e->values.contains(*v);
  }

  /// Generation at which Confirmed[call ≈ value] became YES, if it did.
  std::optional<std::size_t> confirmed_at(const Term& call, const Term& value) const {
    auto e = entry_for(call);
    auto v = b_.index_of(value);
    if (!e || !v) return std::nullopt;
    for (const auto& [val, gen] : e->history)
      if (val == *v) return gen;
    return std::nullopt;
  }

  /// The YES-set of a call f(data...) as terms.
  TermSet values_of(const Term& call) const {
    TermSet out;
    if (auto e = entry_for(call)) e->values.for_each([&](std::uint32_t i) { out.insert(b_[i]); });
    return out;
  }

  /// The call term of an entry.
  Term call_term(const Entry& e) const {
    std::vector<Term> args;
    for (auto a : e.args) args.push_back(b_[a]);
    return Term::app(defined_[e.symbol], std::move(args));
  }

  /// One line per YES entry, `f(t1,...,tn) => t`, sorted.
  std::string dump() const {
    std::vector<std::string> lines;
    for (const auto& e : entries_) {
      std::string call = call_term(e).to_string();
      e.values.for_each([&](std::uint32_t v) { lines.push_back(call + " => " + b_[v].to_string()); });
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + "\n";
    return out;
  }

  /// NF of a B-safe term against the current table.
  TermSet nf(const Term& t) const {
    std::unordered_map<Term, IndexSet, TermHash> cache;
    IndexSet s = nf_impl(t, cache, [&](std::uint32_t sym, const std::vector<std::uint32_t>& args) -> const IndexSet& {
      auto it = index_.find(make_key(sym, args));
      if (it == index_.end())
        throw std::out_of_range("call " + describe(sym, args) + " was not tabulated");
      return entries_[it->second].values;
    });
    TermSet out;
    s.for_each([&](std::uint32_t i) { out.insert(b_[i]); });
    return out;
  }

 private:
  friend ConfirmedTable run_tabulation(const Trs&, const Term&, TabulationOptions, const TabulationObserver&);

  using Key = std::vector<std::uint32_t>;
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::size_t h = k.size();
      for (auto v : k) h = hash_combine(h, v);
      return h;
    }
  };
  using Lookup = std::function<const IndexSet&(std::uint32_t, const std::vector<std::uint32_t>&)>;

  ConfirmedTable(const Trs& trs, const Term& s) : trs_(&trs), start_(s), b_(compute_B(trs, s)), defined_(trs.defined()) {
    for (std::uint32_t i = 0; i < defined_.size(); ++i) symbol_ids_.emplace(defined_[i]->name, i);
    rules_by_symbol_.resize(defined_.size());
    for (std::uint32_t i = 0; i < defined_.size(); ++i) rules_by_symbol_[i] = trs.rules_for(defined_[i]->name);
  }

  static Key make_key(std::uint32_t sym, const std::vector<std::uint32_t>& args) {
    Key k;
    k.reserve(args.size() + 1);
    k.push_back(sym);
    k.insert(k.end(), args.begin(), args.end());
    return k;
  }

  std::optional<std::uint32_t> symbol_index(std::string_view f) const {
    auto it = symbol_ids_.find(std::string(f));
    if (it == symbol_ids_.end()) return std::nullopt;
    return it->second;
  }

  const Entry* entry_for(const Term& call) const {
    if (!call.is_defined_rooted()) return nullptr;
    std::vector<std::uint32_t> args;
    for (const auto& a : call.args()) {
      auto i = b_.index_of(a);
      if (!i) return nullptr;
      args.push_back(*i);
    }
    return find(call.name(), args);
  }

  std::string describe(std::uint32_t sym, const std::vector<std::uint32_t>& args) const {
    std::vector<Term> ts;
    for (auto a : args) ts.push_back(b_[a]);
    return Term::app(defined_[sym], std::move(ts)).to_string();
  }

  std::uint32_t add_entry(std::uint32_t sym, std::vector<std::uint32_t> args) {
    auto id = static_cast<std::uint32_t>(entries_.size());
    index_.emplace(make_key(sym, args), id);
    entries_.push_back({sym, std::move(args), {}, {}});
    return id;
  }

  IndexSet nf_impl(const Term& t, std::unordered_map<Term, IndexSet, TermHash>& cache, const Lookup& lookup) const {
    IndexSet out;
    if (t.is_data()) {
      auto i = b_.index_of(t);
      if (!i) throw NotBSafe("data term " + t.to_string() + " is not in B");
      out.insert(*i);
      return out;
    }
    if (!t.is_defined_rooted() || !t.is_ground()) throw NotBSafe("term " + t.to_string() + " is not B-safe");
    if (auto it = cache.find(t); it != cache.end()) return it->second;
    ++ops_;  // cache miss
    auto sym = symbol_ids_.at(t.name());
    std::vector<std::vector<std::uint32_t>> choices;
    choices.reserve(t.arity());
    for (const auto& a : t.args()) {
      choices.push_back(nf_impl(a, cache, lookup).to_vector());
      if (choices.back().empty()) {
        cache.emplace(t, out);
        return out;
      }
    }
    std::vector<std::size_t> idx(t.arity(), 0);
    std::vector<std::uint32_t> args(t.arity());
    bool more = true;
    while (more) {
      for (std::size_t i = 0; i < idx.size(); ++i) args[i] = choices[i][idx[i]];
      ++ops_;  // table lookup
      out.merge(lookup(sym, args));
      more = false;
      for (std::size_t i = idx.size(); i-- > 0;) {
        if (++idx[i] < choices[i].size()) {
          more = true;
          break;
        }
        idx[i] = 0;
      }
    }
    cache.emplace(t, out);
    return out;
  }

  /// New values of entry `id` derivable in one update, via `lookup`.
  IndexSet update(std::uint32_t id, std::unordered_map<Term, IndexSet, TermHash>& cache, const Lookup& lookup) {
    IndexSet out;
    // Copy: lookup may grow entries_ in demand mode.
    const std::uint32_t sym = entries_[id].symbol;
    const auto args = entries_[id].args;
    std::vector<Term> arg_terms;
    for (auto a : args) arg_terms.push_back(b_[a]);
    Term subject = Term::app(defined_[sym], std::move(arg_terms));
    for (std::size_t ri : rules_by_symbol_[sym]) {
      ++ops_;  // match attempt
      const auto& rule = trs_->rules()[ri];
      auto sigma = match(rule.lhs, subject);
      if (!sigma) continue;
      out.merge(nf_impl(substitute(*sigma, rule.rhs), cache, lookup));
    }
    return out;
  }

  void run_full(const TabulationObserver& observer) {
    // Every key f(s1..sn) with si ∈ B, symbols in signature order, argument
    // tuples in lexicographic index order.
    const auto bsize = static_cast<std::uint32_t>(b_.size());
    for (std::uint32_t sym = 0; sym < defined_.size(); ++sym) {
      std::size_t n = defined_[sym]->arity;
      std::vector<std::uint32_t> args(n, 0);
      if (n > 0 && bsize == 0) continue;
      while (true) {
        add_entry(sym, args);
        std::size_t i = n;
        while (i > 0 && ++args[i - 1] == bsize) args[--i] = 0;
        if (i == 0) break;
      }
    }
    Lookup lookup = [&](std::uint32_t sym, const std::vector<std::uint32_t>& args) -> const IndexSet& {
      return entries_[index_.at(make_key(sym, args))].values;
    };
    while (true) {
      std::unordered_map<Term, IndexSet, TermHash> cache;
      std::vector<std::pair<std::uint32_t, IndexSet>> pending;
      for (std::uint32_t id = 0; id < entries_.size(); ++id) {
        IndexSet fresh = update(id, cache, lookup);
        if (!fresh.empty()) pending.emplace_back(id, std::move(fresh));
      }
      ++generation_;
      ++ops_;  // fixpoint comparison
      bool changed = false;
      for (auto& [id, fresh] : pending) {
        auto& entry = entries_[id];
        fresh.for_each([&](std::uint32_t v) {
          if (entry.values.insert(v)) {
            ++ops_;  // insertion
            entry.history.emplace_back(v, generation_);
            changed = true;
          }
        });
      }
      if (observer) observer(*this);
      if (!changed) break;
    }
  }

  void run_demand(const TabulationObserver& observer) {
    constexpr std::uint32_t root = UINT32_MAX;
    std::vector<std::vector<std::uint32_t>> dependents;
    std::unordered_set<std::uint64_t> edges;
    std::vector<char> queued;
    std::deque<std::uint32_t> queue;
    bool root_queued = true;
    std::uint32_t current = root;

    auto enqueue = [&](std::uint32_t id) {
      if (id == root) {
        root_queued = true;
      } else if (!queued[id]) {
        queued[id] = 1;
        queue.push_back(id);
      }
    };
    Lookup lookup = [&](std::uint32_t sym, const std::vector<std::uint32_t>& args) -> const IndexSet& {
      std::uint32_t id;
      if (auto it = index_.find(make_key(sym, args)); it != index_.end()) {
        id = it->second;
      } else {
        id = add_entry(sym, args);
        dependents.emplace_back();
        queued.push_back(0);
        enqueue(id);
      }
      if (edges.insert((std::uint64_t{current} << 32) | id).second) dependents[id].push_back(current);
      return entries_[id].values;
    };

    while (root_queued || !queue.empty()) {
      ++generation_;
      ++ops_;
      if (root_queued) {
        root_queued = false;
        current = root;
        std::unordered_map<Term, IndexSet, TermHash> cache;
        nf_impl(start_, cache, lookup);
      }
      std::deque<std::uint32_t> round;
      round.swap(queue);
      for (auto id : round) {
        queued[id] = 0;
        current = id;
        std::unordered_map<Term, IndexSet, TermHash> cache;
        IndexSet fresh = update(id, cache, lookup);
        bool grew = false;
        fresh.for_each([&](std::uint32_t v) {
          if (entries_[id].values.insert(v)) {
            ++ops_;
            entries_[id].history.emplace_back(v, generation_);
            grew = true;
          }
        });
        if (grew)
          for (auto d : dependents[id]) enqueue(d);
      }
      if (observer) observer(*this);
    }
  }

  const Trs* trs_;
  Term start_;
  BSet b_;
  std::vector<SymbolPtr> defined_;
  std::unordered_map<std::string, std::uint32_t> symbol_ids_;
  std::vector<std::vector<std::size_t>> rules_by_symbol_;
  std::vector<Entry> entries_;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
  std::size_t generation_ = 0;
  mutable std::uint64_t ops_ = 0;
  TabulationStats stats_;
  TabulationMode mode_ = TabulationMode::full;
};

/// Number of keys of the full table: sum over defined f of |B|^arity(f).
inline double full_key_count(const Trs& trs, std::size_t b_size) {
  double n = 0;
  for (const auto& f : trs.defined()) n += std::pow(static_cast<double>(b_size), static_cast<double>(f->arity));
  return n;
}

/// Runs the tabulation to its fixpoint. Requires a cons-free system and a
/// ground B_s-safe start term.
inline ConfirmedTable run_tabulation(const Trs& trs, const Term& s, TabulationOptions options,
                                     const TabulationObserver& observer) {
  if (auto v = check_cons_free(trs); !v.empty())
    throw NotConsFree("system is not cons-free: rule " + std::to_string(v.front().rule_index) + ": " +
                      v.front().message);
  if (!s.is_ground()) throw NotBSafe("start term " + s.to_string() + " is not ground");
  ConfirmedTable table(trs, s);
  if (!is_b_safe(table.b_, s)) throw NotBSafe("start term " + s.to_string() + " is not B-safe");

  TabulationMode mode = options.mode;
  if (mode == TabulationMode::automatic)
    mode = full_key_count(trs, table.b_.size()) <= static_cast<double>(options.full_key_limit) ? TabulationMode::full
                                                                                              : TabulationMode::demand;
  table.mode_ = mode;
  if (double keys = full_key_count(trs, table.b_.size());
      mode == TabulationMode::full && keys > static_cast<double>(options.max_full_keys))
    throw TableTooLarge("full table would have " + std::to_string(static_cast<std::uint64_t>(keys)) +
                        " keys; use demand mode");
  if (mode == TabulationMode::full)
    table.run_full(observer);
  else
    table.run_demand(observer);

  auto& st = table.stats_;
  st.input_size = s.size();
  st.max_arity = trs.max_defined_arity();
  st.generations = table.generation_;
  st.basic_ops = table.ops_;
  st.bound_value = std::pow(static_cast<double>(st.input_size), 3.0 * static_cast<double>(st.max_arity) + 3.0);
  st.defined_count = table.defined_.size();
  st.b_size = table.b_.size();
  st.keys = table.entries_.size();
  st.mode = mode;
  return table;
}

inline TermSet nf(const ConfirmedTable& table, const Term& t) { return table.nf(t); }

struct DecideResult {
  bool accepted = false;
  TabulationStats stats;
};

/// True iff `true` is a call-by-value normal form of start(bits).
inline DecideResult decide(const Trs& trs, std::string_view bits, TabulationOptions options = {}) {
  auto ds = decision_symbols(trs);
  Term s = Term::app(ds.start, {encode_list(ds, bits)});
  auto table = run_tabulation(trs, s, options);
  return {table.nf(s).contains(Term::app(ds.yes)), table.stats()};
}

struct BoundCheck {
  bool ops_within = false;
  bool generations_within = false;
  double ops_bound = 0;
  double generation_bound = 0;
  bool ok() const { return ops_within && generations_within; }
};

/// basic_ops <= c * n^(3k+3), and generations <= |D| * |B|^(k+1) + 1.
inline BoundCheck stats_bound_check(const TabulationStats& stats, double c) {
  BoundCheck r;
  r.ops_bound = c * stats.bound_value;
  r.ops_within = static_cast<double>(stats.basic_ops) <= r.ops_bound;
  r.generation_bound = static_cast<double>(stats.defined_count) *
                           std::pow(static_cast<double>(stats.b_size), static_cast<double>(stats.max_arity) + 1.0) +
                       1.0;
  r.generations_within = static_cast<double>(stats.generations) <= r.generation_bound;
  return r;
}

}  // namespace consfree
