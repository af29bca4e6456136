#pragma once

// Shared helpers for the unit tests and the acceptance runner: loading the
// corpus, enumerating B-safe terms, random terms.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "consfree/consfree.hpp"

#ifndef CONSFREE_CORPUS_DIR
#define CONSFREE_CORPUS_DIR "corpus"
#endif

namespace consfree::testing {

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot open " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::filesystem::path corpus_dir() { return CONSFREE_CORPUS_DIR; }

struct CorpusSystem {
  std::string name;
  Trs trs;
  /// Ground start terms declared with `; start:` or `; input:` lines.
  std::vector<Term> starts;
};

inline CorpusSystem load_system(const std::filesystem::path& p) {
  auto text = read_file(p);
  CorpusSystem sys{p.stem().string(), parse_trs(text), {}};
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("; start:", 0) == 0) {
      sys.starts.push_back(parse_term(sys.trs, line.substr(8)));
    } else if (line.rfind("; input:", 0) == 0) {
      std::string bits = line.substr(8);
      bits.erase(std::remove(bits.begin(), bits.end(), ' '), bits.end());
      sys.starts.push_back(encode_input(sys.trs, bits));
    }
  }
  return sys;
}

inline std::vector<CorpusSystem> load_corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(corpus_dir() / "trs"))
    if (e.path().extension() == ".trs") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<CorpusSystem> out;
  for (const auto& f : files) out.push_back(load_system(f));
  return out;
}

/// Right-hand side data plus the data subterms of every declared start.
inline BSet corpus_b(const CorpusSystem& sys) {
  BSet b;
  for (const auto& s : sys.starts) b.add_closure(s);
  for (const auto& r : sys.trs.rules()) b.add_closure(r.rhs);
  return b;
}

/// Every B-safe ground term over the defined symbols of `trs` with at most
/// `max_size` nodes, smallest first.
inline std::vector<Term> b_safe_terms(const Trs& trs, const BSet& b, std::size_t max_size) {
  std::vector<std::vector<Term>> by_size(max_size + 1);
  for (const auto& t : b.items())
    if (t.size() <= max_size) by_size[t.size()].push_back(t);
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const auto& f : trs.defined()) {
      // Distribute n - 1 nodes over the arguments.
      std::vector<Term> args;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t left) {
        if (i == f->arity) {
          if (left == 0) by_size[n].push_back(Term::app(f, args));
          return;
        }
        for (std::size_t s = 1; s + (f->arity - i - 1) <= left; ++s) {
          for (const auto& t : by_size[s]) {
            args.push_back(t);
            go(i + 1, left - s);
            args.pop_back();
          }
        }
      };
      go(0, n - 1);
    }
  }
  std::vector<Term> out;
  for (auto& v : by_size) out.insert(out.end(), v.begin(), v.end());
  return out;
}

/// A random B-safe term: defined symbols over B leaves, depth-bounded.
inline Term random_b_safe(const Trs& trs, const BSet& b, std::mt19937_64& rng, std::size_t depth) {
  auto defined = trs.defined();
  std::uniform_int_distribution<int> coin(0, 2);
  if (depth == 0 || defined.empty() || coin(rng) == 0) {
    if (b.size() == 0) {
      // Only nullary defined symbols can stand in for data.
      for (const auto& f : defined)
        if (f->arity == 0) return Term::app(f);
      throw std::runtime_error("no B-safe leaves");
    }
    return b[std::uniform_int_distribution<std::size_t>(0, b.size() - 1)(rng)];
  }
  const auto& f = defined[std::uniform_int_distribution<std::size_t>(0, defined.size() - 1)(rng)];
  std::vector<Term> args;
  for (std::size_t i = 0; i < f->arity; ++i) args.push_back(random_b_safe(trs, b, rng, depth - 1));
  return Term::app(f, std::move(args));
}

inline std::vector<std::string> all_bitstrings(std::size_t max_len) {
  std::vector<std::string> out;
  for (std::size_t n = 0; n <= max_len; ++n)
    for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) {
      std::string s;
      for (std::size_t i = 0; i < n; ++i) s += ((m >> (n - 1 - i)) & 1) ? '1' : '0';
      out.push_back(s);
    }
  return out;
}

/// Definition-level check of a constrainedness witness, written without the
/// A_min construction: walk every position of every right-hand side.
inline bool witness_holds(const Trs& trs, const std::set<std::string>& a) {
  for (const auto& f : a) {
    auto sym = trs.find(f);
    if (!sym || !sym->is_defined()) return false;
  }
  for (const auto& rule : trs.rules()) {
    std::vector<std::string> direct;
    for (const auto& arg : rule.lhs.args())
      if (arg.is_var()) direct.push_back(arg.var_name());
    if (a.contains(rule.lhs.name())) {
      for (const auto& x : direct) {
        std::size_t uses = 0;
        for (const auto& p : positions(rule.rhs)) {
          const Term& u = subterm_at(rule.rhs, p);
          if (u.is_var() && u.var_name() == x) ++uses;
        }
        if (uses > 1) return false;
      }
    }
    for (const auto& p : positions(rule.rhs)) {
      const Term& t = subterm_at(rule.rhs, p);
      if (t.is_var()) continue;
      for (const auto& q : positions(t)) {
        if (q.empty()) continue;
        const Term& u = subterm_at(t, q);
        if (u.is_var() && std::find(direct.begin(), direct.end(), u.var_name()) != direct.end() &&
            !a.contains(t.name()))
          return false;
      }
    }
  }
  return true;
}

/// Constrainedness by trying every subset of the defined symbols.
inline bool constrained_by_search(const Trs& trs) {
  auto defined = trs.defined();
  if (defined.size() > 16) throw std::runtime_error("too many defined symbols to search");
  for (std::size_t mask = 0; mask < (std::size_t{1} << defined.size()); ++mask) {
    std::set<std::string> a;
    for (std::size_t i = 0; i < defined.size(); ++i)
      if (mask & (std::size_t{1} << i)) a.insert(defined[i]->name);
    if (witness_holds(trs, a)) return true;
  }
  return false;
}

}  // namespace consfree::testing
