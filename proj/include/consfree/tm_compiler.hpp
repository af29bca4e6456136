#pragma once

// Deterministic single-tape Turing machines: a line-oriented description
// format, a direct simulator, and a compiler into a cons-free, semi-linear
// rewriting system that decides the same language under call-by-value
// reduction when the machine is clocked for n^k + n + 1 steps.
//
// Compiled representation. For an input list L of length n >= 2, a number is
// a tuple of k+3 digits, most significant first; a digit is a non-empty
// suffix of L whose value is its length minus one, so the base is n. Time
// runs over [0, T] with T = n^k + n + 1, and tape cell c lives at position
// c + T, which keeps every visited position in [0, 2T]. Three recurrences over
// time drive the simulation: the state at t, whether the head is at p at t,
// and the symbol in cell p at t. Arguments that a rule needs more than once
// are matched as cons(h, r) so that no direct argument variable is
// duplicated. Inputs of length 0 and 1 have no base-n counters and are
// answered by fixed rules computed at compile time.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "consfree/analysis.hpp"
#include "consfree/term.hpp"
#include "consfree/trs_format.hpp"

namespace consfree::tm {

enum class Move { left, right, stay };

inline char move_char(Move m) { return m == Move::left ? 'L' : m == Move::right ? 'R' : 'S'; }

struct Transition {
  std::string next;
  std::string write;
  Move move;
  bool operator==(const Transition&) const = default;
};

struct TmSpec {
  std::vector<std::string> states;
  std::string start_state;
  std::string accept_state;
  std::string reject_state;
  std::string blank;
  std::vector<std::string> tape_alphabet;
  std::map<std::pair<std::string, std::string>, Transition> delta;
  std::size_t clock_degree = 1;

  bool halting(const std::string& q) const { return q == accept_state || q == reject_state; }

  /// n^k + n + 1.
  std::uint64_t clock(std::size_t n) const {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < clock_degree; ++i) p *= n;
    return p + n + 1;
  }
};

class TmError : public std::runtime_error {
 public:
  enum class Kind { syntax, non_total, unknown_name, invalid };
  TmError(Kind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Checks the description and completes the halting states with
/// self-loops that keep the head still.
inline void validate(TmSpec& tm) {
  auto has = [](const std::vector<std::string>& v, const std::string& x) {
    return std::find(v.begin(), v.end(), x) != v.end();
  };
  if (tm.states.empty()) throw TmError(TmError::Kind::invalid, "no states declared");
  for (const auto* q : {&tm.start_state, &tm.accept_state, &tm.reject_state}) {
    if (q->empty()) throw TmError(TmError::Kind::invalid, "start, accept and reject states are required");
    if (!has(tm.states, *q)) throw TmError(TmError::Kind::unknown_name, "undeclared state " + *q);
  }
  if (tm.accept_state == tm.reject_state) throw TmError(TmError::Kind::invalid, "accept and reject states coincide");
  if (tm.blank.empty()) throw TmError(TmError::Kind::invalid, "blank symbol is required");
  for (const auto& s : {tm.blank, std::string("0"), std::string("1")})
    if (!has(tm.tape_alphabet, s)) throw TmError(TmError::Kind::unknown_name, "tape alphabet lacks " + s);
  if (tm.clock_degree == 0) throw TmError(TmError::Kind::invalid, "clock-degree must be positive");

  for (const auto& [key, tr] : tm.delta) {
    if (!has(tm.states, key.first)) throw TmError(TmError::Kind::unknown_name, "undeclared state " + key.first);
    if (!has(tm.states, tr.next)) throw TmError(TmError::Kind::unknown_name, "undeclared state " + tr.next);
    if (!has(tm.tape_alphabet, key.second))
      throw TmError(TmError::Kind::unknown_name, "undeclared tape symbol " + key.second);
    if (!has(tm.tape_alphabet, tr.write)) throw TmError(TmError::Kind::unknown_name, "undeclared tape symbol " + tr.write);
    if (tm.halting(key.first) && !(tr.next == key.first && tr.write == key.second && tr.move == Move::stay))
      throw TmError(TmError::Kind::invalid, "halting state " + key.first + " must not leave itself");
  }
  for (const auto& q : tm.states) {
    for (const auto& s : tm.tape_alphabet) {
      if (tm.delta.contains({q, s})) continue;
      if (!tm.halting(q)) throw TmError(TmError::Kind::non_total, "no transition for (" + q + ", " + s + ")");
      tm.delta.emplace(std::make_pair(q, s), Transition{q, s, Move::stay});
    }
  }
}

struct TmParseResult {
  TmSpec tm;
  std::vector<std::string> warnings;
};

inline TmParseResult parse_tm(std::string_view text) {
  TmParseResult res;
  auto& tm = res.tm;
  bool saw_clock = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& msg) -> TmError {
    return TmError(TmError::Kind::syntax, "line " + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto colon = line.find(':');
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    if (colon == std::string::npos) throw fail("expected 'key: value'");
    std::string key = line.substr(0, colon);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    std::istringstream rest(line.substr(colon + 1));
    std::vector<std::string> vals;
    for (std::string w; rest >> w;) vals.push_back(w);
    auto single = [&]() -> std::string {
      if (vals.size() != 1) throw fail(key + " takes exactly one value");
      return vals[0];
    };
    if (key == "states") {
      tm.states = vals;
    } else if (key == "start") {
      tm.start_state = single();
    } else if (key == "accept") {
      tm.accept_state = single();
    } else if (key == "reject") {
      tm.reject_state = single();
    } else if (key == "blank") {
      tm.blank = single();
    } else if (key == "tape-alphabet") {
      tm.tape_alphabet = vals;
    } else if (key == "clock-degree") {
      auto v = single();
      if (v.empty() || !std::all_of(v.begin(), v.end(), ::isdigit)) throw fail("clock-degree must be a number");
      tm.clock_degree = std::stoul(v);
      saw_clock = true;
    } else if (key == "delta") {
      if (vals.size() != 6 || vals[2] != "->") throw fail("expected 'delta: q s -> q2 s2 M'");
      Move m;
      if (vals[5] == "L")
        m = Move::left;
      else if (vals[5] == "R")
        m = Move::right;
      else if (vals[5] == "S")
        m = Move::stay;
      else
        throw fail("move must be L, R or S");
      if (!tm.delta.emplace(std::make_pair(vals[0], vals[1]), Transition{vals[3], vals[4], m}).second)
        throw fail("duplicate transition for (" + vals[0] + ", " + vals[1] + ")");
    } else {
      throw fail("unknown key " + key);
    }
  }
  if (!saw_clock) res.warnings.push_back("clock-degree missing; defaulting to 1");
  validate(tm);
  return res;
}

enum class Outcome { accept, reject, timeout };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::accept: return "accept";
    case Outcome::reject: return "reject";
    case Outcome::timeout: return "timeout";
  }
  return "?";
}

/// Runs the machine on a two-way infinite tape holding `bits` at cells
/// 0..n-1, head at cell 0, for at most `fuel` transitions.
inline Outcome simulate_tm(const TmSpec& tm, std::string_view bits, std::uint64_t fuel) {
  std::map<long long, std::string> tape;
  for (std::size_t i = 0; i < bits.size(); ++i) tape[static_cast<long long>(i)] = std::string(1, bits[i]);
  long long head = 0;
  std::string q = tm.start_state;
  for (std::uint64_t step = 0;; ++step) {
    if (q == tm.accept_state) return Outcome::accept;
    if (q == tm.reject_state) return Outcome::reject;
    if (step == fuel) return Outcome::timeout;
    auto it = tape.find(head);
    const std::string& sym = it == tape.end() ? tm.blank : it->second;
    const auto& tr = tm.delta.at({q, sym});
    tape[head] = tr.write;
    q = tr.next;
    if (tr.move == Move::left) --head;
    if (tr.move == Move::right) ++head;
  }
}

struct CompiledTrs {
  Trs trs;
  /// Generated symbol -> role.
  std::map<std::string, std::string> symbol_manifest;
  std::size_t digits = 0;
};

namespace detail {

inline std::string sanitize(std::string_view prefix, std::string_view name) {
  static const char* hex = "0123456789abcdef";
  std::string out(prefix);
  for (unsigned char c : name) {
    if (std::isalnum(c) || c == '_') {
      out += static_cast<char>(c);
    } else {
      out += "_x";
      out += hex[c >> 4];
      out += hex[c & 15];
    }
  }
  return out;
}

// Emits rule text. Digit vectors come in two shapes: plain variables, for
// arguments used at most once, and cons(h, r) patterns, for arguments the
// right-hand side needs several times.
class Emitter {
 public:
  explicit Emitter(std::size_t digits) : d_(digits) {}

  std::string var(const std::string& name) {
    vars_.insert(name);
    return name;
  }
  std::string pat(const std::string& prefix) { return "cons(" + var(prefix + "h") + "," + var(prefix + "r") + ")"; }

  /// Digit vector `prefix` as variables.
  std::vector<std::string> vvec(const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= d_; ++i) out.push_back(var(prefix + std::to_string(i)));
    return out;
  }
  /// Digit vector `prefix` as cons patterns.
  std::vector<std::string> pvec(const std::string& prefix) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= d_; ++i) out.push_back(pat(prefix + std::to_string(i)));
    return out;
  }
  /// Digit vector computed by `fn1..fnD(args)`.
  std::vector<std::string> calls(const std::string& fn, const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= d_; ++i) out.push_back(app(fn + std::to_string(i), args));
    return out;
  }

  static std::string app(const std::string& f, const std::vector<std::string>& args) {
    if (args.empty()) return f;
    std::string out = f + "(";
    for (std::size_t i = 0; i < args.size(); ++i) out += (i ? "," : "") + args[i];
    return out + ")";
  }

  void rule(const std::string& role, const std::string& f, const std::vector<std::string>& args,
            const std::string& rhs) {
    roles_.emplace(f, role);
    rules_ += "  " + app(f, args) + " -> " + rhs + "\n";
  }

  void role(const std::string& symbol, const std::string& r) { roles_.emplace(symbol, r); }

  std::string text() const {
    std::string out = "(VAR";
    for (const auto& v : vars_) out += " " + v;
    return out + ")\n(RULES\n" + rules_ + ")\n";
  }
  const std::map<std::string, std::string>& roles() const { return roles_; }

 private:
  std::size_t d_;
  std::set<std::string> vars_;
  std::string rules_;
  std::map<std::string, std::string> roles_;
};

template <class... Parts>
std::vector<std::string> cat(Parts&&... parts) {
  std::vector<std::string> out;
  (out.insert(out.end(), parts.begin(), parts.end()), ...);
  return out;
}

}  // namespace detail

/// Compiles a validated machine into a cons-free, semi-linear system with the
/// decision interface.
inline CompiledTrs compile_tm(const TmSpec& input) {
  TmSpec tm = input;
  validate(tm);
  using detail::cat;
  using V = std::vector<std::string>;
  auto app = detail::Emitter::app;

  const std::size_t k = tm.clock_degree;
  const std::size_t D = k + 3;
  detail::Emitter e(D);
  const std::string counter = "counter arithmetic", tape = "tape lookup", state = "state lookup",
                    head = "head predicate", driver = "driver";

  std::map<std::string, std::string> st, sym;
  std::set<std::string> used;
  for (const auto& q : tm.states) {
    st[q] = detail::sanitize("st_", q);
    if (!used.insert(st[q]).second) throw TmError(TmError::Kind::invalid, "state names collide after encoding: " + q);
    e.role(st[q], "state constant");
  }
  for (const auto& s : tm.tape_alphabet) {
    sym[s] = detail::sanitize("sym_", s);
    if (!used.insert(sym[s]).second) throw TmError(TmError::Kind::invalid, "symbol names collide after encoding: " + s);
    e.role(sym[s], "tape symbol constant");
  }
  const std::string mv[3] = {"mv_L", "mv_R", "mv_S"};
  auto mvname = [&](Move m) { return m == Move::left ? mv[0] : m == Move::right ? mv[1] : mv[2]; };

  const std::string L = e.pat("vl");  // the input list, matched as non-empty
  const std::string Lv = e.var("vl");

  // Booleans.
  e.rule("boolean", "and", {"true", e.var("vx")}, "vx");
  e.rule("boolean", "and", {"false", e.var("vx")}, "false");

  // Digits.
  e.rule(counter, "dz", {"cons(" + e.var("va") + ",nil)"}, "true");
  e.rule(counter, "dz", {"cons(va,cons(" + e.var("vb") + "," + e.var("vc") + "))"}, "false");
  e.rule(counter, "eql", {"cons(va,nil)", "cons(vb,nil)"}, "true");
  e.rule(counter, "eql", {"cons(va,nil)", "cons(vb,cons(vc," + e.var("vd") + "))"}, "false");
  e.rule(counter, "eql", {"cons(va,cons(vb,vc))", "cons(vd,nil)"}, "false");
  e.rule(counter, "eql", {"cons(va,cons(vb,vc))", "cons(vd,cons(" + e.var("ve") + "," + e.var("vf") + "))"},
         "eql(cons(vb,vc),cons(ve,vf))");
  e.rule(counter, "ddec", {"cons(va,nil)", Lv}, Lv);
  e.rule(counter, "ddec", {"cons(va,cons(vb,vc))", Lv}, "cons(vb,vc)");
  e.rule(counter, "dlast", {"cons(va,nil)"}, "cons(va,nil)");
  e.rule(counter, "dlast", {"cons(va,cons(vb,vc))"}, "dlast(cons(vb,vc))");
  e.rule(counter, "dinc", {"cons(va,vb)", "cons(vc,vd)"}, "dinc1(eql(cons(va,vb),cons(vc,vd)),cons(va,vb),cons(vc,vd))");
  e.rule(counter, "dinc1", {"true", e.var("vx"), Lv}, "dlast(vl)");
  e.rule(counter, "dinc1", {"false", "vx", Lv}, "dfind(vx,vl)");
  e.rule(counter, "dfind", {"cons(va,vb)", "cons(vc,cons(vd,ve))"},
         "dfind1(eql(cons(va,vb),cons(vd,ve)),cons(va,vb),cons(vc,cons(vd,ve)))");
  e.rule(counter, "dfind1", {"true", "vx", e.var("vy")}, "vy");
  e.rule(counter, "dfind1", {"false", "vx", "cons(va,vb)"}, "dfind(vx,vb)");
  e.rule(counter, "dig0", {Lv}, "dlast(vl)");
  e.rule(counter, "dig1", {L}, "dinc(dlast(" + L + ")," + L + ")");
  e.rule(counter, "dig2", {L}, "dinc(dig1(" + L + ")," + L + ")");

  // all-zero / all-max over m digits.
  for (std::size_t m = 1; m <= D; ++m) {
    V xs;
    for (std::size_t i = 1; i <= m; ++i) xs.push_back(e.var("vx" + std::to_string(i)));
    V rest(xs.begin() + 1, xs.end());
    std::string z = "allz" + std::to_string(m), mx = "allm" + std::to_string(m);
    if (m == 1) {
      e.rule(counter, z, xs, "dz(vx1)");
      e.rule(counter, mx, {xs[0], Lv}, "eql(vx1,vl)");
    } else {
      e.rule(counter, z, xs, "and(dz(vx1)," + app("allz" + std::to_string(m - 1), rest) + ")");
      e.rule(counter, mx, cat(xs, V{L}),
             "and(eql(vx1," + L + ")," + app("allm" + std::to_string(m - 1), cat(rest, V{L})) + ")");
    }
  }
  auto allz_of = [&](const V& ds) { return app("allz" + std::to_string(ds.size()), ds); };
  const std::string isz = "allz" + std::to_string(D), ismx = "allm" + std::to_string(D);

  // eqn(a, b): digit-wise equality.
  {
    V a = e.vvec("va"), b = e.vvec("vb");
    std::string body = "eql(va" + std::to_string(D) + ",vb" + std::to_string(D) + ")";
    for (std::size_t i = D - 1; i >= 1; --i)
      body = "and(eql(va" + std::to_string(i) + ",vb" + std::to_string(i) + ")," + body + ")";
    e.rule(counter, "eqn", cat(a, b), body);
  }

  // Predecessor and successor, one function per digit.
  e.rule(counter, "psel", {"true", "vx", Lv}, "ddec(vx,vl)");
  e.rule(counter, "psel", {"false", "vx", Lv}, "vx");
  e.rule(counter, "ssel", {"true", "vx", Lv}, "dinc(vx,vl)");
  e.rule(counter, "ssel", {"false", "vx", Lv}, "vx");
  for (std::size_t j = 1; j <= D; ++j) {
    V t = e.vvec("vt");
    V lower(t.begin() + static_cast<long>(j), t.end());
    std::string pd = "pd" + std::to_string(j), sd = "sd" + std::to_string(j);
    if (j == D) {
      e.rule(counter, pd, cat(t, V{Lv}), "ddec(" + t[j - 1] + ",vl)");
      e.rule(counter, sd, cat(t, V{Lv}), "dinc(" + t[j - 1] + ",vl)");
    } else {
      e.rule(counter, pd, cat(t, V{Lv}), "psel(" + allz_of(lower) + "," + t[j - 1] + ",vl)");
      e.rule(counter, sd, cat(t, V{L}),
             "ssel(" + app("allm" + std::to_string(lower.size()), cat(lower, V{L})) + "," + t[j - 1] + "," + L + ")");
    }
  }

  // The clock T = n^k + n + 1, which is also the origin of the tape.
  {
    std::vector<int> digit(D, 0);  // least significant first
    auto emit = [&](const std::string& lpat) {
      for (std::size_t j = 1; j <= D; ++j)
        e.rule(counter, "clk" + std::to_string(j), {lpat}, "dig" + std::to_string(digit[D - j]) + "(" + lpat + ")");
    };
    if (k >= 2) {
      digit[0] = digit[1] = digit[k] = 1;
      emit(Lv);
    } else {
      // n = 2: T = 5 = 101 in binary; n >= 3: T = 2n + 1.
      digit = std::vector<int>(D, 0);
      digit[0] = digit[2] = 1;
      emit("cons(" + e.var("va") + ",cons(" + e.var("vb") + ",nil))");
      digit = std::vector<int>(D, 0);
      digit[0] = 1;
      digit[1] = 2;
      emit("cons(va,cons(vb,cons(" + e.var("vc") + "," + e.var("vd") + ")))");
    }
  }
  auto clk = [&](const std::string& l) { return e.calls("clk", {l}); };
  auto pds = [&](const V& t, const std::string& l) { return e.calls("pd", cat(t, V{l})); };
  auto sds = [&](const V& t, const std::string& l) { return e.calls("sd", cat(t, V{l})); };

  // Transition table.
  for (const auto& [key, tr] : tm.delta) {
    V args{st.at(key.first), sym.at(key.second)};
    e.rule(state, "dstate", args, st.at(tr.next));
    e.rule(tape, "dwrite", args, sym.at(tr.write));
    e.rule(state, "dmove", args, mvname(tr.move));
  }
  e.rule(tape, "tsym", {"0"}, sym.at("0"));
  e.rule(tape, "tsym", {"1"}, sym.at("1"));
  for (const auto& q : tm.states) e.rule(driver, "isacc", {st.at(q)}, q == tm.accept_state ? "true" : "false");

  const V tP = e.pvec("vt"), tV = e.vvec("vt"), pP = e.pvec("vp"), pV = e.vvec("vp"), cP = e.pvec("vq"),
          cV = e.vvec("vq");
  auto A = [](std::initializer_list<V> parts) {
    V out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  };

  // State at time t.
  e.rule(state, "state_at", A({tP, {Lv}}), app("stif", A({{app(isz, tP)}, tP, {Lv}})));
  e.rule(state, "stif", A({{"true"}, tV, {Lv}}), st.at(tm.start_state));
  e.rule(state, "stif", A({{"false"}, tP, {L}}), app("stnext", A({pds(tP, L), {L}})));
  e.rule(state, "stnext", A({tP, {L}}),
         "dstate(" + app("state_at", A({tP, {L}})) + "," + app("cursym", A({tP, {L}})) + ")");
  e.rule(state, "mvat", A({tP, {L}}),
         "dmove(" + app("state_at", A({tP, {L}})) + "," + app("cursym", A({tP, {L}})) + ")");

  // Symbol under the head at time t: scan positions upward from 0.
  {
    V zero(D, "dlast(" + L + ")");
    e.rule(tape, "cursym", A({tV, {L}}), app("scan", A({tV, zero, {L}})));
  }
  e.rule(tape, "scan", A({tP, pP, {L}}), app("scif", A({{app("head_at", A({tP, pP, {L}}))}, tP, pP, {L}})));
  e.rule(tape, "scif", A({{"true"}, tV, pV, {Lv}}), app("symat", A({tV, pV, {Lv}})));
  e.rule(tape, "scif", A({{"false"}, tV, pP, {L}}), app("scan", A({tV, sds(pP, L), {L}})));

  // Head position.
  e.rule(head, "head_at", A({tP, pP, {L}}), app("hdif", A({{app(isz, tP)}, tP, pP, {L}})));
  e.rule(head, "hdif", A({{"true"}, tV, pV, {L}}), app("eqn", A({pV, clk(L)})));
  e.rule(head, "hdif", A({{"false"}, tP, pV, {L}}), app("hdprev", A({pds(tP, L), pV, {L}})));
  e.rule(head, "hdprev", A({tP, pV, {L}}), app("hdstep", A({{app("mvat", A({tP, {L}}))}, tP, pV, {L}})));
  e.rule(head, "hdstep", A({{"mv_S"}, tV, pV, {Lv}}), app("head_at", A({tV, pV, {Lv}})));
  e.rule(head, "hdstep", A({{"mv_R"}, tV, pP, {Lv}}), app("hdR", A({{app(isz, pP)}, tV, pP, {Lv}})));
  e.rule(head, "hdstep", A({{"mv_L"}, tV, pP, {L}}), app("hdL", A({{app(ismx, A({pP, {L}}))}, tV, pP, {L}})));
  e.rule(head, "hdR", A({{"true"}, tV, pV, {Lv}}), "false");
  e.rule(head, "hdR", A({{"false"}, tV, pP, {L}}), app("head_at", A({tV, pds(pP, L), {L}})));
  e.rule(head, "hdL", A({{"true"}, tV, pV, {Lv}}), "false");
  e.rule(head, "hdL", A({{"false"}, tV, pP, {L}}), app("head_at", A({tV, sds(pP, L), {L}})));

  // Tape contents.
  e.rule(tape, "symat", A({tP, pP, {L}}), app("syif", A({{app(isz, tP)}, tP, pP, {L}})));
  e.rule(tape, "syif", A({{"true"}, tV, pV, {L}}), app("init", A({pV, clk(L), {L, L}})));
  e.rule(tape, "syif", A({{"false"}, tP, pV, {L}}), app("syprev", A({pds(tP, L), pV, {L}})));
  e.rule(tape, "syprev", A({tP, pP, {L}}), app("sywr", A({{app("head_at", A({tP, pP, {L}}))}, tP, pP, {L}})));
  e.rule(tape, "sywr", A({{"true"}, tP, pV, {L}}),
         "dwrite(" + app("state_at", A({tP, {L}})) + "," + app("cursym", A({tP, {L}})) + ")");
  e.rule(tape, "sywr", A({{"false"}, tV, pV, {Lv}}), app("symat", A({tV, pV, {Lv}})));
  {
    const std::string xs = "cons(" + e.var("vx") + "," + e.var("vxs") + ")";
    e.rule(tape, "init", A({pV, cV, {"nil", Lv}}), sym.at(tm.blank));
    e.rule(tape, "init", A({pP, cP, {xs, Lv}}), app("inif", A({{app("eqn", A({pP, cP}))}, {xs}, pP, cP, {Lv}})));
    e.rule(tape, "inif", A({{"true", xs}, pV, cV, {Lv}}), "tsym(vx)");
    e.rule(tape, "inif", A({{"false", xs}, pV, cP, {L}}), app("init", A({pV, sds(cP, L), {"vxs", L}})));
  }

  // Driver. Inputs shorter than two bits are answered directly.
  for (std::string bits : {"", "0", "1"}) {
    bool acc = simulate_tm(tm, bits, tm.clock(bits.size())) == Outcome::accept;
    e.rule(driver, "start", {bits.empty() ? "nil" : "cons(" + bits + ",nil)"}, acc ? "true" : "false");
  }
  {
    const std::string l2 = "cons(" + e.var("va") + ",cons(" + e.var("vb") + "," + e.var("vc") + "))";
    e.rule(driver, "start", {l2}, "isacc(" + app("state_at", A({clk(l2), {l2}})) + ")");
  }
  for (const auto& m : mv) e.role(m, "move constant");

  CompiledTrs out{parse_trs(e.text()), e.roles(), D};
  for (const auto& s : out.trs.signature()) out.symbol_manifest.emplace(s->name, "decision interface");
  return out;
}

}  // namespace consfree::tm
