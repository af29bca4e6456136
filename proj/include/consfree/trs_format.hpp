#pragma once

// Text format for rewriting systems:
//
//   file = "(VAR" id* ")" "(RULES" rule* ")"
//   rule = term "->" term
//   term = id | id "(" term ("," term)* ")"
//
// Identifiers are [A-Za-z0-9_']+, ';' comments to end of line. Arities are
// inferred from first use. A symbol is defined iff it roots a left-hand side.

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "consfree/term.hpp"

namespace consfree {

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 0;
};

class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, arity_mismatch, variable_lhs, unbound_rhs_variable, invalid_input };

  ParseError(Kind kind, SourceSpan span, const std::string& msg)
      : std::runtime_error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + msg),
        kind_(kind),
        span_(span) {}

  Kind kind() const { return kind_; }
  const SourceSpan& span() const { return span_; }

 private:
  Kind kind_;
  SourceSpan span_;
};

namespace detail {

struct Token {
  enum class Type { lparen, rparen, comma, arrow, ident, end } type;
  std::string text;
  SourceSpan span;
};

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') advance(1);
    } else if (c == '(' || c == ')' || c == ',') {
      out.push_back({c == '(' ? Token::Type::lparen : c == ')' ? Token::Type::rparen : Token::Type::comma,
                     std::string(1, c), {line, col, 1}});
      advance(1);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      out.push_back({Token::Type::arrow, "->", {line, col, 2}});
      advance(2);
    } else if (is_ident_char(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.push_back({Token::Type::ident, std::string(text.substr(i, j - i)), {line, col, j - i}});
      advance(j - i);
    } else {
      throw ParseError(ParseError::Kind::syntax, {line, col, 1}, std::string("unexpected character '") + c + "'");
    }
  }
  out.push_back({Token::Type::end, "", {line, col, 0}});
  return out;
}

// Untyped parse tree; symbols are resolved once the whole file is read.
struct RawTerm {
  std::string name;
  SourceSpan span;
  bool has_parens = false;
  std::vector<RawTerm> args;
};

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  const Token& expect(Token::Type t, const char* what) {
    if (peek().type != t) {
      const auto& tok = peek();
      throw ParseError(ParseError::Kind::syntax, tok.span,
                       std::string("expected ") + what + ", found " + (tok.text.empty() ? "end of input" : tok.text));
    }
    return next();
  }
  void expect_keyword(const char* kw) {
    const auto& tok = expect(Token::Type::ident, kw);
    if (tok.text != kw) throw ParseError(ParseError::Kind::syntax, tok.span, std::string("expected ") + kw);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

inline RawTerm parse_raw_term(TokenStream& ts) {
  const auto& id = ts.expect(Token::Type::ident, "identifier");
  RawTerm t{id.text, id.span, false, {}};
  if (ts.peek().type == Token::Type::lparen) {
    ts.next();
    t.has_parens = true;
    t.args.push_back(parse_raw_term(ts));
    while (ts.peek().type == Token::Type::comma) {
      ts.next();
      t.args.push_back(parse_raw_term(ts));
    }
    ts.expect(Token::Type::rparen, "')'");
  }
  return t;
}

struct SymbolUse {
  std::size_t arity;
  SourceSpan first;
};

inline void collect_arities(const RawTerm& t, const std::set<std::string>& vars,
                            std::map<std::string, SymbolUse>& arities, std::vector<std::string>& order) {
  if (vars.contains(t.name)) {
    if (t.has_parens)
      throw ParseError(ParseError::Kind::arity_mismatch, t.span, "variable " + t.name + " applied to arguments");
    return;
  }
  auto [it, inserted] = arities.emplace(t.name, SymbolUse{t.args.size(), t.span});
  if (inserted) {
    order.push_back(t.name);
  } else if (it->second.arity != t.args.size()) {
    throw ParseError(ParseError::Kind::arity_mismatch, t.span,
                     "symbol " + t.name + " used with " + std::to_string(t.args.size()) + " arguments, but with " +
                         std::to_string(it->second.arity) + " at " + std::to_string(it->second.first.line) + ":" +
                         std::to_string(it->second.first.column));
  }
  for (const auto& a : t.args) collect_arities(a, vars, arities, order);
}

inline Term build_term(const RawTerm& t, const std::set<std::string>& vars,
                       const std::map<std::string, SymbolPtr>& symbols) {
  if (vars.contains(t.name)) return Term::var(t.name);
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(build_term(a, vars, symbols));
  return Term::app(symbols.at(t.name), std::move(args));
}

}  // namespace detail

inline Trs parse_trs(std::string_view text) {
  using detail::Token;
  detail::TokenStream ts(detail::tokenize(text));

  ts.expect(Token::Type::lparen, "'('");
  ts.expect_keyword("VAR");
  std::set<std::string> vars;
  while (ts.peek().type == Token::Type::ident) vars.insert(ts.next().text);
  ts.expect(Token::Type::rparen, "')'");

  ts.expect(Token::Type::lparen, "'('");
  ts.expect_keyword("RULES");
  std::vector<std::pair<detail::RawTerm, detail::RawTerm>> raw;
  while (ts.peek().type == Token::Type::ident) {
    auto lhs = detail::parse_raw_term(ts);
    ts.expect(Token::Type::arrow, "'->'");
    auto rhs = detail::parse_raw_term(ts);
    raw.emplace_back(std::move(lhs), std::move(rhs));
  }
  ts.expect(Token::Type::rparen, "')'");
  if (ts.peek().type != Token::Type::end)
    throw ParseError(ParseError::Kind::syntax, ts.peek().span, "trailing input after RULES block");

  std::map<std::string, detail::SymbolUse> arities;
  std::vector<std::string> order;
  std::set<std::string> roots;
  for (const auto& [lhs, rhs] : raw) {
    if (vars.contains(lhs.name))
      throw ParseError(ParseError::Kind::variable_lhs, lhs.span, "left-hand side is the variable " + lhs.name);
    roots.insert(lhs.name);
    detail::collect_arities(lhs, vars, arities, order);
    detail::collect_arities(rhs, vars, arities, order);
  }

  std::map<std::string, SymbolPtr> symbols;
  std::vector<SymbolPtr> signature;
  for (const auto& name : order) {
    auto sym = make_symbol(name, arities.at(name).arity,
                           roots.contains(name) ? SymbolKind::defined : SymbolKind::constructor);
    symbols.emplace(name, sym);
    signature.push_back(sym);
  }

  std::vector<Rule> rules;
  for (const auto& [lhs, rhs] : raw) {
    Term l = detail::build_term(lhs, vars, symbols);
    Term r = detail::build_term(rhs, vars, symbols);
    auto lv = variables(l);
    for (const auto& v : variables(r)) {
      if (std::find(lv.begin(), lv.end(), v) == lv.end())
        throw ParseError(ParseError::Kind::unbound_rhs_variable, rhs.span,
                         "variable " + v + " of the right-hand side does not occur on the left");
    }
    rules.emplace_back(std::move(l), std::move(r));
  }
  return Trs(std::move(signature), std::move(rules));
}

/// Parses a term over the signature of `trs`. Identifiers in `vars` are
/// variables; every other identifier must be a symbol of `trs`.
inline Term parse_term(const Trs& trs, std::string_view text, const std::set<std::string>& vars = {}) {
  using detail::Token;
  detail::TokenStream ts(detail::tokenize(text));
  auto raw = detail::parse_raw_term(ts);
  if (ts.peek().type != Token::Type::end)
    throw ParseError(ParseError::Kind::syntax, ts.peek().span, "trailing input after term");
  std::function<Term(const detail::RawTerm&)> build = [&](const detail::RawTerm& t) -> Term {
    if (vars.contains(t.name)) {
      if (t.has_parens)
        throw ParseError(ParseError::Kind::arity_mismatch, t.span, "variable " + t.name + " applied to arguments");
      return Term::var(t.name);
    }
    auto sym = trs.find(t.name);
    if (!sym) throw ParseError(ParseError::Kind::syntax, t.span, "unknown symbol " + t.name);
    if (sym->arity != t.args.size())
      throw ParseError(ParseError::Kind::arity_mismatch, t.span,
                       "symbol " + t.name + " expects " + std::to_string(sym->arity) + " arguments");
    std::vector<Term> args;
    for (const auto& a : t.args) args.push_back(build(a));
    return Term::app(sym, std::move(args));
  };
  return build(raw);
}

/// Deterministic rendering; re-parses to the same rules up to renaming.
inline std::string print_trs(const Trs& trs) {
  std::set<std::string> symbol_names;
  for (const auto& s : trs.signature()) symbol_names.insert(s->name);

  // A variable that shares its name with a symbol would re-parse as the symbol.
  std::vector<Rule> rules;
  std::vector<std::string> all_vars;
  for (const auto& r : trs.rules()) {
    Substitution rename;
    std::set<std::string> used;
    for (const auto& v : variables(r.lhs)) used.insert(v);
    for (const auto& v : variables(r.lhs)) {
      if (!symbol_names.contains(v)) continue;
      std::string fresh = v + "'";
      while (symbol_names.contains(fresh) || used.contains(fresh)) fresh += "'";
      used.insert(fresh);
      rename.emplace(v, Term::var(fresh));
    }
    Rule renamed(substitute(rename, r.lhs), substitute(rename, r.rhs));
    for (const auto& v : variables(renamed.lhs))
      if (std::find(all_vars.begin(), all_vars.end(), v) == all_vars.end()) all_vars.push_back(v);
    rules.push_back(std::move(renamed));
  }

  std::string out = "(VAR";
  for (const auto& v : all_vars) out += " " + v;
  out += ")\n(RULES\n";
  for (const auto& r : rules) out += "  " + r.to_string() + "\n";
  out += ")";
  return out;
}

class DecisionInterfaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The reserved symbols of the bitstring decision interface.
struct DecisionSymbols {
  SymbolPtr start, cons, nil, yes, no, zero, one;
};

/// Resolves the decision symbols of `trs`. `start/1` must be defined; the
/// constructors are taken from the signature when present (with the reserved
/// arities) and created otherwise.
inline DecisionSymbols decision_symbols(const Trs& trs) {
  auto get = [&](const char* name, std::size_t arity, SymbolKind kind) -> SymbolPtr {
    auto s = trs.find(name);
    if (!s) {
      if (kind == SymbolKind::defined)
        throw DecisionInterfaceError(std::string("decision symbol ") + name + " is missing");
      return make_symbol(name, arity, kind);
    }
    if (s->arity != arity || s->kind != kind)
      throw DecisionInterfaceError(std::string("decision symbol ") + name + " must be a " +
                                   (kind == SymbolKind::defined ? "defined symbol" : "constructor") + " of arity " +
                                   std::to_string(arity));
    return s;
  };
  return {get("start", 1, SymbolKind::defined), get("cons", 2, SymbolKind::constructor),
          get("nil", 0, SymbolKind::constructor),  get("true", 0, SymbolKind::constructor),
          get("false", 0, SymbolKind::constructor), get("0", 0, SymbolKind::constructor),
          get("1", 0, SymbolKind::constructor)};
}

inline bool has_decision_interface(const Trs& trs) {
  try {
    decision_symbols(trs);
    return true;
  } catch (const DecisionInterfaceError&) {
    return false;
  }
}

inline void validate_bits(std::string_view bits) {
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw ParseError(ParseError::Kind::invalid_input, {1, i + 1, 1},
                       std::string("input may only contain 0 and 1, found '") + bits[i] + "'");
  }
}

/// The data list b1 :: ... :: bn :: nil.
inline Term encode_list(const DecisionSymbols& ds, std::string_view bits) {
  validate_bits(bits);
  Term list = Term::app(ds.nil);
  for (auto it = bits.rbegin(); it != bits.rend(); ++it)
    list = Term::app(ds.cons, {Term::app(*it == '0' ? ds.zero : ds.one), list});
  return list;
}

/// start(b1 :: ... :: bn :: nil) over the decision symbols of `trs`.
inline Term encode_input(const Trs& trs, std::string_view bits) {
  auto ds = decision_symbols(trs);
  return Term::app(ds.start, {encode_list(ds, bits)});
}

/// Same encoding over a stand-alone decision signature.
inline Term encode_input(std::string_view bits) {
  DecisionSymbols ds{make_symbol("start", 1, SymbolKind::defined), make_symbol("cons", 2, SymbolKind::constructor),
                     make_symbol("nil", 0, SymbolKind::constructor),  make_symbol("true", 0, SymbolKind::constructor),
                     make_symbol("false", 0, SymbolKind::constructor), make_symbol("0", 0, SymbolKind::constructor),
                     make_symbol("1", 0, SymbolKind::constructor)};
  return Term::app(ds.start, {encode_list(ds, bits)});
}

}  // namespace consfree
