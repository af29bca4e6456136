#include <gtest/gtest.h>

#include "consfree/transforms.hpp"
#include "consfree/trs_format.hpp"

using namespace consfree;

TEST(ParseTrs, CounterexampleSystem) {
  auto trs = parse_trs("(VAR x) (RULES f(x) -> b  a -> a)");
  ASSERT_EQ(trs.rules().size(), 2u);
  EXPECT_EQ(trs.rules()[0].to_string(), "f(x) -> b");
  EXPECT_EQ(trs.rules()[1].to_string(), "a -> a");
  std::set<std::string> d, c;
  for (const auto& s : trs.defined()) d.insert(s->name);
  for (const auto& s : trs.constructors()) c.insert(s->name);
  EXPECT_EQ(d, (std::set<std::string>{"f", "a"}));
  EXPECT_EQ(c, (std::set<std::string>{"b"}));
}

TEST(ParseTrs, Empty) {
  auto trs = parse_trs("(VAR) (RULES)");
  EXPECT_TRUE(trs.rules().empty());
  EXPECT_TRUE(trs.signature().empty());
}

TEST(ParseTrs, ArityMismatch) {
  try {
    parse_trs("(VAR x) (RULES f(x) -> g(x,x)\n g(x) -> x)");
    FAIL() << "expected an arity mismatch";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.kind(), ParseError::Kind::arity_mismatch);
    EXPECT_EQ(e.span().line, 2u);
  }
}

TEST(ParseTrs, ErrorKinds) {
  auto kind_of = [](const std::string& text) {
    try {
      parse_trs(text);
    } catch (const ParseError& e) {
      return e.kind();
    }
    return ParseError::Kind::invalid_input;
  };
  EXPECT_EQ(kind_of("(VAR x) (RULES x -> a)"), ParseError::Kind::variable_lhs);
  EXPECT_EQ(kind_of("(VAR x y) (RULES f(x) -> y)"), ParseError::Kind::unbound_rhs_variable);
  EXPECT_EQ(kind_of("(VAR x) (RULES f(x) -> )"), ParseError::Kind::syntax);
  EXPECT_EQ(kind_of("(RULES f(x) -> x"), ParseError::Kind::syntax);
}

TEST(ParseTrs, CommentsAreIgnored) {
  auto trs = parse_trs("; header\n(VAR x) ; vars\n(RULES\n  f(x) -> x ; identity\n)");
  EXPECT_EQ(trs.rules().size(), 1u);
}

TEST(PrintTrs, EmptySystem) { EXPECT_EQ(print_trs(parse_trs("(VAR) (RULES)")), "(VAR)\n(RULES\n)"); }

TEST(PrintTrs, RoundTripCounterexample) {
  auto trs = parse_trs("(VAR x) (RULES f(x) -> b  a -> a)");
  auto again = parse_trs(print_trs(trs));
  ASSERT_EQ(again.rules().size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_TRUE(equal_up_to_renaming(trs.rules()[i], again.rules()[i]));
}

TEST(PrintTrs, RoundTripSemiLinearized) {
  auto trs = parse_trs(
      "(VAR x y xs)(RULES start(nil) -> f(nil,nil) start(cons(x,xs)) -> f(cons(x,xs),nil)"
      " f(x,y) -> g(x,g(y,x)) g(x,y) -> x)");
  auto bullet = semi_linearize(trs);
  auto again = parse_trs(print_trs(bullet));
  ASSERT_EQ(again.rules().size(), bullet.rules().size());
  for (std::size_t i = 0; i < again.rules().size(); ++i)
    EXPECT_TRUE(equal_up_to_renaming(bullet.rules()[i], again.rules()[i])) << i;
}

TEST(PrintTrs, VariableNamedLikeSymbolIsRenamed) {
  auto f = make_symbol("f", 1, SymbolKind::defined);
  auto b = make_symbol("b", 0, SymbolKind::constructor);
  Trs trs({f, b}, {Rule(Term::app(f, {Term::var("b")}), Term::var("b"))});
  auto again = parse_trs(print_trs(trs));
  ASSERT_EQ(again.rules().size(), 1u);
  EXPECT_TRUE(again.rules()[0].rhs.is_var());
}

TEST(EncodeInput, Examples) {
  EXPECT_EQ(encode_input("").to_string(), "start(nil)");
  EXPECT_EQ(encode_input("01").to_string(), "start(cons(0,cons(1,nil)))");
  EXPECT_EQ(encode_input("1").to_string(), "start(cons(1,nil))");
  EXPECT_THROW(encode_input("012"), ParseError);
}

TEST(EncodeInput, UsesSystemSymbols) {
  auto trs = parse_trs("(VAR xs)(RULES start(nil) -> true start(cons(0,xs)) -> start(xs) start(cons(1,xs)) -> false)");
  auto t = encode_input(trs, "10");
  EXPECT_EQ(t.to_string(), "start(cons(1,cons(0,nil)))");
  EXPECT_EQ(&t.head(), trs.symbol("start").get());
}

TEST(DecisionInterface, StartMustBeUnaryDefined) {
  EXPECT_FALSE(has_decision_interface(parse_trs("(VAR x)(RULES f(x) -> x)")));
  EXPECT_TRUE(has_decision_interface(parse_trs("(VAR x)(RULES start(x) -> true)")));
  EXPECT_THROW(decision_symbols(parse_trs("(VAR x y)(RULES start(x,y) -> true)")), DecisionInterfaceError);
}
