#include <gtest/gtest.h>

#include "consfree/analysis.hpp"
#include "consfree/trs_format.hpp"
#include "support.hpp"

using namespace consfree;

namespace {
const char* membership =
    "(VAR xs)(RULES start(nil) -> true start(cons(0,xs)) -> start(xs) start(cons(1,xs)) -> false)";
}

TEST(ConsFree, CounterexampleIsConsFree) {
  EXPECT_TRUE(check_cons_free(parse_trs("(VAR x) (RULES a -> a f(x) -> b)")).empty());
}

TEST(ConsFree, NewDataOnRhs) {
  auto v = check_cons_free(parse_trs("(VAR x) (RULES f(x) -> f(cons(x,nil)))"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, 3);
  EXPECT_EQ(v[0].subterm.to_string(), "cons(x,nil)");
}

TEST(ConsFree, NonLinearLhs) {
  auto v = check_cons_free(parse_trs("(VAR x) (RULES f(x,x) -> x)"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, 1);
}

TEST(ConsFree, DefinedSymbolInLhsArgument) {
  auto v = check_cons_free(parse_trs("(VAR x) (RULES g(x) -> x f(g(x)) -> x)"));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].condition, 2);
  EXPECT_EQ(v[0].rule_index, 1u);
}

TEST(ConsFree, StrictLhsSubtermAndGroundDataAllowed) {
  EXPECT_TRUE(check_cons_free(parse_trs("(VAR x xs) (RULES f(cons(x,xs)) -> g(cons(x,xs),cons(0,nil)) g(x,xs) -> x)"))
                  .empty());
  // The whole lhs argument list is not a strict subterm of itself at the root.
  EXPECT_FALSE(check_cons_free(parse_trs("(VAR x) (RULES f(x) -> cons(x,x))")).empty());
}

TEST(ConsFree, ReportsEveryViolation) {
  auto v = check_cons_free(parse_trs("(VAR x) (RULES f(x,x) -> cons(x,nil) g(x) -> s(x))"));
  EXPECT_EQ(v.size(), 3u);
}

TEST(Dv, Examples) {
  auto trs = parse_trs("(VAR x y ys) (RULES f(x,cons(y,ys)) -> x a -> a g(x,y) -> x)");
  EXPECT_EQ(dv(trs.rules()[0].lhs), (std::set<std::string>{"x"}));
  EXPECT_TRUE(dv(trs.rules()[1].lhs).empty());
  EXPECT_EQ(dv(trs.rules()[2].lhs), (std::set<std::string>{"x", "y"}));
  EXPECT_THROW(dv(Term::var("x")), MalformedLhs);
}

TEST(SemiLinear, Examples) {
  auto trs = parse_trs("(VAR x xs) (RULES f(x) -> b h(x) -> g(x,x) k(cons(x,xs)) -> g(x,x) g(x,xs) -> x)");
  EXPECT_TRUE(check_semi_linear(trs.rules()[0]));
  EXPECT_FALSE(check_semi_linear(trs.rules()[1]));
  EXPECT_TRUE(check_semi_linear(trs.rules()[2]));
}

TEST(Constrained, DuplicationIntoProjection) {
  auto rep = check_constrained(parse_trs("(VAR x y) (RULES f(x) -> g(x,x) g(x,y) -> x)"));
  ASSERT_TRUE(rep.ok());
  EXPECT_EQ(rep.witness()->a_set, (std::set<std::string>{"g"}));
}

TEST(Constrained, SemiLinearSystem) {
  auto rep = check_constrained(parse_trs(membership));
  ASSERT_TRUE(rep.ok());
  EXPECT_TRUE(rep.witness()->a_set.empty());
  EXPECT_TRUE(check_constrained(parse_trs("(VAR x) (RULES a -> a f(x) -> b)")).witness()->a_set.empty());
}

TEST(Constrained, SelfDuplication) {
  auto trs = parse_trs("(VAR x y) (RULES f(x) -> f(g(x,x)) g(x,y) -> x)");
  auto rep = check_constrained(trs);
  EXPECT_FALSE(rep.ok());
  EXPECT_EQ(rep.required, (std::set<std::string>{"f", "g"}));
  EXPECT_EQ(rep.forcing_rules, (std::vector<std::size_t>{0}));
  EXPECT_FALSE(rep.witness());
}

TEST(Constrained, AgreesWithExhaustiveSearch) {
  for (const auto& sys : consfree::testing::load_corpus()) {
    if (!check_cons_free(sys.trs).empty()) continue;
    auto rep = check_constrained(sys.trs);
    EXPECT_EQ(rep.ok(), consfree::testing::constrained_by_search(sys.trs)) << sys.name;
    if (rep.ok()) EXPECT_TRUE(consfree::testing::witness_holds(sys.trs, rep.witness()->a_set)) << sys.name;
  }
}

TEST(Constrained, ConstructorAboveDirectVariableIsALogicError) {
  EXPECT_THROW(check_constrained(parse_trs("(VAR x) (RULES f(x) -> s(x))")), std::logic_error);
}

TEST(ComputeB, MembershipStart) {
  auto trs = parse_trs(membership);
  auto b = compute_B(trs, parse_term(trs, "start(cons(1,nil))"));
  std::set<std::string> got;
  for (const auto& t : b.items()) got.insert(t.to_string());
  // 0 occurs only on left-hand sides, so it is not in B.
  EXPECT_EQ(got, (std::set<std::string>{"cons(1,nil)", "1", "nil", "true", "false"}));
  EXPECT_EQ(b[0].to_string(), "cons(1,nil)");
}

TEST(ComputeB, NoRhsData) {
  auto trs = parse_trs("(VAR xs) (RULES start(xs) -> start(xs))");
  auto b = compute_B(trs, encode_input(trs, ""));
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].to_string(), "nil");
}

TEST(ComputeB, Deduplicates) {
  auto trs = parse_trs("(VAR x y) (RULES f(x,y) -> x)");
  auto nil = make_symbol("nil", 0, SymbolKind::constructor);
  auto s = Term::app(trs.symbol("f"), {Term::app(nil), Term::app(nil)});
  EXPECT_EQ(compute_B(trs, s).size(), 1u);
}

TEST(ComputeB, SubtermClosedAndLinear) {
  auto trs = parse_trs(membership);
  std::size_t prev = 0;
  for (std::size_t n = 1; n <= 20; ++n) {
    auto b = compute_B(trs, encode_input(trs, std::string(n, '0')));
    for (const auto& t : b.items())
      for (const auto& u : subterms(t)) EXPECT_TRUE(b.contains(u));
    // Each extra input bit adds one list suffix.
    if (prev) EXPECT_EQ(b.size(), prev + 1);
    prev = b.size();
  }
}

TEST(BSafe, Examples) {
  auto trs = parse_trs(membership);
  auto b = compute_B(trs, parse_term(trs, "start(cons(1,nil))"));
  for (const auto& t : b.items()) EXPECT_TRUE(is_b_safe(b, t));
  EXPECT_TRUE(is_b_safe(b, parse_term(trs, "start(nil)")));
  EXPECT_TRUE(is_b_safe(b, parse_term(trs, "start(start(cons(1,nil)))")));
  auto truecons = Term::app(trs.symbol("cons"), {Term::app(trs.symbol("true")), Term::app(trs.symbol("nil"))});
  EXPECT_FALSE(is_b_safe(b, truecons));
  EXPECT_FALSE(is_b_safe(b, parse_term(trs, "start(cons(0,nil))")));
}
