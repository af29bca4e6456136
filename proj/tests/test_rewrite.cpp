#include <gtest/gtest.h>

#include <random>

#include "consfree/rewrite.hpp"
#include "support.hpp"

using namespace consfree;

namespace {
const char* counterexample = "(VAR x) (RULES a -> a f(x) -> b)";
const char* membership =
    "(VAR xs)(RULES start(nil) -> true start(cons(0,xs)) -> start(xs) start(cons(1,xs)) -> false)";

std::set<std::pair<Position, std::size_t>> redexes(const std::vector<ReductionStep>& st) {
  std::set<std::pair<Position, std::size_t>> out;
  for (const auto& s : st) out.insert({s.position, s.rule_index});
  return out;
}
}  // namespace

TEST(StepFull, Counterexample) {
  auto trs = parse_trs(counterexample);
  auto st = step_full(trs, parse_term(trs, "f(a)"));
  ASSERT_EQ(st.size(), 2u);
  EXPECT_EQ(redexes(st), (std::set<std::pair<Position, std::size_t>>{{{1}, 0}, {{}, 1}}));
  for (const auto& s : st) {
    if (s.position.empty())
      EXPECT_EQ(s.after.to_string(), "b");
    else
      EXPECT_EQ(s.after.to_string(), "f(a)");
    EXPECT_EQ(s.before.to_string(), "f(a)");
  }
  // Pre-order: the root comes first.
  EXPECT_TRUE(st[0].position.empty());
}

TEST(StepFull, NormalFormAndNesting) {
  auto trs = parse_trs(counterexample);
  EXPECT_TRUE(step_full(trs, parse_term(trs, "b")).empty());
  auto st = step_full(trs, parse_term(trs, "f(f(a))"));
  EXPECT_EQ(st.size(), 3u);
  EXPECT_EQ(redexes(st), (std::set<std::pair<Position, std::size_t>>{{{}, 1}, {{1}, 1}, {{1, 1}, 0}}));
}

TEST(StepCbv, Counterexample) {
  auto trs = parse_trs(counterexample);
  auto st = step_cbv(trs, parse_term(trs, "f(a)"));
  ASSERT_EQ(st.size(), 1u);
  EXPECT_EQ(st[0].position, (Position{1}));
  EXPECT_EQ(st[0].after.to_string(), "f(a)");
}

TEST(StepCbv, DataArgumentAndDataTerm) {
  auto trs = parse_trs(counterexample);
  auto f = trs.symbol("f");
  auto nil = make_symbol("nil", 0, SymbolKind::constructor);
  auto st = step_cbv(trs, Term::app(f, {Term::app(nil)}));
  ASSERT_EQ(st.size(), 1u);
  EXPECT_TRUE(st[0].position.empty());
  EXPECT_EQ(st[0].after.to_string(), "b");
  EXPECT_TRUE(step_cbv(trs, parse_term(trs, "b")).empty());
}

TEST(StepCbv, SubsetOfFullSteps) {
  for (const auto& sys : consfree::testing::load_corpus()) {
    auto b = consfree::testing::corpus_b(sys);
    for (const auto& t : consfree::testing::b_safe_terms(sys.trs, b, 4)) {
      auto full = redexes(step_full(sys.trs, t));
      for (const auto& r : redexes(step_cbv(sys.trs, t))) EXPECT_TRUE(full.contains(r)) << t.to_string();
    }
  }
}

TEST(Reachable, Counterexample) {
  auto trs = parse_trs(counterexample);
  auto s = parse_term(trs, "f(a)");
  auto full = reachable_data(trs, s, Strategy::full);
  EXPECT_TRUE(full.complete);
  EXPECT_EQ(to_string(full.results), "{b}");
  EXPECT_EQ(full.explored, 2u);
  auto cbv = reachable_data(trs, s, Strategy::cbv);
  EXPECT_TRUE(cbv.complete);
  EXPECT_TRUE(cbv.results.empty());
  EXPECT_EQ(cbv.explored, 1u);
}

TEST(Reachable, DataStart) {
  auto trs = parse_trs(counterexample);
  auto r = reachable_data(trs, parse_term(trs, "b"), Strategy::cbv);
  EXPECT_TRUE(r.complete);
  EXPECT_EQ(r.explored, 1u);
  EXPECT_EQ(to_string(r.results), "{b}");
}

TEST(Reachable, Budgets) {
  auto trs = parse_trs(counterexample);
  EXPECT_THROW(reachable_data(trs, parse_term(trs, "f(a)"), Strategy::full, {0, 10}), BudgetError);
  auto r = reachable_data(trs, parse_term(trs, "f(a)"), Strategy::full, {1, 10});
  EXPECT_FALSE(r.complete);
  EXPECT_EQ(r.truncated_by, Truncation::step_budget);
  auto grow = parse_trs("(VAR x) (RULES f(x) -> g(f(x)) g(x) -> x)");
  auto nil = make_symbol("nil", 0, SymbolKind::constructor);
  auto g = reachable_data(grow, Term::app(grow.symbol("f"), {Term::app(nil)}), Strategy::cbv, {1000, 6});
  EXPECT_FALSE(g.complete);
  EXPECT_EQ(g.truncated_by, Truncation::size_budget);
}

TEST(Reachable, Deterministic) {
  for (const auto& sys : consfree::testing::load_corpus())
    for (const auto& s : sys.starts)
      EXPECT_EQ(reachable_data(sys.trs, s, Strategy::cbv), reachable_data(sys.trs, s, Strategy::cbv));
}

TEST(Reachable, FullContainsCbv) {
  for (const auto& sys : consfree::testing::load_corpus()) {
    for (const auto& s : sys.starts) {
      auto full = reachable_data(sys.trs, s, Strategy::full);
      auto cbv = reachable_data(sys.trs, s, Strategy::cbv);
      if (!full.complete || !cbv.complete) continue;
      EXPECT_TRUE(std::includes(full.results.begin(), full.results.end(), cbv.results.begin(), cbv.results.end()))
          << sys.name;
    }
  }
}

TEST(Accepts, Membership) {
  auto trs = parse_trs(membership);
  EXPECT_EQ(accepts(trs, "000", Strategy::cbv), Verdict::yes);
  EXPECT_EQ(accepts(trs, "010", Strategy::cbv), Verdict::no);
  EXPECT_EQ(accepts(trs, "", Strategy::full), Verdict::yes);
}

TEST(Accepts, StrategySensitivity) {
  auto trs = parse_trs("(VAR x xs) (RULES a -> a f(x) -> true start(xs) -> f(a))");
  EXPECT_EQ(accepts(trs, "01", Strategy::cbv), Verdict::no);
  EXPECT_EQ(accepts(trs, "01", Strategy::cbv, {1, 100}), Verdict::unknown);
  EXPECT_EQ(accepts(trs, "01", Strategy::full), Verdict::yes);
}

TEST(Trace, ExportAndMaterialize) {
  auto trs = parse_trs(membership);
  auto s = encode_input(trs, "00");
  auto tr = reduce(trs, s, Strategy::cbv, 10);
  ASSERT_EQ(tr.steps.size(), 3u);
  EXPECT_EQ(export_trace(trs, tr),
            "[] 1 start(cons(0,nil))\n"
            "[] 1 start(nil)\n"
            "[] 0 true\n");
  EXPECT_EQ(tr.materialize(trs).back().to_string(), "true");
}

TEST(Trace, RandomPickIsSeeded) {
  auto trs = parse_trs("(VAR x) (RULES coin -> true coin -> false f(x) -> x)");
  auto s = parse_term(trs, "f(coin)");
  auto a = reduce(trs, s, Strategy::full, 5, Pick::random, 42);
  auto b = reduce(trs, s, Strategy::full, 5, Pick::random, 42);
  EXPECT_EQ(a.steps, b.steps);
}

TEST(BSafety, PreservedAlongRandomTraces) {
  std::mt19937_64 rng(1);
  for (const auto& sys : consfree::testing::load_corpus()) {
    auto b = consfree::testing::corpus_b(sys);
    for (int i = 0; i < 100; ++i) {
      auto s = consfree::testing::random_b_safe(sys.trs, b, rng, 3);
      auto tr = reduce(sys.trs, s, Strategy::full, 30, Pick::random, rng());
      for (const auto& t : tr.materialize(sys.trs)) ASSERT_TRUE(is_b_safe(b, t)) << sys.name << ": " << t.to_string();
    }
  }
}
