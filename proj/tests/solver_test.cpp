#include <gtest/gtest.h>

#include <algorithm>

#include "naive_interpreter.hpp"
#include "support.hpp"

using namespace lexcon;

namespace {

const Program& grammar() { return support::shipped().program(); }

struct QueryRun {
  Store store{grammar().sorts()};
  Query q;
  explicit QueryRun(std::string_view text) : q(parse_query(grammar(), store, text)) {}
  TermRef var(std::string_view n) const { return *q.var(n); }
  StreamEnd solve(const SolutionHandler& h, Limits l = {}) {
    return Solver(grammar(), store).solve(q.goals, l, h);
  }
};

std::string joint(const Store& s, const Query& q) {
  std::vector<TermRef> vals;
  for (const auto& [n, v] : q.variables) vals.push_back(v);
  std::string row;
  for (const auto& r : AvmWriter(s).render_all(vals)) row += r + " ; ";
  return row;
}

}  // namespace

TEST(Concat, ProperFirstListSucceedsOnce) {
  SolveReport r = solve_text(grammar(), "concat([A, B], C, D)");
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].bindings[3].second, "⟨A, B | C⟩");
  EXPECT_TRUE(r.solutions[0].unconditional());
  EXPECT_EQ(r.end, StreamEnd::exhausted);
}

TEST(Concat, PartialThirdListGivesTheTwoOutcomes) {
  QueryRun run("concat(A, [Sj], [B | C])");
  std::vector<std::string> residues;
  int n = 0;
  run.solve([&](Store& s) {
    ++n;
    if (n == 1) {
      EXPECT_TRUE(s.is_nil(run.var("A")));
      EXPECT_TRUE(s.is_nil(run.var("C")));
      EXPECT_TRUE(s.identical(run.var("Sj"), run.var("B")));
      EXPECT_TRUE(s.residue().empty());
    } else {
      const auto* a = std::get_if<ConsCell>(&s.at(run.var("A")));
      EXPECT_TRUE(a && s.identical(a->head, run.var("B")));
      EXPECT_FALSE(s.identical(run.var("Sj"), run.var("B")));
      auto res = s.residue();
      EXPECT_EQ(res.size(), 1u);
      if (a && res.size() == 1) {
        const auto& g = std::get<StructCell>(s.at(res[0]));
        EXPECT_EQ(g.functor, Symbol("concat"));
        EXPECT_TRUE(s.identical(g.args[0], a->tail));
        EXPECT_TRUE(s.identical(g.args[2], run.var("C")));
      }
    }
    return true;
  });
  EXPECT_EQ(n, 2);
}

TEST(Concat, AllUnboundSuspendsTheGoalItself) {
  SolveReport r = solve_text(grammar(), "concat(X, Y, Z)");
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].residue, std::vector<std::string>{"concat(X, Y, Z)"});
}

TEST(Wake, BindingResumesTheSuspendedGoal) {
  SolveReport r = solve_text(grammar(), "concat(X, [a], Y), X = []");
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].bindings[1].second, "⟨a⟩");
  EXPECT_TRUE(r.solutions[0].unconditional());
}

TEST(Wake, GoalsOnOneVariableResumeInSuspensionOrder) {
  struct Order : Observer {
    std::vector<std::string> woken;
    void on_wake(const Store& s, TermRef g) override { woken.push_back(render_avm(s, g)); }
  } order;
  SolveReport r = solve_text(grammar(), "concat(X, [first], Y), concat(X, [second], Z), X = []",
                             {}, &order);
  ASSERT_EQ(r.solutions.size(), 1u);
  ASSERT_EQ(order.woken.size(), 2u);
  EXPECT_NE(order.woken[0].find("first"), std::string::npos);
  EXPECT_NE(order.woken[1].find("second"), std::string::npos);
}

TEST(Wake, WokenGoalsRunBeforeTheRestOfTheGoalList) {
  struct Calls : Observer {
    std::vector<std::string> names;
    void on_call(const Store& s, TermRef g, std::size_t) override {
      names.push_back(ProgramBuilder::goal_id(s, g)->str());
    }
  } calls;
  SolveReport r = solve_text(grammar(), "concat(X, [a], Y), X = [], true", {}, &calls);
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(calls.names, (std::vector<std::string>{"concat/3", "=/2", "concat/3", "true/0"}));
}

TEST(AddAdj, EnumeratesInsertionsOnceTheSkeletonIsKnown) {
  QueryRun run("add_adj([@noun{lex: bob}], L, S, T), L = [E1, E2]");
  std::vector<std::string> shapes;
  run.solve([&](Store& s) {
    EXPECT_TRUE(s.residue().empty());
    std::string shape;
    TermRef adv{};
    for (auto e : {run.var("E1"), run.var("E2")}) {
      if (s.has_sort(e, "adverbial")) {
        shape += "adv ";
        adv = e;
      } else {
        shape += "bob ";
      }
    }
    shapes.push_back(shape);
    EXPECT_TRUE(s.identical(*s.path(adv, {"mod", "arg"}), run.var("S")));
    EXPECT_TRUE(s.identical(*s.path(adv, {"mod", "val"}), run.var("T")));
    return true;
  });
  EXPECT_EQ(shapes, (std::vector<std::string>{"bob adv ", "adv bob "}));
}

TEST(AddAdj, EqualLengthSkeletonCopies) {
  SolveReport r = solve_text(grammar(), "add_adj([a, b], [X, Y], S, T)");
  ASSERT_EQ(r.solutions.size(), 1u);
  EXPECT_EQ(r.solutions[0].bindings[0].second, "a");
  EXPECT_EQ(r.solutions[0].bindings[1].second, "b");
  EXPECT_EQ(r.solutions[0].bindings[3].second, r.solutions[0].bindings[2].second);
}

TEST(AddAdj, ThreadsSemanticsInListOrder) {
  QueryRun run("add_adj([], [A1, A2], S0, S2)");
  int n = 0;
  run.solve([&](Store& s) {
    ++n;
    TermRef a1 = run.var("A1"), a2 = run.var("A2");
    EXPECT_TRUE(s.identical(*s.path(a1, {"mod", "arg"}), run.var("S0")));
    EXPECT_TRUE(s.identical(*s.path(a1, {"mod", "val"}), *s.path(a2, {"mod", "arg"})));
    EXPECT_TRUE(s.identical(*s.path(a2, {"mod", "val"}), run.var("S2")));
    return true;
  });
  EXPECT_EQ(n, 1);
}

TEST(Residue, UninstantiatedSubcatLeavesAddAdjPending) {
  SolveReport r = solve_text(grammar(), "lexical_entry(kussen, finite, S)");
  ASSERT_FALSE(r.solutions.empty());
  const auto& res = r.solutions[0].residue;
  EXPECT_TRUE(std::any_of(res.begin(), res.end(),
                          [](const std::string& g) { return g.rfind("add_adj(", 0) == 0; }));
}

TEST(Limits, DepthLimitTruncatesAndRestores) {
  Program p = std::move(load_program("loop(X) :- loop(X).").value());
  Store s(p.sorts());
  Query q = parse_query(p, s, "loop(a)");
  Store before = s;
  Limits l;
  l.max_depth = 50;
  EXPECT_EQ(Solver(p, s).solve(q.goals, l, [](Store&) { return true; }), StreamEnd::truncated);
  EXPECT_TRUE(s.same_state(before));
}

TEST(Limits, MaxSolutionsAndConsumerStop) {
  Limits l;
  l.max_solutions = 2;
  SolveReport r = solve_text(grammar(), "select_elem(X, [a, b, c], R)", l);
  EXPECT_EQ(r.solutions.size(), 2u);
  EXPECT_EQ(r.end, StreamEnd::stopped);

  QueryRun run("select_elem(X, [a, b, c], R)");
  int seen = 0;
  EXPECT_EQ(run.solve([&](Store&) { return ++seen < 1; }), StreamEnd::stopped);
  EXPECT_EQ(seen, 1);
}

TEST(Errors, UndefinedPredicateRaises) {
  EXPECT_THROW(solve_text(grammar(), "no_such_thing(a)"), SolveError);
}

TEST(Purity, ExhaustedSearchLeavesTheStoreAsItWas) {
  for (const char* query : {"concat(A, [Sj], [B | C])", "add_adj([n], [X, Y, Z], S, T)",
                            "lexical_entry(willen, finite, @finite{sc: [V, Adv, N1, N2]})",
                            "concat(X, Y, Z)"}) {
    QueryRun run(query);
    Store before = run.store;
    run.solve([](Store&) { return true; });
    EXPECT_TRUE(run.store.same_state(before)) << query;
  }
}

TEST(Reentrancy, NestedSolveSeesOuterBindings) {
  QueryRun run("select_elem(X, [a, b], R)");
  std::vector<std::string> pairs;
  run.solve([&](Store& s) {
    TermRef inner = s.structure("select_elem", {s.var(), run.var("R"), s.var()});
    Store before = s;
    Solver(grammar(), s).solve(inner, {}, [&](Store& t) {
      pairs.push_back(render_avm(t, run.var("X")) + render_avm(t, inner));
      return true;
    });
    EXPECT_TRUE(s.same_state(before));
    return true;
  });
  EXPECT_EQ(pairs, (std::vector<std::string>{"aselect_elem(b, ⟨b⟩, ⟨⟩)",
                                             "bselect_elem(a, ⟨a⟩, ⟨⟩)"}));
}

TEST(Blocking, NoGoalResolvedWhileBlocked) {
  support::BlockAudit audit(grammar());
  for (const char* query : {"concat(A, [Sj], [B | C])", "add_adj([n], L, S, T), L = [X, Y]",
                            "lexical_entry(willen, finite, @finite{sc: [V, Adv, N1, N2]})"}) {
    solve_text(grammar(), query, {}, &audit);
  }
  EXPECT_GT(audit.suspended, 0u);
  EXPECT_GT(audit.woken, 0u);
  EXPECT_TRUE(audit.violations.empty()) << audit.violations.front();
}

// Queries whose delayed solutions are all residue-free must have the same
// solutions as plain resolution without delays.
class DelaySoundness : public ::testing::TestWithParam<const char*> {};

TEST_P(DelaySoundness, MatchesNaiveInterpreter) {
  const char* query = GetParam();
  Store s(grammar().sorts());
  Query q = parse_query(grammar(), s, query);
  std::vector<std::string> delayed;
  bool residue = false;
  Solver(grammar(), s).solve(q.goals, {}, [&](Store& st) {
    residue = residue || !st.residue().empty();
    delayed.push_back(joint(st, q));
    return true;
  });
  ASSERT_FALSE(residue);
  auto naive = naive::solutions(grammar(), query, 14);
  std::sort(delayed.begin(), delayed.end());
  std::sort(naive.begin(), naive.end());
  EXPECT_EQ(delayed, naive);
}

INSTANTIATE_TEST_SUITE_P(
    Queries, DelaySoundness,
    ::testing::Values("concat([a, b], [c], Z)", "concat(X, Y, [a, b, c])",
                      "concat(X, [c], Y), X = [a, b]", "concat(X, [c], [a, b, c])",
                      "concat(X, Y, Z), Z = [a]", "add_adj([n], L, s0, T), L = [E1, E2]",
                      "add_adj([n, m], L, s0, T), L = [E1, E2, E3]",
                      "add_adj(A, L, s0, T), L = [E], A = []",
                      "select_elem(X, [a, b, c], R)", "select_elem(X, L, [b]), L = [P, Q]"));
