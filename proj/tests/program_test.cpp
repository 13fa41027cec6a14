#include <gtest/gtest.h>

#include "lexcon/grammar.hpp"
#include "lexcon/program.hpp"

using namespace lexcon;

namespace {

std::vector<Diagnostic> errors_of(const std::string& text) {
  LoadResult r = load_program(text, "g.grm");
  EXPECT_FALSE(r);
  return r.errors;
}

bool mentions(const std::vector<Diagnostic>& ds, int line, const std::string& fragment) {
  for (const auto& d : ds) {
    if (d.line == line && d.message.find(fragment) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(Loader, LoadsSortsBlocksAndClauses) {
  LoadResult r = load_program(
      "sort verbal < sign.\n"
      "sort sign.\n"
      ":- block app(-, ?, -).\n"
      "app([], L, L).\n"
      "app([H|T], L, [H|R]) :- app(T, L, R).\n");
  ASSERT_TRUE(r) << LoadError::summary(r.errors);
  const Program& p = *r.program;
  EXPECT_TRUE(p.sorts().subsumed_by(p.sorts().lookup("verbal"), p.sorts().lookup("sign")));
  EXPECT_EQ(p.clause_count(), 2u);
  const BlockSpec* spec = p.block({Symbol("app"), 3});
  ASSERT_NE(spec, nullptr);
  ASSERT_EQ(spec->patterns.size(), 1u);
  EXPECT_EQ(spec->patterns[0][0], ArgMode::dash);
  EXPECT_EQ(spec->patterns[0][1], ArgMode::question);
}

TEST(Loader, SyntaxErrorsCarryPositionsAndRecover) {
  auto ds = errors_of(
      "p(a).\n"
      "q(b :- r.\n"
      "s(c) :- .\n");
  ASSERT_GE(ds.size(), 2u);
  EXPECT_EQ(ds[0].origin, "g.grm");
  EXPECT_EQ(ds[0].line, 2);
  EXPECT_GT(ds[0].column, 0);
  EXPECT_TRUE(std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.line == 3; }));
}

TEST(Loader, UnknownSortIsReported) {
  auto ds = errors_of("p(@verbal{lex: a}).\n");
  EXPECT_TRUE(mentions(ds, 1, "verbal"));
}

TEST(Loader, DuplicateSortIsReported) {
  auto ds = errors_of("sort a.\nsort a.\n");
  EXPECT_TRUE(mentions(ds, 2, "a"));
}

TEST(Loader, UndefinedCallIsReported) {
  auto ds = errors_of("p(X) :-\n  q(X).\n");
  EXPECT_TRUE(mentions(ds, 2, "q/1"));
}

TEST(Loader, BlockForUndefinedPredicateIsReported) {
  auto ds = errors_of("p(a).\n:- block r(-).\n");
  EXPECT_TRUE(mentions(ds, 2, "r/1"));
}

TEST(Loader, DynamicDeclarationAllowsFactsFromElsewhere) {
  EXPECT_FALSE(load_program("p(X) :- word(X).\n"));
  EXPECT_TRUE(load_program(":- dynamic word/1.\np(X) :- word(X).\n"));
  LoadResult r = ProgramBuilder()
                     .add(":- dynamic word/1.\np(X) :- word(X).\n", "a")
                     .add("word(arie).\n", "b")
                     .build();
  ASSERT_TRUE(r);
  EXPECT_EQ(r.program->clauses({Symbol("word"), 1})->size(), 1u);
}

TEST(Loader, FeaturePathsAndQuotedAtoms) {
  Program p = std::move(load_program("sort sign.\nx(@sign{subj|sem|index: I, lex: 'op_te'}, I).\n").value());
  Store s(p.sorts());
  auto [head, body] = p.instantiate(p.clauses({Symbol("x"), 2})->at(0), s);
  const auto& args = std::get<StructCell>(s.at(head)).args;
  EXPECT_TRUE(s.identical(*s.path(args[0], {"subj", "sem", "index"}), args[1]));
  EXPECT_EQ(s.atom_name(*s.feature(args[0], Symbol("lex")))->str(), "op_te");
}

TEST(Loader, LoadErrorValueThrows) {
  LoadResult r = load_program("p(");
  EXPECT_THROW(r.value(), LoadError);
}

TEST(Query, ParsesGoalsAndNamesVariables) {
  Program p = std::move(load_program("p(a).").value());
  Store s(p.sorts());
  Query q = parse_query(p, s, "p(X), X = Y");
  EXPECT_EQ(q.goals.size(), 2u);
  ASSERT_TRUE(q.var("X"));
  ASSERT_TRUE(q.var("Y"));
  EXPECT_FALSE(q.var("Z"));
  EXPECT_THROW(parse_query(p, s, "p(@nosuchsort)"), LoadError);
}

TEST(Lexicon, ParsesEntriesAndDefaults) {
  Lexicon lex = Lexicon::parse(
      "# comment\n"
      "kussen\tverb\ttrans kiss-soa kus roles=kisser,kissed\n"
      "willen\tverb\taux want-soa wil finite=wil\n"
      "arie\tnoun\n"
      "op_tijd\tadv-restr\tin-time\n");
  ASSERT_TRUE(lex.verb("kussen"));
  EXPECT_EQ(lex.verb("kussen")->finite_form, "kust");
  EXPECT_EQ(lex.verb("willen")->roles, (std::vector<std::string>{"arg1", "arg2"}));
  EXPECT_EQ(lex.finite_verbs("wil").size(), 1u);
  EXPECT_TRUE(lex.is_dependent("arie"));
  EXPECT_TRUE(lex.known("kust"));
  EXPECT_FALSE(lex.known("kus"));
  EXPECT_EQ(lex.max_words(), 2u);
}

TEST(Lexicon, ReportsEveryBadLine) {
  try {
    Lexicon::parse("a\tverb\tfly x y\nb\tnoun\nb\tnoun\nc\tadjective\n", "t.lex");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    const auto& ds = e.diagnostics();
    ASSERT_EQ(ds.size(), 3u);
    EXPECT_EQ(ds[0].line, 1);
    EXPECT_EQ(ds[1].line, 3);
    EXPECT_EQ(ds[2].line, 4);
    EXPECT_EQ(ds[0].origin, "t.lex");
  }
}

TEST(Lexicon, ClauseErrorsPointIntoTheLexiconFile) {
  std::string lex = "\n\nslapen\tverb\tintrans no-such-soa slaap\n";
  try {
    Grammar::from_text(Grammar::read_file(LEXCON_DATA_DIR "/dutch.grm"), lex, {}, "g", "t.lex");
    FAIL() << "expected LoadError";
  } catch (const LoadError& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_EQ(e.diagnostics()[0].origin, "t.lex");
    EXPECT_EQ(e.diagnostics()[0].line, 3);
  }
}
