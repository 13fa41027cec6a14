#include <gtest/gtest.h>

#include "lexcon/program.hpp"
#include "lexcon/render.hpp"
#include "random_terms.hpp"

using namespace lexcon;

namespace {

SortTable tree() {
  SortTable t;
  auto sign = *t.declare(Symbol("sign"));
  auto verbal = *t.declare(Symbol("verbal"), sign);
  t.declare(Symbol("finite"), verbal);
  t.declare(Symbol("noun"), sign);
  return t;
}

}  // namespace

TEST(SortTable, MeetPicksTheMoreSpecificSort) {
  SortTable t = tree();
  EXPECT_EQ(t.name(*t.meet("verbal", "finite")).str(), "finite");
  EXPECT_EQ(t.name(*t.meet("finite", "sign")).str(), "finite");
  EXPECT_EQ(t.name(*t.meet("top", "noun")).str(), "noun");
  EXPECT_EQ(t.name(*t.meet("noun", "noun")).str(), "noun");
}

TEST(SortTable, IncomparableSortsHaveNoMeet) {
  SortTable t = tree();
  EXPECT_FALSE(t.meet("noun", "verbal"));
  EXPECT_FALSE(t.meet("noun", "finite"));
}

TEST(SortTable, DuplicateAndUnknownSorts) {
  SortTable t = tree();
  EXPECT_FALSE(t.declare(Symbol("noun")));
  EXPECT_THROW(t.lookup("adverb"), ConfigError);
  EXPECT_TRUE(t.subsumed_by(t.lookup("finite"), t.lookup("sign")));
  EXPECT_FALSE(t.subsumed_by(t.lookup("sign"), t.lookup("finite")));
}

class StoreTest : public ::testing::Test {
 protected:
  SortTable sorts = tree();
  Store s{sorts};
};

TEST_F(StoreTest, UnifyBindsVariablesBothWays) {
  TermRef x = s.var(), y = s.var();
  TermRef a = s.atom("arie");
  ASSERT_TRUE(s.unify(x, y));
  ASSERT_TRUE(s.unify(a, y));
  EXPECT_TRUE(s.identical(x, a));
  EXPECT_FALSE(s.unify(x, s.atom("bob")));
}

TEST_F(StoreTest, AvmUnificationMergesOpenFeatureSets) {
  TermRef x = s.var();
  TermRef left = s.avm("verbal", {{"lex", s.atom("wil")}});
  TermRef right = s.avm("finite", {{"sc", x}});
  ASSERT_TRUE(s.unify(left, right));
  EXPECT_EQ(render_avm(s, left), "@finite{lex: wil, sc: _1}");
  EXPECT_TRUE(s.identical(*s.feature(left, Symbol("sc")), x));
}

TEST_F(StoreTest, AvmClashOnSortOrFeatureValue) {
  TermRef n = s.avm("noun", {});
  TermRef v = s.avm("verbal", {});
  Store before = s;
  EXPECT_FALSE(s.unify(n, v));
  EXPECT_TRUE(s.same_state(before));
  TermRef p = s.avm("sign", {{"lex", s.atom("a")}});
  TermRef q = s.avm("sign", {{"lex", s.atom("b")}});
  EXPECT_FALSE(s.unify(p, q));
}

TEST_F(StoreTest, OccursCheckRejectsCyclicBinding) {
  TermRef x = s.var();
  TermRef l = s.cons(s.atom("a"), x);
  EXPECT_FALSE(s.unify(x, l));
  s.set_occurs_check(false);
  EXPECT_TRUE(s.unify(x, l));
}

TEST_F(StoreTest, UndoRestoresEarlierState) {
  TermRef x = s.var();
  TermRef t = s.avm("sign", {{"sc", x}});
  Store before = s;
  Mark m = s.mark();
  ASSERT_TRUE(s.unify(t, s.avm("verbal", {{"sc", s.list({s.atom("a")})}})));
  EXPECT_FALSE(s.is_var(x));
  s.undo_to(m);
  EXPECT_TRUE(s.is_var(x));
  EXPECT_TRUE(s.same_state(before));
}

TEST_F(StoreTest, CopyTermRenamesButKeepsSharing) {
  TermRef x = s.var();
  TermRef t = s.structure("p", {x, x, s.var()});
  TermRef c = s.copy_term(t);
  EXPECT_EQ(render_avm(s, c), "p(_1, _1, _2)");
  const auto& args = std::get<StructCell>(s.at(c)).args;
  EXPECT_FALSE(s.identical(args[0], x));
  EXPECT_TRUE(s.identical(args[0], args[1]));
}

TEST_F(StoreTest, FreshListAndPaths) {
  TermRef l = s.fresh_list(3);
  auto items = s.list_items(l);
  ASSERT_TRUE(items);
  EXPECT_EQ(items->size(), 3u);
  TermRef sign = s.avm("sign", {{"subj", s.avm("sign", {{"lex", s.atom("arie")}})}});
  EXPECT_EQ(*s.atom_name(*s.path(sign, {"subj", "lex"})), Symbol("arie"));
  EXPECT_FALSE(s.path(sign, {"subj", "sem"}));
  EXPECT_FALSE(s.list_items(s.cons(s.atom("a"), s.var())));
}

TEST(UnificationLaws, HoldOverRandomTerms) {
  auto v = randterm::check_unification_laws(20240611u, 1500);
  EXPECT_EQ(v.cases, 1500u);
  for (const auto& m : v.messages) ADD_FAILURE() << m;
}
