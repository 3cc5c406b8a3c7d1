#include <gtest/gtest.h>

#include "groundfsa/formula.hpp"
#include "support/generators.hpp"

using namespace groundfsa;
using groundfsa::testing::Rng;

namespace {

BoolValuation bools(std::initializer_list<std::pair<const std::string, bool>> init) { return BoolValuation(init); }
TriValuation tris(std::initializer_list<std::pair<const std::string, TriBool>> init) { return TriValuation(init); }

constexpr auto T = TriBool::True;
constexpr auto F = TriBool::False;
constexpr auto U = TriBool::Unknown;

}  // namespace

TEST(Classical, ConjunctionOfTrues) {
  EXPECT_TRUE(eval_classical(parse_formula("green & at_pc"), bools({{"green", true}, {"at_pc", true}})));
}

TEST(Classical, DeMorganDual) {
  EXPECT_FALSE(eval_classical(parse_formula("!green | !at_pc"), bools({{"green", true}, {"at_pc", true}})));
}

TEST(Classical, Contradiction) {
  const auto f = parse_formula("green & !green");
  EXPECT_FALSE(eval_classical(f, bools({{"green", true}})));
  EXPECT_FALSE(eval_classical(f, bools({{"green", false}})));
}

TEST(Classical, UncDefaultsFalse) {
  EXPECT_FALSE(eval_classical(parse_formula("UNC"), {}));
  EXPECT_TRUE(eval_classical(parse_formula("UNC"), {}, true));
}

TEST(Classical, UnboundAtomNamed) {
  try {
    eval_classical(parse_formula("green & car"), bools({{"green", true}}));
    FAIL() << "expected UnboundAtom";
  } catch (const UnboundAtom& e) {
    EXPECT_EQ(e.atom(), "car");
  }
}

TEST(Kleene, AtomPassthrough) { EXPECT_EQ(eval_three_valued(parse_formula("green"), tris({{"green", U}})), U); }

TEST(Kleene, UncOrNotGreenUnderUncertainGreen) {
  EXPECT_EQ(eval_three_valued(parse_formula("UNC | !green"), tris({{"green", U}})), T);
}

TEST(Kleene, FalseDominatesConjunction) {
  EXPECT_EQ(eval_three_valued(parse_formula("green & at_pc"), tris({{"green", F}, {"at_pc", U}})), F);
}

TEST(Kleene, UncIsFalseWhenEverythingDefinite) {
  EXPECT_EQ(eval_three_valued(parse_formula("UNC"), tris({{"green", T}, {"at_pc", F}})), F);
  EXPECT_EQ(eval_three_valued(parse_formula("UNC"), {}), F);
}

TEST(Kleene, TruthTables) {
  const TriBool vals[] = {F, T, U};
  // Expected strong Kleene tables, written out by hand.
  const TriBool and_table[3][3] = {{F, F, F}, {F, T, U}, {F, U, U}};
  const TriBool or_table[3][3] = {{F, T, U}, {T, T, T}, {U, T, U}};
  const TriBool not_table[3] = {T, F, U};
  const auto f_and = parse_formula("a & b");
  const auto f_or = parse_formula("a | b");
  const auto f_not = parse_formula("!a");
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(eval_three_valued(f_not, tris({{"a", vals[i]}})), not_table[i]);
    for (int j = 0; j < 3; ++j) {
      const auto v = tris({{"a", vals[i]}, {"b", vals[j]}});
      // UNC does not occur, so the derived atom cannot interfere.
      EXPECT_EQ(eval_three_valued(f_and, v), and_table[i][j]) << i << "," << j;
      EXPECT_EQ(eval_three_valued(f_or, v), or_table[i][j]) << i << "," << j;
    }
  }
}

TEST(Kleene, ReducesToClassicalOnDefiniteValuations) {
  Rng rng(1);
  const auto names = groundfsa::testing::numbered("x", 5);
  for (int i = 0; i < 300; ++i) {
    const auto f = groundfsa::testing::random_formula(rng, names, 4);
    for (unsigned bits = 0; bits < 32; ++bits) {
      BoolValuation b;
      TriValuation t;
      for (std::size_t k = 0; k < names.size(); ++k) {
        b[names[k]] = ((bits >> k) & 1U) != 0;
        t[names[k]] = to_tribool(b[names[k]]);
      }
      ASSERT_EQ(eval_three_valued(f, t), to_tribool(eval_classical(f, b))) << to_string(f);
    }
  }
}

TEST(Kleene, MonotoneInInformation) {
  // Refining an Unknown to a definite value never flips a definite result.
  Rng rng(2);
  const auto names = groundfsa::testing::numbered("x", 4);
  for (int i = 0; i < 300; ++i) {
    const auto f = groundfsa::testing::random_formula(rng, names, 4);
    TriValuation partial;
    for (const auto& n : names) partial[n] = static_cast<TriBool>(groundfsa::testing::pick(rng, 3));
    const TriBool coarse = detail::eval_kleene(f, partial, TriBool::False);
    if (coarse == U) continue;
    TriValuation fine = partial;
    for (auto& [_, v] : fine) {
      if (v == U) v = to_tribool(groundfsa::testing::coin(rng));
    }
    ASSERT_EQ(detail::eval_kleene(f, fine, TriBool::False), coarse) << to_string(f);
  }
}

TEST(Parser, PrecedenceNotAndOr) {
  const auto f = parse_formula("!a & b | c");
  EXPECT_TRUE(logically_equivalent(f, parse_formula("((!a) & b) | c")));
  EXPECT_FALSE(logically_equivalent(f, parse_formula("!(a & (b | c))")));
}

TEST(Parser, ConstantsAndUnc) {
  EXPECT_TRUE(parse_formula("true").is_true());
  EXPECT_TRUE(parse_formula("false").is_false());
  EXPECT_TRUE(contains_unc(parse_formula("UNC | green")));
  EXPECT_FALSE(contains_unc(parse_formula("green")));
}

TEST(Parser, PrintParseRoundTripIsStructural) {
  Rng rng(3);
  const auto names = groundfsa::testing::numbered("p", 6);
  for (int i = 0; i < 500; ++i) {
    const auto f = groundfsa::testing::random_formula(rng, names, 5, true);
    const auto text = to_string(f);
    const auto g = parse_formula(text);
    ASSERT_TRUE(logically_equivalent(f, g)) << text;
    ASSERT_EQ(to_string(g), text);
  }
}

TEST(Parser, SyntaxErrorsCarryPositions) {
  try {
    parse_formula("green & (at_pc");
    FAIL();
  } catch (const SyntaxError& e) {
    EXPECT_EQ(e.position(), 14U);
  }
  EXPECT_THROW(parse_formula(""), SyntaxError);
  EXPECT_THROW(parse_formula("green &"), SyntaxError);
  EXPECT_THROW(parse_formula("Green"), SyntaxError);
  EXPECT_THROW(parse_formula("green green"), SyntaxError);
}

TEST(Parser, ActionAtomsOnlyWhenEnabled) {
  EXPECT_THROW(parse_formula("act:cross_road"), SyntaxError);
  const auto f = parse_formula("!(act:cross_road & !green)", ParseOptions{true});
  EXPECT_EQ(atoms(f), (std::set<std::string>{"act:cross_road", "green"}));
}

TEST(Construction, HelpersFoldConstants) {
  const auto a = Formula::atom("a");
  EXPECT_TRUE(make_and(a, Formula::constant(false)).is_false());
  EXPECT_EQ(make_and(a, Formula::constant(true)), a);
  EXPECT_TRUE(make_or(a, Formula::constant(true)).is_true());
  EXPECT_EQ(negate(negate(a)), a);
  EXPECT_TRUE(logically_equivalent(negate(parse_formula("a & b")), parse_formula("!a | !b")));
}

TEST(Construction, AtomsInFirstUseOrder) {
  std::vector<std::string> out;
  atoms_in_order(parse_formula("c & (a | !c) & b & UNC"), out);
  EXPECT_EQ(out, (std::vector<std::string>{"c", "a", "b"}));
}

TEST(Equivalence, TruthTableIncludesUnc) {
  EXPECT_TRUE(logically_equivalent(parse_formula("UNC | !green"), parse_formula("!(!UNC & green)")));
  EXPECT_FALSE(logically_equivalent(parse_formula("UNC | !green"), parse_formula("!green")));
}
