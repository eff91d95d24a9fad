#include <gtest/gtest.h>

#include <random>

#include "dtrap/subfield.hpp"
#include "support/random_elements.hpp"

using namespace dtrap;
using dtrap::testing::random_rational;

namespace {

DiffPresentation pres(std::uint32_t p, std::vector<std::string> vars,
                      std::vector<std::vector<std::pair<std::string, std::string>>> images) {
  DiffPresentation d("E", p, static_cast<int>(images.size()), vars);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (auto& [v, e] : images[i]) d.set_image(static_cast<int>(i), v, e);
  d.check_complete();
  return d;
}

}  // namespace

TEST(DeriveTest, LeibnizOnProduct) {
  auto E = pres(2, {"a", "b"}, {{{"a", "a^3"}, {"b", "b^5"}}});
  EXPECT_EQ(derive(E.element("a*b"), 0, E), E.element("a^3*b + a*b^5"));
}

TEST(DeriveTest, NegativePowerInCharThree) {
  auto E = pres(3, {"T"}, {{{"T", "T^3"}}});
  EXPECT_EQ(derive(E.element("T^-2"), 0, E), E.element("1"));
}

TEST(DeriveTest, PthPowersAreConstants) {
  auto E = pres(5, {"x", "y"}, {{{"x", "x*y + 1"}, {"y", "1/x"}}});
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    Rational f = random_rational(rng, E.field(), E.vars(), 3);
    EXPECT_TRUE(derive(f.pow(5), 0, E).is_zero());
  }
}

TEST(DeriveTest, Iterates) {
  auto E = pres(2, {"a", "lambda", "lambda1", "lambda2"},
                {{{"a", "1"}, {"lambda", "lambda1"}, {"lambda1", "lambda2"}, {"lambda2", "?"}}});
  EXPECT_TRUE(derive_iter(E.element("a"), 0, 2, E).is_zero());
  EXPECT_EQ(derive_iter(E.element("lambda"), 0, 2, E), E.element("lambda2"));
  auto F = pres(2, {"a"}, {{{"a", "a^3"}}});
  EXPECT_EQ(derive_iter(F.element("a"), 0, 2, F), F.element("a^5"));
}

TEST(DeriveTest, OpaqueImageRaises) {
  auto E = pres(2, {"lambda", "lambda1"}, {{{"lambda", "lambda1"}, {"lambda1", "?"}}});
  try {
    derive_iter(E.element("lambda"), 0, 2, E);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DepthExceeded);
  }
  // the opaque image is not needed when the partial derivative vanishes
  EXPECT_TRUE(derive(E.element("lambda1^2"), 0, E).is_zero());
}

TEST(DeriveTest, UnknownImageVariable) {
  DiffPresentation d("E", 2, 1, std::vector<std::string>{"x"});
  EXPECT_THROW(d.set_image(0, "x", "y"), Error);
  EXPECT_THROW(d.check_complete(), Error);
}

TEST(DepthBudgetTest, ChainsAndCycles) {
  auto E = pres(2, {"a", "lambda", "lambda1", "lambda2", "lambda3"},
                {{{"a", "1"}, {"lambda", "lambda1"}, {"lambda1", "lambda2"}, {"lambda2", "lambda3"}, {"lambda3", "?"}}});
  DepthBudget b(E);
  EXPECT_EQ(b.of(Symbol::intern("a")), DepthBudget::kUnbounded);
  EXPECT_EQ(b.of(Symbol::intern("lambda")), 3);
  EXPECT_EQ(b.of(Symbol::intern("lambda3")), 0);
  EXPECT_EQ(b.of(E.element("a + lambda1")), 2);
  auto F = pres(2, {"a"}, {{{"a", "a^3"}}});
  EXPECT_EQ(DepthBudget(F).of(Symbol::intern("a")), DepthBudget::kUnbounded);
}

TEST(CommutationTest, Examples) {
  EXPECT_TRUE(check_commutation(pres(2, {"x"}, {{{"x", "1"}}})).is_true());
  auto good = pres(3, {"x", "y"}, {{{"x", "y"}, {"y", "0"}}, {{"x", "0"}, {"y", "0"}}});
  EXPECT_TRUE(check_commutation(good).is_true());
  auto bad = pres(3, {"x", "y"}, {{{"x", "y"}, {"y", "0"}}, {{"x", "x"}, {"y", "0"}}});
  auto v = check_commutation(bad);
  ASSERT_TRUE(v.is_false());
  ASSERT_EQ(v.witnesses.size(), 1u);
  auto& w = std::get<CommutationFailure>(v.witnesses[0]);
  EXPECT_EQ(w.var, "x");
  // d1(d2 x) = d1(x) = y while d2(d1 x) = d2(y) = 0
  EXPECT_EQ(w.ij, bad.element("y"));
  EXPECT_TRUE(w.ji.is_zero());
  EXPECT_TRUE(v.verify());
}

TEST(CommutationTest, OpaqueReportedUnchecked) {
  auto E = pres(2, {"x", "y"}, {{{"x", "y"}, {"y", "?"}}, {{"x", "0"}, {"y", "0"}}});
  auto v = check_commutation(E);
  EXPECT_TRUE(v.is_true());
  EXPECT_FALSE(v.notes.empty());
}

TEST(EmbeddingTest, Examples) {
  auto E = pres(2, {"a", "lambda"}, {{{"a", "1"}, {"lambda", "0"}}});
  auto K = pres(2, {"u"}, {{{"u", "1"}}});
  SubfieldDecl k{"K", K, {{Symbol::intern("u"), E.element("a")}}};
  EXPECT_TRUE(check_embedding(k, E).is_true());

  auto K2 = pres(2, {"u"}, {{{"u", "u"}}});
  SubfieldDecl k2{"K", K2, {{Symbol::intern("u"), E.element("a")}}};
  auto v = check_embedding(k2, E);
  ASSERT_TRUE(v.is_false());
  EXPECT_TRUE(std::holds_alternative<DerivationMismatch>(v.witnesses.at(0)));
  EXPECT_TRUE(v.verify());

  auto K3 = pres(2, {"u", "v"}, {{{"u", "1"}, {"v", "0"}}});
  SubfieldDecl k3{"K", K3, {{Symbol::intern("u"), E.element("a")}, {Symbol::intern("v"), E.element("a^2")}}};
  auto w = check_embedding(k3, E);
  ASSERT_TRUE(w.is_false());
  auto& ann = std::get<Annihilator>(w.witnesses.at(0));
  EXPECT_EQ(ann.polynomial.str(), "u^2 + v");
  EXPECT_TRUE(w.verify());
}

// Properties.

TEST(DerivationProperty, LeibnizAndQuotient) {
  std::mt19937_64 rng(31);
  for (std::uint32_t p : {2u, 3u, 5u}) {
    auto E = pres(p, {"x", "y", "z"}, {{{"x", "x^2 + y"}, {"y", "1/(x+1)"}, {"z", "z*x"}}});
    for (int i = 0; i < 25; ++i) {
      Rational f = random_rational(rng, E.field(), E.vars(), 2, 3), g = random_rational(rng, E.field(), E.vars(), 2, 3);
      EXPECT_EQ(derive(f * g, 0, E), derive(f, 0, E) * g + f * derive(g, 0, E));
      EXPECT_EQ(derive(f + g, 0, E), derive(f, 0, E) + derive(g, 0, E));
      if (!f.is_zero()) {
        EXPECT_EQ(derive(f.inverse(), 0, E), -derive(f, 0, E) / (f * f));
      }
      EXPECT_EQ(derive(Rational::constant(E.field(), 2) * f, 0, E), derive(f, 0, E) * Rational::constant(E.field(), 2));
    }
  }
}

TEST(DerivationProperty, CommuteOnCompositeElements) {
  auto E = pres(3, {"x", "y", "z"}, {{{"x", "1"}, {"y", "0"}, {"z", "0"}}, {{"x", "x"}, {"y", "1"}, {"z", "0"}}});
  ASSERT_FALSE(check_commutation(E).is_true());
  auto F = pres(3, {"x", "y", "z"}, {{{"x", "1"}, {"y", "0"}, {"z", "y"}}, {{"x", "0"}, {"y", "1"}, {"z", "x"}}});
  ASSERT_TRUE(check_commutation(F).is_true());
  std::mt19937_64 rng(32);
  for (int i = 0; i < 20; ++i) {
    Rational f = random_rational(rng, F.field(), F.vars(), 2, 3);
    EXPECT_EQ(derive(derive(f, 0, F), 1, F), derive(derive(f, 1, F), 0, F));
  }
}
