#include <gtest/gtest.h>

#include <random>

#include "dtrap/constants.hpp"
#include "support/random_elements.hpp"

using namespace dtrap;
using dtrap::testing::random_rational;

namespace {

DiffPresentation pres(std::string name, std::uint32_t p, std::vector<std::string> vars,
                      std::vector<std::vector<std::pair<std::string, std::string>>> images) {
  DiffPresentation d(std::move(name), p, static_cast<int>(images.size()), vars);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (auto& [v, e] : images[i]) d.set_image(static_cast<int>(i), v, e);
  d.check_complete();
  return d;
}

// a with da = 1 and a free tower lambda -> lambda1 -> ... -> lambda3 -> opaque
DiffPresentation tower_ambient() {
  return pres("E", 2, {"a", "lambda", "lambda1", "lambda2", "lambda3"},
              {{{"a", "1"}, {"lambda", "lambda1"}, {"lambda1", "lambda2"}, {"lambda2", "lambda3"}, {"lambda3", "?"}}});
}

SubfieldDecl compositum(const DiffPresentation& E) {
  auto own = pres("M", 2, {"u", "v"}, {{{"u", "1"}, {"v", "1"}}});
  return {"M", own, {{Symbol::intern("u"), E.element("a")}, {Symbol::intern("v"), E.element("a + lambda^2")}}};
}

}  // namespace

TEST(ConstantsTest, SingleVariablePerfect) {
  auto M = pres("M", 2, {"x"}, {{{"x", "1"}}});
  auto c = constants(M);
  EXPECT_EQ(c.dim, 1u);
  EXPECT_TRUE(c.perfect);
  EXPECT_EQ(c.kernel_basis.at(0), M.element("1"));
}

TEST(ConstantsTest, InertVariableIsConstant) {
  auto M = pres("M", 2, {"x", "y"}, {{{"x", "1"}, {"y", "0"}}});
  auto c = constants(M);
  EXPECT_EQ(c.dim, 2u);
  EXPECT_FALSE(c.perfect);
  ASSERT_EQ(c.kernel_basis.size(), 2u);
  EXPECT_EQ(c.kernel_basis[0], M.element("1"));
  EXPECT_EQ(c.kernel_basis[1], M.element("y"));
}

TEST(ConstantsTest, BernoulliPairPerfect) {
  auto M = pres("M", 2, {"a", "b"}, {{{"a", "a^3"}, {"b", "b^5"}}});
  auto c = constants(M);
  EXPECT_EQ(c.dim, 1u);
  EXPECT_TRUE(c.perfect);
  auto d = derivation_matrix(M, 0);
  ASSERT_EQ(d.rows.size(), 4u);
  // rows and columns 1, a, b, ab
  EXPECT_EQ(d.delta[1][1], M.element("a"));
  EXPECT_EQ(d.delta[2][2], M.element("b^2"));
  EXPECT_EQ(d.delta[3][3], M.element("a + b^2"));
  EXPECT_TRUE(d.delta[0][0].is_zero());
}

TEST(ConstantsTest, OpaqueImageRaises) {
  auto M = pres("M", 2, {"x"}, {{{"x", "?"}}});
  try {
    constants(M);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DepthExceeded);
  }
}

TEST(ConstantsTest, TwoDerivations) {
  auto M = pres("M", 3, {"x", "y"}, {{{"x", "1"}, {"y", "0"}}, {{"x", "0"}, {"y", "1"}}});
  EXPECT_TRUE(constants(M).perfect);
  auto N = pres("N", 3, {"x", "y"}, {{{"x", "1"}, {"y", "0"}}, {{"x", "0"}, {"y", "0"}}});
  auto c = constants(N);
  EXPECT_EQ(c.dim, 3u);  // 1, y, y^2
}

TEST(ConstantsTest, StageWithFreshTranscendental) {
  auto E = tower_ambient();
  std::vector<Symbol> stage{Symbol::intern("a"), Symbol::intern("lambda3")};
  auto c = constants_at_stage(E, stage);
  EXPECT_TRUE(c.perfect);
  EXPECT_FALSE(c.notes.empty());
}

TEST(PBasisRootTest, PerfectGivesEmptyA) {
  auto E = pres("E", 2, {"x"}, {{{"x", "1"}}});
  auto cert = p_basis_of_constants_root(identity_subfield(E), E);
  EXPECT_TRUE(cert.p_basis_A.empty());
}

TEST(PBasisRootTest, CompositumRoot) {
  auto E = tower_ambient();
  auto M = compositum(E);
  auto cert = p_basis_of_constants_root(M, E);
  EXPECT_EQ(cert.constants.dim, 2u);
  EXPECT_EQ(cert.constants.kernel_basis[1], M.own.element("u + v"));
  ASSERT_EQ(cert.p_basis_A.size(), 1u);
  EXPECT_EQ(cert.p_basis_A[0].first, M.own.element("u + v"));
  EXPECT_EQ(cert.p_basis_A[0].second, E.element("lambda"));
}

TEST(PBasisRootTest, AmbientTooSmall) {
  auto E = pres("E", 2, {"x", "y"}, {{{"x", "1"}, {"y", "0"}}});
  try {
    p_basis_of_constants_root(identity_subfield(E), E);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AmbientTooSmall);
  }
}

TEST(TrapTest, PerfectIsTrapAtEveryOrder) {
  auto E = pres("E", 2, {"x"}, {{{"x", "1"}}});
  for (int ell = 1; ell <= 4; ++ell) {
    auto r = trap_up_to(identity_subfield(E), E, ell);
    EXPECT_TRUE(r.verdict.is_true());
    EXPECT_TRUE(r.certificate.family.empty());
  }
}

TEST(TrapTest, FreeTowerIsTrap) {
  auto E = tower_ambient();
  auto r = trap_up_to(compositum(E), E, 2);
  ASSERT_TRUE(r.verdict.is_true());
  EXPECT_EQ(r.certificate.family, (std::vector<Rational>{E.element("lambda1"), E.element("lambda2")}));
  EXPECT_EQ(r.certificate.family_labels[1], "d1^2(lambda)");
  EXPECT_TRUE(r.verdict.verify());
  EXPECT_NE(r.verdict.reason.find("up to order 2"), std::string::npos);
}

TEST(TrapTest, ConstantRootIsNotTrap) {
  auto E = pres("E", 2, {"a", "lambda"}, {{{"a", "1"}, {"lambda", "0"}}});
  auto r = trap_up_to(compositum(E), E, 2);
  ASSERT_TRUE(r.verdict.is_false());
  auto& w = std::get<Annihilator>(r.verdict.witnesses.at(0));
  EXPECT_EQ(w.note, "d1(lambda) = 0");
  EXPECT_TRUE(r.verdict.verify());
}

TEST(TrapTest, AlgebraicDerivativeIsNotTrap) {
  // d lambda = a: algebraic over the compositum
  auto E = pres("E", 2, {"a", "lambda"}, {{{"a", "1"}, {"lambda", "a"}}});
  auto r = trap_up_to(compositum(E), E, 1);
  ASSERT_TRUE(r.verdict.is_false());
  EXPECT_TRUE(r.verdict.verify());
}

TEST(TrapTest, DepthBudget) {
  auto E = tower_ambient();
  EXPECT_TRUE(trap_up_to(compositum(E), E, 3).verdict.is_true());
  try {
    trap_up_to(compositum(E), E, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DepthExceeded);
  }
  EXPECT_THROW(trap_up_to(compositum(E), E, 3, {}, 4), Error);
}

TEST(TrapTest, MixedAndPureFamilies) {
  EXPECT_EQ(derivative_monomials(1, 3, false).size(), 3u);
  EXPECT_EQ(derivative_monomials(2, 2, false).size(), 5u);
  EXPECT_EQ(derivative_monomials(2, 2, true).size(), 4u);
  EXPECT_EQ(derivative_monomials(2, 1, false), (std::vector<std::vector<int>>{{1, 0}, {0, 1}}));
  EXPECT_EQ(derivative_label({1, 1}, "t"), "d1d2(t)");
}

TEST(KolchinTest, Examples) {
  auto B = pres("B", 2, {"x"}, {{{"x", "1"}}});
  EXPECT_TRUE(kolchin_crosscheck(B, {{"lambda", 1}}).is_true());
  auto C = pres("C", 2, {"x", "y"}, {{{"x", "1"}, {"y", "0"}}});
  EXPECT_TRUE(kolchin_crosscheck(C, {{"lambda", 1}}).is_true());
  EXPECT_TRUE(kolchin_crosscheck(C, {}).is_true());
  EXPECT_TRUE(kolchin_crosscheck(B, {{"lambda", 2}}).is_true());
}

// Properties.

TEST(ConstantsProperty, KernelElementsAreConstants) {
  std::mt19937_64 rng(17);
  int imperfect = 0;
  for (std::uint32_t p : {2u, 3u}) {
    for (int i = 0; i < 12; ++i) {
      DiffPresentation M("M", p, 1, std::vector<std::string>{"x", "y"});
      for (Symbol v : M.vars()) {
        Rational img = random_rational(rng, M.field(), M.vars(), 2, 2);
        if (rng() % 4 == 0) img = Rational(M.field());
        M.set_image(0, v, img);
      }
      auto c = constants(M);
      ASSERT_GE(c.dim, 1u);
      EXPECT_EQ(c.kernel_basis[0], M.element("1"));
      for (auto& k : c.kernel_basis) EXPECT_TRUE(derive(k, 0, M).is_zero());
      EXPECT_EQ(c.perfect, c.dim == 1);
      imperfect += !c.perfect;
      // the dimension is a power of p
      std::size_t d = c.dim;
      while (d % p == 0) d /= p;
      EXPECT_EQ(d, 1u);
    }
  }
  EXPECT_GT(imperfect, 0);
}

TEST(ConstantsProperty, DerivationMatrixReconstructs) {
  std::mt19937_64 rng(18);
  for (std::uint32_t p : {2u, 3u}) {
    DiffPresentation M("M", p, 1, std::vector<std::string>{"x", "y"});
    for (Symbol v : M.vars()) M.set_image(0, v, random_rational(rng, M.field(), M.vars(), 2, 3));
    auto d = derivation_matrix(M, 0);
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
      Rational acc(M.field());
      for (std::size_t c = 0; c < d.cols.size(); ++c)
        acc = acc + d.delta[r][c].pow(p) * Rational(Poly::term(M.field(), d.cols[c], 1));
      EXPECT_EQ(acc, derive(Rational(Poly::term(M.field(), d.rows[r], 1)), 0, M));
    }
    EXPECT_TRUE(std::all_of(d.delta[0].begin(), d.delta[0].end(), [](auto& x) { return x.is_zero(); }));
  }
}

TEST(ConstantsProperty, ExtractedBasisSpansKernel) {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 10; ++i) {
    DiffPresentation M("M", 2, 1, std::vector<std::string>{"x", "y", "z"});
    for (Symbol v : M.vars()) {
      auto img = random_rational(rng, M.field(), M.vars(), 1, 2);
      M.set_image(0, v, rng() % 3 == 0 ? Rational(M.field()) : img);
    }
    auto c = constants(M);
    std::vector<Rational> B;
    for (auto& k : c.kernel_basis) {
      auto trial = B;
      trial.push_back(k);
      if (p_independent(trial, {}, M).is_true()) B = trial;
    }
    EXPECT_EQ(std::size_t{1} << B.size(), c.dim);
  }
}

TEST(ConstantsProperty, AdjoinedStageIsPerfect) {
  auto E = tower_ambient();
  auto M = compositum(E);
  for (int ell = 1; ell <= 3; ++ell) {
    auto r = trap_up_to(M, E, ell);
    ASSERT_TRUE(r.verdict.is_true());
    auto v = adjoined_stage_perfect(M, r.certificate.roots(), ell, E);
    EXPECT_TRUE(v.is_true()) << "order " << ell << ": " << v.reason;
  }
  // one generator of the inert direction: y is constant, so the stage is not perfect
  auto F = pres("F", 2, {"x", "y", "t"}, {{{"x", "1"}, {"y", "0"}, {"t", "x"}}});
  auto own = pres("N", 2, {"u"}, {{{"u", "1"}}});
  SubfieldDecl N{"N", own, {{Symbol::intern("u"), F.element("x")}}};
  auto w = adjoined_stage_perfect(N, {F.element("y")}, 1, F);
  EXPECT_TRUE(w.is_false());
  EXPECT_TRUE(w.verify());
}

TEST(ConstantsProperty, PresentabilityCheck) {
  auto E = tower_ambient();
  std::vector<Symbol> al{Symbol::intern("a"), Symbol::intern("lambda")};
  EXPECT_TRUE(stage_presentable({E.element("a"), E.element("a + lambda^2"), E.element("lambda")}, al));
  EXPECT_FALSE(stage_presentable({E.element("a"), E.element("a + lambda^2")}, al));
  EXPECT_TRUE(stage_presentable({E.element("a*lambda + a^2"), E.element("a")}, al));
}
