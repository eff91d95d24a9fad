#include <gtest/gtest.h>

#include <random>
#include <set>

#include "dtrap/subfield.hpp"
#include "support/random_elements.hpp"

using namespace dtrap;
using dtrap::testing::random_rational;

namespace {

DiffPresentation free_field(std::uint32_t p, std::vector<std::string> vars) {
  DiffPresentation d("E", p, 1, vars);
  for (auto& v : vars) d.set_image(0, v, "0");
  return d;
}

std::vector<Rational> elems(const DiffPresentation& E, std::vector<const char*> texts) {
  std::vector<Rational> out;
  for (auto t : texts) out.push_back(E.element(t));
  return out;
}

}  // namespace

TEST(LinearIndependenceTest, SrourWitness) {
  auto E = free_field(2, {"x", "y"});
  auto v = linear_independent_over_pk(elems(E, {"1", "x"}), {elems(E, {"x + y^2"})}, E);
  ASSERT_TRUE(v.is_false());
  ASSERT_TRUE(v.verify());
  auto& dep = std::get<LinearDependence>(v.witnesses.at(0));
  // x*1 + 1*x = 0 in characteristic 2, with x = 1^2*(x + y^2) + y^2*1 over E^2(x + y^2)
  EXPECT_EQ(dep.coefficient(0) / dep.coefficient(1), E.element("x"));
  EXPECT_EQ(dep.parts[0].size(), 2u);
}

TEST(LinearIndependenceTest, TrivialCases) {
  auto E = free_field(2, {"a", "b"});
  EXPECT_TRUE(linear_independent_over_pk(elems(E, {"1"}), {}, E).is_true());
  EXPECT_TRUE(linear_independent_over_pk(elems(E, {"1", "a", "b"}), {}, E).is_true());
  EXPECT_TRUE(linear_independent_over_pk(elems(E, {"1", "a", "b", "a*b"}), {}, E).is_true());
  auto v = linear_independent_over_pk(elems(E, {"1", "a^2 + b^4"}), {}, E);
  EXPECT_TRUE(v.is_false());
  EXPECT_TRUE(v.verify());
}

TEST(PIndependenceTest, Examples) {
  auto E = free_field(2, {"x", "y"});
  auto v = p_independent(elems(E, {"x"}), {elems(E, {"x + y^2"})}, E);
  EXPECT_TRUE(v.is_false());
  EXPECT_TRUE(v.verify());
  EXPECT_TRUE(p_independent(elems(E, {"x"}), {}, E).is_true());
  auto F = free_field(2, {"x"});
  EXPECT_TRUE(p_independent(elems(F, {"x^2"}), {}, F).is_false());
}

TEST(PIndependenceTest, OddPrime) {
  auto E = free_field(3, {"x", "y", "z"});
  EXPECT_TRUE(p_independent(elems(E, {"x", "y*z"}), {}, E).is_true());
  EXPECT_TRUE(p_independent(elems(E, {"x", "x^2*y^3"}), {}, E).is_false());
  EXPECT_TRUE(p_independent(elems(E, {"x + z^3"}), {elems(E, {"z"})}, E).is_true());
  EXPECT_TRUE(p_independent(elems(E, {"x*y"}), {elems(E, {"x", "y"})}, E).is_false());
}

TEST(PIndependenceTest, SizeCap) {
  auto E = free_field(2, {"a", "b", "c", "d", "e"});
  try {
    p_independent(elems(E, {"a", "b", "c", "d", "e"}), {}, E);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeCap);
  }
}

TEST(PBasisExtendTest, Examples) {
  auto E = free_field(2, {"x", "y"});
  auto r1 = p_basis_extend({}, elems(E, {"x", "y"}), {}, E);
  EXPECT_EQ(r1.basis, elems(E, {"x", "y"}));
  // x + y^2 lies in E^2(x), so the greedy pass keeps x and y only
  auto r2 = p_basis_extend({}, elems(E, {"x", "x + y^2", "y"}), {}, E);
  EXPECT_EQ(r2.basis, elems(E, {"x", "y"}));
  ASSERT_EQ(r2.steps.size(), 3u);
  EXPECT_EQ(r2.steps[1].rfind("reject", 0), 0u);
  auto r3 = p_basis_extend(elems(E, {"x"}), elems(E, {"x^2"}), {}, E);
  EXPECT_EQ(r3.basis, elems(E, {"x"}));
  EXPECT_THROW(p_basis_extend(elems(E, {"x^2"}), {}, {}, E), Error);
}

TEST(SeparableIndependenceTest, Examples) {
  auto F = free_field(2, {"t", "a"});
  auto a = Symbol::intern("a"), t = Symbol::intern("t");
  EXPECT_TRUE(separably_independent({a}, {t}, F).is_true());
  EXPECT_TRUE(separably_independent({}, {t, a}, F).is_true());
  auto G = free_field(2, {"a"});
  EXPECT_TRUE(separably_independent({a}, {}, G).is_true());
  try {
    separably_independent({a}, {}, F);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Precondition);
  }
}

TEST(TrdegTest, FreeGeneratorsCertified) {
  auto E = free_field(2, {"a", "lambda", "lambda1"});
  auto r = trdeg(elems(E, {"a", "lambda"}), {}, E);
  EXPECT_TRUE(r.verdict.is_true());
  EXPECT_TRUE(r.jacobian_certified);
  EXPECT_FALSE(r.oracle_ran);
  EXPECT_EQ(r.lower_bound, 2);
  EXPECT_TRUE(r.verdict.verify());
}

TEST(TrdegTest, FrobeniusTwistIsBounded) {
  auto E = free_field(2, {"a", "lambda"});
  EngineConfig cfg;
  TrdegOptions opt;
  opt.degree = 4;
  auto r = trdeg(elems(E, {"a", "a + lambda^2"}), {}, E, cfg, opt);
  EXPECT_EQ(r.verdict.status, Status::Inconclusive);
  EXPECT_EQ(r.verdict.bound, 4);
  EXPECT_EQ(r.verdict.label(), "INCONCLUSIVE_UP_TO(4)");
  EXPECT_EQ(r.lower_bound, 1);
}

// Brute force over F_2: no nonzero polynomial of degree <= 4 in (y1, y2)
// vanishes at (a, a + lambda^2). Every polynomial is enumerated in Gray-code
// order with its value maintained by XOR of monomial values.
TEST(TrdegTest, BruteForceAgreesAtDegreeFour) {
  auto E = free_field(2, {"a", "lambda"});
  Rational y1 = E.element("a"), y2 = E.element("a + lambda^2");
  std::vector<std::set<std::pair<int, int>>> cols;
  for (int d = 0; d <= 4; ++d)
    for (int i = 0; i <= d; ++i) {
      Poly v = (y1.pow(i) * y2.pow(d - i)).num();
      std::set<std::pair<int, int>> support;
      for (auto& t : v.terms())
        support.emplace(t.mono.exponent(Symbol::intern("a")), t.mono.exponent(Symbol::intern("lambda")));
      cols.push_back(std::move(support));
    }
  ASSERT_EQ(cols.size(), 15u);
  std::set<std::pair<int, int>> value;
  int zeros = 0;
  for (std::uint32_t g = 1; g < (1u << cols.size()); ++g) {
    int bit = __builtin_ctz(g);
    for (auto& m : cols[static_cast<std::size_t>(bit)])
      if (!value.erase(m)) value.insert(m);
    zeros += value.empty();
  }
  EXPECT_EQ(zeros, 0);
}

TEST(TrdegTest, DependentPairFindsAnnihilator) {
  auto E = free_field(3, {"x"});
  auto r = trdeg(elems(E, {"x", "x^2"}), {}, E);
  ASSERT_TRUE(r.verdict.is_false());
  auto& a = std::get<Annihilator>(r.verdict.witnesses.at(0));
  EXPECT_EQ(a.polynomial.monic(), Poly::variable(E.field(), Symbol::intern("y1")).pow(2) -
                                      Poly::variable(E.field(), Symbol::intern("y2")));
  EXPECT_TRUE(r.verdict.verify());
}

TEST(TrdegTest, PthPowerHasZeroJacobianButIsTranscendental) {
  auto E = free_field(3, {"x"});
  auto r = trdeg(elems(E, {"x^3"}), {}, E);
  EXPECT_EQ(r.verdict.status, Status::Inconclusive);
  EXPECT_EQ(r.lower_bound, 0);
}

TEST(TrdegTest, OverBase) {
  auto E = free_field(2, {"a", "lambda", "lambda1", "lambda2"});
  BaseSpec base{elems(E, {"a", "a + lambda^2"})};
  // the base's Jacobian is degenerate; the generators it involves certify instead
  auto r = trdeg(elems(E, {"lambda1", "lambda2"}), base, E);
  EXPECT_TRUE(r.verdict.is_true());
  EXPECT_TRUE(r.verdict.verify());
  auto s = trdeg(elems(E, {"lambda"}), base, E);
  ASSERT_TRUE(s.verdict.is_false());
  EXPECT_TRUE(s.verdict.verify());
}

TEST(TrdegTest, BaseRelationsAreNotWitnesses) {
  auto E = free_field(2, {"x", "y"});
  // the base is itself dependent (x and x again); y is still transcendental over it
  BaseSpec base{elems(E, {"x", "x"})};
  TrdegOptions opt;
  opt.degree = 3;
  opt.always_run_oracle = true;
  auto r = trdeg(elems(E, {"y"}), base, E, {}, opt);
  EXPECT_FALSE(r.oracle_witness.has_value());
  EXPECT_TRUE(r.verdict.is_true());
}

TEST(TrdegTest, SizeCap) {
  auto E = free_field(2, {"a", "b", "c", "d", "e", "f"});
  EngineConfig cfg;
  cfg.max_annihilator_unknowns = 100;
  auto f = elems(E, {"a^2", "b^2", "c^2", "d^2", "e^2", "f^2"});
  try {
    trdeg(f, {}, E, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SizeCap);
  }
}

// Properties.

TEST(IndependenceProperty, MonotoneInBase) {
  std::mt19937_64 rng(8);
  auto E = free_field(2, {"x", "y", "z"});
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    Rational s = random_rational(rng, E.field(), E.vars(), 2, 3);
    Rational b = random_rational(rng, E.field(), E.vars(), 2, 2);
    Rational extra = random_rational(rng, E.field(), E.vars(), 2, 2);
    if (p_independent({s}, {{b, extra}}, E).is_true()) {
      ++checked;
      EXPECT_TRUE(p_independent({s}, {{b}}, E).is_true());
      EXPECT_TRUE(p_independent({s}, {}, E).is_true());
    }
  }
  EXPECT_GT(checked, 5);
}

TEST(IndependenceProperty, FreeSubsetsIndependent) {
  auto E = free_field(3, {"a", "b", "c"});
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<Rational> S;
    for (unsigned k = 0; k < 3; ++k)
      if (mask >> k & 1) S.push_back(E.element(E.vars()[k]));
    EXPECT_TRUE(p_independent(S, {}, E).is_true());
    auto r = trdeg(S, {}, E);
    EXPECT_TRUE(r.verdict.is_true());
    EXPECT_TRUE(r.jacobian_certified);
  }
}

TEST(IndependenceProperty, JacobianNeverContradictsOracle) {
  std::mt19937_64 rng(9);
  for (std::uint32_t p : {2u, 3u}) {
    auto E = free_field(p, {"x", "y"});
    for (int i = 0; i < 25; ++i) {
      std::vector<Rational> f{random_rational(rng, E.field(), E.vars(), 2, 2),
                              random_rational(rng, E.field(), E.vars(), 2, 2)};
      TrdegOptions opt;
      opt.degree = 3;
      opt.always_run_oracle = true;
      auto r = trdeg(f, {}, E, {}, opt);
      EXPECT_FALSE(r.jacobian_certified && r.oracle_witness.has_value());
      if (r.oracle_witness) {
        EXPECT_TRUE(r.oracle_witness->verify());
      }
    }
  }
}
