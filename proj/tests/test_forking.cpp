#include <gtest/gtest.h>

#include "dtrap/forking.hpp"

using namespace dtrap;

namespace {

DiffPresentation pres(std::string name, std::uint32_t p, std::vector<std::string> vars,
                      std::vector<std::vector<std::pair<std::string, std::string>>> images) {
  DiffPresentation d(std::move(name), p, static_cast<int>(images.size()), vars);
  for (std::size_t i = 0; i < images.size(); ++i)
    for (auto& [v, e] : images[i]) d.set_image(static_cast<int>(i), v, e);
  d.check_complete();
  return d;
}

SubfieldDecl sub(const std::string& name, const DiffPresentation& E, std::vector<std::string> own,
                 std::vector<std::string> images, std::vector<std::string> embeds) {
  std::vector<std::pair<std::string, std::string>> imgs;
  for (std::size_t i = 0; i < own.size(); ++i) imgs.emplace_back(own[i], images[i]);
  SubfieldDecl d{name, pres(name, E.p(), own, {imgs}), {}};
  for (std::size_t i = 0; i < own.size(); ++i) d.embedding.emplace(Symbol::intern(own[i]), E.element(embeds[i]));
  return d;
}

struct Tower {
  DiffPresentation E;
  SubfieldDecl K, L, M;
};

Tower example_d1(bool free) {
  auto E = free ? pres("E", 2, {"a", "lambda", "lambda1", "lambda2", "lambda3"},
                       {{{"a", "1"}, {"lambda", "lambda1"}, {"lambda1", "lambda2"}, {"lambda2", "lambda3"}, {"lambda3", "?"}}})
                : pres("E", 2, {"a", "lambda"}, {{{"a", "1"}, {"lambda", "0"}}});
  auto K = sub("K", E, {"u"}, {"1"}, {"a"});
  auto L = sub("L", E, {"v"}, {"1"}, {"a + lambda^2"});
  auto M = sub("M", E, {"u", "v"}, {"1", "1"}, {"a", "a + lambda^2"});
  return {E, K, L, M};
}

}  // namespace

TEST(AcfTest, Examples) {
  auto E = pres("E", 2, {"x", "y"}, {{{"x", "1"}, {"y", "0"}}});
  EXPECT_TRUE(check_acf_independence({E.element("x")}, {E.element("y")}, {}, E).is_true());
  auto same = check_acf_independence({E.element("x")}, {E.element("x")}, {}, E);
  ASSERT_TRUE(same.is_false());
  EXPECT_TRUE(same.verify());
  auto srour = check_acf_independence({E.element("x")}, {E.element("x + y^2")}, {}, E);
  EXPECT_EQ(srour.status, Status::Inconclusive);
  EXPECT_EQ(srour.bound, 6);
}

TEST(AcfTest, OverNontrivialBase) {
  auto E = pres("E", 3, {"t", "x", "y"}, {{{"t", "1"}, {"x", "0"}, {"y", "0"}}});
  auto k = E.element("t");
  EXPECT_TRUE(check_acf_independence({k, E.element("x")}, {k, E.element("y")}, {k}, E).is_true());
  auto dep = check_acf_independence({k, E.element("x")}, {k, E.element("x + t")}, {k}, E);
  EXPECT_TRUE(dep.is_false());
  EXPECT_TRUE(dep.verify());
}

TEST(ForkingTest, ExampleFree) {
  auto t = example_d1(true);
  auto f = check_forking(nullptr, t.K, t.L, t.M, t.E, 2);
  EXPECT_TRUE(f.trap_part.is_true());
  EXPECT_FALSE(f.overall.is_false());
  EXPECT_FALSE(f.acf_part.is_false());
  EXPECT_EQ(f.trap_certificate.family.size(), 2u);
}

TEST(ForkingTest, ExampleConstant) {
  auto t = example_d1(false);
  auto f = check_forking(nullptr, t.K, t.L, t.M, t.E, 2);
  ASSERT_TRUE(f.trap_part.is_false());
  ASSERT_TRUE(f.overall.is_false());
  EXPECT_TRUE(f.overall.verify());
  bool found = false;
  for (auto& w : f.overall.witnesses)
    if (auto* a = std::get_if<Annihilator>(&w)) found |= a->note == "d1(lambda) = 0";
  EXPECT_TRUE(found);
}

TEST(ForkingTest, DegenerateKEqualsk) {
  auto E = pres("E", 2, {"x"}, {{{"x", "1"}}});
  auto k = sub("k", E, {}, {}, {});
  auto L = sub("L", E, {"u"}, {"1"}, {"x"});
  auto f = check_forking(&k, k, L, L, E, 2);
  EXPECT_TRUE(f.acf_part.is_true());
  EXPECT_TRUE(f.trap_part.is_true());
  EXPECT_TRUE(f.overall.is_true());
}

TEST(ForkingTest, CompositumMustMatch) {
  auto t = example_d1(true);
  try {
    check_forking(nullptr, t.K, t.L, t.K, t.E, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Precondition);
  }
}

TEST(ForkingTest, DepthNeedsOneMore) {
  auto t = example_d1(true);
  EXPECT_NO_THROW(check_forking(nullptr, t.K, t.L, t.M, t.E, 2));
  EXPECT_THROW(check_forking(nullptr, t.K, t.L, t.M, t.E, 3), Error);
}

// Properties.

TEST(ForkingProperty, SymmetricAndSound) {
  std::vector<Tower> corpus{example_d1(true), example_d1(false)};
  for (auto& t : corpus) {
    auto a = check_forking(nullptr, t.K, t.L, t.M, t.E, 2);
    auto b = check_forking(nullptr, t.L, t.K, t.M, t.E, 2);
    EXPECT_EQ(a.overall.status, b.overall.status);
    EXPECT_TRUE(a.overall.verify());
    if (a.overall.is_true()) {
      EXPECT_TRUE(a.acf_part.verify());
      EXPECT_TRUE(a.trap_part.verify());
    }
  }
}

TEST(ForkingProperty, MonotoneSurrogate) {
  // L = F_2(y) inside L1 = F_2(y, z)
  auto E = pres("E", 2, {"x", "y", "z"}, {{{"x", "1"}, {"y", "y^3"}, {"z", "z^5"}}});
  auto K = sub("K", E, {"u"}, {"1"}, {"x"});
  auto L = sub("L", E, {"v"}, {"v^3"}, {"y"});
  auto L1 = sub("L1", E, {"v", "w"}, {"v^3", "w^5"}, {"y", "z"});
  auto M = sub("M", E, {"u", "v"}, {"1", "v^3"}, {"x", "y"});
  auto M1 = sub("M1", E, {"u", "v", "w"}, {"1", "v^3", "w^5"}, {"x", "y", "z"});
  auto big = check_forking(nullptr, K, L1, M1, E, 2);
  ASSERT_TRUE(big.overall.is_true());
  EXPECT_FALSE(check_forking(nullptr, K, L, M, E, 2).overall.is_false());
}
