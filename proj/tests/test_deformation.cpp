#include <gtest/gtest.h>

#include "support.hpp"

using namespace qwalk;

namespace {

const double r2 = 1.0 / std::sqrt(2.0);

CVector normalized(CVector v) {
  const double n = norm(v);
  for (auto& x : v) x /= n;
  return v;
}

}  // namespace

TEST(NamedCoins, WkkkIsAReflection) {
  for (const double p : {0.1, 0.3, 0.5, 0.9}) {
    const Coin c = wkkk_coin(p);
    EXPECT_LT((c.matrix() - reflection_coin(wkkk_vector(p)).matrix()).max_abs(), 1e-14);
    EXPECT_EQ(c.primary_class(), CoinClass::Reflection);
  }
  EXPECT_LT((wkkk_coin(0.5).matrix() - grover_coin(4).matrix()).max_abs(), 1e-15);
  EXPECT_THROW(wkkk_coin(0.0), DeformationError);
  EXPECT_THROW(wkkk_coin(1.0), DeformationError);
}

TEST(NamedCoins, SbjIsAReflection) {
  for (const double rho : {0.0, 0.2, 0.4, 0.7}) {
    EXPECT_LT((sbj_coin(rho).matrix() - reflection_coin(sbj_vector(rho)).matrix()).max_abs(), 1e-14);
  }
  EXPECT_LT((sbj_coin(1.0 / std::sqrt(3.0)).matrix() - grover_coin(3).matrix()).max_abs(), 1e-14);
  EXPECT_THROW(sbj_coin(0.8), DeformationError);
  EXPECT_THROW(sbj_coin(-0.1), DeformationError);
}

TEST(NamedCoins, WkkkWalkHasBothSigns) {
  const Walk w = std_walk(2, wkkk_coin(0.3));
  EXPECT_TRUE(symmetric_sufficient(w, 1).implies_eigenvalue);
  // -1 is outside the reach of the balance test; the kernel scan certifies it.
  EXPECT_FALSE(symmetric_sufficient(w, -1).implies_eigenvalue);
  const auto g = TorusGrid::standard(2, 16);
  EXPECT_EQ(criterion_grover(w, 1, g).verdict, Verdict::Present);
  EXPECT_EQ(criterion_grover(w, -1, g).verdict, Verdict::Present);
}

TEST(NamedCoins, SbjLazyWalk) {
  const auto g = TorusGrid::standard(1, 64);
  for (const double rho : {0.2, 0.4, 0.7}) {
    const Walk w = lazy_walk(1, sbj_coin(rho));
    EXPECT_TRUE(symmetric_sufficient(w, 1).implies_eigenvalue);
    EXPECT_TRUE(reflection_no_minus(w).excludes_minus_one);
    EXPECT_EQ(symbol_scan(w, 1.0, g).verdict, Verdict::Present);
    EXPECT_EQ(symbol_scan(w, -1.0, g).verdict, Verdict::Absent);
  }
  // rho = 0 removes the rest component: both signs
  const Walk w0 = lazy_walk(1, sbj_coin(0.0));
  EXPECT_FALSE(reflection_no_minus(w0).excludes_minus_one);
  EXPECT_TRUE(lazy_both_eigen(sbj_vector(0.0)).both_present);
  EXPECT_EQ(symbol_scan(w0, -1.0, g).verdict, Verdict::Present);
}

TEST(Path, EndpointsAndShape) {
  const MuPath path(CVector{r2, 0.0, r2});
  EXPECT_EQ(path.lattice_dimension(), 1u);
  EXPECT_NEAR(path.p(), r2, 1e-15);
  EXPECT_NEAR(path.f(0.0), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_LT(max_abs(path.evaluate(0.0) - uniform_vector(3)), 1e-14);
  EXPECT_LT(max_abs(path.evaluate(1.0) - CVector{r2, 0.0, r2}), 1e-15);
  // the rest component vanishes exactly at t = 1
  EXPECT_EQ(path.rho(1.0), 0.0);
  EXPECT_GT(path.rho(0.99), 0.0);
}

TEST(Path, InvariantsAlongAComplexTarget) {
  const CVector mu = normalized({0.5, std::polar(0.3, 1.0), std::polar(0.2, -0.4), std::polar(0.5, 2.0), std::polar(0.3, -0.5)});
  const MuPath path(mu);
  EXPECT_LT(max_abs(path.evaluate(0.0) - uniform_vector(5)), 1e-14);
  EXPECT_LT(max_abs(path.evaluate(1.0) - mu), 1e-14);
  for (int k = 0; k <= 20; ++k) {
    const double t = k / 20.0;
    const CVector m = path.evaluate(t);
    EXPECT_NEAR(norm(m), 1.0, 1e-13);
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(m[j]), std::abs(m[3 + j]), 1e-13);
    EXPECT_NEAR(norm(path.nu_at(t)), path.p(), 1e-13);
    // +1 stays certified by the balance test along the whole path
    EXPECT_TRUE(symmetric_sufficient(lazy_walk(2, reflection_coin(m)), 1).implies_eigenvalue);
  }
}

TEST(Path, AntiparallelTargetIsRoutedAround) {
  const CVector mu{-r2, 0.0, -r2};
  const MuPath path(mu);
  EXPECT_LT(max_abs(path.evaluate(1.0) - mu), 1e-14);
  EXPECT_LT(max_abs(path.evaluate(0.0) - uniform_vector(3)), 1e-14);
  for (int k = 0; k <= 10; ++k) EXPECT_NEAR(norm(path.evaluate(k / 10.0)), 1.0, 1e-13);
}

TEST(Path, ValidatesItsInputs) {
  EXPECT_THROW(MuPath(CVector{r2, r2}), DeformationError);
  EXPECT_THROW(MuPath(CVector{1.0, 0.0, 1.0}), DeformationError);
  EXPECT_THROW(MuPath(normalized({1.0, 0.0, 0.5})), DeformationError);
  try {
    MuPath(CVector{0.0, 1.0, 0.0});
    FAIL();
  } catch (const DeformationError& e) {
    EXPECT_NE(std::string(e.what()).find("nu = 0"), std::string::npos);
  }
  const MuPath path(CVector{r2, 0.0, r2});
  EXPECT_THROW(path.evaluate(1.5), DeformationError);
}

TEST(Path, CustomShapes) {
  const double f0 = std::sqrt(2.0 / 3.0);
  const MuPath quadratic(CVector{r2, 0.0, r2}, [f0](double t) { return f0 + (1.0 - f0) * t * t; });
  EXPECT_NEAR(quadratic.f(0.5), f0 + (1.0 - f0) / 4.0, 1e-15);
  EXPECT_NEAR(norm(quadratic.evaluate(0.5)), 1.0, 1e-13);
  EXPECT_THROW(MuPath(CVector{r2, 0.0, r2}, [](double t) { return t; }), DeformationError);
  EXPECT_THROW(MuPath(CVector{r2, 0.0, r2}, [f0](double t) { return t < 1.0 ? f0 + 0.5 * std::sin(3.0 * t) : 1.0; }),
               DeformationError);
}

TEST(Sweep, MinusOneAppearsOnlyAtTheEnd) {
  const MuPath path(CVector{r2, 0.0, r2});
  const auto ts = uniform_parameters(5);
  ASSERT_EQ(ts.size(), 5u);
  EXPECT_EQ(ts[1], 0.25);
  const auto samples = deformation_sweep(path, ts, 64);
  for (const auto& s : samples) {
    EXPECT_EQ(s.plus.verdict, Verdict::Present) << s.t;
    EXPECT_TRUE(s.balance_plus);
    if (s.t < 1.0) {
      EXPECT_EQ(s.minus.verdict, Verdict::Absent) << s.t;
      EXPECT_GT(s.minus.min_sigma, 1e-3);
      EXPECT_TRUE(s.rest_excludes_minus);
      EXPECT_FALSE(s.balanced_both);
    } else {
      EXPECT_EQ(s.minus.verdict, Verdict::Present);
      EXPECT_LT(s.minus.max_sigma, 1e-9);
      EXPECT_FALSE(s.rest_excludes_minus);
      EXPECT_TRUE(s.balanced_both);
    }
  }
  EXPECT_THROW(uniform_parameters(1), DeformationError);
}
