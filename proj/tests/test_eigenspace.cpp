#include <gtest/gtest.h>

#include "support.hpp"

using namespace qwalk;
using qwalk::testing::random_points;
using qwalk::testing::random_unit;

namespace {

std::vector<TorusPoint> points_off_e(const Walk& w, std::size_t count, std::uint64_t seed) {
  std::vector<TorusPoint> out;
  for (const auto& z : random_points(w.dimension(), 2 * count, seed)) {
    if (in_singular_set(w, z, SingularSet::E, 1e-3)) continue;
    out.push_back(z);
    if (out.size() == count) break;
  }
  return out;
}

// A lazy walk in d = 2 with a balanced reflection vector that is not uniform.
Walk balanced_lazy_walk() {
  const CVector mu{0.6, 0.3, 0.0, 0.6, std::polar(0.3, 0.7)};
  CVector unit = mu;
  const double n = norm(mu);
  for (auto& v : unit) v /= n;
  return lazy_walk(2, reflection_coin(unit));
}

}  // namespace

TEST(EigenfunctionVector, HypothesesAreNamed) {
  EXPECT_LT(max_abs(eigenfunction_vector(lazy_walk(1)) - uniform_vector(3)), 1e-15);
  try {
    eigenfunction_vector(fourier_walk_2d());
    FAIL();
  } catch (const EigenspaceError& e) {
    EXPECT_NE(std::string(e.what()).find("reflection type"), std::string::npos);
  }
  try {
    eigenfunction_vector(product_triangular_walk());
    FAIL();
  } catch (const EigenspaceError& e) {
    EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos);
  }
  const CVector lop{0.8, 0.0, 0.6};
  try {
    eigenfunction_vector(lazy_walk(1, reflection_coin(lop)));
    FAIL();
  } catch (const EigenspaceError& e) {
    EXPECT_NE(std::string(e.what()).find("||P_a mu|| != ||P_-a mu||"), std::string::npos);
  }
  EXPECT_TRUE(is_lazy_grover(lazy_walk(2)));
  EXPECT_FALSE(is_lazy_grover(balanced_lazy_walk()));
  EXPECT_FALSE(is_lazy_grover(std_walk(2)));
}

TEST(EigenfunctionForms, LazyGroverValueAtOne) {
  const Walk w = lazy_walk(1);
  const auto f = eigenfunction_forms(w, TorusPoint::ones(1));
  ASSERT_TRUE(f.lazy_norm);
  EXPECT_NEAR(*f.lazy_norm, std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_LT(max_abs(w_o(w, TorusPoint::ones(1)) - uniform_vector(3)), 1e-15);
}

TEST(EigenfunctionForms, LazyNormFormula) {
  for (std::size_t d = 1; d <= 3; ++d) {
    const Walk w = lazy_walk(d);
    for (const auto& z : points_off_e(w, 20, d)) {
      double d2 = 0.25;
      for (std::size_t j = 0; j < d; ++j) d2 += 2.0 / std::norm(1.0 + z[j]);
      EXPECT_NEAR(*eigenfunction_forms(w, z).lazy_norm, std::sqrt(d2), 1e-12);
    }
  }
}

TEST(EigenfunctionForms, UnitEigenvectorAndFormsAgree) {
  for (const Walk& w : {lazy_walk(1), lazy_walk(2), lazy_walk(3), std_walk(2), triangular_walk(), balanced_lazy_walk()}) {
    for (const auto& z : points_off_e(w, 100, 5)) {
      const auto f = eigenfunction_forms(w, z);
      EXPECT_LT(max_abs(f.normalized_difference - f.weighted_sum), 1e-10);
      if (f.lazy) {
        EXPECT_LT(max_abs(f.normalized_difference - *f.lazy), 1e-10);
      }
      const CVector e = w_o(w, z);
      EXPECT_NEAR(norm(e), 1.0, 1e-9);
      EXPECT_LT(norm(symbol(w, z) * e - e), 1e-9);
    }
  }
}

TEST(EigenfunctionForms, UndefinedOnE) {
  EXPECT_THROW(w_o(lazy_walk(1), TorusPoint(std::vector<cplx>{-1.0})), EigenspaceError);
}

TEST(SpectralProjector, StdGroverAndFourier) {
  const Walk w = std_walk(2);
  for (const auto& z : points_off_e(w, 20, 8)) {
    const CMatrix p = projector_spectral(w, 1.0, z);
    EXPECT_LT((p * p - p).max_abs(), 1e-12);
    EXPECT_LT((symbol(w, z) * p - p).max_abs(), 1e-12);
    // the +1 eigenvector of a reflection-type symbol is w_o
    const CVector e = w_o(w, z);
    EXPECT_LT((p - CMatrix::outer(e, e)).max_abs(), 1e-10);
  }
  try {
    projector_spectral(fourier_walk_2d(), 1.0, TorusPoint::from_angles(std::vector<double>{0.3, 1.9}));
    FAIL();
  } catch (const EigenspaceError& e) {
    EXPECT_NE(std::string(e.what()).find("not an eigenvalue"), std::string::npos);
  }
}

TEST(Projection, FourierTransformOfFiniteSupport) {
  const LatticeFunction g{{LatticePoint{1, 0}, CVector{1.0, 0.0}}, {LatticePoint{0, -2}, CVector{0.0, 2.0}}};
  const TorusPoint z = TorusPoint::from_angles(std::vector<double>{0.4, 1.1});
  const CVector v = fourier_transform(g, z, 2);
  EXPECT_LT(std::abs(v[0] - z[0]), 1e-15);
  EXPECT_LT(std::abs(v[1] - 2.0 / (z[1] * z[1])), 1e-15);
}

TEST(Projection, ContractionOverAWindow) {
  const Walk w = lazy_walk(1);
  const CVector phi = random_unit(3, 3);
  double total = 0.0;
  for (int x = -30; x <= 30; ++x) total += std::pow(norm(project_plus(w, phi, LatticePoint{x}, 512)), 2);
  EXPECT_LE(total, 1.0 + 1e-10);
  EXPECT_GT(total, 0.0);
  // ||Pi_+ (delta_0 (x) phi)||^2 = <Pi_+ f, f> = (Pi_+ f)(0) . phi
  const CVector at0 = project_plus(w, phi, LatticePoint{0}, 512);
  EXPECT_NEAR(total, inner(at0, phi).real(), 1e-8);
}

TEST(Projection, IdempotentOnItsRange) {
  // Pi_+ applied to the (truncated) lattice function Pi_+ f reproduces Pi_+ f.
  const Walk w = lazy_walk(1);
  const CVector phi = basis_vector(3, 1);
  LatticeFunction pf;
  for (int y = -40; y <= 40; ++y) pf.emplace_back(LatticePoint{y}, project_plus(w, phi, LatticePoint{y}, 512));
  for (const int x : {0, 1, -3}) {
    const auto again =
        project_by_quadrature(w, plus_projector(w), pf, LatticePoint{x}, 512, true).value;
    EXPECT_LT(max_abs(again - project_plus(w, phi, LatticePoint{x}, 512)), 1e-9);
  }
}

TEST(Projection, TranslationCovariance) {
  const Walk w = lazy_walk(2);
  const CVector phi = random_unit(5, 6);
  const LatticePoint y{2, -1};
  const LatticeFunction shifted{{y, phi}};
  for (const LatticePoint& x : {LatticePoint{0, 0}, LatticePoint{2, -1}, LatticePoint{3, 1}}) {
    const LatticePoint rel{x[0] - y[0], x[1] - y[1]};
    const auto a = project_by_quadrature(w, plus_projector(w), shifted, x, 64, true).value;
    EXPECT_LT(max_abs(a - project_plus(w, phi, rel, 64)), 1e-12);
  }
}

TEST(Projection, EigenfunctionAndSpectralRoutesAgree) {
  const Walk w = lazy_walk(1);
  const CVector phi = basis_vector(3, 1);
  const auto a = project_plus_with_error(w, phi, LatticePoint{1}, 1024);
  const auto b = project_spectral(w, 1.0, phi, LatticePoint{1}, 1024);
  EXPECT_LT(max_abs(a.value - b.value), 1e-9);
  EXPECT_LT(a.error_estimate, 1e-6);
  EXPECT_EQ(a.nodes, 1024u);
}

TEST(Wiener, LazyGroverAtTheOrigin) {
  const Walk w = lazy_walk(1);
  const auto chk = wiener_check(w, basis_vector(3, 1), LatticePoint{0}, 4000, 2048);
  ASSERT_EQ(chk.eigenvalues.size(), 1u);
  EXPECT_LT(std::abs(chk.eigenvalues[0] - 1.0), 1e-6);
  EXPECT_EQ(chk.contributions[0].method, "eigenfunction");
  EXPECT_LT(chk.gap, 5e-3);
  EXPECT_GT(chk.rhs, 0.05);
}

TEST(Wiener, GapShrinksWithTheHorizon) {
  const Walk w = lazy_walk(1);
  const CVector phi = basis_vector(3, 1);
  const double rhs = std::pow(norm(project_plus(w, phi, LatticePoint{0}, 2048)), 2);
  const double short_gap = std::abs(time_average(w, phi, LatticePoint{0}, 250) - rhs);
  const double long_gap = std::abs(time_average(w, phi, LatticePoint{0}, 2000) - rhs);
  EXPECT_LT(long_gap, short_gap);
}

TEST(Wiener, FourierWalkHasNothingToAverage) {
  const auto chk = wiener_check(fourier_walk_2d(), random_unit(4, 1), LatticePoint{0, 0}, 50, 32);
  EXPECT_TRUE(chk.eigenvalues.empty());
  EXPECT_EQ(chk.rhs, 0.0);
}

TEST(Wiener, SitesOutsideTheConeNeverOccupied) {
  const Walk w = lazy_walk(1);
  EXPECT_EQ(time_average(w, basis_vector(3, 1), LatticePoint{101}, 100), 0.0);
}

TEST(Wiener, StdGroverUsesSpectralProjectorForMinusOne) {
  const Walk w = std_walk(2);
  const auto chk = wiener_check(w, random_unit(4, 12), LatticePoint{0, 0}, 600, 96);
  ASSERT_EQ(chk.contributions.size(), 2u);
  for (const auto& c : chk.contributions) {
    EXPECT_EQ(c.method, std::abs(c.omega - 1.0) < 1e-6 ? "eigenfunction" : "spectral-projector");
  }
  EXPECT_LT(chk.gap, 2e-2);
}
