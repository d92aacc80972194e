#ifndef QWALK_TESTS_SUPPORT_HPP
#define QWALK_TESTS_SUPPORT_HPP

#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "qwalk/qwalk.hpp"

namespace qwalk::testing {

inline std::vector<TorusPoint> random_points(std::size_t d, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<TorusPoint> pts;
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<double> a(d);
    for (auto& x : a) x = phase(rng);
    pts.push_back(TorusPoint::from_angles(a));
  }
  return pts;
}

inline CVector random_unit(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CVector v(n);
  for (auto& x : v) x = {g(rng), g(rng)};
  const double s = norm(v);
  for (auto& x : v) x /= s;
  return v;
}

inline CMatrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  CMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = {g(rng), g(rng)};
  return m;
}

// Q factor of a Gaussian matrix: a Haar-distributed unitary.
inline CMatrix random_unitary(std::size_t n, std::uint64_t seed) {
  const CMatrix g = random_matrix(n, n, seed);
  std::vector<CVector> cols;
  for (std::size_t j = 0; j < n; ++j) cols.push_back(g.column(j));
  return CMatrix::from_columns(orthonormalize(cols, 1e-12), n);
}

inline std::vector<Walk> all_builtin_walks() {
  return {std_walk(1), std_walk(2), std_walk(3),       lazy_walk(1),
          lazy_walk(2), triangular_walk(), product_triangular_walk(), fourier_walk_2d()};
}

}  // namespace qwalk::testing

#endif  // QWALK_TESTS_SUPPORT_HPP
