#ifndef QWALK_CRITERIA_HPP
#define QWALK_CRITERIA_HPP

// Eigenvalue existence and exclusion criteria for walk operators.
//
// A walk operator U has eigenvalue omega exactly when its symbol C^(z) has
// eigenvalue omega at every point z of the torus. The scans below test a
// pointwise condition on a finite offset grid:
//
//   symbol_scan        sigma_min(C^(z) - omega I)
//   criterion_general  kernel of (I - pi_w) eta(omega; z) restricted to E(omega)^perp
//   criterion_grover   kernel of pi_s eta(z) restricted to E(s), s = +-1
//
// Verdicts are grid-certified, not proofs. Present means the condition holds
// (sigma_min < zero_tol) at every tested point. Absent means at least one point
// violates it robustly (sigma_min > separation * max(1, ||A||_2)); one such
// point already rules the eigenvalue out. Anything else is Inconclusive.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

class CriteriaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Singular sets and grids

enum class SingularSet { L, E };  // z^alpha = 1, resp. z^alpha = -1, for some nonzero step

inline constexpr double singular_tol = 1e-12;

inline bool in_singular_set(const Walk& w, const TorusPoint& z, SingularSet which, double tol = singular_tol) {
  const cplx target = which == SingularSet::L ? cplx{1.0} : cplx{-1.0};
  for (const auto& alpha : w.steps()) {
    if (sup_norm(alpha) == 0) continue;
    if (std::abs(z.monomial(alpha) - target) <= tol) return true;
  }
  return false;
}

/// 1 / (2 * golden ratio)
inline const double default_grid_offset = 1.0 / (1.0 + std::sqrt(5.0));

/// Product grid on T^d: axis j has phases 2 pi (k + offsets[j]) / N, k = 0..N-1.
struct TorusGrid {
  std::size_t dimension = 1;
  std::size_t points_per_axis = 64;
  std::vector<double> offsets;

  static TorusGrid standard(std::size_t d, std::size_t n) {
    return TorusGrid{d, n, std::vector<double>(d, default_grid_offset)};
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t j = 0; j < dimension; ++j) s *= points_per_axis;
    return s;
  }

  std::vector<double> angles(std::size_t flat) const {
    std::vector<double> a(dimension);
    for (std::size_t j = 0; j < dimension; ++j) {
      const std::size_t k = flat % points_per_axis;
      flat /= points_per_axis;
      a[j] = 2.0 * std::numbers::pi * (static_cast<double>(k) + offsets.at(j)) / static_cast<double>(points_per_axis);
    }
    return a;
  }

  TorusPoint point(std::size_t flat) const { return TorusPoint::from_angles(angles(flat)); }
};

// ---------------------------------------------------------------------------
// Reports

enum class Verdict { Present, Absent, Inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Present: return "present";
    case Verdict::Absent: return "absent";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct ScanOptions {
  double zero_tol = 1e-9;
  double separation = 1e-3;
  bool keep_witnesses = false;
  std::size_t max_witnesses = 16;
  std::size_t max_offending = 16;
};

struct Witness {
  TorusPoint z;
  CVector psi;
};

struct SpectralReport {
  cplx omega = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::string criterion;
  double min_sigma = 0.0;
  double max_sigma = 0.0;
  std::size_t points_tested = 0;
  std::size_t points_skipped = 0;
  std::size_t points_vanishing = 0;  ///< sigma_min < zero_tol
  std::size_t points_separated = 0;  ///< sigma_min > separation * scale
  std::vector<TorusPoint> offending;  ///< grey-zone points (capped)
  std::vector<Witness> witnesses;     ///< kernel witnesses psi (capped, on request)
};

namespace detail {

struct PointResult {
  bool skipped = false;
  double sigma = 0.0;
  double scale = 1.0;
  CVector witness;
};

// Runs eval at every grid point and folds the results into a report.
template <class Eval>
SpectralReport run_scan(const TorusGrid& grid, cplx omega, std::string criterion, const ScanOptions& opts,
                        Eval&& eval) {
  std::vector<PointResult> results(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { results[i] = eval(grid.point(i)); });

  SpectralReport rep;
  rep.omega = omega;
  rep.criterion = std::move(criterion);
  rep.min_sigma = std::numeric_limits<double>::infinity();
  rep.max_sigma = 0.0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (r.skipped) {
      ++rep.points_skipped;
      continue;
    }
    ++rep.points_tested;
    rep.min_sigma = std::min(rep.min_sigma, r.sigma);
    rep.max_sigma = std::max(rep.max_sigma, r.sigma);
    if (r.sigma < opts.zero_tol) {
      ++rep.points_vanishing;
      if (opts.keep_witnesses && rep.witnesses.size() < opts.max_witnesses && !r.witness.empty()) {
        rep.witnesses.push_back({grid.point(i), r.witness});
      }
    } else if (r.sigma > opts.separation * std::max(1.0, r.scale)) {
      ++rep.points_separated;
    } else if (rep.offending.size() < opts.max_offending) {
      rep.offending.push_back(grid.point(i));
    }
  }
  if (rep.points_tested == 0) {
    rep.min_sigma = 0.0;
    rep.verdict = Verdict::Inconclusive;
  } else if (rep.points_vanishing == rep.points_tested) {
    rep.verdict = Verdict::Present;
  } else if (rep.points_separated > 0) {
    rep.verdict = Verdict::Absent;
  } else {
    rep.verdict = Verdict::Inconclusive;
  }
  return rep;
}

inline PointResult skipped_point() {
  PointResult r;
  r.skipped = true;
  return r;
}

inline PointResult kernel_point(const CMatrix& a, const std::vector<CVector>& param_basis, double zero_tol,
                                bool want_witness) {
  PointResult r;
  const auto sys = singular_system(a);
  r.sigma = std::max(0.0, sys.values.front());
  r.scale = sys.values.back();
  if (want_witness && r.sigma < zero_tol) {
    const CVector x = sys.right_vectors.column(0);
    CVector psi(param_basis.front().size());
    for (std::size_t k = 0; k < x.size(); ++k)
      for (std::size_t i = 0; i < psi.size(); ++i) psi[i] += x[k] * param_basis[k][i];
    r.witness = std::move(psi);
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// eta operators

/// eta(omega; z) = sum_alpha sum_{lambda != omega} (1 - lambda z^alpha / omega) / (1 - z^alpha) P_alpha pi_lambda
/// Requires 0 not in S, z off L and omega in sigma(C).
inline CMatrix eta_general(const Walk& w, cplx omega, const TorusPoint& z) {
  if (w.steps().contains_origin()) throw CriteriaError("general eta undefined with lazy term (0 is a step)");
  if (in_singular_set(w, z, SingularSet::L)) throw CriteriaError("general eta undefined on L (z^alpha = 1)");
  const Coin& c = w.coin();
  if (!c.has_eigenvalue(omega)) throw CriteriaError("omega is not an eigenvalue of the coin");
  omega = c.snapped(omega);
  const std::size_t n = w.coin_dimension();
  CMatrix eta(n, n);
  const auto& es = c.spectrum();
  for (std::size_t k = 0; k < w.steps().size(); ++k) {
    const cplx za = z.monomial(w.steps()[k]);
    for (std::size_t cl = 0; cl < es.clusters.size(); ++cl) {
      const cplx lambda = es.clusters[cl].value;
      if (std::abs(lambda - omega) <= 1e-6) continue;
      const cplx coef = (1.0 - lambda * za / omega) / (1.0 - za);
      eta += coef * (w.projection(k) * es.projector(cl));
    }
  }
  return eta;
}

/// The three algebraic forms of eta(omega; z): the defining double sum, then
///   pi_w^perp + sum z^a/(1-z^a) P_a (I - C/omega) pi_w^perp
///   sum 1/(1-z^a) P_a (I - z^a C/omega) pi_w^perp
inline std::array<CMatrix, 3> eta_general_forms(const Walk& w, cplx omega, const TorusPoint& z) {
  const CMatrix first = eta_general(w, omega, z);
  const Coin& c = w.coin();
  omega = c.snapped(omega);
  const std::size_t n = w.coin_dimension();
  const CMatrix id = CMatrix::identity(n);
  const CMatrix perp = id - c.eigenprojector(omega);
  const CMatrix cw = (1.0 / omega) * c.matrix();
  CMatrix second = perp;
  CMatrix third(n, n);
  for (std::size_t k = 0; k < w.steps().size(); ++k) {
    const cplx za = z.monomial(w.steps()[k]);
    const CMatrix& p = w.projection(k);
    second += (za / (1.0 - za)) * (p * (id - cw) * perp);
    third += (1.0 / (1.0 - za)) * (p * (id - za * cw) * perp);
  }
  return {first, second, third};
}

struct FourierEta {
  CMatrix eta;
  CMatrix k;  ///< sum (1 + z^a)/(1 - z^a) P_a
  CMatrix l;  ///< sum (1 + i z^a)/(1 - z^a) P_a
  CMatrix m;  ///< sum (1 - i z^a)/(1 - z^a) P_a
};

/// eta(i^k; z) for a coin with C^4 = I, assembled from K, L, M and the spectral
/// projections pi_1, pi_i, pi_-1, pi_-i (zero for absent eigenvalues).
inline FourierEta eta_fourier(const Walk& w, int k, const TorusPoint& z) {
  if (!w.coin().flags().fourier || w.coin().flags().scalar) throw CriteriaError("eta_fourier needs a Fourier-type coin");
  if (k < 0 || k > 3) throw CriteriaError("eta_fourier: k must be in {0,1,2,3}");
  if (w.steps().contains_origin()) throw CriteriaError("general eta undefined with lazy term (0 is a step)");
  if (in_singular_set(w, z, SingularSet::L)) throw CriteriaError("eta undefined on L (z^alpha = 1)");
  const std::size_t n = w.coin_dimension();
  FourierEta out{CMatrix(n, n), CMatrix(n, n), CMatrix(n, n), CMatrix(n, n)};
  for (std::size_t a = 0; a < w.steps().size(); ++a) {
    const cplx za = z.monomial(w.steps()[a]);
    const CMatrix& p = w.projection(a);
    out.k += ((1.0 + za) / (1.0 - za)) * p;
    out.l += ((1.0 + I_unit * za) / (1.0 - za)) * p;
    out.m += ((1.0 - I_unit * za) / (1.0 - za)) * p;
  }
  const Coin& c = w.coin();
  const CMatrix p1 = c.eigenprojector(1.0);
  const CMatrix pi = c.eigenprojector(I_unit);
  const CMatrix pm1 = c.eigenprojector(-1.0);
  const CMatrix pmi = c.eigenprojector(-I_unit);
  switch (k) {
    case 0: out.eta = out.m * pi + out.k * pm1 + out.l * pmi; break;
    case 1: out.eta = out.l * p1 + out.m * pm1 + out.k * pmi; break;
    case 2: out.eta = out.k * p1 + out.l * pi + out.m * pmi; break;
    default: out.eta = out.m * p1 + out.k * pi + out.l * pm1; break;
  }
  return out;
}

/// eta(z) = sum_alpha (1 - z^alpha)/(1 + z^alpha) P_alpha, defined off E. The
/// rest step contributes exactly zero.
inline CMatrix eta_grover(const Walk& w, const TorusPoint& z) {
  if (!w.coin().flags().grover) throw CriteriaError("eta_grover needs a Grover-type coin (C^2 = I, C != cI)");
  if (in_singular_set(w, z, SingularSet::E)) throw CriteriaError("eta undefined on E (z^alpha = -1)");
  const std::size_t n = w.coin_dimension();
  CMatrix eta(n, n);
  for (std::size_t a = 0; a < w.steps().size(); ++a) {
    if (sup_norm(w.steps()[a]) == 0) continue;
    const cplx za = z.monomial(w.steps()[a]);
    eta += ((1.0 - za) / (1.0 + za)) * w.projection(a);
  }
  return eta;
}

// ---------------------------------------------------------------------------
// Grid scans

/// sigma_min(C^(z) - omega I) at every grid point.
inline SpectralReport symbol_scan(const Walk& w, cplx omega, const TorusGrid& grid, const ScanOptions& opts = {}) {
  const CMatrix shift = omega * CMatrix::identity(w.coin_dimension());
  return detail::run_scan(grid, omega, "symbol-scan", opts, [&](const TorusPoint& z) {
    detail::PointResult r;
    const auto sys = singular_system(symbol(w, z) - shift);
    r.sigma = std::max(0.0, sys.values.front());
    if (opts.keep_witnesses && r.sigma < opts.zero_tol) r.witness = sys.right_vectors.column(0);
    return r;
  });
}

/// Kernel test for walks without a rest step: a nonzero psi in E(omega)^perp
/// with eta(omega; z) psi in E(omega).
inline SpectralReport criterion_general(const Walk& w, cplx omega, const TorusGrid& grid,
                                        const ScanOptions& opts = {}) {
  if (w.steps().contains_origin()) throw CriteriaError("general eta undefined with lazy term (0 is a step)");
  const Coin& c = w.coin();
  if (c.flags().scalar) throw CriteriaError("criterion_general needs a coin that is not a scalar multiple of I");
  if (!c.has_eigenvalue(omega)) {
    SpectralReport rep;
    rep.omega = omega;
    rep.verdict = Verdict::Absent;
    rep.criterion = "coin-spectrum";
    return rep;
  }
  omega = c.snapped(omega);
  const std::size_t n = w.coin_dimension();
  const auto eig_basis = c.eigenbasis(omega);
  const auto perp_basis = orthogonal_complement(eig_basis, n);
  const CMatrix b = CMatrix::from_columns(perp_basis, n);
  const CMatrix perp_proj = CMatrix::identity(n) - c.eigenprojector(omega);
  return detail::run_scan(grid, omega, "general-kernel-scan", opts, [&](const TorusPoint& z) {
    if (in_singular_set(w, z, SingularSet::L)) return detail::skipped_point();
    const CMatrix a = perp_proj * eta_general(w, omega, z) * b;
    return detail::kernel_point(a, perp_basis, opts.zero_tol, opts.keep_witnesses);
  });
}

/// Kernel test for Grover-type coins: for sign +1 a nonzero psi in E(1) with
/// eta(z) psi in E(-1), for sign -1 the same with the roles swapped.
inline SpectralReport criterion_grover(const Walk& w, int sign, const TorusGrid& grid, const ScanOptions& opts = {}) {
  const Coin& c = w.coin();
  if (!c.flags().grover) throw CriteriaError("criterion_grover needs a Grover-type coin (C^2 = I, C != cI)");
  if (sign != 1 && sign != -1) throw CriteriaError("sign must be +1 or -1");
  const cplx s = static_cast<double>(sign);
  const std::size_t n = w.coin_dimension();
  const auto basis = c.eigenbasis(s);
  const CMatrix b = CMatrix::from_columns(basis, n);
  const CMatrix proj = c.eigenprojector(s);
  return detail::run_scan(grid, s, "grover-kernel-scan", opts, [&](const TorusPoint& z) {
    if (in_singular_set(w, z, SingularSet::E)) return detail::skipped_point();
    const CMatrix a = proj * eta_grover(w, z) * b;
    return detail::kernel_point(a, basis, opts.zero_tol, opts.keep_witnesses);
  });
}

/// phi = psi - eta psi, the eigenvector of C^(z) built from a kernel witness.
inline CVector reconstruct_eigenvector(const CMatrix& eta, const CVector& psi) { return psi - eta * psi; }

// ---------------------------------------------------------------------------
// Structural criteria

struct SymmetricBalance {
  bool applies = false;
  bool implies_eigenvalue = false;
  double max_defect = 0.0;  ///< max over the half set of ||pi_s (P_a - P_-a) pi_s||_max
};

/// Sufficient condition for eigenvalue sign (+1 or -1): S symmetric about the
/// origin and ||P_a phi|| = ||P_-a phi|| for every phi in E(sign). The norm
/// condition is checked as vanishing of the compressed Hermitian operator
/// pi_s (P_a - P_-a) pi_s, which is equivalent: its quadratic form is
/// ||P_a phi||^2 - ||P_-a phi||^2 on E(sign).
inline SymmetricBalance symmetric_sufficient(const Walk& w, int sign, double tol = 1e-10) {
  SymmetricBalance out;
  if (!w.coin().flags().grover || !w.steps().symmetric_about_origin()) return out;
  out.applies = true;
  const CMatrix pi = w.coin().eigenprojector(static_cast<double>(sign));
  const auto& steps = w.steps();
  for (std::size_t a = 0; a < steps.size(); ++a) {
    const auto& alpha = steps[a];
    if (sup_norm(alpha) == 0) continue;
    if (alpha > StepSet::negated(alpha)) continue;  // half set: lexicographically smaller of the pair
    const auto b = steps.index_of(StepSet::negated(alpha));
    const CMatrix comp = pi * (w.projection(a) - w.projection(*b)) * pi;
    out.max_defect = std::max(out.max_defect, comp.max_abs());
  }
  out.implies_eigenvalue = out.max_defect < tol;
  return out;
}

struct RestStepExclusion {
  bool applies = false;
  bool excludes_minus_one = false;
  double rest_component = 0.0;  ///< ||P_0 mu||
};

/// Reflection-type coin C_mu, 0 in S with rank P_0 = 1: P_0 mu != 0 rules out -1.
inline RestStepExclusion reflection_no_minus(const Walk& w) {
  RestStepExclusion out;
  const auto rest = w.steps().origin_index();
  const auto& mu = w.coin().reflection_vector();
  if (!rest || !w.coin().flags().reflection || !mu) return out;
  const CMatrix& p0 = w.projection(*rest);
  if (std::abs(p0.trace() - 1.0) > 1e-10) return out;
  out.applies = true;
  out.rest_component = norm(p0 * *mu);
  out.excludes_minus_one = out.rest_component > 1e-12;
  return out;
}

struct LazyBalance {
  bool applies = false;
  bool both_present = false;
};

/// Lazy layout, mu = (a_1..a_{2d+1}): |a_j| = |a_{d+1+j}| for all j and
/// a_{d+1} = 0 give both +1 and -1 as eigenvalues of the lazy walk with C_mu.
inline LazyBalance lazy_both_eigen(std::span<const cplx> mu, double tol = 1e-12) {
  if (mu.size() < 3 || mu.size() % 2 == 0) {
    throw CriteriaError("lazy reflection vector must have length 2d+1 >= 3 (got " + std::to_string(mu.size()) + ")");
  }
  const std::size_t d = (mu.size() - 1) / 2;
  LazyBalance out;
  bool balanced = std::abs(mu[d]) <= tol;
  for (std::size_t j = 0; j < d && balanced; ++j) balanced = std::abs(std::abs(mu[j]) - std::abs(mu[d + 1 + j])) <= tol;
  out.applies = balanced;
  out.both_present = balanced;
  return out;
}

struct ProductDimension {
  bool implies_eigenvalue_one = false;
  std::size_t dim_plus = 0;
  std::size_t dim_minus = 0;
};

/// For the product walk S^* C S C with Grover-type C: dim E(1) < dim E(-1)
/// gives eigenvalue 1.
inline ProductDimension product_dim_criterion(const Coin& c) {
  ProductDimension out;
  if (!c.flags().grover) return out;
  out.dim_plus = c.multiplicity(1.0);
  out.dim_minus = c.multiplicity(-1.0);
  out.implies_eigenvalue_one = out.dim_plus < out.dim_minus;
  return out;
}

// ---------------------------------------------------------------------------
// Candidate point spectrum

inline constexpr std::uint64_t default_seed = 20160101;

/// Uniform random torus points off L and E.
inline std::vector<TorusPoint> random_torus_points(const Walk& w, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<TorusPoint> pts;
  while (pts.size() < count) {
    std::vector<double> a(w.dimension());
    for (auto& x : a) x = phase(rng);
    TorusPoint z = TorusPoint::from_angles(a);
    if (in_singular_set(w, z, SingularSet::L, 1e-6) || in_singular_set(w, z, SingularSet::E, 1e-6)) continue;
    pts.push_back(std::move(z));
  }
  return pts;
}

/// Values that are eigenvalues of C^(z) at every sampled point: the only
/// possible eigenvalues of the walk operator.
inline std::vector<cplx> candidate_spectrum(const Walk& w, std::size_t sample_count, std::uint64_t seed = default_seed,
                                            double cluster_tol = 1e-6) {
  if (sample_count == 0) return {};
  const auto pts = random_torus_points(w, sample_count, seed);
  std::vector<std::vector<cplx>> spectra(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) { spectra[i] = eig_normal(symbol(w, pts[i])).eigenvalues; });

  std::vector<cplx> candidates;
  for (const auto& c : cluster_eigenvalues(spectra.front(), cluster_tol)) candidates.push_back(c.value);
  std::vector<cplx> sum = candidates;
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    std::vector<cplx> keep;
    std::vector<cplx> keep_sum;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      double best = std::numeric_limits<double>::infinity();
      cplx nearest = 0.0;
      for (const auto& ev : spectra[i]) {
        const double d = std::abs(ev - candidates[c]);
        if (d < best) {
          best = d;
          nearest = ev;
        }
      }
      if (best <= cluster_tol) {
        keep.push_back(candidates[c]);
        keep_sum.push_back(sum[c] + nearest);
      }
    }
    candidates = std::move(keep);
    sum = std::move(keep_sum);
  }
  for (std::size_t c = 0; c < candidates.size(); ++c) candidates[c] = sum[c] / static_cast<double>(spectra.size());
  return candidates;
}

// ---------------------------------------------------------------------------
// The 2-D Fourier walk: explicit condition systems
//
// For the std layout in d = 2 with coin F_4, E(omega)^perp is parametrised by
// fixed vectors and membership of eta(omega; z) psi in E(omega) is written as a
// square linear system in the parameters. Rows are annihilators of E(omega)
// scaled by factors (1 - z_j), so that the entries are polynomials in z.

struct ConditionSystem {
  cplx omega;
  CMatrix matrix;                   ///< square, entries polynomial in z_1, z_2
  std::vector<CVector> parameters;  ///< columns spanning E(omega)^perp
};

inline ConditionSystem fourier_plane_condition(const Walk& w, int k, const TorusPoint& z) {
  if (w.dimension() != 2 || w.coin_dimension() != 4 || (w.coin().matrix() - fourier_coin(4).matrix()).max_abs() > 1e-12)
    throw CriteriaError("fourier_plane_condition needs the 2-D Fourier walk");
  const cplx z1 = z[0];
  const cplx z2 = z[1];
  const cplx both = (1.0 - z1) * (1.0 - z2);
  std::vector<CVector> params;
  std::vector<CVector> annihilators;
  std::vector<cplx> scales;
  cplx omega;
  switch (k) {
    case 0:  // psi = a (1,-2,-1,0) + b (1,0,-1,-2)
      omega = 1.0;
      params = {{1.0, -2.0, -1.0, 0.0}, {1.0, 0.0, -1.0, -2.0}};
      annihilators = {{0.0, 1.0, 0.0, -1.0}, {-1.0, 2.0, 1.0, 0.0}};
      scales = {both, both};
      break;
    case 1:  // psi = (a, b, c, b)
      omega = I_unit;
      params = {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}};
      annihilators = {{0.0, 1.0, 0.0, 1.0}, {1.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 1.0, 0.0}};
      scales = {-2.0 * both, 2.0 * (1.0 - z1), 2.0 * (1.0 - z2)};
      break;
    case 2:  // psi = (a+b+c, a, b, c)
      omega = -1.0;
      params = {{1.0, 1.0, 0.0, 0.0}, {1.0, 0.0, 1.0, 0.0}, {1.0, 0.0, 0.0, 1.0}};
      annihilators = {{1.0, 0.0, 1.0, 0.0}, {1.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 1.0, -1.0}};
      scales = {both, 2.0 * (1.0 - z1), 2.0 * (1.0 - z2)};
      break;
    default: throw CriteriaError("fourier_plane_condition: -i is not an eigenvalue of F_4");
  }
  const CMatrix image = eta_general(w, omega, z) * CMatrix::from_columns(params, 4);
  CMatrix m(annihilators.size(), params.size());
  for (std::size_t r = 0; r < annihilators.size(); ++r)
    for (std::size_t c = 0; c < params.size(); ++c) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < 4; ++i) s += annihilators[r][i] * image(i, c);
      m(r, c) = scales[r] * s;
    }
  return {omega, m, params};
}

inline cplx determinant(const CMatrix& m) {
  if (!m.is_square()) throw LinalgError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  CMatrix a = m;
  cplx det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) == 0.0) return 0.0;
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      const cplx f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

}  // namespace qwalk

#endif  // QWALK_CRITERIA_HPP
