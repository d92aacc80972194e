#ifndef QWALK_EIGENSPACE_HPP
#define QWALK_EIGENSPACE_HPP

// Eigenfunctions of reflection-coin walks on the torus side, eigenprojections
// of delta_0 (x) phi by torus quadrature, and the Wiener time-average check.
//
// For C = C_mu, S symmetric and ||P_a mu|| = ||P_-a mu||, the +1 eigenspace of
// the walk is L^2(T^d) w_o with
//   w_o(z) = (mu - eta(z) mu) / ||mu - eta(z) mu||
//          = N(z) sum_a z^a / (1 + z^a) P_a mu,   N(z)^-2 = sum_a ||P_a mu||^2 / |1 + z^a|^2.

#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/criteria.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

class EigenspaceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double eigenfunction_form_tol = 1e-10;

/// Throws naming the first failed hypothesis; returns mu otherwise.
inline const CVector& eigenfunction_vector(const Walk& w) {
  const auto& mu = w.coin().reflection_vector();
  if (!w.coin().flags().reflection || !mu) throw EigenspaceError("coin is not of reflection type C_mu = 2 mu mu* - I");
  if (!w.steps().symmetric_about_origin()) throw EigenspaceError("step set is not symmetric about the origin");
  for (std::size_t a = 0; a < w.steps().size(); ++a) {
    const auto b = *w.steps().index_of(StepSet::negated(w.steps()[a]));
    const double na = norm(w.projection(a) * *mu);
    const double nb = norm(w.projection(b) * *mu);
    if (std::abs(na - nb) > 1e-10) {
      std::ostringstream os;
      os << "||P_a mu|| != ||P_-a mu|| for a = " << to_string(w.steps()[a]) << " (" << na << " vs " << nb << ")";
      throw EigenspaceError(os.str());
    }
  }
  return *mu;
}

/// True when w is the lazy walk in the std layout with the Grover coin G_{2d+1}.
inline bool is_lazy_grover(const Walk& w) {
  const std::size_t d = w.dimension();
  if (w.kind() != WalkKind::Plain || w.coin_dimension() != 2 * d + 1) return false;
  const auto expected = lazy_steps(d);
  for (std::size_t a = 0; a < expected.size(); ++a) {
    if (w.steps()[a] != expected[a]) return false;
    if ((w.projection(a) - ResolutionOfUnity::coordinate(2 * d + 1)[a]).max_abs() > 0.0) return false;
  }
  const double n = static_cast<double>(2 * d + 1);
  const CMatrix& c = w.coin().matrix();
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j)
      if (std::abs(c(i, j) - (2.0 / n - (i == j ? 1.0 : 0.0))) > 1e-14) return false;
  return true;
}

struct EigenfunctionForms {
  CVector normalized_difference;  ///< (mu - eta mu) / ||mu - eta mu||
  CVector weighted_sum;           ///< N(z) sum z^a/(1+z^a) P_a mu
  std::optional<CVector> lazy;    ///< (1/D(z)) (e_{d+1}/2 + sum (z_j e_j + e_{d+1+j})/(1+z_j)), lazy Grover only
  std::optional<double> lazy_norm;  ///< D(z)
};

inline EigenfunctionForms eigenfunction_forms(const Walk& w, const TorusPoint& z) {
  const CVector& mu = eigenfunction_vector(w);
  if (in_singular_set(w, z, SingularSet::E)) throw EigenspaceError("w_o is undefined on E (z^alpha = -1)");
  EigenfunctionForms f;

  CVector diff = mu - eta_grover(w, z) * mu;
  const double dn = norm(diff);
  f.normalized_difference = (1.0 / dn) * diff;

  CVector sum(w.coin_dimension());
  double weight = 0.0;
  for (std::size_t a = 0; a < w.steps().size(); ++a) {
    const cplx za = z.monomial(w.steps()[a]);
    const CVector pm = w.projection(a) * mu;
    weight += std::pow(norm(pm), 2) / std::norm(1.0 + za);
    sum = sum + (za / (1.0 + za)) * pm;
  }
  f.weighted_sum = (1.0 / std::sqrt(weight)) * sum;

  if (is_lazy_grover(w)) {
    const std::size_t d = w.dimension();
    CVector v(2 * d + 1);
    double d2 = 0.25;
    v[d] = 0.5;
    for (std::size_t j = 0; j < d; ++j) {
      const cplx g = 1.0 / (1.0 + z[j]);
      v[j] = z[j] * g;
      v[d + 1 + j] = g;
      d2 += 2.0 * std::norm(g);
    }
    f.lazy_norm = std::sqrt(d2);
    f.lazy = (1.0 / *f.lazy_norm) * v;
  }
  return f;
}

/// The unit eigenvector w_o(z) of C^(z) for eigenvalue 1. All available closed
/// forms are evaluated and must agree.
inline CVector w_o(const Walk& w, const TorusPoint& z) {
  const auto f = eigenfunction_forms(w, z);
  double gap = max_abs(f.normalized_difference - f.weighted_sum);
  if (f.lazy) gap = std::max(gap, max_abs(f.normalized_difference - *f.lazy));
  if (gap > eigenfunction_form_tol) {
    std::ostringstream os;
    os << "closed forms of w_o disagree by " << gap;
    throw EigenspaceError(os.str());
  }
  return f.lazy ? *f.lazy : f.normalized_difference;
}

/// Orthogonal projector onto the omega-eigenspace of C^(z).
inline CMatrix projector_spectral(const Walk& w, cplx omega, const TorusPoint& z, double cluster_tol = 1e-6) {
  const auto es = eig_normal(symbol(w, z));
  const auto k = es.find_cluster(omega, cluster_tol);
  if (!k) {
    std::ostringstream os;
    os << "omega = " << omega << " is not an eigenvalue of the symbol at this point";
    throw EigenspaceError(os.str());
  }
  return es.projector(*k);
}

// ---------------------------------------------------------------------------
// Torus quadrature

/// A finitely supported function on Z^d with values in C^D.
using LatticeFunction = std::vector<std::pair<LatticePoint, CVector>>;

inline LatticeFunction delta_at_origin(std::size_t d, const CVector& phi) { return {{LatticePoint(d, 0), phi}}; }

/// (F g)(z) = sum_y g(y) z^y
inline CVector fourier_transform(const LatticeFunction& g, const TorusPoint& z, std::size_t coin_dim) {
  CVector out(coin_dim);
  for (const auto& [y, v] : g) out = out + z.monomial(y) * v;
  return out;
}

struct QuadratureValue {
  CVector value;
  double error_estimate = 0.0;  ///< max-abs change against the grid with half as many points per axis
  std::size_t nodes = 0;
  std::size_t skipped = 0;
};

/// Trapezoidal value of int z^{-x} P(z) (F g)(z) dnu on the standard offset
/// grid, where apply(z, v) = P(z) v. Nodes in E are dropped when skip_e is set.
inline QuadratureValue project_by_quadrature(const Walk& w,
                                             const std::function<CVector(const TorusPoint&, const CVector&)>& apply,
                                             const LatticeFunction& g, std::span<const int> x,
                                             std::size_t points_per_axis, bool skip_e) {
  if (x.size() != w.dimension()) throw EigenspaceError("lattice point has wrong dimension");
  const auto grid = TorusGrid::standard(w.dimension(), points_per_axis);
  const std::size_t dc = w.coin_dimension();
  std::vector<std::optional<CVector>> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) {
    const TorusPoint z = grid.point(i);
    if (skip_e && in_singular_set(w, z, SingularSet::E)) return;
    const cplx phase = std::conj(z.monomial(x));
    vals[i] = phase * apply(z, fourier_transform(g, z, dc));
  });
  QuadratureValue q;
  q.value.assign(dc, cplx{});
  q.nodes = grid.size();
  for (const auto& v : vals) {
    if (!v) {
      ++q.skipped;
      continue;
    }
    q.value = q.value + *v;
  }
  for (auto& c : q.value) c /= static_cast<double>(grid.size());
  return q;
}

inline QuadratureValue project_by_quadrature_with_error(
    const Walk& w, const std::function<CVector(const TorusPoint&, const CVector&)>& apply, const LatticeFunction& g,
    std::span<const int> x, std::size_t points_per_axis, bool skip_e) {
  auto fine = project_by_quadrature(w, apply, g, x, points_per_axis, skip_e);
  if (points_per_axis >= 4) {
    const auto coarse = project_by_quadrature(w, apply, g, x, points_per_axis / 2, skip_e);
    fine.error_estimate = max_abs(fine.value - coarse.value);
  }
  return fine;
}

/// v -> <v, w_o(z)> w_o(z)
inline std::function<CVector(const TorusPoint&, const CVector&)> plus_projector(const Walk& w) {
  eigenfunction_vector(w);
  return [&w](const TorusPoint& z, const CVector& v) {
    const CVector e = w_o(w, z);
    return inner(v, e) * e;
  };
}

inline std::function<CVector(const TorusPoint&, const CVector&)> spectral_projector(const Walk& w, cplx omega) {
  return [&w, omega](const TorusPoint& z, const CVector& v) { return projector_spectral(w, omega, z) * v; };
}

/// Pi_+(delta_0 (x) phi)(x) = int z^{-x} <phi, w_o(z)> w_o(z) dnu(z).
inline CVector project_plus(const Walk& w, const CVector& phi, std::span<const int> x, std::size_t points_per_axis) {
  require_unit(phi, w.coin_dimension(), "coin state");
  return project_by_quadrature(w, plus_projector(w), delta_at_origin(w.dimension(), phi), x, points_per_axis, true)
      .value;
}

inline QuadratureValue project_plus_with_error(const Walk& w, const CVector& phi, std::span<const int> x,
                                               std::size_t points_per_axis) {
  require_unit(phi, w.coin_dimension(), "coin state");
  return project_by_quadrature_with_error(w, plus_projector(w), delta_at_origin(w.dimension(), phi), x,
                                          points_per_axis, true);
}

/// Pi_omega(delta_0 (x) phi)(x) from the pointwise eigenprojector of C^(z).
inline QuadratureValue project_spectral(const Walk& w, cplx omega, const CVector& phi, std::span<const int> x,
                                        std::size_t points_per_axis) {
  require_unit(phi, w.coin_dimension(), "coin state");
  return project_by_quadrature_with_error(w, spectral_projector(w, omega), delta_at_origin(w.dimension(), phi), x,
                                          points_per_axis, false);
}

// ---------------------------------------------------------------------------
// Wiener identity: lim (1/N) sum p_n(phi; x) = sum_omega ||Pi_omega(delta_0 (x) phi)(x)||^2

struct EigenvalueContribution {
  cplx omega;
  double weight = 0.0;  ///< ||Pi_omega(delta_0 (x) phi)(x)||^2
  double error_estimate = 0.0;
  std::string method;  ///< "eigenfunction" or "spectral-projector"
};

struct WienerCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  std::vector<cplx> eigenvalues;
  std::vector<EigenvalueContribution> contributions;
};

struct WienerOptions {
  std::size_t spectrum_samples = 50;
  std::uint64_t seed = default_seed;
};

inline bool has_eigenfunction_form(const Walk& w) {
  try {
    eigenfunction_vector(w);
    return w.kind() == WalkKind::Plain;
  } catch (const EigenspaceError&) {
    return false;
  }
}

inline WienerCheck wiener_check(const Walk& w, const CVector& phi, std::span<const int> x, std::size_t n_max,
                                std::size_t points_per_axis, const WienerOptions& opts = {}) {
  require_unit(phi, w.coin_dimension(), "coin state");
  WienerCheck out;
  out.lhs = time_average(w, phi, x, n_max);
  out.eigenvalues = candidate_spectrum(w, opts.spectrum_samples, opts.seed);
  for (const cplx omega : out.eigenvalues) {
    EigenvalueContribution c;
    c.omega = omega;
    QuadratureValue q;
    if (std::abs(omega - 1.0) < 1e-6 && has_eigenfunction_form(w)) {
      q = project_plus_with_error(w, phi, x, points_per_axis);
      c.method = "eigenfunction";
    } else {
      q = project_spectral(w, omega, phi, x, points_per_axis);
      c.method = "spectral-projector";
    }
    const double nv = norm(q.value);
    c.weight = nv * nv;
    c.error_estimate = q.error_estimate;
    out.rhs += c.weight;
    out.contributions.push_back(std::move(c));
  }
  out.gap = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace qwalk

#endif  // QWALK_EIGENSPACE_HPP
