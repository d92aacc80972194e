#ifndef QWALK_DEFORMATION_HPP
#define QWALK_DEFORMATION_HPP

// Named one-parameter deformations of Grover coins and the path of reflection
// vectors mu(t) joining mu_{2d+1} to a balanced target mu for lazy walks.

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/criteria.hpp"
#include "qwalk/linalg.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

class DeformationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The 4x4 coin with rows (-p, q, r, r), (q, -p, r, r), (r, r, -q, p), (r, r, p, -q),
/// q = 1 - p, r = sqrt(pq). It is C_mu for mu = (sqrt q, sqrt q, sqrt p, sqrt p)/sqrt 2.
inline Coin wkkk_coin(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DeformationError("wkkk coin needs 0 < p < 1 (got " + std::to_string(p) + ")");
  const double q = 1.0 - p;
  const double r = std::sqrt(p * q);
  CMatrix m{{-p, q, r, r}, {q, -p, r, r}, {r, r, -q, p}, {r, r, p, -q}};
  return Coin::from_matrix(std::move(m));
}

inline CVector wkkk_vector(double p) {
  const double q = 1.0 - p;
  const double s = 1.0 / std::sqrt(2.0);
  return {s * std::sqrt(q), s * std::sqrt(q), s * std::sqrt(p), s * std::sqrt(p)};
}

/// The 3x3 coin C_2(rho) = C_v with v = (sqrt((1-rho^2)/2), rho, sqrt((1-rho^2)/2)).
inline Coin sbj_coin(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0 / std::sqrt(2.0) + 1e-15))
    throw DeformationError("sbj coin needs 0 <= rho <= 1/sqrt(2) (got " + std::to_string(rho) + ")");
  const double r2 = rho * rho;
  const double off = rho * std::sqrt(2.0 * (1.0 - r2));
  CMatrix m{{-r2, off, 1.0 - r2}, {off, 2.0 * r2 - 1.0, off}, {1.0 - r2, off, -r2}};
  return Coin::from_matrix(std::move(m));
}

inline CVector sbj_vector(double rho) {
  const double s = std::sqrt((1.0 - rho * rho) / 2.0);
  return {s, rho, s};
}

// ---------------------------------------------------------------------------
// mu(t) = [f(t) nu(t), rho(t) e^{i t phi}, f(t) D(t) nu(t)]

using ShapeFunction = std::function<double(double)>;

class MuPath {
public:
  /// mu = (a_1, ..., a_{2d+1}) with |a_j| = |a_{d+1+j}| and nu = (a_1..a_d) != 0.
  /// An empty shape selects f(t) = f(0) + (1 - f(0)) t.
  explicit MuPath(CVector mu, ShapeFunction shape = {}) : mu_(std::move(mu)) {
    if (mu_.size() < 3 || mu_.size() % 2 == 0)
      throw DeformationError("path target must have length 2d+1 >= 3 (got " + std::to_string(mu_.size()) + ")");
    if (std::abs(norm(mu_) - 1.0) > 1e-12) throw DeformationError("path target is not a unit vector");
    d_ = (mu_.size() - 1) / 2;
    nu_.assign(mu_.begin(), mu_.begin() + static_cast<std::ptrdiff_t>(d_));
    theta_.assign(d_, 0.0);
    for (std::size_t j = 0; j < d_; ++j) {
      const cplx a = mu_[j];
      const cplx b = mu_[d_ + 1 + j];
      if (std::abs(std::abs(a) - std::abs(b)) > 1e-12) {
        throw DeformationError("path target violates |a_j| = |a_{d+1+j}| at j = " + std::to_string(j + 1));
      }
      if (std::abs(a) > 0.0) theta_[j] = std::arg(b / a);
    }
    p_ = norm(nu_);
    if (p_ <= 1e-12) throw DeformationError("nu = 0 (diagonal coin case) has no deformation path");
    phi_ = std::abs(mu_[d_]) > 0.0 ? std::arg(mu_[d_]) : 0.0;
    nu0_.assign(d_, p_ / std::sqrt(static_cast<double>(d_)));
    f0_ = std::sqrt(static_cast<double>(d_) / static_cast<double>(2 * d_ + 1)) / p_;
    shape_ = shape ? std::move(shape) : ShapeFunction([f0 = f0_](double t) { return f0 + (1.0 - f0) * t; });
    check_shape();
    setup_geodesic();
  }

  std::size_t lattice_dimension() const noexcept { return d_; }
  const CVector& target() const noexcept { return mu_; }
  const CVector& nu() const noexcept { return nu_; }
  const CVector& nu0() const noexcept { return nu0_; }
  double p() const noexcept { return p_; }
  double phase() const noexcept { return phi_; }
  const std::vector<double>& angles() const noexcept { return theta_; }

  double f(double t) const { return shape_(t); }
  /// sqrt(1 - 2 p^2 f^2), evaluated as sqrt((1 - f^2) + |a_{d+1}|^2 f^2) using 2 p^2 = 1 - |a_{d+1}|^2;
  /// the direct form cancels to ~1e-8 instead of 0 at t = 1 when a_{d+1} = 0.
  double rho(double t) const {
    const double ft = f(t);
    const double r1 = std::abs(mu_[d_]);
    return std::sqrt(std::max(0.0, (1.0 - ft * ft) + r1 * r1 * ft * ft));
  }

  /// Point of the great circle arc from nu0 to nu (real 2d-dimensional sphere of radius p).
  CVector nu_at(double t) const {
    if (!via_) return slerp(nu0_, nu_, angle_, t);
    if (t <= 0.5) return slerp(nu0_, *via_, std::numbers::pi / 2, 2.0 * t);
    return slerp(*via_, nu_, std::numbers::pi / 2, 2.0 * t - 1.0);
  }

  CVector evaluate(double t) const {
    if (!(t >= 0.0 && t <= 1.0)) throw DeformationError("path parameter must lie in [0, 1]");
    const double ft = f(t);
    const CVector nt = nu_at(t);
    CVector out(2 * d_ + 1);
    for (std::size_t j = 0; j < d_; ++j) {
      out[j] = ft * nt[j];
      out[d_ + 1 + j] = ft * std::polar(1.0, t * theta_[j]) * nt[j];
    }
    out[d_] = rho(t) * std::polar(1.0, t * phi_);
    return out;
  }

private:
  static CVector slerp(const CVector& a, const CVector& b, double angle, double t) {
    if (angle < 1e-12) return a + t * (b - a);
    const double s = std::sin(angle);
    return (std::sin((1.0 - t) * angle) / s) * a + (std::sin(t * angle) / s) * b;
  }

  void check_shape() const {
    const double bound = 1.0 / (p_ * std::sqrt(2.0));
    if (std::abs(f(0.0) - f0_) > 1e-12) {
      std::ostringstream os;
      os << "shape function must start at f(0) = sqrt(d/(2d+1))/p = " << f0_ << " (got " << f(0.0) << ")";
      throw DeformationError(os.str());
    }
    if (std::abs(f(1.0) - 1.0) > 1e-12) throw DeformationError("shape function must end at f(1) = 1");
    for (int k = 0; k <= 100; ++k) {
      const double t = k / 100.0;
      const double v = f(t);
      if (v < 0.0 || v > bound + 1e-12) {
        std::ostringstream os;
        os << "shape function leaves [0, 1/(p sqrt 2)] = [0, " << bound << "] at t = " << t << " (f = " << v << ")";
        throw DeformationError(os.str());
      }
    }
  }

  // nu0 and nu as real vectors; near-antipodal pairs go through a point at a
  // right angle to both.
  void setup_geodesic() {
    const double c = std::clamp(inner(nu_, nu0_).real() / (p_ * p_), -1.0, 1.0);
    angle_ = std::acos(c);
    if (std::numbers::pi - angle_ > 1e-6) return;
    for (std::size_t k = 0; k < 2 * d_; ++k) {
      CVector e(d_);
      e[k / 2] = (k % 2 == 0) ? cplx{1.0} : I_unit;
      if (std::abs(inner(e, nu0_).real()) < 1e-12 && std::abs(inner(e, nu_).real()) < 1e-12) {
        via_ = p_ * e;
        return;
      }
    }
    // No coordinate direction is orthogonal to both; orthogonalize the first
    // usable one against nu0 in the real inner product (nu is close to -nu0).
    for (std::size_t k = 0; k < 2 * d_; ++k) {
      CVector cand(d_);
      cand[k / 2] = (k % 2 == 0) ? cplx{1.0} : I_unit;
      CVector r = cand - (inner(cand, nu0_).real() / (p_ * p_)) * nu0_;
      if (norm(r) > 1e-6) {
        via_ = (p_ / norm(r)) * r;
        return;
      }
    }
  }

  CVector mu_;
  std::size_t d_ = 0;
  CVector nu_;
  CVector nu0_;
  std::vector<double> theta_;
  double p_ = 0.0;
  double phi_ = 0.0;
  double f0_ = 0.0;
  double angle_ = 0.0;
  std::optional<CVector> via_;
  ShapeFunction shape_;
};

inline MuPath mu_path(CVector mu, ShapeFunction shape = {}) { return MuPath(std::move(mu), std::move(shape)); }

inline CVector evaluate(const MuPath& path, double t) { return path.evaluate(t); }

// ---------------------------------------------------------------------------
// Sweep along the path

struct DeformationSample {
  double t = 0.0;
  CVector mu;
  SpectralReport plus;   ///< symbol scan for +1
  SpectralReport minus;  ///< symbol scan for -1
  bool balance_plus = false;      ///< symmetric-balance test for +1
  bool rest_excludes_minus = false;
  bool balanced_both = false;
};

inline std::vector<double> uniform_parameters(std::size_t samples) {
  if (samples < 2) throw DeformationError("a sweep needs at least 2 samples");
  std::vector<double> ts(samples);
  for (std::size_t k = 0; k < samples; ++k) ts[k] = static_cast<double>(k) / static_cast<double>(samples - 1);
  return ts;
}

inline std::vector<DeformationSample> deformation_sweep(const MuPath& path, std::span<const double> ts,
                                                        std::size_t grid_points, const ScanOptions& opts = {}) {
  const std::size_t d = path.lattice_dimension();
  const auto grid = TorusGrid::standard(d, grid_points);
  std::vector<DeformationSample> out;
  for (const double t : ts) {
    DeformationSample s;
    s.t = t;
    s.mu = path.evaluate(t);
    const Walk w = lazy_walk(d, reflection_coin(s.mu));
    s.plus = symbol_scan(w, 1.0, grid, opts);
    s.minus = symbol_scan(w, -1.0, grid, opts);
    s.balance_plus = symmetric_sufficient(w, 1).implies_eigenvalue;
    s.rest_excludes_minus = reflection_no_minus(w).excludes_minus_one;
    s.balanced_both = lazy_both_eigen(s.mu).both_present;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace qwalk

#endif  // QWALK_DEFORMATION_HPP
