#ifndef QWALK_WALK_HPP
#define QWALK_WALK_HPP

// Walk definitions: step sets in Z^d, resolutions of unity indexed by steps,
// coin matrices and their classification, the built-in walks, and the unitary
// symbol C^(z) on the torus.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qwalk/linalg.hpp"

namespace qwalk {

class WalkError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using LatticePoint = std::vector<int>;

inline std::string to_string(const LatticePoint& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(x[i]);
  }
  return s + ")";
}

inline int sup_norm(const LatticePoint& x) {
  int m = 0;
  for (int v : x) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------
// Torus points

inline constexpr double torus_tol = 1e-12;

/// A point of T^d stored as d unit-modulus complex numbers.
class TorusPoint {
public:
  TorusPoint() = default;
  explicit TorusPoint(std::vector<cplx> coords) : z_(std::move(coords)) {
    for (std::size_t j = 0; j < z_.size(); ++j) {
      if (std::abs(std::abs(z_[j]) - 1.0) > torus_tol) {
        std::ostringstream os;
        os << "point is off the torus: |z_" << j + 1 << "| = " << std::abs(z_[j]);
        throw WalkError(os.str());
      }
    }
  }

  /// z_j = exp(i * angle_j)
  static TorusPoint from_angles(std::span<const double> angles) {
    std::vector<cplx> z(angles.size());
    for (std::size_t j = 0; j < angles.size(); ++j) z[j] = std::polar(1.0, angles[j]);
    return TorusPoint(std::move(z));
  }

  static TorusPoint ones(std::size_t d) { return TorusPoint(std::vector<cplx>(d, 1.0)); }

  std::size_t dimension() const noexcept { return z_.size(); }
  cplx operator[](std::size_t j) const { return z_.at(j); }
  const std::vector<cplx>& coords() const noexcept { return z_; }

  /// z^alpha = prod_j z_j^{alpha_j}
  cplx monomial(std::span<const int> alpha) const {
    if (alpha.size() != z_.size()) throw WalkError("monomial: dimension mismatch");
    cplx r = 1.0;
    for (std::size_t j = 0; j < z_.size(); ++j) {
      const cplx base = alpha[j] >= 0 ? z_[j] : std::conj(z_[j]);
      for (int k = 0; k < std::abs(alpha[j]); ++k) r *= base;
    }
    return r;
  }

  TorusPoint conj() const {
    TorusPoint c = *this;
    for (auto& v : c.z_) v = std::conj(v);
    return c;
  }

private:
  std::vector<cplx> z_;
};

// ---------------------------------------------------------------------------
// Steps

class StepSet {
public:
  StepSet() = default;
  StepSet(std::size_t dimension, std::vector<LatticePoint> steps) : dim_(dimension), steps_(std::move(steps)) {
    if (dim_ == 0) throw WalkError("step set dimension must be at least 1");
    if (steps_.empty()) throw WalkError("step set is empty");
    for (std::size_t a = 0; a < steps_.size(); ++a) {
      if (steps_[a].size() != dim_) {
        throw WalkError("step " + to_string(steps_[a]) + " has wrong dimension (expected " + std::to_string(dim_) +
                        ")");
      }
      for (std::size_t b = 0; b < a; ++b) {
        if (steps_[a] == steps_[b]) throw WalkError("duplicate step " + to_string(steps_[a]));
      }
    }
    symmetric_ = std::all_of(steps_.begin(), steps_.end(), [&](const LatticePoint& s) {
      return index_of(negated(s)).has_value();
    });
  }

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return steps_.size(); }
  const LatticePoint& operator[](std::size_t k) const { return steps_.at(k); }
  const std::vector<LatticePoint>& steps() const noexcept { return steps_; }
  auto begin() const noexcept { return steps_.begin(); }
  auto end() const noexcept { return steps_.end(); }

  bool symmetric_about_origin() const noexcept { return symmetric_; }

  std::optional<std::size_t> index_of(const LatticePoint& alpha) const {
    for (std::size_t k = 0; k < steps_.size(); ++k)
      if (steps_[k] == alpha) return k;
    return std::nullopt;
  }
  std::optional<std::size_t> origin_index() const { return index_of(LatticePoint(dim_, 0)); }
  bool contains_origin() const { return origin_index().has_value(); }

  /// max over steps of |alpha|_inf
  int reach() const {
    int r = 0;
    for (const auto& s : steps_) r = std::max(r, sup_norm(s));
    return r;
  }

  static LatticePoint negated(LatticePoint a) {
    for (auto& v : a) v = -v;
    return a;
  }

private:
  std::size_t dim_ = 0;
  std::vector<LatticePoint> steps_;
  bool symmetric_ = false;
};

// ---------------------------------------------------------------------------
// Resolutions of unity

inline constexpr double resolution_tol = 1e-12;

class ResolutionOfUnity {
public:
  ResolutionOfUnity() = default;

  explicit ResolutionOfUnity(std::vector<CMatrix> projections) : projections_(std::move(projections)) {
    if (projections_.empty()) throw WalkError("resolution of unity has no projections");
    dim_ = projections_.front().rows();
    for (std::size_t k = 0; k < projections_.size(); ++k) {
      if (projections_[k].rows() != dim_ || projections_[k].cols() != dim_) {
        throw WalkError("projection " + std::to_string(k) + " is " + projections_[k].shape() + ", expected " +
                        std::to_string(dim_) + "x" + std::to_string(dim_));
      }
    }
  }

  /// Coordinate partition: step k owns the coordinate indices partition[k]
  /// (zero-based), expanded to diagonal 0/1 projections.
  static ResolutionOfUnity from_partition(std::size_t dim, const std::vector<std::vector<std::size_t>>& partition) {
    std::vector<CMatrix> mats;
    for (const auto& block : partition) {
      CMatrix p(dim, dim);
      for (auto idx : block) {
        if (idx >= dim) {
          throw WalkError("partition index " + std::to_string(idx) + " out of range for coin dimension " +
                          std::to_string(dim));
        }
        p(idx, idx) = 1.0;
      }
      mats.push_back(std::move(p));
    }
    ResolutionOfUnity r(std::move(mats));
    r.dim_ = dim;
    r.partition_ = partition;
    return r;
  }

  /// P_k = e_k e_k^* for k = 0..dim-1.
  static ResolutionOfUnity coordinate(std::size_t dim) {
    std::vector<std::vector<std::size_t>> part(dim);
    for (std::size_t k = 0; k < dim; ++k) part[k] = {k};
    return from_partition(dim, part);
  }

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return projections_.size(); }
  const CMatrix& operator[](std::size_t k) const { return projections_.at(k); }
  const std::vector<CMatrix>& projections() const noexcept { return projections_; }
  const std::optional<std::vector<std::vector<std::size_t>>>& partition() const noexcept { return partition_; }

private:
  std::size_t dim_ = 0;
  std::vector<CMatrix> projections_;
  std::optional<std::vector<std::vector<std::size_t>>> partition_;
};

struct ResolutionViolation {
  std::string condition;  ///< "idempotence", "self-adjointness", "orthogonality" or "sum"
  std::size_t first = 0;
  std::size_t second = 0;
  double defect = 0.0;

  std::string describe() const {
    std::ostringstream os;
    os << condition;
    if (condition == "orthogonality") {
      os << " violated for projections " << first << " and " << second;
    } else if (condition != "sum") {
      os << " violated for projection " << first;
    } else {
      os << " of projections differs from the identity";
    }
    os << " (defect " << defect << ")";
    return os.str();
  }
};

/// Checks P_a^2 = P_a = P_a^*, P_a P_b = 0 (a != b) and sum P_a = I.
inline std::optional<ResolutionViolation> validate_resolution(const ResolutionOfUnity& res,
                                                              double tol = resolution_tol) {
  const auto& ps = res.projections();
  const std::size_t dim = res.dimension();
  for (const auto& p : ps) {
    if (p.rows() != dim || p.cols() != dim) throw WalkError("validate_resolution: size mismatch");
  }
  for (std::size_t a = 0; a < ps.size(); ++a) {
    const double herm = (ps[a] - ps[a].adjoint()).max_abs();
    if (herm > tol) return ResolutionViolation{"self-adjointness", a, a, herm};
    const double idem = (ps[a] * ps[a] - ps[a]).max_abs();
    if (idem > tol) return ResolutionViolation{"idempotence", a, a, idem};
  }
  for (std::size_t a = 0; a < ps.size(); ++a)
    for (std::size_t b = a + 1; b < ps.size(); ++b) {
      const double ov = (ps[a] * ps[b]).max_abs();
      if (ov > tol) return ResolutionViolation{"orthogonality", a, b, ov};
    }
  CMatrix sum(dim, dim);
  for (const auto& p : ps) sum += p;
  const double sd = (sum - CMatrix::identity(dim)).max_abs();
  if (sd > tol) return ResolutionViolation{"sum", 0, 0, sd};
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Coins

inline constexpr double coin_class_tol = 1e-10;
inline constexpr double unitary_tol = 1e-12;

enum class CoinClass { Scalar, Reflection, Grover, Fourier, General };

inline const char* to_string(CoinClass c) {
  switch (c) {
    case CoinClass::Scalar: return "scalar";
    case CoinClass::Reflection: return "reflection";
    case CoinClass::Grover: return "grover";
    case CoinClass::Fourier: return "fourier";
    case CoinClass::General: return "general";
  }
  return "general";
}

/// Classes are not exclusive: a Grover-type coin also satisfies C^4 = I.
struct CoinFlags {
  bool scalar = false;
  bool grover = false;
  bool reflection = false;
  bool fourier = false;

  CoinClass primary() const noexcept {
    if (scalar) return CoinClass::Scalar;
    if (reflection) return CoinClass::Reflection;
    if (grover) return CoinClass::Grover;
    if (fourier) return CoinClass::Fourier;
    return CoinClass::General;
  }
};

inline CoinFlags classify(const CMatrix& c, double tol = coin_class_tol) {
  const std::size_t n = c.rows();
  const CMatrix id = CMatrix::identity(n);
  CoinFlags f;
  const cplx mean_diag = c.trace() / static_cast<double>(n);
  if ((c - mean_diag * id).max_abs() < tol) {
    f.scalar = true;
    return f;
  }
  const CMatrix c2 = c * c;
  f.grover = (c2 - id).max_abs() < tol;
  f.fourier = (c2 * c2 - id).max_abs() < tol;
  if (f.grover) {
    const auto es = eig_normal(c);
    const auto one = es.find_cluster(1.0, 1e-6);
    f.reflection = one && es.multiplicity(*one) == 1;
  }
  return f;
}

/// mu_D = (1, ..., 1) / sqrt(D)
inline CVector uniform_vector(std::size_t dim) { return CVector(dim, 1.0 / std::sqrt(static_cast<double>(dim))); }

class Coin {
public:
  Coin() = default;

  /// Validates unitarity to tol and computes the spectral decomposition.
  static Coin from_matrix(CMatrix m, double tol = unitary_tol) {
    if (!m.is_square() || m.rows() == 0) throw WalkError("coin must be a non-empty square matrix");
    const double defect = unitarity_defect(m);
    if (defect > tol) {
      std::ostringstream os;
      os << "coin not unitary (||C*C - I||_max = " << defect << ")";
      throw WalkError(os.str());
    }
    Coin c;
    c.matrix_ = std::move(m);
    c.spectrum_ = eig_normal(c.matrix_);
    c.flags_ = classify(c.matrix_);
    if (c.flags_.reflection) {
      const auto one = c.spectrum_.find_cluster(1.0, 1e-6);
      CVector mu = c.spectrum_.basis(*one).front();
      // fix the phase: largest-modulus entry real positive
      std::size_t arg = 0;
      for (std::size_t i = 1; i < mu.size(); ++i)
        if (std::abs(mu[i]) > std::abs(mu[arg]) + 1e-12) arg = i;
      const cplx ph = std::abs(mu[arg]) / mu[arg];
      for (auto& x : mu) x *= ph;
      c.reflection_ = std::move(mu);
    }
    return c;
  }

  std::size_t dimension() const noexcept { return matrix_.rows(); }
  const CMatrix& matrix() const noexcept { return matrix_; }
  const EigenSystem& spectrum() const noexcept { return spectrum_; }
  const CoinFlags& flags() const noexcept { return flags_; }
  CoinClass primary_class() const noexcept { return flags_.primary(); }

  /// The unit vector mu with C = 2 mu mu^* - I (reflection type only).
  const std::optional<CVector>& reflection_vector() const noexcept { return reflection_; }

  std::vector<cplx> eigenvalues() const {
    std::vector<cplx> v;
    for (const auto& c : spectrum_.clusters) v.push_back(c.value);
    return v;
  }

  bool has_eigenvalue(cplx lambda, double tol = 1e-6) const { return spectrum_.find_cluster(lambda, tol).has_value(); }

  std::size_t multiplicity(cplx lambda, double tol = 1e-6) const {
    const auto k = spectrum_.find_cluster(lambda, tol);
    return k ? spectrum_.multiplicity(*k) : 0;
  }

  /// Orthogonal projection onto E(lambda); zero when lambda is not an eigenvalue.
  CMatrix eigenprojector(cplx lambda, double tol = 1e-6) const {
    const auto k = spectrum_.find_cluster(lambda, tol);
    if (!k) return CMatrix(dimension(), dimension());
    return spectrum_.projector(*k);
  }

  std::vector<CVector> eigenbasis(cplx lambda, double tol = 1e-6) const {
    const auto k = spectrum_.find_cluster(lambda, tol);
    if (!k) return {};
    return spectrum_.basis(*k);
  }

  /// Snaps lambda to the exact cluster value when it is an eigenvalue.
  cplx snapped(cplx lambda, double tol = 1e-6) const {
    const auto k = spectrum_.find_cluster(lambda, tol);
    return k ? spectrum_.clusters[*k].value : lambda;
  }

private:
  friend Coin reflection_coin(std::span<const cplx> mu);
  friend Coin grover_coin(int dim);

  CMatrix matrix_;
  EigenSystem spectrum_;
  CoinFlags flags_;
  std::optional<CVector> reflection_;
};

/// C_mu = 2 mu mu^* - I
inline Coin reflection_coin(std::span<const cplx> mu) {
  if (mu.empty()) throw WalkError("reflection vector is empty");
  const double n = norm(mu);
  if (std::abs(n - 1.0) > 1e-12) {
    std::ostringstream os;
    os << "reflection vector is not a unit vector (norm " << n << ")";
    throw WalkError(os.str());
  }
  CMatrix m = 2.0 * CMatrix::outer(mu, mu) - CMatrix::identity(mu.size());
  Coin c = Coin::from_matrix(std::move(m));
  if (c.flags_.reflection) c.reflection_ = CVector(mu.begin(), mu.end());
  return c;
}

/// G_D = (2/D) J - I
inline Coin grover_coin(int dim) {
  if (dim < 2) throw WalkError("Grover coin needs D >= 2 (got " + std::to_string(dim) + ")");
  const auto n = static_cast<std::size_t>(dim);
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = (i == j ? 2.0 / dim - 1.0 : 2.0 / dim);
  Coin c = Coin::from_matrix(std::move(m));
  c.reflection_ = uniform_vector(n);  // G_D = C_{mu_D}
  return c;
}

/// F_D with entries q^{jk} / sqrt(D), q = exp(2 pi i / D), zero-based j, k.
inline Coin fourier_coin(int dim) {
  if (dim < 2) throw WalkError("Fourier coin needs D >= 2 (got " + std::to_string(dim) + ")");
  const auto n = static_cast<std::size_t>(dim);
  CMatrix m(n, n);
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      const auto e = (j * k) % n;
      m(j, k) = std::polar(s, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(n));
    }
  return Coin::from_matrix(std::move(m));
}

// ---------------------------------------------------------------------------
// Walks

enum class WalkKind { Plain, Product };

inline const char* to_string(WalkKind k) { return k == WalkKind::Plain ? "plain" : "product"; }

/// U(S, P, C) = S C (Plain) or U_C = S^* C S C (Product), S = sum_alpha tau^alpha P_alpha.
class Walk {
public:
  Walk(StepSet steps, ResolutionOfUnity resolution, Coin coin, WalkKind kind = WalkKind::Plain)
      : steps_(std::move(steps)), resolution_(std::move(resolution)), coin_(std::move(coin)), kind_(kind) {
    if (resolution_.size() != steps_.size()) {
      throw WalkError("resolution has " + std::to_string(resolution_.size()) + " projections for " +
                      std::to_string(steps_.size()) + " steps");
    }
    if (resolution_.dimension() != coin_.dimension()) {
      throw WalkError("coin dimension " + std::to_string(coin_.dimension()) + " does not match projections of size " +
                      std::to_string(resolution_.dimension()));
    }
    if (auto v = validate_resolution(resolution_)) throw WalkError("invalid resolution of unity: " + v->describe());
  }

  const StepSet& steps() const noexcept { return steps_; }
  const ResolutionOfUnity& resolution() const noexcept { return resolution_; }
  const Coin& coin() const noexcept { return coin_; }
  WalkKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return steps_.dimension(); }
  std::size_t coin_dimension() const noexcept { return coin_.dimension(); }
  const CMatrix& projection(std::size_t k) const { return resolution_[k]; }

  /// Largest |x|_inf displacement per application of the walk operator.
  int reach() const { return steps_.reach() * (kind_ == WalkKind::Product ? 2 : 1); }

  Walk with_coin(Coin c) const { return Walk(steps_, resolution_, std::move(c), kind_); }

private:
  StepSet steps_;
  ResolutionOfUnity resolution_;
  Coin coin_;
  WalkKind kind_;
};

/// V(z) = sum_alpha z^alpha P_alpha
inline CMatrix shift_symbol(const Walk& w, const TorusPoint& z) {
  if (z.dimension() != w.dimension()) throw WalkError("torus point has wrong dimension");
  CMatrix v(w.coin_dimension(), w.coin_dimension());
  for (std::size_t k = 0; k < w.steps().size(); ++k) v += z.monomial(w.steps()[k]) * w.projection(k);
  return v;
}

/// C^(z) = V(z) C for Plain walks, V(z)^* C V(z) C for Product walks.
inline CMatrix symbol(const Walk& w, const TorusPoint& z) {
  const CMatrix v = shift_symbol(w, z);
  const CMatrix& c = w.coin().matrix();
  if (w.kind() == WalkKind::Plain) return v * c;
  return v.adjoint() * c * v * c;
}

// Built-in walks. Coordinate orders are fixed as
//   std:  u_1, -u_1, u_2, -u_2, ...           (coordinate 2j-2 for u_j, 2j-1 for -u_j)
//   lazy: u_1, ..., u_d, 0, -u_1, ..., -u_d   (coordinate d for the rest direction)
// and every step owns the coordinate with the same index.

inline LatticePoint unit_step(std::size_t d, std::size_t j, int sign = 1) {
  LatticePoint u(d, 0);
  u.at(j) = sign;
  return u;
}

inline StepSet std_steps(std::size_t d) {
  std::vector<LatticePoint> s;
  for (std::size_t j = 0; j < d; ++j) {
    s.push_back(unit_step(d, j, 1));
    s.push_back(unit_step(d, j, -1));
  }
  return StepSet(d, std::move(s));
}

inline StepSet lazy_steps(std::size_t d) {
  std::vector<LatticePoint> s;
  for (std::size_t j = 0; j < d; ++j) s.push_back(unit_step(d, j, 1));
  s.push_back(LatticePoint(d, 0));
  for (std::size_t j = 0; j < d; ++j) s.push_back(unit_step(d, j, -1));
  return StepSet(d, std::move(s));
}

inline Walk std_walk(std::size_t d, std::optional<Coin> coin = std::nullopt) {
  if (d < 1) throw WalkError("dimension must be at least 1");
  const auto dim = 2 * d;
  return Walk(std_steps(d), ResolutionOfUnity::coordinate(dim), coin ? *coin : grover_coin(static_cast<int>(dim)));
}

inline Walk lazy_walk(std::size_t d, std::optional<Coin> coin = std::nullopt) {
  if (d < 1) throw WalkError("dimension must be at least 1");
  const auto dim = 2 * d + 1;
  return Walk(lazy_steps(d), ResolutionOfUnity::coordinate(dim), coin ? *coin : grover_coin(static_cast<int>(dim)));
}

inline Walk triangular_walk(std::optional<Coin> coin = std::nullopt) {
  StepSet s(2, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}});
  return Walk(std::move(s), ResolutionOfUnity::coordinate(6), coin ? *coin : grover_coin(6));
}

inline Walk product_triangular_walk(std::optional<Coin> coin = std::nullopt) {
  StepSet s(2, {{1, 0}, {0, 1}, {-1, -1}});
  return Walk(std::move(s), ResolutionOfUnity::coordinate(3), coin ? *coin : grover_coin(3), WalkKind::Product);
}

/// The 2-D Fourier walk: std layout with coin F_4.
inline Walk fourier_walk_2d() { return std_walk(2, fourier_coin(4)); }

inline const std::vector<std::string>& builtin_walk_names() {
  static const std::vector<std::string> names{"std", "lazy", "triangular6", "product-triangular3", "fourier2d"};
  return names;
}

inline Walk builtin_walk(const std::string& name, std::size_t d, std::optional<Coin> coin = std::nullopt) {
  if (name == "std") return std_walk(d, std::move(coin));
  if (name == "lazy") return lazy_walk(d, std::move(coin));
  if (name == "triangular6") return triangular_walk(std::move(coin));
  if (name == "product-triangular3") return product_triangular_walk(std::move(coin));
  if (name == "fourier2d") return coin ? std_walk(2, std::move(coin)) : fourier_walk_2d();
  throw WalkError("unknown built-in walk '" + name + "'");
}

}  // namespace qwalk

#endif  // QWALK_WALK_HPP
