#ifndef QWALK_LINALG_HPP
#define QWALK_LINALG_HPP

// Dense complex linear algebra for small matrices (coin spaces of size <= 32).
//
// Everything here is a pure function of its inputs. The eigensolver reduces to
// Hessenberg form and runs an implicit single-shift complex QR iteration; the
// singular value routines use one-sided (Hestenes) Jacobi rotations applied to
// the matrix itself, so small singular values keep absolute accuracy of order
// eps * ||M|| instead of sqrt(eps) * ||M||.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qwalk {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

inline constexpr cplx I_unit{0.0, 1.0};

class LinalgError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Row-major dense complex matrix.
class CMatrix {
public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw LinalgError("CMatrix: entry count " + std::to_string(data_.size()) + " does not match " +
                        std::to_string(rows_) + "x" + std::to_string(cols_));
    }
    for (const auto& v : data_) {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw LinalgError("CMatrix: non-finite entry");
      }
    }
  }
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw LinalgError("CMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static CMatrix identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }
  static CMatrix diagonal(std::span<const cplx> d) {
    CMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
  static CMatrix from_columns(std::span<const CVector> columns, std::size_t rows) {
    CMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw LinalgError("from_columns: inconsistent vector lengths");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    }
    return m;
  }
  /// u v^* (outer product).
  static CMatrix outer(std::span<const cplx> u, std::span<const cplx> v) {
    CMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const noexcept { return data_; }
  std::span<cplx> data() noexcept { return data_; }

  CVector column(std::size_t j) const {
    CVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  CVector row(std::size_t i) const { return CVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

  CMatrix adjoint() const {
    CMatrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }

  cplx trace() const {
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest entry modulus.
  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
  }
  double frobenius() const noexcept {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
  }

  CMatrix& operator+=(const CMatrix& o) {
    check_same(o, "+");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    check_same(o, "-");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CMatrix& operator*=(cplx s) noexcept {
    for (auto& v : data_) v *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator-(CMatrix a) { return a *= -1.0; }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols_ != b.rows_) {
      throw LinalgError("matrix product: " + a.shape() + " times " + b.shape());
    }
    CMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const cplx aik = a(i, k);
        if (aik == cplx{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend CVector operator*(const CMatrix& a, std::span<const cplx> v) {
    if (a.cols_ != v.size()) throw LinalgError("matrix-vector product: size mismatch");
    CVector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      cplx s = 0.0;
      for (std::size_t j = 0; j < a.cols_; ++j) s += a(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }
  friend CVector operator*(const CMatrix& a, const CVector& v) { return a * std::span<const cplx>(v); }

  std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

private:
  void check_same(const CMatrix& o, const char* op) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
      throw LinalgError(std::string("matrix ") + op + ": " + shape() + " vs " + o.shape());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

// ---------------------------------------------------------------------------
// Vector helpers

/// <u, v> linear in the first argument, conjugate-linear in the second.
inline cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
  if (u.size() != v.size()) throw LinalgError("inner: size mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

inline double norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

inline double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::abs(x));
  return m;
}

inline CVector operator+(CVector a, const CVector& b) {
  if (a.size() != b.size()) throw LinalgError("vector +: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline CVector operator-(CVector a, const CVector& b) {
  if (a.size() != b.size()) throw LinalgError("vector -: size mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline CVector operator*(cplx s, CVector a) {
  for (auto& x : a) x *= s;
  return a;
}

inline CVector basis_vector(std::size_t dim, std::size_t k) {
  CVector e(dim);
  e.at(k) = 1.0;
  return e;
}

inline double unitarity_defect(const CMatrix& u) {
  if (!u.is_square()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - CMatrix::identity(u.rows())).max_abs();
}

inline double normality_defect(const CMatrix& m) {
  const CMatrix a = m.adjoint();
  return (m * a - a * m).max_abs();
}

inline CMatrix power(const CMatrix& m, unsigned k) {
  CMatrix r = CMatrix::identity(m.rows());
  for (unsigned i = 0; i < k; ++i) r = r * m;
  return r;
}

// ---------------------------------------------------------------------------
// Singular values

struct SingularSystem {
  std::vector<double> values;  ///< ascending, one per column of the input
  CMatrix right_vectors;       ///< column k pairs with values[k]
};

namespace detail {

inline constexpr double eps = std::numeric_limits<double>::epsilon();

// Complex Givens rotation G = [[c, s], [-conj(s), c]] with G * [x; y] = [r; 0].
struct Givens {
  double c = 1.0;
  cplx s = 0.0;
};

inline Givens make_givens(cplx x, cplx y) {
  const double ay = std::abs(y);
  if (ay == 0.0) return {};
  const double ax = std::abs(x);
  if (ax == 0.0) return {0.0, std::conj(y) / ay};
  const double r = std::hypot(ax, ay);
  return {ax / r, (x / ax) * std::conj(y) / r};
}

}  // namespace detail

/// One-sided Jacobi SVD. Returns one singular value per column; when
/// cols > rows the structural zeros are included.
inline SingularSystem singular_system(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) throw LinalgError("singular values of a dimension-zero matrix");
  const std::size_t rows = m.rows();
  const std::size_t n = m.cols();
  CMatrix u = m;
  CMatrix v = CMatrix::identity(n);

  constexpr int max_sweeps = 80;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        cplx gamma = 0.0;  // u_p^* u_q
        for (std::size_t i = 0; i < rows; ++i) {
          alpha += std::norm(u(i, p));
          beta += std::norm(u(i, q));
          gamma += std::conj(u(i, p)) * u(i, q);
        }
        const double ag = std::abs(gamma);
        if (ag == 0.0 || ag <= detail::eps * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const cplx phase = gamma / ag;
        const double zeta = (beta - alpha) / (2.0 * ag);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // Column q is first multiplied by conj(phase) so that the pair has a
        // real inner product, then the real rotation is applied.
        for (std::size_t i = 0; i < rows; ++i) {
          const cplx up = u(i, p);
          const cplx uq = std::conj(phase) * u(i, q);
          u(i, p) = c * up - s * uq;
          u(i, q) = s * up + c * uq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vp = v(i, p);
          const cplx vq = std::conj(phase) * v(i, q);
          v(i, p) = c * vp - s * vq;
          v(i, q) = s * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < rows; ++i) s += std::norm(u(i, j));
    sigma[j] = std::sqrt(s);
  }
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = j;
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sigma[a] < sigma[b]; });

  SingularSystem out{std::vector<double>(n), CMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = sigma[order[k]];
    for (std::size_t i = 0; i < n; ++i) out.right_vectors(i, k) = v(i, order[k]);
  }
  return out;
}

/// Smallest singular value over the columns of m (the k-th singular value of a
/// rows x k matrix; zero whenever cols > rows).
inline double min_singular_value(const CMatrix& m) {
  const auto sys = singular_system(m);
  return std::max(0.0, sys.values.front());
}

inline double max_singular_value(const CMatrix& m) {
  const auto sys = singular_system(m);
  return sys.values.back();
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is below tol.
inline std::vector<CVector> kernel_basis(const CMatrix& m, double tol) {
  std::vector<CVector> basis;
  if (m.cols() == 0) return basis;
  if (m.rows() == 0) {
    for (std::size_t k = 0; k < m.cols(); ++k) basis.push_back(basis_vector(m.cols(), k));
    return basis;
  }
  const auto sys = singular_system(m);
  for (std::size_t k = 0; k < sys.values.size(); ++k) {
    if (sys.values[k] < tol) basis.push_back(sys.right_vectors.column(k));
  }
  return basis;
}

/// Orthonormal basis for span(vectors); modified Gram-Schmidt with one
/// reorthogonalisation pass. Vectors whose residual falls below rank_tol
/// relative to the largest input norm are dropped.
inline std::vector<CVector> orthonormalize(std::span<const CVector> vectors, double rank_tol = 1e-10) {
  std::vector<CVector> q;
  double scale = 0.0;
  for (const auto& v : vectors) scale = std::max(scale, norm(v));
  if (scale == 0.0) return q;
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw LinalgError("orthonormalize: inconsistent vector lengths");
    CVector w = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : q) {
        const cplx c = inner(w, b);
        for (std::size_t i = 0; i < dim; ++i) w[i] -= c * b[i];
      }
    }
    const double nw = norm(w);
    if (nw > rank_tol * scale) {
      for (auto& x : w) x /= nw;
      q.push_back(std::move(w));
    }
  }
  return q;
}

/// Orthogonal projector onto span(vectors) in C^dim.
inline CMatrix projector_onto_span(std::span<const CVector> vectors, std::size_t dim) {
  for (const auto& v : vectors) {
    if (v.size() != dim) throw LinalgError("projector_onto_span: inconsistent vector lengths");
  }
  CMatrix p(dim, dim);
  for (const auto& b : orthonormalize(vectors)) p += CMatrix::outer(b, b);
  return p;
}

/// Orthonormal basis of the orthogonal complement of span(vectors) in C^dim.
inline std::vector<CVector> orthogonal_complement(std::span<const CVector> vectors, std::size_t dim) {
  std::vector<CVector> all = orthonormalize(vectors);
  const std::size_t start = all.size();
  std::vector<CVector> candidates = all;
  for (std::size_t k = 0; k < dim; ++k) candidates.push_back(basis_vector(dim, k));
  all = orthonormalize(candidates, 1e-8);
  return {all.begin() + static_cast<std::ptrdiff_t>(start), all.end()};
}

// ---------------------------------------------------------------------------
// Eigen decomposition of normal matrices

struct EigenCluster {
  cplx value;                        ///< mean of the member eigenvalues
  std::vector<std::size_t> members;  ///< indices into EigenSystem::eigenvalues
};

struct EigenSystem {
  std::vector<cplx> eigenvalues;
  CMatrix eigenvectors;  ///< orthonormal columns
  std::vector<EigenCluster> clusters;

  std::size_t dimension() const noexcept { return eigenvalues.size(); }

  std::optional<std::size_t> find_cluster(cplx value, double tol) const {
    std::optional<std::size_t> best;
    double best_dist = tol;
    for (std::size_t k = 0; k < clusters.size(); ++k) {
      const double dist = std::abs(clusters[k].value - value);
      if (dist <= best_dist) {
        best = k;
        best_dist = dist;
      }
    }
    return best;
  }

  std::vector<CVector> basis(std::size_t cluster) const {
    std::vector<CVector> b;
    for (auto idx : clusters.at(cluster).members) b.push_back(eigenvectors.column(idx));
    return b;
  }

  CMatrix projector(std::size_t cluster) const {
    CMatrix p(dimension(), dimension());
    for (auto idx : clusters.at(cluster).members) {
      const CVector v = eigenvectors.column(idx);
      p += CMatrix::outer(v, v);
    }
    return p;
  }

  std::size_t multiplicity(std::size_t cluster) const { return clusters.at(cluster).members.size(); }
};

namespace detail {

inline void apply_left(CMatrix& h, std::size_t k, const Givens& g) {
  for (std::size_t j = 0; j < h.cols(); ++j) {
    const cplx a = h(k, j);
    const cplx b = h(k + 1, j);
    h(k, j) = g.c * a + g.s * b;
    h(k + 1, j) = -std::conj(g.s) * a + g.c * b;
  }
}

// Right multiplication by G^*.
inline void apply_right_adjoint(CMatrix& h, std::size_t k, const Givens& g) {
  for (std::size_t i = 0; i < h.rows(); ++i) {
    const cplx a = h(i, k);
    const cplx b = h(i, k + 1);
    h(i, k) = a * g.c + b * std::conj(g.s);
    h(i, k + 1) = -a * g.s + b * g.c;
  }
}

// Householder reduction to upper Hessenberg form: returns Q with Q^* M Q = H.
inline CMatrix hessenberg_reduce(CMatrix& h) {
  const std::size_t n = h.rows();
  CMatrix q = CMatrix::identity(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cplx x0 = h(k + 1, k);
    const cplx phase = std::abs(x0) == 0.0 ? cplx{1.0} : x0 / std::abs(x0);
    CVector v(n);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = h(i, k);
    v[k + 1] += phase * xnorm;
    const double vn = norm(v);
    if (vn == 0.0) continue;
    for (auto& x : v) x /= vn;
    // h <- (I - 2 v v^*) h (I - 2 v v^*)
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, j);
      for (std::size_t i = k + 1; i < n; ++i) h(i, j) -= 2.0 * v[i] * s;
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += h(i, j) * v[j];
      for (std::size_t j = k + 1; j < n; ++j) h(i, j) -= 2.0 * s * std::conj(v[j]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += q(i, j) * v[j];
      for (std::size_t j = k + 1; j < n; ++j) q(i, j) -= 2.0 * s * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
  return q;
}

inline cplx wilkinson_shift(cplx a, cplx b, cplx c, cplx d) {
  const cplx half = 0.5 * (a - d);
  const cplx disc = std::sqrt(half * half + b * c);
  const cplx mid = 0.5 * (a + d);
  const cplx s1 = mid + disc;
  const cplx s2 = mid - disc;
  return std::abs(s1 - d) <= std::abs(s2 - d) ? s1 : s2;
}

}  // namespace detail

/// Complex Schur form M = Z T Z^*. For normal M, T is diagonal up to rounding.
struct SchurForm {
  CMatrix t;
  CMatrix z;
};

inline SchurForm complex_schur(const CMatrix& m) {
  if (!m.is_square()) throw LinalgError("complex_schur: matrix is " + m.shape());
  const std::size_t n = m.rows();
  CMatrix h = m;
  CMatrix z = detail::hessenberg_reduce(h);
  if (n <= 1) return {h, z};

  const double scale = std::max(h.frobenius(), std::numeric_limits<double>::min());
  std::size_t hi = n - 1;
  int iter = 0;
  int total = 0;
  constexpr int max_total = 10000;
  while (hi > 0) {
    std::size_t lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      const double diag = std::abs(h(lo, lo)) + std::abs(h(lo - 1, lo - 1));
      if (sub <= detail::eps * diag || sub <= detail::eps * scale * 1e-2) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      iter = 0;
      continue;
    }
    if (++total > max_total) throw LinalgError("complex_schur: QR iteration did not converge");
    ++iter;
    cplx shift;
    if (iter % 11 == 10) {
      // exceptional shift to break cycles
      shift = h(hi, hi) + std::abs(h(hi, hi - 1)) * cplx{0.75, 0.4};
    } else {
      shift = detail::wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }
    cplx x = h(lo, lo) - shift;
    cplx y = h(lo + 1, lo);
    for (std::size_t k = lo; k < hi; ++k) {
      const auto g = detail::make_givens(x, y);
      detail::apply_left(h, k, g);
      detail::apply_right_adjoint(h, k, g);
      detail::apply_right_adjoint(z, k, g);
      if (k + 1 < hi) {
        x = h(k + 1, k);
        y = h(k + 2, k);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) h(i, j) = 0.0;
  return {h, z};
}

inline constexpr double default_cluster_tol = 1e-8;

/// Groups eigenvalues whose distance is within tol (single linkage), ordered by
/// argument in (-pi, pi].
inline std::vector<EigenCluster> cluster_eigenvalues(std::span<const cplx> values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> parent(n);
  for (std::size_t k = 0; k < n; ++k) parent[k] = k;
  auto find = [&](std::size_t k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (std::abs(values[a] - values[b]) <= tol) parent[find(a)] = find(b);

  std::vector<EigenCluster> clusters;
  std::vector<std::size_t> root_to_cluster(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t r = find(k);
    if (root_to_cluster[r] == n) {
      root_to_cluster[r] = clusters.size();
      clusters.push_back({0.0, {}});
    }
    clusters[root_to_cluster[r]].members.push_back(k);
  }
  for (auto& c : clusters) {
    cplx s = 0.0;
    for (auto k : c.members) s += values[k];
    c.value = s / static_cast<double>(c.members.size());
  }
  auto key = [](cplx v) {
    const double a = std::arg(v);
    return a <= -std::numbers::pi + 1e-12 ? std::numbers::pi : a;
  };
  std::stable_sort(clusters.begin(), clusters.end(),
                   [&](const EigenCluster& a, const EigenCluster& b) { return key(a.value) < key(b.value); });
  return clusters;
}

/// Eigensystem of a normal matrix. Throws when ||M M^* - M^* M||_max exceeds
/// tol * max(1, ||M||_max^2).
inline EigenSystem eig_normal(const CMatrix& m, double tol = default_cluster_tol) {
  if (!m.is_square()) throw LinalgError("eig_normal: matrix is " + m.shape());
  if (m.rows() == 0) throw LinalgError("eig_normal: dimension-zero matrix");
  const double defect = normality_defect(m);
  const double mx = m.max_abs();
  if (defect > tol * std::max(1.0, mx * mx)) {
    std::ostringstream os;
    os << "eig_normal: matrix is not normal (||MM*-M*M||_max = " << defect << ")";
    throw LinalgError(os.str());
  }
  const auto schur = complex_schur(m);
  EigenSystem es;
  es.eigenvalues.resize(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) es.eigenvalues[i] = schur.t(i, i);
  es.eigenvectors = schur.z;
  es.clusters = cluster_eigenvalues(es.eigenvalues, tol);
  return es;
}

}  // namespace qwalk

#endif  // QWALK_LINALG_HPP
