#ifndef QWALK_LATTICE_HPP
#define QWALK_LATTICE_HPP

// Exact time evolution of delta_0 (x) phi on Z^d and a Fourier-side oracle.
//
// Amplitudes live on a dense box [-R, R]^d that grows by the walk's reach on
// every step, so sites outside the propagation cone are never written. Flat
// indices put axis 0 first, hence storage order is lexicographic.

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/linalg.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/walk.hpp"

namespace qwalk {

inline constexpr double unit_vector_tol = 1e-12;

inline void require_unit(std::span<const cplx> phi, std::size_t dim, const char* what) {
  if (phi.size() != dim) {
    throw WalkError(std::string(what) + " has length " + std::to_string(phi.size()) + ", expected " +
                    std::to_string(dim));
  }
  const double n = norm(phi);
  if (std::abs(n - 1.0) > unit_vector_tol) {
    std::ostringstream os;
    os.precision(17);
    os << what << " is not a unit vector (norm " << n << ")";
    throw WalkError(os.str());
  }
}

class LatticeState {
public:
  LatticeState(std::size_t dimension, std::size_t coin_dimension, int radius)
      : d_(dimension), coin_dim_(coin_dimension), radius_(radius) {
    if (d_ == 0) throw WalkError("lattice dimension must be at least 1");
    if (radius_ < 0) throw WalkError("lattice radius must be non-negative");
    data_.assign(site_count() * coin_dim_, cplx{});
  }

  std::size_t dimension() const noexcept { return d_; }
  std::size_t coin_dimension() const noexcept { return coin_dim_; }
  int radius() const noexcept { return radius_; }
  std::size_t step_count() const noexcept { return steps_; }

  std::size_t side() const noexcept { return static_cast<std::size_t>(2 * radius_ + 1); }
  std::size_t site_count() const noexcept {
    std::size_t s = 1;
    for (std::size_t j = 0; j < d_; ++j) s *= side();
    return s;
  }

  bool in_box(std::span<const int> x) const {
    if (x.size() != d_) throw WalkError("lattice point has wrong dimension");
    for (int v : x)
      if (std::abs(v) > radius_) return false;
    return true;
  }

  std::size_t flat_index(std::span<const int> x) const {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < d_; ++j) idx = idx * side() + static_cast<std::size_t>(x[j] + radius_);
    return idx;
  }

  LatticePoint site(std::size_t flat) const {
    LatticePoint x(d_);
    for (std::size_t j = d_; j-- > 0;) {
      x[j] = static_cast<int>(flat % side()) - radius_;
      flat /= side();
    }
    return x;
  }

  /// psi(x); zero outside the stored box.
  CVector amplitude(std::span<const int> x) const {
    if (!in_box(x)) return CVector(coin_dim_);
    const auto base = flat_index(x) * coin_dim_;
    return CVector(data_.begin() + static_cast<std::ptrdiff_t>(base),
                   data_.begin() + static_cast<std::ptrdiff_t>(base + coin_dim_));
  }

  std::span<cplx> at_flat(std::size_t flat) { return {data_.data() + flat * coin_dim_, coin_dim_}; }
  std::span<const cplx> at_flat(std::size_t flat) const { return {data_.data() + flat * coin_dim_, coin_dim_}; }

  double probability(std::span<const int> x) const {
    if (!in_box(x)) return 0.0;
    double p = 0.0;
    for (const auto& v : at_flat(flat_index(x))) p += std::norm(v);
    return p;
  }

  double total_norm_squared() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return s;
  }

  /// Sites carrying a nonzero amplitude, lexicographic.
  std::vector<LatticePoint> sites() const {
    std::vector<LatticePoint> out;
    for (std::size_t f = 0; f < site_count(); ++f) {
      for (const auto& v : at_flat(f)) {
        if (v != cplx{}) {
          out.push_back(site(f));
          break;
        }
      }
    }
    return out;
  }

  void set_step_count(std::size_t n) noexcept { steps_ = n; }

private:
  std::size_t d_;
  std::size_t coin_dim_;
  int radius_;
  std::size_t steps_ = 0;
  std::vector<cplx> data_;
};

inline LatticeState initial_state(std::size_t d, std::size_t coin_dim, std::span<const cplx> phi) {
  require_unit(phi, coin_dim, "initial coin state");
  LatticeState s(d, coin_dim, 0);
  auto v = s.at_flat(0);
  std::copy(phi.begin(), phi.end(), v.begin());
  return s;
}

namespace detail {

struct SparseEntry {
  std::size_t row;
  std::size_t col;
  cplx value;
};

inline std::vector<SparseEntry> sparse_entries(const CMatrix& m) {
  std::vector<SparseEntry> e;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != cplx{}) e.push_back({i, j, m(i, j)});
  return e;
}

// out(x + sign*alpha) += P_alpha in(x), for every site of `in` and every step.
inline LatticeState shift(const Walk& w, const LatticeState& in, int sign) {
  const int reach = w.steps().reach();
  LatticeState out(in.dimension(), in.coin_dimension(), in.radius() + reach);
  std::vector<std::vector<SparseEntry>> proj;
  for (std::size_t a = 0; a < w.steps().size(); ++a) proj.push_back(sparse_entries(w.projection(a)));
  LatticePoint target(in.dimension());
  for (std::size_t f = 0; f < in.site_count(); ++f) {
    const auto v = in.at_flat(f);
    bool any = false;
    for (const auto& c : v) any = any || c != cplx{};
    if (!any) continue;
    const LatticePoint x = in.site(f);
    for (std::size_t a = 0; a < w.steps().size(); ++a) {
      const auto& alpha = w.steps()[a];
      for (std::size_t j = 0; j < x.size(); ++j) target[j] = x[j] + sign * alpha[j];
      auto dst = out.at_flat(out.flat_index(target));
      for (const auto& e : proj[a]) dst[e.row] += e.value * v[e.col];
    }
  }
  return out;
}

inline void apply_coin(const CMatrix& c, LatticeState& s) {
  CVector tmp(s.coin_dimension());
  for (std::size_t f = 0; f < s.site_count(); ++f) {
    auto v = s.at_flat(f);
    for (std::size_t i = 0; i < tmp.size(); ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < tmp.size(); ++j) acc += c(i, j) * v[j];
      tmp[i] = acc;
    }
    std::copy(tmp.begin(), tmp.end(), v.begin());
  }
}

}  // namespace detail

/// One application of U = S C (Plain) or S* C S C (Product).
inline LatticeState step(const Walk& w, const LatticeState& s) {
  if (s.dimension() != w.dimension() || s.coin_dimension() != w.coin_dimension())
    throw WalkError("lattice state does not match the walk dimensions");
  LatticeState cur = s;
  detail::apply_coin(w.coin().matrix(), cur);
  LatticeState next = detail::shift(w, cur, +1);
  if (w.kind() == WalkKind::Product) {
    detail::apply_coin(w.coin().matrix(), next);
    next = detail::shift(w, next, -1);
  }
  next.set_step_count(s.step_count() + 1);
  return next;
}

inline LatticeState evolve(const Walk& w, std::span<const cplx> phi, std::size_t n) {
  LatticeState s = initial_state(w.dimension(), w.coin_dimension(), phi);
  for (std::size_t k = 0; k < n; ++k) s = step(w, s);
  return s;
}

using Distribution = std::map<LatticePoint, double>;

/// p_n(x) = ||psi(x)||^2 over sites with nonzero amplitude, lexicographic.
inline Distribution distribution(const LatticeState& s) {
  Distribution p;
  for (const auto& x : s.sites()) p.emplace(x, s.probability(x));
  return p;
}

/// (1/N) sum_{n=1..N} p_n(phi; x).
inline double time_average(const Walk& w, std::span<const cplx> phi, std::span<const int> x, std::size_t n_max) {
  if (n_max == 0) throw WalkError("time average needs N >= 1");
  if (x.size() != w.dimension()) throw WalkError("lattice point has wrong dimension");
  LatticeState s = initial_state(w.dimension(), w.coin_dimension(), phi);
  double sum = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    s = step(w, s);
    sum += s.probability(x);
  }
  return sum / static_cast<double>(n_max);
}

/// Per-site Cesaro averages (1/N) sum_{n=1..N} p_n(phi; x) together with p_N.
struct AveragedDistribution {
  Distribution last;
  Distribution average;
};

inline AveragedDistribution averaged_distribution(const Walk& w, std::span<const cplx> phi, std::size_t n_steps,
                                                  std::size_t n_average) {
  LatticeState s = initial_state(w.dimension(), w.coin_dimension(), phi);
  AveragedDistribution out;
  const std::size_t total = std::max(n_steps, n_average);
  if (n_steps == 0) out.last = distribution(s);
  for (std::size_t n = 1; n <= total; ++n) {
    s = step(w, s);
    if (n <= n_average)
      for (const auto& x : s.sites()) out.average[x] += s.probability(x) / static_cast<double>(n_average);
    if (n == n_steps) out.last = distribution(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fourier-side oracle: psi_n(x) = int z^{-x} C^(z)^n phi dnu(z)

/// Smallest per-axis node count for which the trapezoidal rule is exact for
/// z^{-x} C^(z)^n phi at every site with |x|_inf <= site_radius.
inline std::size_t fourier_oracle_min_points(const Walk& w, std::size_t n, int site_radius) {
  const auto span = static_cast<std::size_t>(w.reach()) * n;
  return std::max(2 * span, span + static_cast<std::size_t>(site_radius)) + 1;
}

namespace detail {

// Node values C^(z)^n phi on the standard offset grid, flat order with axis 0
// fastest (TorusGrid order).
inline std::vector<CVector> symbol_power_nodes(const Walk& w, std::span<const cplx> phi, std::size_t n,
                                               std::size_t m, double offset) {
  const std::size_t d = w.dimension();
  std::size_t total = 1;
  for (std::size_t j = 0; j < d; ++j) total *= m;
  std::vector<CVector> nodes(total);
  parallel_for(total, [&](std::size_t flat) {
    std::vector<double> angles(d);
    std::size_t r = flat;
    for (std::size_t j = 0; j < d; ++j) {
      angles[j] = 2.0 * std::numbers::pi * (static_cast<double>(r % m) + offset) / static_cast<double>(m);
      r /= m;
    }
    const CMatrix c = symbol(w, TorusPoint::from_angles(angles));
    CVector v(phi.begin(), phi.end());
    for (std::size_t k = 0; k < n; ++k) v = c * v;
    nodes[flat] = std::move(v);
  });
  return nodes;
}

}  // namespace detail

inline constexpr double oracle_grid_offset = 0.25;

/// Quadrature value of int z^{-x} C^(z)^n phi dnu on m points per axis.
inline CVector fourier_oracle(const Walk& w, std::span<const cplx> phi, std::size_t n, std::span<const int> x,
                              std::size_t m) {
  require_unit(phi, w.coin_dimension(), "initial coin state");
  if (x.size() != w.dimension()) throw WalkError("lattice point has wrong dimension");
  int xr = 0;
  for (int v : x) xr = std::max(xr, std::abs(v));
  const std::size_t need = fourier_oracle_min_points(w, n, xr);
  if (m < need) {
    throw WalkError("fourier_oracle: " + std::to_string(m) + " points per axis is too few, need at least " +
                    std::to_string(need));
  }
  const auto nodes = detail::symbol_power_nodes(w, phi, n, m, oracle_grid_offset);
  const std::size_t d = w.dimension();
  CVector acc(w.coin_dimension());
  for (std::size_t flat = 0; flat < nodes.size(); ++flat) {
    double phase = 0.0;
    std::size_t r = flat;
    for (std::size_t j = 0; j < d; ++j) {
      phase -= x[j] * 2.0 * std::numbers::pi * (static_cast<double>(r % m) + oracle_grid_offset) / static_cast<double>(m);
      r /= m;
    }
    const cplx e = std::polar(1.0, phase);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += e * nodes[flat][i];
  }
  const double weight = 1.0 / static_cast<double>(nodes.size());
  for (auto& v : acc) v *= weight;
  return acc;
}

/// The whole in-cone field psi_n(x), |x|_inf <= n * reach, from one set of
/// node values; the inverse transform is applied one axis at a time.
inline LatticeState fourier_oracle_field(const Walk& w, std::span<const cplx> phi, std::size_t n, std::size_t m) {
  require_unit(phi, w.coin_dimension(), "initial coin state");
  const int radius = w.reach() * static_cast<int>(n);
  const std::size_t need = fourier_oracle_min_points(w, n, radius);
  if (m < need) {
    throw WalkError("fourier_oracle: " + std::to_string(m) + " points per axis is too few, need at least " +
                    std::to_string(need));
  }
  const std::size_t d = w.dimension();
  const std::size_t dc = w.coin_dimension();
  const std::size_t side = static_cast<std::size_t>(2 * radius + 1);
  const auto nodes = detail::symbol_power_nodes(w, phi, n, m, oracle_grid_offset);

  // Tensor with extents ext[0..d-1] (axis 0 fastest) and a trailing coin index.
  std::vector<std::size_t> ext(d, m);
  std::vector<cplx> cur(nodes.size() * dc);
  for (std::size_t f = 0; f < nodes.size(); ++f)
    for (std::size_t i = 0; i < dc; ++i) cur[f * dc + i] = nodes[f][i];

  std::vector<cplx> kernel(side * m);  // kernel[x_idx * m + k] = e^{-i x theta_k} / m
  for (std::size_t xi = 0; xi < side; ++xi) {
    const int x = static_cast<int>(xi) - radius;
    for (std::size_t k = 0; k < m; ++k) {
      const double theta = 2.0 * std::numbers::pi * (static_cast<double>(k) + oracle_grid_offset) / static_cast<double>(m);
      kernel[xi * m + k] = std::polar(1.0 / static_cast<double>(m), -x * theta);
    }
  }
  for (std::size_t axis = 0; axis < d; ++axis) {
    std::size_t inner = dc;
    for (std::size_t j = 0; j < axis; ++j) inner *= ext[j];
    std::size_t outer = 1;
    for (std::size_t j = axis + 1; j < d; ++j) outer *= ext[j];
    std::vector<cplx> next(outer * side * inner);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t xi = 0; xi < side; ++xi) {
        cplx* dst = &next[(o * side + xi) * inner];
        for (std::size_t k = 0; k < m; ++k) {
          const cplx kv = kernel[xi * m + k];
          const cplx* src = &cur[(o * m + k) * inner];
          for (std::size_t t = 0; t < inner; ++t) dst[t] += kv * src[t];
        }
      }
    cur = std::move(next);
    ext[axis] = side;
  }

  LatticeState out(d, dc, radius);
  for (std::size_t f = 0; f < out.site_count(); ++f) {
    // cur is axis-0-fastest; LatticeState is axis-0-slowest.
    std::size_t src = 0;
    std::size_t stride = 1;
    const LatticePoint site = out.site(f);
    for (std::size_t j = 0; j < d; ++j) {
      src += static_cast<std::size_t>(site[j] + radius) * stride;
      stride *= side;
    }
    auto dst = out.at_flat(f);
    for (std::size_t i = 0; i < dc; ++i) dst[i] = cur[src * dc + i];
  }
  out.set_step_count(n);
  return out;
}

// ---------------------------------------------------------------------------
// CSV export

/// Columns x_1..x_d, probability[, average]; rows lexicographic. Sites present
/// in either distribution are listed.
inline void write_distribution_csv(std::ostream& os, std::size_t d, const Distribution& p,
                                   const Distribution* average = nullptr) {
  for (std::size_t j = 0; j < d; ++j) os << "x_" << (j + 1) << ',';
  os << "probability";
  if (average) os << ",average";
  os << '\n';
  std::map<LatticePoint, std::pair<double, double>> rows;
  for (const auto& [x, v] : p) rows[x].first = v;
  if (average)
    for (const auto& [x, v] : *average) rows[x].second = v;
  const auto old_precision = os.precision(17);
  for (const auto& [x, v] : rows) {
    for (int c : x) os << c << ',';
    os << v.first;
    if (average) os << ',' << v.second;
    os << '\n';
  }
  os.precision(old_precision);
}

}  // namespace qwalk

#endif  // QWALK_LATTICE_HPP
