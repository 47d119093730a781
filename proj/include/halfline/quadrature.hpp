#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <type_traits>
#include <utility>
#include <vector>

#include "halfline/types.hpp"

namespace halfline {

namespace detail {

template <class T>
Real magnitude(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return std::abs(v);
  } else if constexpr (std::is_same_v<T, Complex>) {
    return std::abs(v);
  } else {
    return v.norm();
  }
}

template <class T>
T zero_like(const T& v) {
  if constexpr (std::is_arithmetic_v<T> || std::is_same_v<T, Complex>) {
    return T{};
  } else {
    return T::Zero(v.rows(), v.cols());
  }
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
inline constexpr std::array<Real, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<Real, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<Real, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

struct QuadratureOptions {
  Real abs_tol = 1e-10;
  Real rel_tol = 1e-10;
  int max_intervals = 4000;
};

template <class T>
struct QuadratureResult {
  T value;
  Real error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// One Gauss-Kronrod 7/15 panel on [a, b]. Returns (Kronrod value, |K - G|).
template <class F>
auto gauss_kronrod15(F&& f, Real a, Real b) {
  using T = std::decay_t<decltype(f(a))>;
  const Real center = 0.5 * (a + b);
  const Real half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * detail::kWgk[7];
  T gauss = fc * detail::kWg[3];
  for (int j = 0; j < 7; ++j) {
    const Real dx = half * detail::kXgk[j];
    const T f1 = f(center - dx);
    const T f2 = f(center + dx);
    kronrod += (f1 + f2) * detail::kWgk[j];
    if (j % 2 == 1) gauss += (f1 + f2) * detail::kWg[j / 2];
  }
  kronrod *= half;
  gauss *= half;
  const Real err = detail::magnitude(T(kronrod - gauss));
  return std::pair<T, Real>{kronrod, err};
}

/// Globally adaptive Gauss-Kronrod integration of f over [a, b]; f may return
/// a real, complex or Eigen-vector value. Splits the interval with the largest
/// error estimate until the summed estimate meets the tolerance.
template <class F>
auto integrate(F&& f, Real a, Real b, const QuadratureOptions& opts = {}) {
  using T = std::decay_t<decltype(f(a))>;
  struct Piece {
    Real a, b;
    T value;
    Real error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  QuadratureResult<T> out;
  if (a == b) {
    out.value = detail::zero_like(f(a));
    out.evaluations = 1;
    return out;
  }
  std::priority_queue<Piece> pieces;
  auto [v0, e0] = gauss_kronrod15(f, a, b);
  out.evaluations = 15;
  pieces.push({a, b, v0, e0});
  T total = v0;
  Real total_err = e0;
  while (true) {
    const Real target = std::max(opts.abs_tol, opts.rel_tol * detail::magnitude(total));
    if (total_err <= target) break;
    if (static_cast<int>(pieces.size()) >= opts.max_intervals) {
      out.converged = false;
      break;
    }
    Piece worst = pieces.top();
    const Real mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      out.converged = false;
      break;
    }
    pieces.pop();
    auto [vl, el] = gauss_kronrod15(f, worst.a, mid);
    auto [vr, er] = gauss_kronrod15(f, mid, worst.b);
    out.evaluations += 30;
    total += (vl + vr) - worst.value;
    total_err += (el + er) - worst.error;
    pieces.push({worst.a, mid, vl, el});
    pieces.push({mid, worst.b, vr, er});
  }
  // Re-sum to shed the cancellation accumulated by the running updates.
  T sum = detail::zero_like(total);
  Real err = 0.0;
  while (!pieces.empty()) {
    sum += pieces.top().value;
    err += pieces.top().error;
    pieces.pop();
  }
  out.value = sum;
  out.error = err;
  return out;
}

/// Integral of f over [a, inf) via the map x = a + t / (1 - t).
template <class F>
auto integrate_to_infinity(F&& f, Real a, const QuadratureOptions& opts = {}) {
  auto mapped = [&](Real t) {
    const Real one_minus = 1.0 - t;
    const Real x = a + t / one_minus;
    return f(x) * (1.0 / (one_minus * one_minus));
  };
  return integrate(mapped, 0.0, 1.0, opts);
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<Real> nodes;
  std::vector<Real> weights;
};
GaussRule gauss_legendre(int n);

/// Composite Gauss-Legendre grid on a union of panels. Besides nodes and
/// weights it carries the per-panel matrix of partial integrals
/// S(i, j) = int_{left}^{t_i} l_j(t) dt of the Lagrange basis, which gives
/// spectrally accurate running integrals at every node.
class PanelGrid {
 public:
  PanelGrid() = default;
  /// Panels between consecutive breakpoints (ascending), each with
  /// `order` Gauss nodes.
  PanelGrid(std::vector<Real> breakpoints, int order);

  /// Uniform panels of width at most `max_width` covering [lo, hi], refined
  /// so that every entry of `must_break` is a panel boundary.
  static PanelGrid covering(Real lo, Real hi, Real max_width, int order,
                            const std::vector<Real>& must_break = {});

  int size() const { return static_cast<int>(nodes_.size()); }
  int panels() const { return static_cast<int>(breaks_.size()) - 1; }
  int order() const { return order_; }
  const VectorXr& nodes() const { return nodes_; }
  const VectorXr& weights() const { return weights_; }
  const std::vector<Real>& breakpoints() const { return breaks_; }
  Real lower() const { return breaks_.front(); }
  Real upper() const { return breaks_.back(); }

  /// int_{lower}^{x_i} g for each node x_i.
  VectorXc running_from_left(const VectorXc& g) const;
  /// int_{x_i}^{upper} g for each node x_i.
  VectorXc running_from_right(const VectorXc& g) const;
  Complex integral(const VectorXc& g) const { return weights_.cast<Complex>().dot(g); }

  /// R(i, j) = int_{t_i}^{1} l_j(t) dt on the reference panel [-1, 1].
  Eigen::MatrixXd right_partial() const;
  int panel_of(int node) const { return node / order_; }
  Real half_width(int panel) const { return 0.5 * (breaks_[panel + 1] - breaks_[panel]); }

  /// Barycentric interpolation of node values at an arbitrary x in range.
  Complex interpolate(const VectorXc& g, Real x) const;

 private:
  std::vector<Real> breaks_;
  int order_ = 0;
  VectorXr nodes_;
  VectorXr weights_;
  VectorXr ref_nodes_;
  VectorXr ref_weights_;
  VectorXr bary_weights_;
  Eigen::MatrixXd partial_;  // on [-1, 1]
};

}  // namespace halfline
