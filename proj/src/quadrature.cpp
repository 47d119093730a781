#include "halfline/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace halfline {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Real x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    Real dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    Real p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const Real p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const Real w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

// Lagrange basis function j on the reference nodes, evaluated via the
// barycentric form.
Real lagrange(const VectorXr& nodes, const VectorXr& bary, int j, Real t) {
  Real num = 0.0, den = 0.0;
  for (int m = 0; m < nodes.size(); ++m) {
    const Real d = t - nodes[m];
    if (d == 0.0) return m == j ? 1.0 : 0.0;
    const Real q = bary[m] / d;
    den += q;
    if (m == j) num = q;
  }
  return num / den;
}

}  // namespace

PanelGrid::PanelGrid(std::vector<Real> breakpoints, int order)
    : breaks_(std::move(breakpoints)), order_(order) {
  if (breaks_.size() < 2) throw DomainError("PanelGrid: need at least one panel");
  if (!std::is_sorted(breaks_.begin(), breaks_.end()))
    throw DomainError("PanelGrid: breakpoints must ascend");
  const GaussRule rule = gauss_legendre(order);
  ref_nodes_ = Eigen::Map<const VectorXr>(rule.nodes.data(), order);
  ref_weights_ = Eigen::Map<const VectorXr>(rule.weights.data(), order);
  bary_weights_.resize(order);
  for (int j = 0; j < order; ++j) {
    Real w = 1.0;
    for (int m = 0; m < order; ++m)
      if (m != j) w *= (ref_nodes_[j] - ref_nodes_[m]);
    bary_weights_[j] = 1.0 / w;
  }
  // Partial integrals of the degree order-1 Lagrange basis: exact with an
  // order-point Gauss rule on [-1, t_i].
  partial_.resize(order, order);
  for (int i = 0; i < order; ++i) {
    const Real lo = -1.0, hi = ref_nodes_[i];
    const Real c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
    for (int j = 0; j < order; ++j) {
      Real acc = 0.0;
      for (int q = 0; q < order; ++q)
        acc += rule.weights[q] * lagrange(ref_nodes_, bary_weights_, j, c + h * rule.nodes[q]);
      partial_(i, j) = h * acc;
    }
  }
  const int np = panels();
  nodes_.resize(np * order);
  weights_.resize(np * order);
  for (int p = 0; p < np; ++p) {
    const Real c = 0.5 * (breaks_[p] + breaks_[p + 1]);
    const Real h = 0.5 * (breaks_[p + 1] - breaks_[p]);
    for (int q = 0; q < order; ++q) {
      nodes_[p * order + q] = c + h * ref_nodes_[q];
      weights_[p * order + q] = h * rule.weights[q];
    }
  }
}

PanelGrid PanelGrid::covering(Real lo, Real hi, Real max_width, int order,
                              const std::vector<Real>& must_break) {
  std::vector<Real> anchors{lo, hi};
  for (Real b : must_break)
    if (b > lo && b < hi) anchors.push_back(b);
  std::sort(anchors.begin(), anchors.end());
  anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
  std::vector<Real> breaks{anchors.front()};
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    const Real a = anchors[i - 1], b = anchors[i];
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_width)));
    for (int p = 1; p < pieces; ++p) breaks.push_back(a + (b - a) * p / pieces);
    breaks.push_back(b);
  }
  return PanelGrid(std::move(breaks), order);
}

VectorXc PanelGrid::running_from_left(const VectorXc& g) const {
  VectorXc out(size());
  Complex carry = 0.0;
  for (int p = 0; p < panels(); ++p) {
    const Real h = 0.5 * (breaks_[p + 1] - breaks_[p]);
    const auto seg = g.segment(p * order_, order_);
    out.segment(p * order_, order_) =
        (partial_.cast<Complex>() * seg).array() * h + carry;
    carry += weights_.segment(p * order_, order_).cast<Complex>().dot(seg);
  }
  return out;
}

VectorXc PanelGrid::running_from_right(const VectorXc& g) const {
  // Accumulated from the right so that small tails keep their relative
  // accuracy (no total-minus-partial cancellation).
  VectorXc out(size());
  Complex carry = 0.0;
  for (int p = panels() - 1; p >= 0; --p) {
    const Real h = 0.5 * (breaks_[p + 1] - breaks_[p]);
    const auto seg = g.segment(p * order_, order_);
    const VectorXc panel_weights = weights_.segment(p * order_, order_).cast<Complex>();
    const Complex panel_total = panel_weights.dot(seg);
    out.segment(p * order_, order_) =
        (panel_total - ((partial_.cast<Complex>() * seg).array() * h)) + carry;
    carry += panel_total;
  }
  return out;
}

Eigen::MatrixXd PanelGrid::right_partial() const {
  return ref_weights_.transpose().replicate(order_, 1) - partial_;
}

Complex PanelGrid::interpolate(const VectorXc& g, Real x) const {
  if (x < lower() || x > upper()) throw DomainError("PanelGrid::interpolate: x out of range");
  auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
  int p = static_cast<int>(it - breaks_.begin()) - 1;
  p = std::clamp(p, 0, panels() - 1);
  const Real c = 0.5 * (breaks_[p] + breaks_[p + 1]);
  const Real h = 0.5 * (breaks_[p + 1] - breaks_[p]);
  const Real t = (x - c) / h;
  // Gauss nodes exclude the panel ends, so x may be an endpoint.
  Complex num = 0.0;
  Real den = 0.0;
  for (int m = 0; m < order_; ++m) {
    const Real d = t - ref_nodes_[m];
    if (d == 0.0) return g[p * order_ + m];
    const Real q = bary_weights_[m] / d;
    num += q * g[p * order_ + m];
    den += q;
  }
  return num / den;
}

}  // namespace halfline
