#include "halfline/resolvent.hpp"

#include <algorithm>
#include <cmath>

#include "halfline/dynamics.hpp"

namespace halfline {

namespace {

// Integral of a nonnegative integrand over [lo, hi], split at the given breaks.
template <class F>
Real split_integral(F&& f, Real lo, Real hi, const std::vector<Real>& breaks) {
  if (!(hi > lo)) return 0.0;
  std::vector<Real> cuts{lo};
  for (Real b : breaks)
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  QuadratureOptions q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  Real total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) total += integrate(f, cuts[i], cuts[i + 1], q).value;
  return total;
}

VectorXc sample(const WeightedFactor& a, const VectorXr& x) {
  VectorXc out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = a(x[i]);
  return out;
}

Real weighted_square_norm(const PanelGrid& grid, const VectorXc& a, const VectorXc& u) {
  return grid.weights().dot(a.cwiseProduct(u).cwiseAbs2());
}

std::vector<Real> merged(std::vector<Real> a, const std::vector<Real>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

Real potential_extent(const Potential& p, Real tol) {
  if (p.is_zero()) return 0.0;
  return truncation_radius(p, tol);
}

}  // namespace

Real WeightedFactor::bracket_norm() const {
  if (is_zero()) return 0.0;
  return std::sqrt(split_integral([&](Real x) { return x * std::norm((*this)(x)); }, 0.0, extent,
                                  breakpoints));
}

Real WeightedFactor::square_integral(Real lo, Real hi) const {
  if (is_zero()) return 0.0;
  return split_integral([&](Real x) { return std::norm((*this)(x)); }, std::max(lo, 0.0),
                        std::min(hi, extent), breakpoints);
}

WeightedFactor WeightedFactor::zero() {
  return {"zero", [](Real) { return Complex(0.0); }, {}, 0.0};
}

WeightedFactor WeightedFactor::indicator(Real lo, Real hi, Real height) {
  if (!(lo >= 0.0 && hi > lo)) throw DomainError("indicator: need 0 <= lo < hi");
  return {"indicator",
          [lo, hi, height](Real x) { return x >= lo && x <= hi ? Complex(height) : Complex(0.0); },
          {lo, hi},
          hi};
}

WeightedFactor WeightedFactor::sqrt_potential(const Potential& p, Real tol) {
  if (p.is_zero()) return zero();
  return {"sqrt_potential",
          [p](Real x) {
            const Complex v = p(x);
            const Real m = std::abs(v);
            return m == 0.0 ? Complex(0.0) : v / std::sqrt(m);
          },
          p.breakpoints(), potential_extent(p, tol)};
}

WeightedFactor WeightedFactor::sqrt_abs_potential(const Potential& p, Real tol) {
  if (p.is_zero()) return zero();
  return {"sqrt_abs_potential", [p](Real x) { return Complex(std::sqrt(std::abs(p(x)))); },
          p.breakpoints(), potential_extent(p, tol)};
}

Complex resolvent_kernel(const Potential& p, Complex k, Real x, Real xi, const SolverOptions& opts,
                         Real pole_threshold) {
  if (x < 0.0 || xi < 0.0) throw DomainError("resolvent_kernel: x and xi must be nonnegative");
  if (!(k.imag() > 0.0)) throw RegionError("resolvent_kernel: needs Im k > 0");
  const Real lo = std::min(x, xi), hi = std::max(x, xi);
  const JostEvaluator jost(p, opts);
  VectorXr nodes(2);
  nodes << 0.0, hi;
  const auto e = jost.solution(k, nodes);
  if (std::abs(e.values[0]) < pole_threshold)
    throw PoleError("resolvent_kernel: k is at a zero of the Jost function");
  VectorXr at(1);
  at << lo;
  const auto s = regular_solution(p, k, at, opts);
  return s.values[0] * e.values[1] / e.values[0];
}

GridResolvent::GridResolvent(const JostEvaluator& jost, Complex k, const PanelGrid& grid)
    : k_(k), grid_(&grid) {
  const VectorXr& x = grid.nodes();
  VectorXr with_origin(x.size() + 1);
  with_origin << 0.0, x;
  const auto e = jost.solution(k, with_origin);
  jost_value_ = e.values[0];
  e_ = e.values.tail(x.size());
  s_ = regular_solution(jost.potential(), k, x, jost.options()).values;
}

VectorXc GridResolvent::apply_scaled(const VectorXc& f) const {
  const VectorXc left = grid_->running_from_left(s_.cwiseProduct(f));
  const VectorXc right = grid_->running_from_right(e_.cwiseProduct(f));
  return e_.cwiseProduct(left) + s_.cwiseProduct(right);
}

VectorXc GridResolvent::apply(const VectorXc& f, Real pole_threshold) const {
  if (std::abs(jost_value_) < pole_threshold)
    throw PoleError("GridResolvent: k is at a zero of the Jost function");
  return apply_scaled(f) / jost_value_;
}

Complex physical_k(Complex lambda) {
  Complex k = std::sqrt(lambda);
  if (k.imag() < 0.0 || (k.imag() == 0.0 && lambda.imag() < 0.0)) k = -k;
  return k;
}

VectorXc boundary_resolvent(const JostEvaluator& jost, Real tau, int sign, const PanelGrid& grid,
                            const VectorXc& f, BoundaryMethod method) {
  if (sign != 1 && sign != -1) throw DomainError("boundary_resolvent: sign must be +1 or -1");
  if (method == BoundaryMethod::Direct) {
    const Complex k = physical_k(Complex(tau, sign * 1e-300));
    return GridResolvent(jost, k, grid).apply(f);
  }
  const Real eps = 1e-6 * (1.0 + std::abs(tau));
  const VectorXc r1 = GridResolvent(jost, physical_k(Complex(tau, sign * eps)), grid).apply(f);
  const VectorXc r2 = GridResolvent(jost, physical_k(Complex(tau, 2.0 * sign * eps)), grid).apply(f);
  return 2.0 * r1 - r2;
}

PanelGrid resolvent_grid(const Potential& p, Real hi, Real k_max,
                         const std::vector<Real>& extra_breaks, int order) {
  if (!(hi > 0.0)) throw DomainError("resolvent_grid: hi must be positive");
  const Real width = k_max > 0.0 ? std::min(0.25, 2.0 / k_max) : 0.25;
  return PanelGrid::covering(0.0, hi, width, order, merged(p.breakpoints(), extra_breaks));
}

Real scaled_hilbert_schmidt(const Potential& p, Complex k, const WeightedFactor& a,
                            const WeightedFactor& b, const SolverOptions& opts) {
  if (a.is_zero() || b.is_zero()) return 0.0;
  const Real hi = std::max(a.extent, b.extent);
  const PanelGrid grid =
      resolvent_grid(p, hi, std::abs(k), merged(a.breakpoints, b.breakpoints), 16);
  const GridResolvent r(JostEvaluator(p, opts), k, grid);
  const VectorXr& w = grid.weights();
  const VectorXr a2 = sample(a, grid.nodes()).cwiseAbs2();
  const VectorXr b2 = sample(b, grid.nodes()).cwiseAbs2();
  const VectorXr e2 = r.e().cwiseAbs2(), s2 = r.s().cwiseAbs2();
  // xi < x contributes |a e|^2(x) |b s|^2(xi); xi > x the mirror image
  const VectorXr left = grid.running_from_left(b2.cwiseProduct(s2).cast<Complex>()).real();
  const VectorXr right = grid.running_from_right(b2.cwiseProduct(e2).cast<Complex>()).real();
  const Real hs2 = w.dot(a2.cwiseProduct(e2).cwiseProduct(left)) +
                   w.dot(a2.cwiseProduct(s2).cwiseProduct(right));
  return std::sqrt(std::max(hs2, 0.0));
}

Lemma3Report lemma3_check(const Potential& p, const WeightedFactor& a, const WeightedFactor& b,
                          const std::vector<Complex>& k_grid, const SolverOptions& opts) {
  Lemma3Report rep;
  rep.C = p.is_zero() ? 1.0 : std::exp(first_moment(p));
  rep.a_bracket = a.bracket_norm();
  rep.b_bracket = b.bracket_norm();
  rep.bound = rep.C * rep.a_bracket * rep.b_bracket;
  const JostEvaluator jost(p, opts);
  for (Complex k : k_grid) {
    if (k.imag() < 0.0) throw RegionError("lemma3_check: needs Im k >= 0");
    Lemma3Entry e;
    e.k = k;
    e.jost = jost.jost_function(k);
    e.hs_scaled = scaled_hilbert_schmidt(p, k, a, b, opts);
    e.hs = std::abs(e.jost) > 0.0 ? e.hs_scaled / std::abs(e.jost) : kInf;
    e.holds = e.hs_scaled <= rep.bound * (1.0 + 1e-9) + 1e-12;
    rep.all_hold = rep.all_hold && e.holds;
    rep.entries.push_back(e);
  }
  return rep;
}

Real resolvent_identity_residual(const Potential& p, Complex k, const WavePacket& phi,
                                 const SolverOptions& opts) {
  if (!(k.imag() > 0.0)) throw RegionError("resolvent_identity_residual: needs Im k > 0");
  const auto A = WeightedFactor::sqrt_potential(p, opts.truncation_tol);
  const auto B = WeightedFactor::sqrt_abs_potential(p, opts.truncation_tol);
  const Real hi = std::max(A.extent, phi.upper());
  const PanelGrid grid =
      resolvent_grid(p, hi, std::max(std::abs(k), phi.max_momentum()), {}, 16);
  const GridResolvent rv(JostEvaluator(p, opts), k, grid);
  const GridResolvent r0(JostEvaluator(Potential::zero(), opts), k, grid);
  const VectorXc f = phi.sample(grid.nodes());
  const VectorXc a = sample(A, grid.nodes()), b = sample(B, grid.nodes());
  const VectorXc lhs = a.cwiseProduct(rv.apply(f));
  const VectorXc a_r0 = a.cwiseProduct(r0.apply(f));
  const VectorXc rhs = a_r0 - a.cwiseProduct(rv.apply(b.cwiseProduct(a_r0)));
  const Real scale = lhs.cwiseAbs().maxCoeff();
  if (scale == 0.0) return (lhs - rhs).cwiseAbs().maxCoeff();
  return (lhs - rhs).cwiseAbs().maxCoeff() / scale;
}

std::string to_string(Route r) { return r == Route::Stationary ? "stationary" : "time_domain"; }

namespace {

SmoothnessResult stationary_smoothness(const Potential& p, const WeightedFactor& a,
                                       const WavePacket& phi, const SmoothnessOptions& opts) {
  SmoothnessResult out;
  out.route = Route::Stationary;
  const Real K = opts.k_max > 0.0 ? opts.k_max : phi.max_momentum() + 2.0;
  out.truncation = K;
  const Real hi = std::max(a.extent, phi.upper());
  const PanelGrid grid = resolvent_grid(p, hi, K, a.breakpoints, opts.panel_order);
  const JostEvaluator jost(p, opts.solver);
  const VectorXc f = phi.sample(grid.nodes());
  const VectorXc av = sample(a, grid.nodes());
  // tau = k^2 on the positive axis, tau = -gamma^2 on the negative one
  auto positive = [&](Real k) {
    return 2.0 * k *
           weighted_square_norm(grid, av, boundary_resolvent(jost, k * k, 1, grid, f, opts.boundary));
  };
  auto negative = [&](Real g) {
    return 2.0 * g * weighted_square_norm(grid, av, GridResolvent(jost, Complex(0.0, g), grid).apply(f));
  };
  QuadratureOptions q;
  q.rel_tol = opts.rel_tol;
  q.abs_tol = 1e-14;
  const auto ip = integrate(positive, 0.0, K, q);
  const auto in = integrate(negative, 0.0, K, q);
  out.evaluations = ip.evaluations + in.evaluations;
  // both integrands fall off like k^{-3} past the momentum content
  const Real tail = 0.5 * K * (positive(K) + negative(K));
  const Real scale = 1.0 / (2.0 * kPi);
  out.tail_estimate = scale * tail;
  out.value = scale * (ip.value + in.value + tail);
  return out;
}

SmoothnessResult time_smoothness(const Potential& p, const WeightedFactor& a, const WavePacket& phi,
                                 const SmoothnessOptions& opts) {
  SmoothnessResult out;
  out.route = Route::TimeDomain;
  const std::vector<WavePacket> packets{phi};
  const Real t_max = opts.t_max > 0.0 ? opts.t_max : 2.0 * interaction_time(p, packets);
  const Real box = opts.box > 0.0 ? opts.box : auto_box(p, packets, t_max);
  const auto op = GridOperator::discretize(p, box, opts.grid_nodes);
  VectorXr w(op.size());
  const Real h = op.h();
  for (int j = 0; j < op.size(); ++j) w[j] = a.square_integral(op.x()[j] - 0.5 * h, op.x()[j] + 0.5 * h);
  const auto ti = time_domain_weighted_norm(op, w, phi.sample(op.x()), opts.dt, t_max);
  out.truncation = ti.t_max;
  out.tail_estimate = ti.tail;
  out.value = ti.value + ti.tail;
  out.evaluations = static_cast<int>(std::ceil(t_max / opts.dt));
  return out;
}

}  // namespace

SmoothnessResult smoothness_integral(const Potential& p, const WeightedFactor& a,
                                     const WavePacket& phi, Route route,
                                     const SmoothnessOptions& opts) {
  if (opts.check_hypothesis) require_empty_spectrum(p, opts.spectrum);
  if (a.is_zero()) {
    SmoothnessResult z;
    z.route = route;
    return z;
  }
  SmoothnessResult r = route == Route::Stationary ? stationary_smoothness(p, a, phi, opts)
                                                  : time_smoothness(p, a, phi, opts);
  if (r.tail_estimate > 0.2 * r.value)
    throw NonConvergenceError("smoothness_integral: tail estimate " + std::to_string(r.tail_estimate) +
                              " exceeds 20% of " + std::to_string(r.value));
  return r;
}

Real route_discrepancy(const SmoothnessResult& a, const SmoothnessResult& b) {
  const Real scale = std::max(std::abs(a.value), std::abs(b.value));
  return scale == 0.0 ? 0.0 : std::abs(a.value - b.value) / scale;
}

}  // namespace halfline
