#include "halfline/solver.hpp"

#include <algorithm>
#include <cmath>

#include "halfline/quadrature.hpp"

namespace halfline {

namespace {

void check_grid(const VectorXr& x) {
  if (x.size() == 0) throw DomainError("solution grid is empty");
  if (x[0] < 0.0) throw DomainError("solution grid must be nonnegative");
  for (Eigen::Index i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw DomainError("solution grid must ascend strictly");
}

// V evaluated strictly inside [lo, hi]: at a jump of V the one-sided value
// belonging to the current segment is used.
struct SegmentPotential {
  const Potential& p;
  Real lo = 0.0, hi = 0.0;
  Complex operator()(Real x) const {
    const Real inner_lo = std::nextafter(lo, hi);
    const Real inner_hi = std::nextafter(hi, lo);
    return p(std::clamp(x, std::min(inner_lo, inner_hi), std::max(inner_lo, inner_hi)));
  }
};

std::vector<Real> merged_stops(const VectorXr& grid, const std::vector<Real>& breaks, Real lo,
                               Real hi) {
  std::vector<Real> stops{lo, hi};
  for (Eigen::Index i = 0; i < grid.size(); ++i)
    if (grid[i] > lo && grid[i] < hi) stops.push_back(grid[i]);
  for (Real b : breaks)
    if (b > lo && b < hi) stops.push_back(b);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  return stops;
}

OdeOptions ode_options(const SolverOptions& o) {
  OdeOptions out;
  out.rel_tol = o.rel_tol;
  out.abs_tol = o.abs_tol;
  return out;
}

}  // namespace

Complex expm1_over(Complex z) {
  if (std::abs(z) < 1e-4) return 1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0;
  return (std::exp(z) - 1.0) / z;
}

JostEvaluator::JostEvaluator(Potential p, SolverOptions opts) : p_(std::move(p)), opts_(opts) {
  radius_ = truncation_radius(p_, opts_.truncation_tol);
}

void JostEvaluator::check_region(Complex k) const {
  const Real a = p_.decay_rate();
  if (std::isinf(a)) return;
  if (a == 0.0) {
    if (k.imag() < 0.0) throw RegionError("Jost solution needs Im k >= 0 for a potential with decay rate 0");
    return;
  }
  if (!(k.imag() > -0.5 * a))
    throw RegionError("Jost solution needs Im k > -a/2 = " + std::to_string(-0.5 * a));
}

Real JostEvaluator::start_point(Complex k) const {
  if (p_.support() || p_.is_zero()) return radius_;
  const Real a = p_.decay_rate();
  if (k.imag() < 0.0 && std::isfinite(a)) {
    // The tail kernel grows like e^{2|Im k| x}; stretch X so the neglected
    // tail keeps the same size.
    return radius_ * a / (a - 2.0 * std::abs(k.imag()));
  }
  return radius_;
}

JostValue JostEvaluator::jost_function_with_derivative(Complex k) const {
  check_region(k);
  if (p_.is_zero()) return {1.0, 0.0};
  const Real X = start_point(k);
  const auto stops = merged_stops(VectorXr(), p_.breakpoints(), 0.0, X);
  const Complex two_ik = 2.0 * kI * k;
  DormandPrince<4> dp(ode_options(opts_));
  OdeState<4> y;
  y << 1.0, 0.0, 0.0, 0.0;  // f, f', df/dk, df'/dk
  for (std::size_t s = stops.size() - 1; s > 0; --s) {
    const SegmentPotential V{p_, stops[s - 1], stops[s]};
    auto rhs = [&](Real x, const OdeState<4>& u) {
      const Complex v = V(x);
      OdeState<4> d;
      d << u[1], v * u[0] - two_ik * u[1], u[3], v * u[2] - two_ik * u[3] - 2.0 * kI * u[1];
      return d;
    };
    dp.advance(rhs, stops[s], stops[s - 1], y);
  }
  return {y[0], y[2]};
}

Complex JostEvaluator::jost_function(Complex k) const {
  check_region(k);
  if (p_.is_zero()) return 1.0;
  const Real X = start_point(k);
  const auto stops = merged_stops(VectorXr(), p_.breakpoints(), 0.0, X);
  const Complex two_ik = 2.0 * kI * k;
  DormandPrince<2> dp(ode_options(opts_));
  OdeState<2> y(1.0, 0.0);
  for (std::size_t s = stops.size() - 1; s > 0; --s) {
    const SegmentPotential V{p_, stops[s - 1], stops[s]};
    auto rhs = [&](Real x, const OdeState<2>& u) {
      return OdeState<2>(u[1], V(x) * u[0] - two_ik * u[1]);
    };
    dp.advance(rhs, stops[s], stops[s - 1], y);
  }
  return y[0];
}

SolutionRecord JostEvaluator::solution(Complex k, const VectorXr& x_grid) const {
  check_grid(x_grid);
  check_region(k);
  SolutionRecord rec;
  rec.k = k;
  rec.x = x_grid;
  rec.kind = SolutionKind::Jost;
  const Eigen::Index n = x_grid.size();
  VectorXc f = VectorXc::Ones(n), g = VectorXc::Zero(n);
  const Real X = start_point(k);
  if (!p_.is_zero() && x_grid[0] < X) {
    const auto stops = merged_stops(x_grid, p_.breakpoints(), x_grid[0], X);
    const Complex two_ik = 2.0 * kI * k;
    DormandPrince<2> dp(ode_options(opts_));
    OdeState<2> y(1.0, 0.0);
    Eigen::Index node = n - 1;
    while (node >= 0 && x_grid[node] >= X) --node;
    for (std::size_t s = stops.size() - 1; s > 0; --s) {
      const SegmentPotential V{p_, stops[s - 1], stops[s]};
      auto rhs = [&](Real x, const OdeState<2>& u) {
        return OdeState<2>(u[1], V(x) * u[0] - two_ik * u[1]);
      };
      dp.advance(rhs, stops[s], stops[s - 1], y);
      if (node >= 0 && x_grid[node] == stops[s - 1]) {
        f[node] = y[0];
        g[node] = y[1];
        --node;
      }
    }
  }
  rec.values.resize(n);
  rec.derivatives.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Complex phase = std::exp(kI * k * x_grid[i]);
    rec.values[i] = phase * f[i];
    rec.derivatives[i] = phase * (kI * k * f[i] + g[i]);
  }
  if (opts_.volterra_check && !p_.is_zero()) {
    const auto ref = jost_volterra(p_, k, x_grid, 1e-14, opts_.truncation_tol);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real scale = std::abs(ref.record.values[i]) + 1e-300;
      if (std::abs(ref.record.values[i] - rec.values[i]) > opts_.volterra_rel_tol * scale)
        throw NonConvergenceError("Jost solution disagrees with the Volterra series at x = " +
                                  std::to_string(x_grid[i]));
    }
  }
  return rec;
}

SolutionRecord jost_solution(const Potential& p, Complex k, const VectorXr& x_grid,
                             const SolverOptions& opts) {
  return JostEvaluator(p, opts).solution(k, x_grid);
}

SolutionRecord regular_solution(const Potential& p, Complex k, const VectorXr& x_grid,
                                const SolverOptions& opts) {
  check_grid(x_grid);
  SolutionRecord rec;
  rec.k = k;
  rec.x = x_grid;
  rec.kind = SolutionKind::Regular;
  const Eigen::Index n = x_grid.size();
  rec.values.resize(n);
  rec.derivatives.resize(n);
  const Complex k2 = k * k;
  if (p.is_zero()) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real x = x_grid[i];
      rec.values[i] = x * expm1_over(2.0 * kI * k * x) * std::exp(-kI * k * x);
      rec.derivatives[i] = std::cos(k * x);
    }
    return rec;
  }
  const auto stops = merged_stops(x_grid, p.breakpoints(), 0.0, x_grid[n - 1]);
  DormandPrince<2> dp(ode_options(opts));
  OdeState<2> y(0.0, 1.0);
  Eigen::Index node = 0;
  if (x_grid[0] == 0.0) {
    rec.values[0] = 0.0;
    rec.derivatives[0] = 1.0;
    node = 1;
  }
  for (std::size_t s = 0; s + 1 < stops.size(); ++s) {
    const SegmentPotential V{p, stops[s], stops[s + 1]};
    auto rhs = [&](Real x, const OdeState<2>& u) {
      return OdeState<2>(u[1], (V(x) - k2) * u[0]);
    };
    dp.advance(rhs, stops[s], stops[s + 1], y);
    if (node < n && x_grid[node] == stops[s + 1]) {
      rec.values[node] = y[0];
      rec.derivatives[node] = y[1];
      ++node;
    }
  }
  return rec;
}

Real jost_majorant_exponent(const Potential& p, Complex k, Real alpha, Real x) {
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("alpha must lie in [0, 1]");
  const Real ak = std::abs(k);
  if (p.is_zero()) return 0.0;
  if (ak == 0.0 && alpha < 1.0) return kInf;
  const Real im = k.imag();
  auto weight = [alpha, im](Real t) {
    const Real damp = std::exp(-2.0 * im * t);
    const Real grow = std::max(1.0, damp);
    const Real pw = alpha == 0.0 ? 1.0 : std::pow(t, alpha);
    return pw * std::pow(grow, alpha) * std::pow(1.0 + damp, 1.0 - alpha);
  };
  QuadratureOptions q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  const Real integral = integrate_abs_potential(p, weight, x, q, im < 0.0);
  return std::pow(2.0 * ak, alpha - 1.0) * integral;
}

VolterraResult jost_volterra(const Potential& p, Complex k, const VectorXr& x_grid,
                             Real majorant_tol, Real truncation_tol) {
  check_grid(x_grid);
  JostEvaluator region(p, SolverOptions{.truncation_tol = truncation_tol});
  region.check_region(k);
  const Real X = region.start_point(k);
  VolterraResult out;
  out.record.k = k;
  out.record.x = x_grid;
  out.record.kind = SolutionKind::Jost;
  const Eigen::Index n_out = x_grid.size();
  out.record.values.resize(n_out);
  out.record.derivatives.resize(n_out);
  const Complex ik = kI * k;
  if (p.is_zero() || X == 0.0) {
    for (Eigen::Index i = 0; i < n_out; ++i) {
      out.record.values[i] = std::exp(ik * x_grid[i]);
      out.record.derivatives[i] = ik * out.record.values[i];
    }
    return out;
  }

  const Real ak = std::abs(k);
  const Real width = std::min(0.25, 3.0 / std::max(2.0 * ak, 1e-12));
  constexpr int order = 20;
  const PanelGrid grid = PanelGrid::covering(0.0, X, width, order, p.breakpoints());
  const int N = grid.size();
  const VectorXr& nodes = grid.nodes();
  VectorXc v(N);
  for (int j = 0; j < N; ++j) v[j] = p(nodes[j]);
  const Eigen::MatrixXd right = grid.right_partial();

  // M_kernel eps gives the next term, M_deriv eps its x-derivative.
  MatrixXc kernel = MatrixXc::Zero(N, N), deriv = MatrixXc::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    const int pi = grid.panel_of(i), qi = i % order;
    for (int j = 0; j < N; ++j) {
      const int pj = grid.panel_of(j);
      if (pj < pi) continue;
      const Real w = pj > pi ? grid.weights()[j] : grid.half_width(pi) * right(qi, j % order);
      const Real d = nodes[j] - nodes[i];
      const Complex z = 2.0 * ik * d;
      kernel(i, j) = w * d * expm1_over(z) * v[j];
      deriv(i, j) = -w * std::exp(z) * v[j];
    }
  }

  Real majorant_base = kInf;
  for (Real alpha : {0.0, 0.25, 0.5, 0.75, 1.0})
    majorant_base = std::min(majorant_base, jost_majorant_exponent(p, k, alpha, 0.0));

  VectorXc term = VectorXc::Ones(N);
  VectorXc sum = term, dsum = VectorXc::Zero(N);
  Real bound = 1.0;  // majorant_base^n / n!
  int n = 0;
  while (true) {
    bound *= majorant_base / (n + 1);
    if (bound < majorant_tol) break;
    if (n >= 600) throw NonConvergenceError("Volterra series: majorant did not fall below tolerance");
    dsum += deriv * term;
    term = kernel * term;
    sum += term;
    ++n;
  }
  out.terms = n;
  out.majorant = bound;

  for (Eigen::Index i = 0; i < n_out; ++i) {
    const Real x = x_grid[i];
    Complex f = 1.0, df = 0.0;
    if (x < X) {
      f = grid.interpolate(sum, x);
      df = grid.interpolate(dsum, x);
    }
    const Complex phase = std::exp(ik * x);
    out.record.values[i] = phase * f;
    out.record.derivatives[i] = phase * (ik * f + df);
  }
  return out;
}

VectorXc wronskian(const SolutionRecord& jost, const SolutionRecord& regular) {
  if (jost.kind != SolutionKind::Jost || regular.kind != SolutionKind::Regular)
    throw MismatchError("wronskian expects (jost, regular) records");
  if (jost.k != regular.k) throw MismatchError("wronskian: records have different k");
  if (jost.x.size() != regular.x.size() || jost.x != regular.x)
    throw MismatchError("wronskian: records have different grids");
  return jost.values.cwiseProduct(regular.derivatives) -
         jost.derivatives.cwiseProduct(regular.values);
}

Real ode_residual(const SolutionRecord& rec, const Potential& p) {
  Real worst = 0.0;
  const auto& x = rec.x;
  const auto& breaks = p.breakpoints();
  const Complex k2 = rec.k * rec.k;
  for (Eigen::Index i = 1; i + 1 < x.size(); ++i) {
    const Real lo = x[i - 1], hi = x[i + 1];
    const bool straddles = std::any_of(breaks.begin(), breaks.end(),
                                       [&](Real b) { return b >= lo && b <= hi; });
    if (straddles) continue;
    const Real h1 = x[i] - lo, h2 = hi - x[i];
    // three-point derivative of y' on a nonuniform stencil
    const Complex ypp = (-h2 / (h1 * (h1 + h2))) * rec.derivatives[i - 1] +
                        ((h2 - h1) / (h1 * h2)) * rec.derivatives[i] +
                        (h1 / (h2 * (h1 + h2))) * rec.derivatives[i + 1];
    const Complex res = -ypp + (p(x[i]) - k2) * rec.values[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

VectorXr default_grid(Real x_max, int n) {
  if (n < 8) throw DomainError("default_grid: need at least 8 nodes");
  if (!(x_max > 0.0)) throw DomainError("default_grid: x_max must be positive");
  const int n_geo = n / 4;
  const Real g_lo = 1e-4 * x_max, g_hi = 0.05 * x_max;
  std::vector<Real> pts{0.0};
  for (int i = 0; i < n_geo; ++i)
    pts.push_back(g_lo * std::pow(g_hi / g_lo, static_cast<Real>(i) / (n_geo - 1)));
  const int n_uni = n - 1 - n_geo;
  for (int i = 1; i <= n_uni; ++i) pts.push_back(g_hi + (x_max - g_hi) * i / n_uni);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return Eigen::Map<VectorXr>(pts.data(), static_cast<Eigen::Index>(pts.size()));
}

namespace {

EstimateCheck compare(std::string name, VectorXr lhs, VectorXr rhs) {
  EstimateCheck c;
  c.name = std::move(name);
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  for (Eigen::Index i = 0; i < c.lhs.size(); ++i) {
    // slack covers the solver tolerance, not the inequality
    if (!(c.lhs[i] <= c.rhs[i] * (1.0 + 1e-9) + 1e-10)) c.holds = false;
    if (c.rhs[i] > 0.0) c.worst_ratio = std::max(c.worst_ratio, c.lhs[i] / c.rhs[i]);
  }
  return c;
}

EstimateCheck not_applicable(std::string name, std::string why) {
  EstimateCheck c;
  c.name = std::move(name);
  c.applicable = false;
  c.note = std::move(why);
  return c;
}

}  // namespace

EstimateReport verify_estimates(const Potential& p, Complex k, Real alpha, const VectorXr& x_grid,
                                const SolverOptions& opts) {
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("verify_estimates: alpha must lie in [0, 1]");
  check_grid(x_grid);
  EstimateReport r;
  r.k = k;
  r.alpha = alpha;
  r.x = x_grid;
  const JostEvaluator jost(p, opts);
  jost.check_region(k);
  const SolutionRecord e = jost.solution(k, x_grid);
  const Eigen::Index n = x_grid.size();
  QuadratureOptions q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;

  const bool lemma_ok = std::abs(k) > 0.0 || alpha == 1.0;
  if (lemma_ok) {
    VectorXr lhs(n), rhs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      lhs[i] = std::abs(e.values[i] * std::exp(-kI * k * x_grid[i]) - 1.0);
      rhs[i] = std::expm1(jost_majorant_exponent(p, k, alpha, x_grid[i]));
    }
    r.jost_deviation = compare("jost_deviation", lhs, rhs);

    const Real im = k.imag();
    auto w5 = [alpha, im](Real t) {
      return (alpha == 0.0 ? 1.0 : std::pow(t, alpha)) * (1.0 + std::exp(-2.0 * im * t));
    };
    const Real expo = std::pow(2.0 * std::abs(k), alpha - 1.0) *
                      integrate_abs_potential(p, w5, 0.0, q, im < 0.0);
    const Complex e0 = jost.jost_function(k);
    r.jost_function = compare("jost_function", VectorXr::Constant(1, std::abs(e0 - 1.0)),
                              VectorXr::Constant(1, std::expm1(expo)));
  } else {
    r.jost_deviation = not_applicable("jost_deviation", "k = 0 requires alpha = 1");
    r.jost_function = not_applicable("jost_function", "k = 0 requires alpha = 1");
  }

  if (k.imag() >= 0.0) {
    const SolutionRecord s = regular_solution(p, k, x_grid, opts);
    VectorXr lhs_e(n), rhs_e(n), lhs_s(n), rhs_s(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Real x = x_grid[i];
      const Real tail = weighted_moment(p, {1.0, 0.0, x}, q);
      const Real head = weighted_moment_between(p, {1.0, 0.0, 0.0}, 0.0, x, q);
      lhs_e[i] = std::abs(e.values[i]);
      rhs_e[i] = std::exp(tail) * std::exp(-k.imag() * x);
      lhs_s[i] = std::abs(s.values[i]);
      rhs_s[i] = x * std::exp(head) * std::exp(k.imag() * x);
    }
    r.jost_bound = compare("jost_bound", lhs_e, rhs_e);
    r.regular_bound = compare("regular_bound", lhs_s, rhs_s);
  } else {
    r.jost_bound = not_applicable("jost_bound", "requires Im k >= 0");
    r.regular_bound = not_applicable("regular_bound", "requires Im k >= 0");
  }
  return r;
}

}  // namespace halfline
