#include "halfline/bounds.hpp"

#include <algorithm>
#include <cmath>

namespace halfline {

namespace {

QuadratureOptions moment_quadrature() {
  QuadratureOptions q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  return q;
}

void check_parameters(Real a, Real alpha, Real beta) {
  if (!(a > 0.0)) throw DomainError("bound: a must be positive");
  if (alpha < 0.0 || alpha >= 1.0) throw DomainError("bound: alpha must lie in [0, 1)");
  if (beta < 0.0 || beta >= 1.0) throw DomainError("bound: beta must lie in [0, 1)");
}

// a^{beta-1} int x^beta (1 + e^{ax}) |V|
Real braced_moment(const Potential& p, Real a, Real beta) {
  const auto q = moment_quadrature();
  const Real m = weighted_moment(p, {beta, 0.0, 0.0}, q) + weighted_moment(p, {beta, a, 0.0}, q);
  return std::pow(a, beta - 1.0) * m;
}

Real threshold(Real Rt, Real R, Real a) { return std::max(Rt, R * R / a - 0.25 * a); }

Real assemble(Real moment, Real Rt, Real alpha, Real R, Real a, Real A) {
  const Real prefactor = std::log((A + 0.5 * a) / std::hypot(A, R));
  const Real ratio = Rt == 0.0 ? 0.0 : std::pow(Rt / A, 1.0 - alpha);
  const Real log_term = std::log(2.0 - std::exp2(ratio));
  return (moment - log_term) / prefactor;
}

std::vector<Real> uniform(int n, Real hi) {
  std::vector<Real> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? 0.0 : hi * i / (n - 1);
  return out;
}

void check_weight(const Potential& p, Real a) {
  if (a > p.decay_rate())
    throw HypothesisError("bound: e^{ax}|V| is not integrable for a = " + std::to_string(a) +
                          " above the decay rate " + std::to_string(p.decay_rate()));
}

}  // namespace

Real admissible_A_threshold(const Potential& p, Real a, Real alpha) {
  check_parameters(a, alpha, 0.0);
  return threshold(enclosing_radius(p, alpha), min_enclosing_radius(p), a);
}

Real theorem1_bound(const Potential& p, Real a, Real alpha, Real beta, Real A) {
  check_parameters(a, alpha, beta);
  check_weight(p, a);
  const Real R = min_enclosing_radius(p);
  const Real Rt = enclosing_radius(p, alpha);
  const Real A_min = threshold(Rt, R, a);
  if (!(A > A_min) || !(A > 0.0))
    throw AdmissibilityError("theorem1_bound: A = " + std::to_string(A) + " must exceed " +
                             std::to_string(std::max(A_min, 0.0)));
  return assemble(braced_moment(p, a, beta), Rt, alpha, R, a, A);
}

BoundCertificate optimize_bound(const Potential& p, Real a, int computed_count,
                                const BoundGrid& grid) {
  check_parameters(a, 0.0, 0.0);
  check_weight(p, a);
  BoundCertificate cert;
  cert.a = a;
  cert.computed_count = computed_count;
  if (p.is_zero()) {
    // both the moment and R~ vanish: the bound is 0 for every admissible A
    cert.A = 1.0;
    cert.bound_value = 0.0;
    cert.grid_minimum = 0.0;
    cert.satisfied = computed_count <= 0;
    return cert;
  }
  const Real R = min_enclosing_radius(p);
  cert.R_used = R;
  const auto alphas = uniform(grid.alpha_points, grid.alpha_max);
  const auto betas = uniform(grid.beta_points, grid.alpha_max);
  std::vector<Real> Rt(alphas.size()), M(betas.size());
  for (std::size_t i = 0; i < alphas.size(); ++i) Rt[i] = enclosing_radius(p, alphas[i]);
  for (std::size_t j = 0; j < betas.size(); ++j) M[j] = braced_moment(p, a, betas[j]);

  struct Best {
    Real value = kInf;
    std::size_t i = 0, j = 0;
    int m = 0;
  } best;
  const Real span = std::log(grid.A_span / 1.001);
  auto A_at = [&](Real A_min, Real t) { return 1.001 * A_min * std::exp(span * t); };
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    const Real A_min = threshold(Rt[i], R, a);
    for (std::size_t j = 0; j < betas.size(); ++j) {
      for (int m = 0; m < grid.A_points; ++m) {
        const Real A = A_at(A_min, grid.A_points == 1 ? 0.0 : Real(m) / (grid.A_points - 1));
        const Real v = assemble(M[j], Rt[i], alphas[i], R, a, A);
        ++cert.grid_points;
        if (v < best.value) best = {v, i, j, m};
      }
    }
  }
  cert.grid_minimum = best.value;

  // golden section in log A between the neighbouring grid points
  const Real A_min = threshold(Rt[best.i], R, a);
  const Real step = grid.A_points == 1 ? 0.0 : 1.0 / (grid.A_points - 1);
  Real lo = std::max(0.0, (best.m - 1) * step), hi = std::min(1.0, (best.m + 1) * step);
  auto f = [&](Real t) { return assemble(M[best.j], Rt[best.i], alphas[best.i], R, a, A_at(A_min, t)); };
  const Real g = 0.5 * (std::sqrt(5.0) - 1.0);
  Real c = hi - g * (hi - lo), d = lo + g * (hi - lo);
  Real fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && hi - lo > 1e-12; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  Real t_best = best.m * step, v_best = best.value;
  if (std::min(fc, fd) < v_best) {
    t_best = fc < fd ? c : d;
    v_best = std::min(fc, fd);
  }
  cert.alpha = alphas[best.i];
  cert.beta = betas[best.j];
  cert.A = A_at(A_min, t_best);
  cert.A_min = A_min;
  cert.bound_value = v_best;
  cert.satisfied = computed_count <= std::floor(v_best);
  return cert;
}

BoundCertificate optimize_bound(const Potential& p, Real a, const BoundGrid& grid,
                                const SpectrumOptions& spectrum) {
  const int count = p.is_zero() ? 0 : locate_spectrum(p, spectrum).count;
  return optimize_bound(p, a, count, grid);
}

Real corollary2_bound(const Potential& p) {
  if (p.is_zero()) return 0.0;
  const auto q = moment_quadrature();
  const Real b = weighted_moment(p, {0.0, 0.0, 0.0}, q) / kLn2;
  if (p.decay_rate() < b)
    throw InapplicableError("corollary2_bound: decay rate " + std::to_string(p.decay_rate()) +
                            " is below b = " + std::to_string(b));
  return 10.0 * (1.0 + 2.0 / b * weighted_moment(p, {0.0, b, 0.0}, q));
}

Corollary2Result corollary2_certificate(const Potential& p, int computed_count) {
  Corollary2Result r;
  r.computed_count = computed_count;
  if (p.is_zero()) {
    r.short_circuit = true;
    r.satisfied = computed_count == 0;
    return r;
  }
  r.b = weighted_moment(p, {0.0, 0.0, 0.0}, moment_quadrature()) / kLn2;
  r.bound_value = corollary2_bound(p);
  r.satisfied = computed_count <= std::floor(r.bound_value);
  return r;
}

}  // namespace halfline
