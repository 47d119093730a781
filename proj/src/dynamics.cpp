#include "halfline/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "halfline/parallel.hpp"

namespace halfline {

namespace {

Complex cell_average(const Potential& p, Real lo, Real hi, Real jump) {
  QuadratureOptions q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-12;
  auto v = [&](Real x) { return p(x); };
  const Complex left = jump > lo ? integrate(v, lo, jump, q).value : Complex(0.0);
  const Complex right = jump < hi ? integrate(v, jump, hi, q).value : Complex(0.0);
  return (left + right) / (hi - lo);
}

Real potential_extent(const Potential& p) {
  if (p.is_zero()) return 0.0;
  return truncation_radius(p, 1e-10);
}

}  // namespace

GridOperator GridOperator::discretize(const Potential& p, Real box, int n, DiagonalRule rule,
                                      Real tol) {
  if (n < 64) throw DomainError("discretize: need at least 64 nodes");
  const Real X = p.is_zero() ? 0.0 : truncation_radius(p, tol);
  if (!(box > X)) throw DomainError("discretize: box " + std::to_string(box) +
                                    " does not cover the truncation radius " + std::to_string(X));
  GridOperator op;
  op.p_ = p;
  op.box_ = box;
  op.h_ = box / (n + 1);
  op.x_.resize(n);
  op.v_.resize(n);
  const auto& breaks = p.breakpoints();
  for (int j = 0; j < n; ++j) {
    const Real x = (j + 1) * op.h_;
    op.x_[j] = x;
    const Real lo = x - 0.5 * op.h_, hi = x + 0.5 * op.h_;
    auto jump = std::find_if(breaks.begin(), breaks.end(), [&](Real b) { return b >= lo && b <= hi; });
    if (rule == DiagonalRule::JumpAveraged && jump != breaks.end())
      op.v_[j] = cell_average(p, lo, hi, *jump);
    else
      op.v_[j] = p(x);
  }
  return op;
}

VectorXc GridOperator::apply(const VectorXc& u) const {
  const Eigen::Index n = u.size();
  if (n != size()) throw DomainError("GridOperator::apply: size mismatch");
  const Real d = 2.0 / (h_ * h_), o = off_diagonal();
  VectorXc out(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Complex acc = (d + v_[j]) * u[j];
    if (j > 0) acc += o * u[j - 1];
    if (j + 1 < n) acc += o * u[j + 1];
    out[j] = acc;
  }
  return out;
}

MatrixXc GridOperator::dense() const {
  const int n = size();
  MatrixXc m = MatrixXc::Zero(n, n);
  m.diagonal() = diagonal();
  for (int j = 0; j + 1 < n; ++j) m(j, j + 1) = m(j + 1, j) = off_diagonal();
  return m;
}

VectorXr GridOperator::symmetric_eigenvalues() const {
  if (v_.imag().cwiseAbs().maxCoeff() > 0.0)
    throw DomainError("symmetric_eigenvalues: the potential is not real");
  const VectorXr diag = diagonal().real();
  const VectorXr off = VectorXr::Constant(size() - 1, off_diagonal());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergenceError("symmetric_eigenvalues: QR failed");
  return solver.eigenvalues();
}

GridOperator GridOperator::free_operator() const {
  GridOperator op = *this;
  op.p_ = Potential::zero();
  op.v_.setZero();
  return op;
}

Propagator::Propagator(const GridOperator& op, Real dt) : op_(&op), dt_(dt) {
  if (!(std::abs(dt) > 0.0)) throw DomainError("Propagator: dt must be nonzero");
  if (std::abs(dt) * op.potential_sup() >= 0.5)
    throw DomainError("Propagator: |dt| sup|V| must stay below 0.5");
  const int n = op.size();
  diag_scale_ = Complex(0.0, 0.5 * dt);
  off_ = diag_scale_ * op.off_diagonal();
  using V = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  const V band = V::Constant(n - 1, -off_);
  lu_.factor(band, (1.0 - diag_scale_ * op.diagonal().array()).matrix(), band);
}

void Propagator::step(VectorXc& u) const {
  // (I - i dt/2 L) u_new = (I + i dt/2 L) u
  VectorXc rhs = u + diag_scale_ * op_->apply(u);
  lu_.solve_in_place(rhs);
  u.swap(rhs);
}

void Propagator::advance(VectorXc& u, int steps) const {
  for (int s = 0; s < steps; ++s) step(u);
}

EvolutionState propagate(const GridOperator& op, EvolutionState state, Real dt, int n_steps,
                         int record_every) {
  if (n_steps < 0) throw DomainError("propagate: negative step count");
  const Propagator prop(op, dt);
  for (int s = 1; s <= n_steps; ++s) {
    prop.step(state.coefficients);
    state.time += dt;
    if (record_every > 0 && s % record_every == 0)
      state.norm_history.emplace_back(state.time, op.norm(state.coefficients));
  }
  if (record_every <= 0 || n_steps % record_every != 0)
    state.norm_history.emplace_back(state.time, op.norm(state.coefficients));
  return state;
}

std::string to_string(Direction d) { return d == Direction::Plus ? "plus" : "minus"; }
std::string to_string(WaveKind k) { return k == WaveKind::Omega ? "omega" : "reverse"; }

Real interaction_time(const Potential& p, const std::vector<WavePacket>& packets) {
  const Real L = potential_extent(p);
  Real t = 0.0;
  for (const auto& w : packets) {
    const Real v = std::max(2.0 * std::abs(w.momentum()), 0.5);
    t = std::max(t, (w.center() + L + 6.0 * w.width()) / v);
  }
  return t;
}

Real auto_box(const Potential& p, const std::vector<WavePacket>& packets, Real t_final) {
  Real box = std::max(30.0, 4.0 * potential_extent(p));
  for (const auto& w : packets) {
    const Real s = w.width();
    const Real spread = s * std::hypot(1.0, t_final / (s * s));
    const Real reach = w.center() + 2.0 * std::abs(w.momentum()) * t_final + 5.5 * spread;
    box = std::max(box, std::max(reach, w.upper()) / 0.9);
  }
  return box;
}

ScatteringSetup::ScatteringSetup(const Potential& p, const std::vector<WavePacket>& packets,
                                 const WaveOptions& opts)
    : opts_(opts) {
  if (opts.ladder < 2) throw DomainError("ScatteringSetup: the ladder needs at least two rungs");
  if (!(opts.dt > 0.0)) throw DomainError("ScatteringSetup: dt must be positive");
  if (opts.check_hypothesis && !p.is_zero()) require_empty_spectrum(p, opts.spectrum);
  T_ = opts.T > 0.0 ? opts.T : interaction_time(p, packets);
  step_ = T_ / std::ceil(T_ / opts.dt - 1e-9);
  const Real t_final = T_ * std::exp2(opts.ladder - 1);
  const Real box = opts.box > 0.0 ? opts.box : auto_box(p, packets, t_final);
  lv_ = GridOperator::discretize(p, box, opts.nodes);
  l0_ = lv_.free_operator();
}

std::vector<Real> ScatteringSetup::ladder() const {
  std::vector<Real> t(opts_.ladder);
  for (int m = 0; m < opts_.ladder; ++m) t[m] = T_ * std::exp2(m);
  return t;
}

int ScatteringSetup::steps_for(Real t) const {
  return static_cast<int>(std::llround(std::abs(t) / step_));
}

VectorXc ScatteringSetup::evolve(const VectorXc& u, Real t, bool perturbed) const {
  VectorXc out = u;
  const int n = steps_for(t);
  if (n == 0) return out;
  Propagator(perturbed ? lv_ : l0_, t > 0 ? step_ : -step_).advance(out, n);
  return out;
}

VectorXc ScatteringSetup::wave_map(const VectorXc& u, Real t, WaveKind kind) const {
  const bool first_perturbed = kind == WaveKind::Reverse;
  return evolve(evolve(u, -t, first_perturbed), t, !first_perturbed);
}

Real ScatteringSetup::wall_mass(const VectorXc& u) const {
  const int n = lv_.size();
  const int start = static_cast<int>(std::floor((1.0 - opts_.wall_fraction) * n));
  const Real total = u.squaredNorm();
  if (total == 0.0) return 0.0;
  return u.tail(n - start).squaredNorm() / total;
}

WaveOperatorResult ScatteringSetup::limit(const VectorXc& phi, Direction d, WaveKind kind) const {
  WaveOperatorResult res;
  res.direction = d;
  res.kind = kind;
  const Real sign = d == Direction::Plus ? 1.0 : -1.0;
  const bool first_perturbed = kind == WaveKind::Reverse;
  VectorXc stage = phi, previous;
  Real t_prev = 0.0;
  for (Real t : ladder()) {
    // e^{-i t L_first} phi, grown incrementally along the ladder
    stage = evolve(stage, -sign * (t - t_prev), first_perturbed);
    t_prev = t;
    VectorXc out = evolve(stage, sign * t, !first_perturbed);
    LadderRung rung;
    rung.t = sign * t;
    rung.wall_mass = std::max(wall_mass(stage), wall_mass(out));
    if (rung.wall_mass > opts_.wall_threshold)
      throw NonConvergenceError("wave operator: mass " + std::to_string(rung.wall_mass) +
                                " reached the far wall at t = " + std::to_string(rung.t));
    if (previous.size() > 0) {
      rung.difference = lv_.norm(out - previous);
      if (res.trace.size() > 1 && rung.difference > res.trace.back().difference) res.monotone = false;
    }
    res.trace.push_back(rung);
    previous = std::move(out);
  }
  res.limit = std::move(previous);
  res.converged = res.trace.back().difference < opts_.tol;
  return res;
}

WaveOperatorResult wave_operator_limit(const Potential& p, const WavePacket& phi, Direction d,
                                       WaveKind kind, const WaveOptions& opts) {
  const ScatteringSetup setup(p, {phi}, opts);
  return setup.limit(phi.sample(setup.perturbed().x()), d, kind);
}

StationaryForm stationary_wave_form(const Potential& p, const WavePacket& phi, const WavePacket& psi,
                                    Direction d, WaveKind kind, const StationaryFormOptions& opts) {
  if (opts.check_hypothesis && !p.is_zero()) require_empty_spectrum(p, opts.spectrum);
  const int sign = d == Direction::Plus ? 1 : -1;
  const Real K = std::max(phi.max_momentum(), psi.max_momentum()) + 2.0;
  const Real hi = std::max({potential_extent(p), phi.upper(), psi.upper()});
  const PanelGrid grid = resolvent_grid(p, hi, K, {}, opts.panel_order);
  const VectorXr& x = grid.nodes();
  const VectorXc f = phi.sample(x), g = psi.sample(x);
  VectorXc v(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = p(x[i]);

  StationaryForm out;
  out.overlap = grid.integral(f.cwiseProduct(g.conjugate()));
  if (p.is_zero()) {
    out.value = out.overlap;
    return out;
  }
  const JostEvaluator free(Potential::zero(), opts.solver), pert(p, opts.solver),
      pert_conj(p.conjugate(), opts.solver);
  // Omega: (V R_0 phi, R_{conj V} psi); Reverse: (V R_V phi, R_0 psi)
  const JostEvaluator& left = kind == WaveKind::Omega ? free : pert;
  const JostEvaluator& right = kind == WaveKind::Omega ? pert_conj : free;
  auto form = [&](Real tau) {
    const VectorXc u = boundary_resolvent(left, tau, sign, grid, f, opts.boundary);
    const VectorXc w = boundary_resolvent(right, tau, sign, grid, g, opts.boundary);
    return grid.integral(v.cwiseProduct(u).cwiseProduct(w.conjugate()));
  };
  auto positive = [&](Real k) { return 2.0 * k * form(k * k); };
  auto negative = [&](Real gam) { return 2.0 * gam * form(-gam * gam); };
  QuadratureOptions q;
  q.rel_tol = opts.rel_tol;
  q.abs_tol = 1e-12;
  const auto ip = integrate(positive, 0.0, K, q);
  const auto in = integrate(negative, 0.0, K, q);
  const Complex total = ip.value + in.value;
  const Complex factor = (kind == WaveKind::Omega ? 1.0 : -1.0) * sign * kI / (2.0 * kPi);
  out.correction = factor * total;
  out.value = out.overlap + out.correction;
  const Real tail = 0.5 * K * (std::abs(positive(K)) + std::abs(negative(K)));
  out.error = (ip.error + in.error + tail) / (2.0 * kPi);
  out.evaluations = ip.evaluations + in.evaluations;
  return out;
}

SimilarityResult similarity_residual(const ScatteringSetup& setup,
                                     const std::vector<WavePacket>& basis, Direction d) {
  SimilarityResult res;
  res.residuals.assign(basis.size(), 0.0);
  const Real t = (d == Direction::Plus ? 1.0 : -1.0) * setup.ladder().back();
  const GridOperator& lv = setup.perturbed();
  parallel_for(static_cast<int>(basis.size()), [&](int i) {
    const VectorXc phi = basis[i].sample(lv.x());
    const VectorXc l0phi = basis[i].sample_laplacian(lv.x());
    const VectorXc w_phi = setup.wave_map(phi, t, WaveKind::Omega);
    const VectorXc w_l0phi = setup.wave_map(l0phi, t, WaveKind::Omega);
    res.residuals[i] = lv.norm(lv.apply(w_phi) - w_l0phi) / lv.norm(l0phi);
  });
  for (Real r : res.residuals) res.max_residual = std::max(res.max_residual, r);
  return res;
}

TimeIntegral time_domain_weighted_norm(const GridOperator& op, const VectorXr& cell_weights,
                                       const VectorXc& phi, Real dt, Real t_max) {
  if (cell_weights.size() != op.size() || phi.size() != op.size())
    throw DomainError("time_domain_weighted_norm: size mismatch");
  if (!(dt > 0.0) || !(t_max > 0.0)) throw DomainError("time_domain_weighted_norm: need dt, t_max > 0");
  const int n = static_cast<int>(std::ceil(t_max / dt - 1e-9));
  const Real step = t_max / n;
  const Propagator prop(op, -step);
  auto weighted = [&](const VectorXc& u) { return cell_weights.dot(u.cwiseAbs2()); };
  VectorXc u = phi;
  Real sum = 0.5 * weighted(u), last = 0.0;
  for (int s = 1; s <= n; ++s) {
    prop.step(u);
    last = weighted(u);
    sum += s == n ? 0.5 * last : last;
  }
  TimeIntegral out;
  out.value = sum * step;
  out.tail = 0.5 * last * t_max;
  out.t_max = t_max;
  return out;
}

}  // namespace halfline
