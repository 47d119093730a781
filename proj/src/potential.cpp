#include "halfline/potential.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace halfline {

std::string to_string(Family f) {
  switch (f) {
    case Family::Well:
      return "well";
    case Family::Exponential:
      return "exponential";
    case Family::Gaussian:
      return "gaussian";
    case Family::Sampled:
      return "sampled";
    case Family::Expression:
      return "expression";
  }
  return "unknown";
}

Potential Potential::piecewise(std::vector<Real> edges, std::vector<Complex> levels) {
  if (edges.empty() || edges.size() != levels.size())
    throw SchemaError("piecewise well: need one level per edge");
  Real prev = 0.0;
  for (Real e : edges) {
    if (!(e > prev) || !std::isfinite(e)) throw SchemaError("piecewise well: edges must be positive and ascending");
    prev = e;
  }
  for (const Complex& v : levels)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw SchemaError("piecewise well: levels must be finite");
  Potential p;
  p.family_ = Family::Well;
  p.edges_ = std::move(edges);
  p.levels_ = std::move(levels);
  p.decay_rate_ = kInf;
  p.support_ = p.edges_.back();
  p.finalize();
  return p;
}

Potential Potential::well(Complex value, Real width) {
  return piecewise({width}, {value});
}

Potential Potential::exponential(Complex c, Real ell) {
  if (!(ell > 0.0) || !std::isfinite(ell)) throw SchemaError("exponential: ell must be positive");
  Potential p;
  p.family_ = Family::Exponential;
  p.strength_ = c;
  p.length_ = ell;
  p.decay_rate_ = 1.0 / ell;
  p.finalize();
  return p;
}

Potential Potential::gaussian(Complex c, Real center, Real width) {
  if (!(width > 0.0)) throw SchemaError("gaussian: width must be positive");
  Potential p;
  p.family_ = Family::Gaussian;
  p.strength_ = c;
  p.center_ = center;
  p.length_ = width;
  p.decay_rate_ = kInf;
  p.finalize();
  return p;
}

Potential Potential::sampled(std::vector<Real> x, std::vector<Complex> values) {
  if (x.size() < 2 || x.size() != values.size())
    throw SchemaError("sampled: need at least two samples with matching values");
  if (x.front() != 0.0) throw SchemaError("sampled: first sample must be at x = 0");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw SchemaError("sampled: abscissae must ascend strictly");
  Potential p;
  p.family_ = Family::Sampled;
  p.edges_ = std::move(x);
  p.levels_ = std::move(values);
  p.support_ = p.edges_.back();
  p.decay_rate_ = kInf;
  p.finalize();
  return p;
}

Potential Potential::expression(const std::string& source, Real decay_rate,
                                std::optional<Real> support) {
  if (!(decay_rate >= 0.0)) throw SchemaError("expression: decay_rate_a must be nonnegative");
  Potential p;
  p.family_ = Family::Expression;
  p.source_ = source;
  p.expr_ = std::make_shared<const Expression>(Expression::parse(source));
  p.support_ = support;
  p.decay_rate_ = support ? kInf : decay_rate;
  p.finalize();
  return p;
}

Potential Potential::conjugate() const {
  Potential p = *this;
  p.conjugated_ = !conjugated_;
  return p;
}

void Potential::finalize() {
  breakpoints_.clear();
  switch (family_) {
    case Family::Well: {
      breakpoints_ = edges_;
      sup_norm_ = 0.0;
      for (const Complex& v : levels_) sup_norm_ = std::max(sup_norm_, std::abs(v));
      is_zero_ = sup_norm_ == 0.0;
      break;
    }
    case Family::Sampled: {
      breakpoints_.assign(edges_.begin() + 1, edges_.end());
      sup_norm_ = 0.0;
      for (const Complex& v : levels_) sup_norm_ = std::max(sup_norm_, std::abs(v));
      is_zero_ = sup_norm_ == 0.0;
      break;
    }
    case Family::Exponential:
    case Family::Gaussian:
      sup_norm_ = std::abs(strength_);
      is_zero_ = sup_norm_ == 0.0;
      break;
    case Family::Expression: {
      if (support_) {
        if (!(*support_ > 0.0)) throw SchemaError("expression: support must be positive");
        breakpoints_.push_back(*support_);
      }
      // Boundedness is part of the contract; probe it on a grid.
      const Real hi = support_ ? *support_ : 50.0;
      sup_norm_ = 0.0;
      for (int i = 0; i <= 4000; ++i) {
        const Complex v = raw(hi * i / 4000.0);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
          throw SchemaError("expression: potential is not finite at x = " +
                            std::to_string(hi * i / 4000.0));
        sup_norm_ = std::max(sup_norm_, std::abs(v));
      }
      is_zero_ = false;
      break;
    }
  }
}

Complex Potential::raw(Real x) const {
  switch (family_) {
    case Family::Well: {
      auto it = std::lower_bound(edges_.begin(), edges_.end(), x);
      if (it == edges_.end()) return 0.0;
      return levels_[static_cast<std::size_t>(it - edges_.begin())];
    }
    case Family::Exponential:
      return strength_ * std::exp(-x / length_);
    case Family::Gaussian: {
      const Real u = (x - center_) / length_;
      return strength_ * std::exp(-u * u);
    }
    case Family::Sampled: {
      if (x > edges_.back()) return 0.0;
      auto it = std::upper_bound(edges_.begin(), edges_.end(), x);
      if (it == edges_.end()) return levels_.back();
      const std::size_t j = static_cast<std::size_t>(it - edges_.begin());
      const Real t = (x - edges_[j - 1]) / (edges_[j] - edges_[j - 1]);
      return levels_[j - 1] * (1.0 - t) + levels_[j] * t;
    }
    case Family::Expression:
      if (support_ && x > *support_) return 0.0;
      return (*expr_)(x);
  }
  return 0.0;
}

Complex Potential::operator()(Real x) const {
  if (!(x >= 0.0)) throw DomainError("potential evaluated at negative x");
  const Complex v = raw(x);
  return conjugated_ ? std::conj(v) : v;
}

namespace {

Real natural_scale(const Potential& p) {
  switch (p.family()) {
    case Family::Exponential:
      return 10.0 * p.length();
    case Family::Gaussian:
      return std::max(0.0, p.center()) + 6.0 * p.length();
    default:
      return 10.0;
  }
}

bool tail_converges(const std::function<Real(Real)>& w, Real start) {
  // x^2 w(x) must fall to negligible size along a geometric ladder.
  Real x = std::max(start, 1.0);
  Real last = 0.0;
  for (int j = 0; j < 12; ++j, x *= 2.0) last = x * x * w(x);
  return std::isfinite(last) && last < 1e-12;
}

}  // namespace

Real integrate_abs_potential(const Potential& p, const std::function<Real(Real)>& weight,
                             Real lower, const QuadratureOptions& opts, bool divergent_hint) {
  if (lower < 0.0) throw DomainError("integral: lower limit must be nonnegative");
  if (p.is_zero()) return 0.0;
  auto w = [&](Real x) {
    // an underflowed |V| must not turn an overflowed weight into NaN
    const Real v = std::abs(p(x));
    return v == 0.0 ? 0.0 : weight(x) * v;
  };
  auto finite_piece = [&](Real lo, Real hi) {
    std::vector<Real> cuts{lo};
    for (Real b : p.breakpoints())
      if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    Real total = 0.0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
      const auto r = integrate(w, cuts[i - 1], cuts[i], opts);
      if (!r.converged) throw NonConvergenceError("potential quadrature did not converge");
      total += r.value;
    }
    return total;
  };
  if (p.support()) return lower >= *p.support() ? 0.0 : finite_piece(lower, *p.support());
  const Real split = std::max(lower, natural_scale(p));
  if (divergent_hint && !tail_converges(w, split))
    throw DivergenceError("weighted integral of |V| diverges (weight outgrows decay rate " +
                          std::to_string(p.decay_rate()) + ")");
  const Real head = finite_piece(lower, split);
  const auto tail = integrate_to_infinity(w, split, opts);
  if (!tail.converged || !std::isfinite(tail.value))
    throw DivergenceError("weighted integral of |V| does not converge");
  return head + tail.value;
}

namespace {

Real power_weight(Real x, Real alpha) { return alpha == 0.0 ? 1.0 : std::pow(x, alpha); }

void check_alpha(Real alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("moment: alpha must lie in [0, 1]");
}

}  // namespace

Real weighted_moment_between(const Potential& p, const MomentSpec& spec, Real lo, Real hi,
                             const QuadratureOptions& opts) {
  check_alpha(spec.alpha);
  if (lo < 0.0 || hi < lo) throw DomainError("moment: bad interval");
  if (p.is_zero() || hi == lo) return 0.0;
  if (p.support()) hi = std::min(hi, *p.support());
  if (hi <= lo) return 0.0;
  auto w = [&](Real x) {
    return power_weight(x, spec.alpha) * std::exp(spec.exp_weight * x) * std::abs(p(x));
  };
  std::vector<Real> cuts{lo};
  for (Real b : p.breakpoints())
    if (b > lo && b < hi) cuts.push_back(b);
  cuts.push_back(hi);
  Real total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    const auto r = integrate(w, cuts[i - 1], cuts[i], opts);
    if (!r.converged) throw NonConvergenceError("moment quadrature did not converge");
    total += r.value;
  }
  return total;
}

Real weighted_moment(const Potential& p, const MomentSpec& spec, const QuadratureOptions& opts) {
  check_alpha(spec.alpha);
  return integrate_abs_potential(
      p, [&](Real x) { return power_weight(x, spec.alpha) * std::exp(spec.exp_weight * x); },
      spec.lower, opts, spec.exp_weight >= p.decay_rate());
}

Real truncation_radius(const Potential& p, Real tol) {
  if (!(tol > 0.0)) throw DomainError("truncation_radius: tol must be positive");
  if (p.is_zero()) return 0.0;
  if (p.support()) return *p.support();

  std::function<Real(Real)> tail;
  if (p.family() == Family::Exponential) {
    const Real c = std::abs(p.strength()), ell = p.length();
    tail = [c, ell](Real X) { return c * ell * std::exp(-X / ell) * (1.0 + X + ell); };
  } else {
    tail = [&p](Real X) {
      QuadratureOptions o;
      o.abs_tol = 1e-18;
      o.rel_tol = 1e-8;
      return integrate_to_infinity([&](Real x) { return (1.0 + x) * std::abs(p(x)); }, X, o).value;
    };
  }
  Real lo = 0.0, hi = 1.0;
  if (tail(lo) < tol) return 0.0;
  while (tail(hi) >= tol) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw NonConvergenceError("truncation_radius: potential decays too slowly");
  }
  for (int it = 0; it < 60 && hi - lo > 1e-12 * hi; ++it) {
    const Real mid = 0.5 * (lo + hi);
    (tail(mid) < tol ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace halfline
