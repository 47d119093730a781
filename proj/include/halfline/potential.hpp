#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "halfline/expression.hpp"
#include "halfline/quadrature.hpp"
#include "halfline/types.hpp"

namespace halfline {

enum class Family { Well, Exponential, Gaussian, Sampled, Expression };

std::string to_string(Family f);

/// Complex potential V(x) on the half-line x >= 0.
///
/// Every family is bounded. Compactly supported families return exactly zero
/// beyond their support. `decay_rate()` is the supremum of the exponential
/// weights a for which the integral of e^{ax}|V| converges (infinite for
/// compact support and for Gaussians).
class Potential {
 public:
  /// Piecewise-constant: levels[j] on (edges[j-1], edges[j]] with edges[-1] = 0.
  static Potential piecewise(std::vector<Real> edges, std::vector<Complex> levels);
  /// Constant `value` on [0, width].
  static Potential well(Complex value, Real width);
  static Potential zero() { return well(0.0, 1.0); }
  /// c * exp(-x / ell).
  static Potential exponential(Complex c, Real ell = 1.0);
  /// c * exp(-((x - center) / width)^2).
  static Potential gaussian(Complex c, Real center, Real width);
  /// Linear interpolation of samples starting at x = 0, zero past the last one.
  static Potential sampled(std::vector<Real> x, std::vector<Complex> values);
  static Potential expression(const std::string& source, Real decay_rate,
                              std::optional<Real> support = std::nullopt);

  /// V(x); throws DomainError for x < 0.
  Complex operator()(Real x) const;

  Family family() const { return family_; }
  Real decay_rate() const { return decay_rate_; }
  std::optional<Real> support() const { return support_; }
  bool compact() const { return support_.has_value(); }
  bool is_zero() const { return is_zero_; }
  /// Points where V or V' may jump, ascending, including the support end.
  const std::vector<Real>& breakpoints() const { return breakpoints_; }
  /// Upper bound on sup |V| (exact for all closed-form families).
  Real sup_norm() const { return sup_norm_; }
  /// Pointwise complex conjugate.
  Potential conjugate() const;

  // Parameters, for serialization.
  const std::vector<Real>& edges() const { return edges_; }
  const std::vector<Complex>& levels() const { return levels_; }
  Complex strength() const { return strength_; }
  Real length() const { return length_; }
  Real center() const { return center_; }
  const std::string& source() const { return source_; }
  bool conjugated() const { return conjugated_; }

 private:
  Complex raw(Real x) const;
  void finalize();

  Family family_ = Family::Well;
  Real decay_rate_ = kInf;
  std::optional<Real> support_;
  std::vector<Real> breakpoints_;
  bool is_zero_ = false;
  bool conjugated_ = false;
  Real sup_norm_ = 0.0;

  std::vector<Real> edges_;      // well edges or sample abscissae
  std::vector<Complex> levels_;  // well levels or sample values
  Complex strength_{};
  Real length_ = 1.0;
  Real center_ = 0.0;
  std::string source_;
  std::shared_ptr<const Expression> expr_;
};

/// Weight x^alpha * e^{exp_weight * x} applied to |V| over [lower, inf).
struct MomentSpec {
  Real alpha = 0.0;
  Real exp_weight = 0.0;
  Real lower = 0.0;
};

/// int_{lower}^{inf} x^alpha e^{a x} |V(x)| dx.
/// Throws DivergenceError when the exponential weight reaches the decay rate
/// and the tail fails a convergence test.
Real weighted_moment(const Potential& p, const MomentSpec& spec,
                     const QuadratureOptions& opts = {});

/// Same integrand restricted to [lo, hi].
Real weighted_moment_between(const Potential& p, const MomentSpec& spec, Real lo, Real hi,
                             const QuadratureOptions& opts = {});

/// int_lower^inf w(x) |V(x)| dx for a nonnegative weight, split at the
/// potential's breakpoints. `divergent_hint` marks weights growing at least
/// like e^{decay_rate x}; those get the tail convergence test.
Real integrate_abs_potential(const Potential& p, const std::function<Real(Real)>& weight,
                             Real lower, const QuadratureOptions& opts = {},
                             bool divergent_hint = false);

/// Smallest X (to bisection accuracy) with int_X^inf (1 + x)|V| dx < tol.
/// Compact families return the support end, V = 0 returns 0.
Real truncation_radius(const Potential& p, Real tol);

/// int_0^inf x |V| dx, the first moment.
inline Real first_moment(const Potential& p) { return weighted_moment(p, {1.0, 0.0, 0.0}); }

}  // namespace halfline
