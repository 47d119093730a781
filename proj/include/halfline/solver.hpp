#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfline/ode.hpp"
#include "halfline/potential.hpp"
#include "halfline/types.hpp"

namespace halfline {

enum class SolutionKind { Jost, Regular };

/// Values and x-derivatives of one solution of -y'' + V y = k^2 y.
struct SolutionRecord {
  Complex k;
  VectorXr x;
  VectorXc values;
  VectorXc derivatives;
  SolutionKind kind = SolutionKind::Jost;
};

struct SolverOptions {
  Real rel_tol = 1e-12;
  Real abs_tol = 1e-15;
  /// Tail tolerance handed to truncation_radius for non-compact potentials.
  Real truncation_tol = 1e-14;
  /// Compare the ODE Jost solution against the Volterra series.
  bool volterra_check = false;
  Real volterra_rel_tol = 1e-8;
};

/// e(k) = e(0, k) together with de/dk.
struct JostValue {
  Complex value;
  Complex derivative;
};

/// Evaluates Jost quantities for one potential, caching the truncation radius.
///
/// The Jost solution is written e(x,k) = e^{ikx} f(x,k); f solves
/// f'' + 2ik f' = V f with f -> 1, f' -> 0 at infinity and is integrated
/// backwards from the truncation radius. Along the way the k-derivative of f
/// is carried by the variational equations, so de/dk costs one extra pair of
/// components instead of a second solve.
class JostEvaluator {
 public:
  explicit JostEvaluator(Potential p, SolverOptions opts = {});

  const Potential& potential() const { return p_; }
  const SolverOptions& options() const { return opts_; }

  /// Throws RegionError outside the half-plane Im k > -a/2 (Im k >= 0 when
  /// the decay rate is zero).
  void check_region(Complex k) const;
  /// Start of the backward integration for this k.
  Real start_point(Complex k) const;

  Complex jost_function(Complex k) const;
  JostValue jost_function_with_derivative(Complex k) const;
  SolutionRecord solution(Complex k, const VectorXr& x_grid) const;

 private:
  Potential p_;
  SolverOptions opts_;
  Real radius_ = 0.0;
};

/// Jost solution on an ascending grid of nonnegative nodes.
SolutionRecord jost_solution(const Potential& p, Complex k, const VectorXr& x_grid,
                             const SolverOptions& opts = {});

/// Regular solution s(0) = 0, s'(0) = 1 by forward integration.
SolutionRecord regular_solution(const Potential& p, Complex k, const VectorXr& x_grid,
                                const SolverOptions& opts = {});

struct VolterraResult {
  SolutionRecord record;
  int terms = 0;
  Real majorant = 0.0;  // Lemma-type bound on the first omitted term
};

/// Jost solution as e^{ikx} sum_n eps_n(x), the iterated Volterra series
/// eps_{n+1}(x) = int_x^inf (e^{2ik(t-x)} - 1)/(2ik) V(t) eps_n(t) dt,
/// truncated once the factorial majorant of the next term drops below
/// `majorant_tol`. Discretized with composite Gauss panels and exact partial
/// integrals, so it shares nothing with the ODE path.
VolterraResult jost_volterra(const Potential& p, Complex k, const VectorXr& x_grid,
                             Real majorant_tol = 1e-14, Real truncation_tol = 1e-14);

/// W(x) = e s' - e' s at every node; W is constant and equals e(k).
VectorXc wronskian(const SolutionRecord& jost, const SolutionRecord& regular);

/// max_i |-y'' + (V - k^2) y| at interior nodes, y'' from a three-point
/// difference of the stored derivatives. Nodes whose stencil straddles a
/// breakpoint of V are skipped.
Real ode_residual(const SolutionRecord& rec, const Potential& p);

/// Geometric refinement near 0 followed by uniform nodes up to x_max.
VectorXr default_grid(Real x_max, int n);

/// (e^z - 1) / z with the series for small |z|.
Complex expm1_over(Complex z);

/// Exponent of the Jost-solution majorant at x:
/// (2|k|)^{alpha-1} int_x^inf t^alpha max{1, e^{-2 Im k t}}^alpha
///                 (1 + e^{-2 Im k t})^{1-alpha} |V(t)| dt.
Real jost_majorant_exponent(const Potential& p, Complex k, Real alpha, Real x);

struct EstimateCheck {
  std::string name;
  bool applicable = true;
  std::string note;
  VectorXr lhs;
  VectorXr rhs;
  bool holds = true;
  Real worst_ratio = 0.0;  // max lhs / rhs over nodes with rhs > 0
};

struct EstimateReport {
  Complex k;
  Real alpha = 0.0;
  VectorXr x;
  EstimateCheck jost_deviation;   // |e e^{-ikx} - 1| <= exp(majorant) - 1
  EstimateCheck jost_bound;       // |e(x,k)| <= exp(int_x^inf t|V|) e^{-Im k x}
  EstimateCheck regular_bound;    // |s(x,k)| <= x exp(int_0^x t|V|) e^{Im k x}
  EstimateCheck jost_function;    // |e(k) - 1| <= exp(...) - 1, x = 0 only
  bool all_hold() const {
    return jost_deviation.holds && jost_bound.holds && regular_bound.holds && jost_function.holds;
  }
};

/// Measures both sides of the solution estimates on x_grid. Inequalities that
/// fail are reported, not thrown.
EstimateReport verify_estimates(const Potential& p, Complex k, Real alpha, const VectorXr& x_grid,
                                const SolverOptions& opts = {});

}  // namespace halfline
