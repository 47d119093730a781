#pragma once

#include <functional>
#include <string>
#include <vector>

#include "halfline/potential.hpp"
#include "halfline/quadrature.hpp"
#include "halfline/solver.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/states.hpp"
#include "halfline/types.hpp"

namespace halfline {

/// Multiplication operator by a(x), with bracket norm <a> = (int x |a|^2)^{1/2}.
struct WeightedFactor {
  std::string name;
  std::function<Complex(Real)> value;
  std::vector<Real> breakpoints;  // where a may jump
  Real extent = 0.0;              // a vanishes (or is negligible) beyond

  Complex operator()(Real x) const { return x > extent ? Complex(0.0) : value(x); }
  Real bracket_norm() const;
  /// int |a|^2 over [lo, hi].
  Real square_integral(Real lo, Real hi) const;
  bool is_zero() const { return extent == 0.0; }

  static WeightedFactor zero();
  static WeightedFactor indicator(Real lo, Real hi, Real height = 1.0);
  /// A = V / |V|^{1/2}: |A| = |V|^{1/2} and A B = V with B below.
  static WeightedFactor sqrt_potential(const Potential& p, Real tol = 1e-14);
  /// B = |V|^{1/2}.
  static WeightedFactor sqrt_abs_potential(const Potential& p, Real tol = 1e-14);
};

/// R_V(x, xi, k^2) = s(min{x, xi}, k) e(max{x, xi}, k) / e(k), Im k > 0.
/// Throws PoleError when |e(k)| < pole_threshold.
Complex resolvent_kernel(const Potential& p, Complex k, Real x, Real xi,
                         const SolverOptions& opts = {}, Real pole_threshold = 1e-12);

/// Jost and regular solutions sampled on a panel grid, ready to apply the
/// resolvent R_V(k^2) to functions given at the grid nodes (and zero beyond).
class GridResolvent {
 public:
  GridResolvent(const JostEvaluator& jost, Complex k, const PanelGrid& grid);

  Complex k() const { return k_; }
  Complex jost() const { return jost_value_; }
  const VectorXc& e() const { return e_; }
  const VectorXc& s() const { return s_; }
  const PanelGrid& grid() const { return *grid_; }

  /// e(k) R_V(k^2) f: no division, finite through zeros of e(k).
  VectorXc apply_scaled(const VectorXc& f) const;
  /// R_V(k^2) f; PoleError when |e(k)| < pole_threshold.
  VectorXc apply(const VectorXc& f, Real pole_threshold = 1e-12) const;

 private:
  Complex k_;
  Complex jost_value_;
  const PanelGrid* grid_;
  VectorXc e_, s_;
};

/// k with Im k >= 0 and k^2 = lambda.
Complex physical_k(Complex lambda);

enum class BoundaryMethod {
  Richardson,  // 2 R(tau + i eps) - R(tau + 2 i eps), eps = 1e-6 (1 + |tau|)
  Direct,      // the continued Jost function on the real k axis
};

/// R_V(tau + sign i0) f on the grid.
VectorXc boundary_resolvent(const JostEvaluator& jost, Real tau, int sign, const PanelGrid& grid,
                            const VectorXc& f, BoundaryMethod method = BoundaryMethod::Direct);

/// Panel grid for resolvent work on [0, hi]: breakpoints of the potential and
/// of the extra list, panel width at most min(0.25, 2 / k_max).
PanelGrid resolvent_grid(const Potential& p, Real hi, Real k_max,
                         const std::vector<Real>& extra_breaks = {}, int order = 16);

/// Hilbert-Schmidt norm of the operator with kernel
/// e(k) a(x) R_V(x, xi, k^2) b(xi) = a(x) s(min) e(max) b(xi).
Real scaled_hilbert_schmidt(const Potential& p, Complex k, const WeightedFactor& a,
                            const WeightedFactor& b, const SolverOptions& opts = {});

struct Lemma3Entry {
  Complex k;
  Complex jost;
  Real hs_scaled = 0.0;  // HS norm of e(k) a R_V b
  Real hs = 0.0;         // HS norm of a R_V b (inf at a zero of e)
  bool holds = true;
};

struct Lemma3Report {
  std::string surrogate = "hilbert_schmidt";
  Real C = 1.0;  // exp(int x |V|)
  Real a_bracket = 0.0;
  Real b_bracket = 0.0;
  Real bound = 0.0;  // C <a> <b>
  std::vector<Lemma3Entry> entries;
  bool all_hold = true;
};

/// Compares the HS norm of e(k) a R_V(k^2) b with C <a> <b> on k_grid.
Lemma3Report lemma3_check(const Potential& p, const WeightedFactor& a, const WeightedFactor& b,
                          const std::vector<Complex>& k_grid, const SolverOptions& opts = {});

/// max over nodes of |A R_V phi - (I - A R_V B) A R_0 phi| / max |A R_V phi|
/// with A = sqrt_potential, B = sqrt_abs_potential, at a non-real k.
Real resolvent_identity_residual(const Potential& p, Complex k, const WavePacket& phi,
                                 const SolverOptions& opts = {});

enum class Route { Stationary, TimeDomain };
std::string to_string(Route r);

struct SmoothnessOptions {
  // stationary route
  Real rel_tol = 1e-6;
  BoundaryMethod boundary = BoundaryMethod::Direct;
  int panel_order = 16;
  Real k_max = 0.0;  // 0: from the state's momentum content
  SolverOptions solver;
  // time route
  int grid_nodes = 3000;
  Real box = 0.0;    // 0: automatic
  Real dt = 0.005;
  Real t_max = 0.0;  // 0: automatic
  // both
  bool check_hypothesis = true;
  SpectrumOptions spectrum;
};

/// Both routes return the time-domain normalization
///   int_0^inf ||a e^{-isL_V} phi||^2 ds = (1/2 pi) int ||a R_V(tau + i0) phi||^2 dtau.
struct SmoothnessResult {
  Route route = Route::Stationary;
  Real value = 0.0;           // includes the tail estimate
  Real tail_estimate = 0.0;
  Real truncation = 0.0;      // k_max (stationary) or t_max (time)
  int evaluations = 0;
};

/// Throws HypothesisError when the spectrum is nonempty and NonConvergenceError
/// when the tail estimate exceeds 20% of the value.
SmoothnessResult smoothness_integral(const Potential& p, const WeightedFactor& a,
                                     const WavePacket& phi, Route route,
                                     const SmoothnessOptions& opts = {});

/// |a - b| / max(|a|, |b|) for two route values (0 when both vanish).
Real route_discrepancy(const SmoothnessResult& a, const SmoothnessResult& b);

}  // namespace halfline
