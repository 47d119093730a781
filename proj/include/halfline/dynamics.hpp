#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "halfline/potential.hpp"
#include "halfline/resolvent.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/states.hpp"
#include "halfline/tridiagonal.hpp"
#include "halfline/types.hpp"

namespace halfline {

enum class DiagonalRule {
  /// V(x_j) at every node, except cells [x_j - h/2, x_j + h/2] containing a
  /// jump of V, which get the cell average (second order at the jump).
  JumpAveraged,
  /// V(x_j) at every node.
  Sampled,
};

/// Finite-difference L_V = -d^2/dx^2 + V on the interior nodes x_j = j h,
/// j = 1..n, h = box / (n + 1), Dirichlet at 0 and at box.
class GridOperator {
 public:
  /// Throws DomainError when box < truncation_radius(p, tol) or n < 64.
  static GridOperator discretize(const Potential& p, Real box, int n,
                                 DiagonalRule rule = DiagonalRule::JumpAveraged, Real tol = 1e-10);

  int size() const { return static_cast<int>(x_.size()); }
  Real h() const { return h_; }
  Real box() const { return box_; }
  const VectorXr& x() const { return x_; }
  const Potential& potential() const { return p_; }
  /// V contribution of the diagonal.
  const VectorXc& potential_diagonal() const { return v_; }
  VectorXc diagonal() const { return v_.array() + 2.0 / (h_ * h_); }
  Real off_diagonal() const { return -1.0 / (h_ * h_); }
  Real potential_sup() const { return v_.cwiseAbs().maxCoeff(); }

  VectorXc apply(const VectorXc& u) const;
  MatrixXc dense() const;
  /// Ascending eigenvalues; DomainError unless V is real on the grid.
  VectorXr symmetric_eigenvalues() const;
  /// Same grid with V = 0.
  GridOperator free_operator() const;

  /// Discrete L^2 norm sqrt(h sum |u_j|^2).
  Real norm(const VectorXc& u) const { return std::sqrt(h_) * u.norm(); }
  Complex inner(const VectorXc& u, const VectorXc& v) const { return h_ * v.dot(u); }

 private:
  Potential p_ = Potential::zero();
  Real box_ = 0.0, h_ = 0.0;
  VectorXr x_;
  VectorXc v_;
};

struct EvolutionState {
  VectorXc coefficients;
  Real time = 0.0;
  std::vector<std::pair<Real, Real>> norm_history;  // (t, ||phi(t)||)
};

/// Crank-Nicolson steps for dphi/dt = i L phi, so phi(t) = e^{itL} phi(0);
/// dt may be negative. Requires |dt| sup|V| < 0.5. The norm is recorded
/// every `record_every` steps (0: only at the end).
EvolutionState propagate(const GridOperator& op, EvolutionState state, Real dt, int n_steps,
                         int record_every = 0);

/// Reusable Crank-Nicolson stepper for a fixed (operator, dt).
class Propagator {
 public:
  Propagator(const GridOperator& op, Real dt);
  void step(VectorXc& u) const;
  /// e^{i t L} u with |t| = steps |dt|, t of the sign of dt.
  void advance(VectorXc& u, int steps) const;
  Real dt() const { return dt_; }

 private:
  const GridOperator* op_;
  Real dt_;
  TridiagonalLU<Complex> lu_;
  Complex diag_scale_, off_;
};

enum class Direction { Plus, Minus };
/// Omega: e^{itL_V} e^{-itL_0}; Reverse: e^{itL_0} e^{-itL_V} (the W~ family).
enum class WaveKind { Omega, Reverse };
std::string to_string(Direction d);
std::string to_string(WaveKind k);

struct WaveOptions {
  Real box = 0.0;      // 0: automatic from the dictionary packets
  int nodes = 3000;
  Real dt = 0.005;
  Real T = 0.0;        // first ladder time; 0: automatic
  int ladder = 3;      // T, 2T, 4T, ...
  Real tol = 1e-3;     // Cauchy criterion on the last rung
  Real wall_fraction = 0.1;
  Real wall_threshold = 1e-6;  // allowed probability mass near the far wall
  bool check_hypothesis = true;
  SpectrumOptions spectrum;
};

struct LadderRung {
  Real t = 0.0;
  Real difference = 0.0;  // ||U(t) phi - U(t/2) phi||, 0 on the first rung
  Real wall_mass = 0.0;   // largest mass seen within wall_fraction of the box end
};

struct WaveOperatorResult {
  Direction direction = Direction::Plus;
  WaveKind kind = WaveKind::Omega;
  VectorXc limit;                 // U(t_last) phi on the grid
  std::vector<LadderRung> trace;
  bool converged = false;
  bool monotone = true;           // differences decrease along the ladder
};

/// Time for the slowest dictionary packet to reach the origin and clear the
/// potential region on its way out under the free flow.
Real interaction_time(const Potential& p, const std::vector<WavePacket>& packets);
/// Box length keeping every packet, freely evolved for t_final, 10% away from
/// the far wall; at least max(30, 4 truncation_radius).
Real auto_box(const Potential& p, const std::vector<WavePacket>& packets, Real t_final);

/// Box, time ladder and grid operators shared by wave-operator, similarity
/// and time-domain smoothness computations for one potential.
class ScatteringSetup {
 public:
  ScatteringSetup(const Potential& p, const std::vector<WavePacket>& packets,
                  const WaveOptions& opts = {});

  const GridOperator& perturbed() const { return lv_; }
  const GridOperator& unperturbed() const { return l0_; }
  const WaveOptions& options() const { return opts_; }
  Real T() const { return T_; }
  std::vector<Real> ladder() const;

  /// e^{itL} u for L = L_V (perturbed = true) or L_0.
  VectorXc evolve(const VectorXc& u, Real t, bool perturbed) const;
  /// U(t) u for the given family; t of the sign of the direction.
  VectorXc wave_map(const VectorXc& u, Real t, WaveKind kind) const;
  Real wall_mass(const VectorXc& u) const;

  WaveOperatorResult limit(const VectorXc& phi, Direction d, WaveKind kind) const;

 private:
  WaveOptions opts_;
  GridOperator lv_, l0_;
  Real T_ = 0.0;
  Real step_ = 0.0;  // T / ceil(T / dt): every ladder time is a whole number of steps
  int steps_for(Real t) const;
};

/// Throws HypothesisError when the spectrum is nonempty (unless disabled).
WaveOperatorResult wave_operator_limit(const Potential& p, const WavePacket& phi, Direction d,
                                       WaveKind kind = WaveKind::Omega,
                                       const WaveOptions& opts = {});

/// (W phi, psi) from the stationary bilinear form
///   (phi, psi) -/+ (1/2 pi i) int (A R_0(tau +/- i0) phi, B R_V(tau -/+ i0)^* psi) dtau
/// with A B = V, for the Omega family; the Reverse family swaps the
/// roles of R_0 and R_V. Evaluated over the whole tau axis.
struct StationaryFormOptions {
  Real rel_tol = 1e-7;
  int panel_order = 16;
  BoundaryMethod boundary = BoundaryMethod::Direct;
  SolverOptions solver;
  bool check_hypothesis = true;
  SpectrumOptions spectrum;
};
struct StationaryForm {
  Complex value;       // (W phi, psi)
  Complex overlap;     // (phi, psi)
  Complex correction;  // value - overlap
  Real error = 0.0;
  int evaluations = 0;
};
StationaryForm stationary_wave_form(const Potential& p, const WavePacket& phi, const WavePacket& psi,
                                    Direction d, WaveKind kind = WaveKind::Omega,
                                    const StationaryFormOptions& opts = {});

struct SimilarityResult {
  std::vector<Real> residuals;  // per state ||L_V(W phi) - W(L_0 phi)|| / ||L_0 phi||
  Real max_residual = 0.0;
};
/// Uses the exact -phi'' of each packet for L_0 phi, so the residual measures
/// the stencil error and the distance of U(t_last) from its limit.
SimilarityResult similarity_residual(const ScatteringSetup& setup,
                                     const std::vector<WavePacket>& basis, Direction d);

/// int_0^T ||a e^{-isL} phi||^2 ds on the grid, trapezoid in s. cell_weights
/// are the integrals of |a|^2 over the node cells. The tail beyond T is
/// estimated as f(T) T / 2.
struct TimeIntegral {
  Real value = 0.0;
  Real tail = 0.0;
  Real t_max = 0.0;
};
TimeIntegral time_domain_weighted_norm(const GridOperator& op, const VectorXr& cell_weights,
                                       const VectorXc& phi, Real dt, Real t_max);

}  // namespace halfline
