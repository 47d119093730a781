#pragma once

#include <string>
#include <vector>

#include "halfline/potential.hpp"
#include "halfline/solver.hpp"
#include "halfline/types.hpp"

namespace halfline {

enum class PointKind { Eigenvalue, SpectralSingularity, BelowAxis };
std::string to_string(PointKind k);

/// A zero of the Jost function.
struct SpectralPoint {
  Complex k;
  Complex lambda;  // k^2
  int multiplicity = 1;
  PointKind kind = PointKind::Eigenvalue;
  Real residual = 0.0;     // |e(k)| at the refined point
  bool ambiguous = false;  // |Im k| within a factor 2 of the classification threshold
};

/// Axis-parallel rectangle [x0, x1] x [y0, y1] in the k-plane.
struct SearchRegion {
  Real x0 = -1.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  /// Strip 0 <= Im k < exclusion_radius left out of the contour (decay rate 0).
  Real exclusion_radius = 0.0;
  Real width() const { return x1 - x0; }
  Real height() const { return y1 - y0; }
  bool contains(Complex k) const {
    return k.real() >= x0 && k.real() <= x1 && k.imag() >= y0 && k.imag() <= y1;
  }
};

struct SpectrumOptions {
  /// Residual |e(k)| required of refined zeros.
  Real tol = 1e-10;
  /// Classification threshold; negative means 1e-6 (1 + R).
  Real delta_sing = -1.0;
  int multiplicity_cap = 4;
  SolverOptions solver{1e-11, 1e-14, 1e-14, false, 1e-8};
};

/// R~(alpha) = ((1/ln 2) int (2x)^alpha |V|)^{1/(1-alpha)}.
Real enclosing_radius(const Potential& p, Real alpha);
/// min of R~ over `samples` uniform alphas in [0, 0.95].
Real min_enclosing_radius(const Potential& p, int samples = 16);
/// Alpha grid used by min_enclosing_radius.
std::vector<Real> alpha_grid(int samples = 16, Real hi = 0.95);

/// Rectangle enclosing the disc |k| <= R in the closed upper half-plane. For
/// a positive decay rate its bottom edge dips slightly below the real axis so
/// real zeros are interior; with decay rate 0 it stops at exclusion_radius.
SearchRegion auto_region(const Potential& p, Real R);
SearchRegion auto_region(const Potential& p);

struct ZeroCount {
  int count = 0;
  Complex winding;       // (1/2 pi i) closed integral of e'/e
  Complex moment;        // (1/2 pi i) closed integral of k e'/e
  Real error = 0.0;      // quadrature error bound on the winding
  Real min_abs_e = kInf; // smallest |e| met on the contour
  int evaluations = 0;
  SearchRegion region;   // contour actually used (after perturbation)
};

/// Argument-principle count of zeros inside `region`. The contour is
/// perturbed (up to four times) when a zero sits too close to it or the
/// quadrature error exceeds 0.25; after that a NonConvergenceError is thrown.
ZeroCount count_zeros(const JostEvaluator& jost, const SearchRegion& region,
                      const SpectrumOptions& opts = {});
ZeroCount count_zeros(const Potential& p, const SearchRegion& region,
                      const SpectrumOptions& opts = {});

struct SpectrumReport {
  SearchRegion region;
  Real radius = 0.0;      // min over alpha of R~(alpha)
  Real delta_sing = 0.0;
  int region_count = 0;   // winding number of the outer contour
  int count = 0;          // total multiplicity of eigenvalues and spectral singularities
  std::vector<SpectralPoint> points;      // zeros in the closed upper half-plane
  std::vector<SpectralPoint> below_axis;  // zeros inside the contour dip, Im k < -delta
  std::vector<std::string> notes;
  bool has_eigenvalues() const;
  bool has_singularities() const;
  bool empty() const { return points.empty(); }
};

/// Subdivides the region until each piece holds one zero (or a cluster of
/// at most multiplicity_cap zeros in a piece too small to split), refines by
/// Newton with the exact k-derivative, and classifies.
SpectrumReport locate_spectrum(const Potential& p, const SearchRegion& region,
                               const SpectrumOptions& opts = {});
SpectrumReport locate_spectrum(const Potential& p, const SpectrumOptions& opts = {});

/// Throws HypothesisError unless the Jost function has no zeros in the
/// closed upper half-plane.
void require_empty_spectrum(const Potential& p, const SpectrumOptions& opts = {});

}  // namespace halfline
