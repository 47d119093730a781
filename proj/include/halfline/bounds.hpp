#pragma once

#include <vector>

#include "halfline/potential.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/types.hpp"

namespace halfline {

/// Parameters and value of the eigenvalue/singularity counting bound, paired
/// with the count obtained by contour integration.
struct BoundCertificate {
  Real a = 0.0;
  Real alpha = 0.0;
  Real beta = 0.0;
  Real A = 0.0;
  Real R_used = 0.0;   // min over the alpha grid of R~(alpha), an upper bound for R
  Real A_min = 0.0;    // max{R~(alpha), R^2/a - a/4} at the chosen alpha
  Real bound_value = 0.0;
  int computed_count = 0;
  bool satisfied = false;
  int grid_points = 0;      // parameter triples evaluated on the grid
  Real grid_minimum = kInf; // best grid value before polishing A
};

/// Smallest admissible A is strictly above this value.
Real admissible_A_threshold(const Potential& p, Real a, Real alpha);

/// N(V) <= [ln((A + a/2) / sqrt(A^2 + R^2))]^{-1}
///         { a^{beta-1} int x^beta (1 + e^{ax}) |V| - ln(2 - 2^{(R~(alpha)/A)^{1-alpha}}) }
/// with R = min_enclosing_radius(p). Throws AdmissibilityError unless
/// A > max{R~(alpha), R^2/a - a/4}.
Real theorem1_bound(const Potential& p, Real a, Real alpha, Real beta, Real A);

struct BoundGrid {
  int A_points = 32;
  Real A_span = 1e3;  // A ranges over [1.001 A_min, A_span A_min]
  int alpha_points = 16;
  int beta_points = 16;
  Real alpha_max = 0.95;
};

/// Minimizes theorem1_bound over the grid, polishes A by golden section and
/// fills computed_count from locate_spectrum.
BoundCertificate optimize_bound(const Potential& p, Real a, const BoundGrid& grid = {},
                                const SpectrumOptions& spectrum = {});

/// Same as optimize_bound but reuses an existing count.
BoundCertificate optimize_bound(const Potential& p, Real a, int computed_count,
                                const BoundGrid& grid = {});

struct Corollary2Result {
  Real b = 0.0;       // (1/ln 2) int |V|
  Real bound_value = 0.0;
  bool short_circuit = false;  // V = 0: no zeros, formula not evaluated
  int computed_count = 0;
  bool satisfied = false;
};

/// 10 {1 + (2/b) int e^{bx} |V|}; throws InapplicableError when the decay
/// rate is below b. V = 0 short-circuits to a certified count of 0.
Real corollary2_bound(const Potential& p);
Corollary2Result corollary2_certificate(const Potential& p, int computed_count);

}  // namespace halfline
