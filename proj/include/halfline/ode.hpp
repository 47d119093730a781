#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>

#include "halfline/types.hpp"

namespace halfline {

template <int N>
using OdeState = Eigen::Matrix<Complex, N, 1>;

struct OdeOptions {
  Real rel_tol = 1e-12;
  Real abs_tol = 1e-15;
  long max_steps = 5'000'000;
};

/// Embedded Dormand-Prince 5(4) integrator for complex systems of fixed size.
/// The step size survives between calls to `advance`, so stepping through a
/// dense list of output nodes costs little more than one long integration.
template <int N>
class DormandPrince {
 public:
  explicit DormandPrince(OdeOptions opts = {}) : opts_(opts) {}

  /// Integrates y from t0 to t1 (t1 may be smaller than t0).
  template <class Rhs>
  void advance(Rhs&& rhs, Real t0, Real t1, OdeState<N>& y) {
    const Real span = t1 - t0;
    if (span == 0.0) return;
    const Real dir = span > 0 ? 1.0 : -1.0;
    Real h = step_ > 0 ? step_ : std::min(std::abs(span), 1e-2);
    Real t = t0;
    OdeState<N> k1 = rhs(t, y);
    while (dir * (t1 - t) > 0.0) {
      if (++steps_ > opts_.max_steps) throw NonConvergenceError("ODE integrator exceeded step budget");
      bool last = false;
      if (h >= std::abs(t1 - t)) {
        h = std::abs(t1 - t);
        last = true;
      }
      const Real hs = dir * h;
      const OdeState<N> k2 = rhs(t + c2 * hs, y + hs * (a21 * k1));
      const OdeState<N> k3 = rhs(t + c3 * hs, y + hs * (a31 * k1 + a32 * k2));
      const OdeState<N> k4 = rhs(t + c4 * hs, y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
      const OdeState<N> k5 =
          rhs(t + c5 * hs, y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      const OdeState<N> k6 =
          rhs(t + hs, y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      const Real t_new = last ? t1 : t + hs;
      const OdeState<N> y_new =
          y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const OdeState<N> k7 = rhs(t_new, y_new);
      const OdeState<N> err =
          hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
      Real norm = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        const Real scale = opts_.abs_tol + opts_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        norm = std::max(norm, std::abs(err[i]) / scale);
      }
      if (!std::isfinite(norm)) throw NonConvergenceError("ODE integrator produced non-finite state");
      if (norm <= 1.0) {
        t = t_new;
        y = y_new;
        k1 = k7;
        ++accepted_;
        const Real grow = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
        if (!last) h *= grow;
        else step_ = std::max(step_ > 0 ? step_ : h, h * grow);
      } else {
        h *= std::clamp(0.9 * std::pow(norm, -0.2), 0.1, 0.9);
        if (h < 1e-14 * (1.0 + std::abs(t))) throw NonConvergenceError("ODE step size underflow");
      }
      if (!last) step_ = h;
    }
  }

  long steps() const { return steps_; }
  long accepted() const { return accepted_; }

 private:
  static constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr Real a21 = 1.0 / 5;
  static constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
  static constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b*, the embedded 4th-order difference
  static constexpr Real e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeOptions opts_;
  Real step_ = 0.0;
  long steps_ = 0;
  long accepted_ = 0;
};

}  // namespace halfline
