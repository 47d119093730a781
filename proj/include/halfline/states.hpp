#pragma once

#include <cstdint>
#include <vector>

#include "halfline/types.hpp"

namespace halfline {

/// Normalized Gaussian wave packet on the half-line, made odd about x = 0 so
/// it satisfies the Dirichlet condition exactly:
///   phi(x) = N [g(x - x0) - g(-x - x0)],  g(y) = exp(-y^2 / (4 s^2) + i p y).
/// s is the position spread, p the mean momentum (p < 0 moves toward 0 under
/// e^{-itL}).
class WavePacket {
 public:
  WavePacket(Real center, Real width, Real momentum);

  Complex operator()(Real x) const;
  /// -phi''(x), in closed form.
  Complex minus_second_derivative(Real x) const;

  Real center() const { return center_; }
  Real width() const { return width_; }
  Real momentum() const { return momentum_; }
  /// phi is below 1e-11 of its peak outside [lower(), upper()].
  Real lower() const;
  Real upper() const { return center_ + 10.0 * width_; }
  /// Momentum beyond which the transform is negligible.
  Real max_momentum() const { return std::abs(momentum_) + 5.0 / width_; }

  VectorXc sample(const VectorXr& x) const;
  VectorXc sample_laplacian(const VectorXr& x) const;

 private:
  Complex g(Real y) const;
  Complex g2(Real y) const;  // -g''
  Real center_, width_, momentum_, scale_;
};

/// Incoming packets with centers in [7, 10], widths in [1.2, 1.6] and
/// momenta in [-3, -1.8]. The first state is fixed; the rest come from a
/// seeded generator.
std::vector<WavePacket> packet_dictionary(int n, std::uint64_t seed = 7);

}  // namespace halfline
