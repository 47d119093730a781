#include "halfline/states.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace halfline {

WavePacket::WavePacket(Real center, Real width, Real momentum)
    : center_(center), width_(width), momentum_(momentum) {
  if (!(width > 0.0)) throw DomainError("WavePacket: width must be positive");
  if (!(center > 0.0)) throw DomainError("WavePacket: center must be positive");
  // |g(x - x0) - g(-x - x0)|^2 integrated over the half-line
  const Real norm2 = width * std::sqrt(2.0 * kPi) *
                     (1.0 - std::exp(-center * center / (2.0 * width * width) -
                                     2.0 * momentum * momentum * width * width));
  scale_ = 1.0 / std::sqrt(norm2);
}

Complex WavePacket::g(Real y) const {
  return std::exp(Complex(-y * y / (4.0 * width_ * width_), momentum_ * y));
}

Complex WavePacket::g2(Real y) const {
  const Real s2 = width_ * width_;
  const Complex d = Complex(-y / (2.0 * s2), momentum_);  // g'/g
  return -(d * d - 1.0 / (2.0 * s2)) * g(y);
}

Complex WavePacket::operator()(Real x) const { return scale_ * (g(x - center_) - g(-x - center_)); }

Complex WavePacket::minus_second_derivative(Real x) const {
  return scale_ * (g2(x - center_) - g2(-x - center_));
}

Real WavePacket::lower() const { return std::max(0.0, center_ - 10.0 * width_); }

VectorXc WavePacket::sample(const VectorXr& x) const {
  VectorXc out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = (*this)(x[i]);
  return out;
}

VectorXc WavePacket::sample_laplacian(const VectorXr& x) const {
  VectorXc out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = minus_second_derivative(x[i]);
  return out;
}

std::vector<WavePacket> packet_dictionary(int n, std::uint64_t seed) {
  std::vector<WavePacket> out;
  if (n <= 0) return out;
  out.emplace_back(8.0, 1.4, -2.5);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Real> c(7.0, 10.0), w(1.2, 1.6), p(-3.0, -1.8);
  while (static_cast<int>(out.size()) < n) {
    const Real cc = c(rng), ww = w(rng), pp = p(rng);
    out.emplace_back(cc, ww, pp);
  }
  return out;
}

}  // namespace halfline
