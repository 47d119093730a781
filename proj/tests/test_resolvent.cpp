#include "doctest.h"

#include <cmath>

#include "halfline/resolvent.hpp"

using namespace halfline;

namespace {

constexpr Real kGamma4 = 0.638045048285237717;  // bound state of the depth-4 well

}  // namespace

TEST_CASE("resolvent kernel closed forms") {
  const Complex free = resolvent_kernel(Potential::zero(), kI, 1.0, 2.0);
  CHECK(std::abs(free - 0.159046186401789) < 1e-12);
  const auto deep = Potential::well(-4.0, 1.0);
  CHECK(std::abs(resolvent_kernel(deep, 2.0 * kI, 0.3, 0.7) - 0.16) < 1e-10);
  CHECK(std::abs(resolvent_kernel(deep, 2.0 * kI, 0.7, 0.3) - 0.16) < 1e-10);
  CHECK_THROWS_AS(resolvent_kernel(deep, Complex(0.0, kGamma4), 0.3, 0.7), PoleError);
  CHECK_THROWS_AS(resolvent_kernel(deep, 1.0, 0.3, 0.7), RegionError);
}

TEST_CASE("physical branch of the square root") {
  CHECK(std::abs(physical_k(Complex(4.0, 1e-300)) - 2.0) < 1e-15);
  CHECK(std::abs(physical_k(Complex(4.0, -1e-300)) + 2.0) < 1e-15);
  CHECK(std::abs(physical_k(-9.0) - 3.0 * kI) < 1e-15);
  CHECK(physical_k(Complex(1.0, -2.0)).imag() > 0.0);
}

TEST_CASE("grid resolvent against the free kernel by quadrature") {
  const WavePacket phi(3.0, 0.8, -1.5);
  const Complex k(1.2, 0.4);
  const PanelGrid grid = resolvent_grid(Potential::zero(), phi.upper(), phi.max_momentum());
  const GridResolvent r(JostEvaluator(Potential::zero()), k, grid);
  const VectorXc u = r.apply(phi.sample(grid.nodes()));
  QuadratureOptions q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  for (int i : {5, grid.size() / 3, grid.size() - 7}) {
    const Real x = grid.nodes()[i];
    auto kernel = [&](Real xi) {
      const Real lo = std::min(x, xi), hi = std::max(x, xi);
      return std::sin(k * lo) / k * std::exp(kI * k * hi) * phi(xi);
    };
    const Complex expected = integrate(kernel, 0.0, x, q).value + integrate(kernel, x, phi.upper(), q).value;
    CHECK(std::abs(u[i] - expected) < 1e-10 * (1.0 + std::abs(expected)));
  }
}

TEST_CASE("boundary values by continuation and by extrapolation agree") {
  const auto p = Potential::well(-0.5, 1.0);
  const JostEvaluator jost(p);
  const WavePacket phi(4.0, 1.0, -2.0);
  const PanelGrid grid = resolvent_grid(p, phi.upper(), 6.0);
  const VectorXc f = phi.sample(grid.nodes());
  for (int sign : {1, -1}) {
    const VectorXc a = boundary_resolvent(jost, 3.0, sign, grid, f, BoundaryMethod::Direct);
    const VectorXc b = boundary_resolvent(jost, 3.0, sign, grid, f, BoundaryMethod::Richardson);
    CHECK((a - b).norm() < 1e-6 * a.norm());
  }
  const VectorXc plus = boundary_resolvent(jost, 3.0, 1, grid, f);
  const VectorXc minus = boundary_resolvent(jost, 3.0, -1, grid, f);
  CHECK((plus - minus).norm() > 1e-2 * plus.norm());
}

TEST_CASE("scaled Hilbert-Schmidt norms of the shallow well") {
  const auto p = Potential::well(-1.0, 1.0);
  const auto a = WeightedFactor::indicator(0.0, 1.0);
  CHECK(a.bracket_norm() == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(scaled_hilbert_schmidt(p, Complex(0.0, 1.5), a, a) ==
        doctest::Approx(0.135716751832853075).epsilon(1e-9));
  CHECK(scaled_hilbert_schmidt(p, Complex(0.5, 0.5), a, a) ==
        doctest::Approx(0.249746733604297231).epsilon(1e-9));
  CHECK(scaled_hilbert_schmidt(p, Complex(2.0, 0.1), a, a) ==
        doctest::Approx(0.266015957202062451).epsilon(1e-9));
  const auto rep = lemma3_check(p, a, a, {Complex(0.0, 1.5), Complex(0.5, 0.5), Complex(2.0, 0.1), 3.0});
  CHECK(rep.bound == doctest::Approx(0.8243606353500641).epsilon(1e-12));
  CHECK(rep.all_hold);
  CHECK(scaled_hilbert_schmidt(p, kI, WeightedFactor::zero(), a) == 0.0);
}

TEST_CASE("scaled kernel stays bounded through the eigenvalue") {
  const auto deep = Potential::well(-4.0, 1.0);
  const auto A = WeightedFactor::sqrt_potential(deep);
  const auto B = WeightedFactor::sqrt_abs_potential(deep);
  const Complex k0(0.0, kGamma4);
  const Real far = scaled_hilbert_schmidt(deep, k0 + Complex(0.0, 0.1), A, B);
  const Real near = scaled_hilbert_schmidt(deep, k0 + Complex(0.0, 1e-6), A, B);
  const Real at = scaled_hilbert_schmidt(deep, k0, A, B);
  CHECK(near / far < 3.0);
  CHECK(far / near < 3.0);
  CHECK(std::abs(near - at) < 1e-4 * at);
  const auto rep = lemma3_check(deep, A, B, {k0, k0 + kI * 0.1, Complex(1.0, 0.2)});
  CHECK(rep.all_hold);
  CHECK(rep.entries[0].hs > 1e6 * rep.entries[1].hs);
}

TEST_CASE("pointwise kernel bound C min(x, xi)") {
  const auto p = Potential::well(Complex(-2.0, -2.0), 1.0);
  const Real C = std::exp(first_moment(p));
  const JostEvaluator jost(p);
  for (Complex k : {Complex(0.0, 1.0), Complex(1.0, 0.5), Complex(2.0, 0.0), Complex(0.3, 0.0)}) {
    const Complex e = jost.jost_function(k);
    if (k.imag() > 0.0)
      for (Real x : {0.1, 0.5, 0.9, 1.5, 3.0})
        for (Real xi : {0.05, 0.7, 1.2, 4.0}) {
          const Real lhs = std::abs(resolvent_kernel(p, k, x, xi) * e);
          CHECK(lhs <= C * std::min(x, xi) * (1 + 1e-9));
        }
    // |s(min) e(max)| <= C min on the grid, real k included
    const PanelGrid grid = resolvent_grid(p, 4.0, std::abs(k) + 1.0);
    const GridResolvent r(jost, k, grid);
    for (int i = 0; i < grid.size(); i += 13)
      for (int j = i; j < grid.size(); j += 17)
        CHECK(std::abs(r.s()[i] * r.e()[j]) <= C * grid.nodes()[i] * (1 + 1e-9));
  }
}

TEST_CASE("second resolvent identity through the factorization") {
  const WavePacket phi(3.0, 1.0, -2.0);
  CHECK(resolvent_identity_residual(Potential::well(-1.0, 1.0), Complex(1.0, 0.5), phi) < 1e-6);
  CHECK(resolvent_identity_residual(Potential::exponential(Complex(-1.0, 0.5)), Complex(0.7, 0.9), phi) < 1e-6);
  CHECK(resolvent_identity_residual(Potential::well(Complex(-2.0, -2.0), 1.5), Complex(2.0, 0.3), phi) < 1e-6);
}

TEST_CASE("factor pair multiplies back to V") {
  const auto p = Potential::well(Complex(-3.0, 4.0), 2.0);
  const auto A = WeightedFactor::sqrt_potential(p);
  const auto B = WeightedFactor::sqrt_abs_potential(p);
  for (Real x : {0.1, 1.0, 1.9}) CHECK(std::abs(A(x) * B(x) - p(x)) < 1e-14);
  CHECK(A(2.5) == Complex(0.0));
  CHECK(A.square_integral(0.0, 10.0) == doctest::Approx(10.0).epsilon(1e-12));
  CHECK(WeightedFactor::sqrt_potential(Potential::zero()).is_zero());
}

TEST_CASE("smoothness integral gate and trivial cases") {
  const WavePacket phi(8.0, 1.4, -2.5);
  CHECK_THROWS_AS(smoothness_integral(Potential::well(-4.0, 1.0), WeightedFactor::indicator(0, 1), phi,
                                      Route::Stationary),
                  HypothesisError);
  const auto p = Potential::well(-0.5, 1.0);
  CHECK(smoothness_integral(p, WeightedFactor::zero(), phi, Route::Stationary).value == 0.0);
  const auto r = smoothness_integral(p, WeightedFactor::sqrt_potential(p), phi, Route::Stationary);
  CHECK(r.value > 0.0);
  CHECK(r.tail_estimate < 1e-3 * r.value);
}

TEST_CASE("smoothness routes agree for the free evolution") {
  const WavePacket phi(6.0, 1.2, -2.0);
  const auto a = WeightedFactor::indicator(0.5, 2.0);
  SmoothnessOptions opts;
  opts.grid_nodes = 2000;
  const auto s = smoothness_integral(Potential::zero(), a, phi, Route::Stationary, opts);
  const auto t = smoothness_integral(Potential::zero(), a, phi, Route::TimeDomain, opts);
  CHECK(std::abs(s.value - t.value) < 0.01 * s.value);
}
