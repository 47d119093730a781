#include "doctest.h"

#include <cmath>

#include "halfline/solver.hpp"

using namespace halfline;

namespace {

// Closed form of the Jost function of a constant well V0 on [0, w].
Complex well_jost(Complex v0, Real w, Complex k) {
  const Complex kappa = std::sqrt(k * k - v0);
  const Complex ew = std::exp(kI * k * w);
  if (std::abs(kappa) < 1e-12) return ew * (1.0 - kI * k * w);
  return ew * (std::cos(kappa * w) - kI * k / kappa * std::sin(kappa * w));
}

VectorXr linspace(Real a, Real b, int n) { return VectorXr::LinSpaced(n, a, b); }

}  // namespace

TEST_CASE("free Jost and regular solutions") {
  const auto zero = Potential::zero();
  const Complex k(1.0, 0.5);
  const VectorXr x = linspace(0.0, 5.0, 11);
  const auto e = jost_solution(zero, k, x);
  for (int i = 0; i < x.size(); ++i) CHECK(std::abs(e.values[i] - std::exp(kI * k * x[i])) < 1e-15);

  VectorXr q(1);
  q << kPi / 4;
  CHECK(std::abs(regular_solution(zero, 2.0, q).values[0] - 0.5) < 1e-14);
  q << 3.0;
  CHECK(std::abs(regular_solution(zero, 0.0, q).values[0] - 3.0) < 1e-14);
}

TEST_CASE("Jost solution of a square well") {
  const auto well = Potential::well(-4.0, 1.0);
  JostEvaluator ev(well);
  CHECK(std::abs(ev.jost_function(kI) - 0.150574365145887614) < 1e-11);

  const VectorXr x = linspace(0.0, 3.0, 13);
  const auto e = ev.solution(2.0, x);
  for (int i = 0; i < x.size(); ++i)
    if (x[i] >= 1.0) CHECK(e.values[i] == std::exp(kI * 2.0 * x[i]));

  VectorXr one(2);
  one << 0.0, 1.0;
  const auto s = regular_solution(well, 0.5, one);
  CHECK(s.values[0] == Complex(0.0, 0.0));
  CHECK(s.derivatives[0] == Complex(1.0, 0.0));
  CHECK(std::abs(s.values[1] - 0.427821484269143) < 1e-11);

  for (Complex v0 : {Complex(-1.0, 0.0), Complex(-2.0, -2.0), Complex(1.5, 0.5)})
    for (Complex k : {Complex(0.3, 0.2), Complex(-2.0, 0.01), Complex(5.0, 3.0), Complex(0.0, 0.7)}) {
      const Complex ref = well_jost(v0, 1.0, k);
      CHECK(std::abs(JostEvaluator(Potential::well(v0, 1.0)).jost_function(k) - ref) <
            1e-9 * std::abs(ref));
    }
}

TEST_CASE("Jost derivative in k from the variational equations") {
  const auto well = Potential::well({-2.0, -1.0}, 1.0);
  JostEvaluator ev(well);
  for (Complex k : {Complex(0.7, 0.4), Complex(-1.5, 2.0), Complex(3.0, -0.2)}) {
    const auto jd = ev.jost_function_with_derivative(k);
    const Real h = 1e-5;
    const Complex fd = (well_jost(-2.0 - 1.0 * kI, 1.0, k + h) - well_jost(-2.0 - 1.0 * kI, 1.0, k - h)) / (2 * h);
    CHECK(std::abs(jd.value - well_jost(-2.0 - 1.0 * kI, 1.0, k)) < 1e-10);
    CHECK(std::abs(jd.derivative - fd) < 1e-7 * (1 + std::abs(fd)));
  }
}

TEST_CASE("region check") {
  JostEvaluator ex(Potential::exponential(-1.0, 1.0));
  CHECK_THROWS_AS(ex.check_region(Complex(1.0, -0.6)), RegionError);
  CHECK_NOTHROW(ex.jost_function(Complex(1.0, -0.3)));
  JostEvaluator slow(Potential::expression("1/(1+x^6)", 0.0));
  CHECK_THROWS_AS(slow.check_region(Complex(1.0, -0.01)), RegionError);
  CHECK_NOTHROW(JostEvaluator(Potential::well(-1.0, 1.0)).check_region(Complex(0.0, -50.0)));
}

TEST_CASE("Wronskian equals the Jost function") {
  const VectorXr x = default_grid(4.0, 80);
  {
    const auto zero = Potential::zero();
    const auto w = wronskian(jost_solution(zero, 1.0, x), regular_solution(zero, 1.0, x));
    for (int i = 0; i < w.size(); ++i) CHECK(std::abs(w[i] - 1.0) < 1e-13);
  }
  const auto well = Potential::well(-4.0, 1.0);
  const auto w = wronskian(jost_solution(well, kI, x), regular_solution(well, kI, x));
  for (int i = 0; i < w.size(); ++i) CHECK(std::abs(w[i] - 0.150574365145887614) < 1e-10);
  CHECK_THROWS_AS(wronskian(jost_solution(well, kI, x), regular_solution(well, 2.0 * kI, x)),
                  MismatchError);
  CHECK_THROWS_AS(wronskian(regular_solution(well, kI, x), jost_solution(well, kI, x)),
                  MismatchError);
}

TEST_CASE("Volterra series agrees with backward integration") {
  const VectorXr x = default_grid(2.0, 40);
  for (auto p : {Potential::well(-4.0, 1.0), Potential::well({-2.0, 2.0}, 0.5),
                 Potential::exponential(-3.0, 1.0)}) {
    for (Complex k : {Complex(0.1, 0.0), Complex(1.0, 1.0), Complex(-3.0, 0.5), Complex(6.0, 0.0)}) {
      const auto ode = jost_solution(p, k, x);
      const auto vol = jost_volterra(p, k, x);
      CHECK(vol.majorant < 1e-14);
      for (int i = 0; i < x.size(); ++i) {
        CHECK(std::abs(vol.record.values[i] - ode.values[i]) < 1e-8 * std::abs(ode.values[i]));
        CHECK(std::abs(vol.record.derivatives[i] - ode.derivatives[i]) <
              1e-8 * (std::abs(ode.derivatives[i]) + std::abs(k) * std::abs(ode.values[i])));
      }
    }
  }
  SolverOptions checked;
  checked.volterra_check = true;
  CHECK_NOTHROW(jost_solution(Potential::well(-4.0, 1.0), Complex(2.0, 0.3), x, checked));
}

TEST_CASE("ODE residual shrinks with the stencil") {
  const auto p = Potential::exponential({-2.0, 1.0}, 1.0);
  const Complex k(1.2, 0.4);
  Real prev = kInf;
  for (int n : {100, 200, 400}) {
    const VectorXr x = linspace(0.0, 6.0, n);
    const Real h = x[1] - x[0];
    const Real r = std::max(ode_residual(jost_solution(p, k, x), p),
                            ode_residual(regular_solution(p, k, x), p));
    CHECK(r < 10.0 * h * h);
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("conjugate symmetry for real potentials") {
  const auto p = Potential::gaussian(-3.0, 1.0, 0.7);
  const VectorXr x = linspace(0.0, 4.0, 9);
  const Complex k(1.3, 0.6);
  const auto a = jost_solution(p, k, x);
  const auto b = jost_solution(p, -std::conj(k), x);
  for (int i = 0; i < x.size(); ++i) CHECK(std::abs(b.values[i] - std::conj(a.values[i])) < 1e-10);
}

TEST_CASE("solution estimates") {
  const VectorXr x = default_grid(3.0, 40);
  const auto zero = verify_estimates(Potential::zero(), Complex(1.0, 0.5), 0.3, x);
  CHECK(zero.all_hold());
  CHECK(zero.jost_deviation.lhs.maxCoeff() < 1e-15);
  CHECK(zero.jost_deviation.rhs.maxCoeff() == 0.0);

  const auto well = Potential::well(-4.0, 1.0);
  const auto r = verify_estimates(well, Complex(1.0, 1.0), 0.0, x);
  CHECK(r.all_hold());
  for (int i = 0; i < x.size(); ++i)
    if (x[i] <= 1.0)
      CHECK(r.jost_bound.rhs[i] ==
            doctest::Approx(std::exp(2.0 * (1.0 - x[i] * x[i])) * std::exp(-x[i])).epsilon(1e-10));

  VectorXr one(2);
  one << 0.5, 1.0;
  const auto s = verify_estimates(well, Complex(2.0, 1.0), 0.5, one);
  CHECK(s.regular_bound.holds);
  CHECK(s.regular_bound.lhs[1] == doctest::Approx(0.311399822625379).epsilon(1e-10));
  CHECK(s.regular_bound.rhs[1] == doctest::Approx(std::exp(3.0)).epsilon(1e-10));

  const auto below = verify_estimates(Potential::exponential(-1.0, 1.0), Complex(1.0, -0.2), 0.5, x);
  CHECK(below.jost_deviation.applicable);
  CHECK(below.jost_deviation.holds);
  CHECK_FALSE(below.regular_bound.applicable);
}
