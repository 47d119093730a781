#include "doctest.h"

#include <cmath>

#include "halfline/bounds.hpp"

using namespace halfline;

TEST_CASE("theorem 1 bound against closed-form assembly") {
  const auto shallow = Potential::well(-1.0, 1.0);
  CHECK(theorem1_bound(shallow, 1.0, 0.0, 0.0, 10.0) ==
        doctest::Approx(73.5098451683000287).epsilon(1e-10));
  CHECK(theorem1_bound(Potential::zero(), 1.0, 0.3, 0.2, 5.0) == 0.0);

  const auto deep = Potential::well(-4.0, 1.0);
  CHECK_THROWS_AS(theorem1_bound(deep, 1.0, 0.0, 0.0, 10.0), AdmissibilityError);
  CHECK(admissible_A_threshold(deep, 1.0, 0.0) == doctest::Approx(33.0519036960897).epsilon(1e-10));
  CHECK(theorem1_bound(deep, 1.0, 0.0, 0.0, 40.0) == doctest::Approx(5175.15251370468).epsilon(1e-10));
  CHECK_THROWS_AS(theorem1_bound(deep, 1.0, 1.0, 0.0, 40.0), DomainError);
}

TEST_CASE("optimizer never exceeds the grid it examined") {
  const auto deep = Potential::well(-4.0, 1.0);
  const BoundGrid grid;
  const auto cert = optimize_bound(deep, 1.0, 1, grid);
  CHECK(cert.grid_points == 32 * 16 * 16);
  CHECK(cert.bound_value <= cert.grid_minimum);
  CHECK(cert.A > cert.A_min);
  CHECK(cert.satisfied);
  // coarse exhaustive oracle over the same parameter box
  for (Real alpha : {0.0, 0.38, 0.76, 0.95})
    for (Real beta : {0.0, 0.5, 0.95}) {
      const Real A_min = admissible_A_threshold(deep, 1.0, alpha);
      for (Real f : {1.01, 1.5, 3.0, 30.0, 900.0})
        CHECK(cert.bound_value <= theorem1_bound(deep, 1.0, alpha, beta, f * A_min) * (1 + 1e-12));
    }
  CHECK(cert.bound_value == doctest::Approx(theorem1_bound(deep, 1.0, cert.alpha, cert.beta, cert.A)).epsilon(1e-10));
}

TEST_CASE("certificates against computed counts") {
  const auto z = optimize_bound(Potential::zero(), 1.0);
  CHECK(z.bound_value == 0.0);
  CHECK(z.computed_count == 0);
  CHECK(z.satisfied);

  const auto c = optimize_bound(Potential::well(-4.0, 1.0), 1.0);
  CHECK(c.computed_count == 1);
  CHECK(c.satisfied);
  const auto e = optimize_bound(Potential::exponential(-3.0, 1.0), 0.9);
  CHECK(e.satisfied);
}

TEST_CASE("corollary 2") {
  const auto shallow = Potential::well(-1.0, 1.0);
  CHECK(corollary2_bound(shallow) == doctest::Approx(41.0573102227699).epsilon(1e-11));
  const auto cert = corollary2_certificate(shallow, 0);
  CHECK(cert.satisfied);
  CHECK(cert.b == doctest::Approx(1.0 / kLn2));
  const auto zero = corollary2_certificate(Potential::zero(), 0);
  CHECK(zero.short_circuit);
  CHECK(zero.satisfied);
  CHECK_THROWS_AS(corollary2_bound(Potential::exponential(-1.0, 1.0)), InapplicableError);
}
