// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "halfline/bounds.hpp"
#include "halfline/dynamics.hpp"
#include "halfline/resolvent.hpp"
#include "halfline/solver.hpp"
#include "halfline/spectrum.hpp"

using namespace halfline;

namespace {

constexpr Real kGamma4 = 0.638045048285237717;  // sqrt(4-g^2) cot sqrt(4-g^2) = -g

struct Outcome {
  bool pass = false;
  std::string detail;
  Real time_limit = 0.0;  // seconds, 0: none
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Complex closed_form_jost(Complex v0, Complex k) {
  const Complex kappa = std::sqrt(k * k - v0);
  const Complex e1 = std::exp(kI * k);
  if (std::abs(kappa) < 1e-12) return e1 * (1.0 - kI * k);
  return e1 * (std::cos(kappa) - kI * k / kappa * std::sin(kappa));
}

struct Member {
  Potential p;
  Real a;
  std::string name;
};

std::vector<Member> regression_family() {
  std::vector<Member> out;
  for (Complex d : {Complex(1), Complex(4), Complex(9), Complex(2, 2), Complex(4, 4)})
    for (Real w : {0.5, 1.0, 2.0}) {
      std::ostringstream name;
      name << "well(" << -d << ", " << w << ")";
      out.push_back({Potential::well(-d, w), 1.0, name.str()});
    }
  for (Real c : {1.0, 3.0, 10.0})
    out.push_back({Potential::exponential(-c), 0.9, "exp(" + std::to_string(-c) + ")"});
  return out;
}

// ---- criteria ----

Outcome free_field() {
  Outcome o;
  o.time_limit = 10.0;
  const JostEvaluator jost(Potential::zero());
  Real worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Real r = 0.1 * std::pow(100.0, (i % 10) / 9.0);
    const Real arg = kPi * (i / 10) / 9.0;
    worst = std::max(worst, std::abs(jost.jost_function(std::polar(r, arg)) - 1.0));
  }
  const bool empty = locate_spectrum(Potential::zero()).empty();
  const auto packets = packet_dictionary(5);
  WaveOptions wo;
  wo.nodes = 1500;  // the identity is exact at any resolution
  const ScatteringSetup setup(Potential::zero(), packets, wo);
  Real wave = 0.0;
  for (const auto& w : packets) {
    const VectorXc phi = w.sample(setup.perturbed().x());
    for (auto d : {Direction::Plus, Direction::Minus})
      wave = std::max(wave, setup.perturbed().norm(setup.limit(phi, d, WaveKind::Omega).limit - phi));
  }
  o.pass = worst < 1e-12 && empty && wave < 1e-10;
  o.detail = fmt("max|e-1| = %.2e, spectrum empty = %g, max||Omega phi - phi|| = %.2e", worst, empty, wave);
  return o;
}

Outcome closed_form() {
  Outcome o;
  o.time_limit = 30.0;
  Real worst = 0.0;
  for (Complex d : {Complex(-1), Complex(-4), Complex(-2, -2)}) {
    const JostEvaluator jost(Potential::well(d, 1.0));
    for (int i = 0; i < 50; ++i) {
      // spiral through the closed upper half-plane, real axis included
      const Real r = 0.1 + 9.9 * i / 49.0;
      const Real arg = kPi * ((i * 7) % 50) / 49.0;
      const Complex k = std::polar(r, arg);
      const Complex exact = closed_form_jost(d, k);
      worst = std::max(worst, std::abs(jost.jost_function(k) - exact) / std::abs(exact));
    }
  }
  o.pass = worst < 1e-8;
  o.detail = fmt("max relative error = %.2e over 150 points", worst);
  return o;
}

Outcome threshold_scan() {
  Outcome o;
  o.time_limit = 60.0;
  const Real threshold = kPi * kPi / 4.0;
  // sign change of the real function gamma -> e(i gamma) on (0, 3]
  auto has_sign_change = [](Real v0) {
    const JostEvaluator jost(Potential::well(-v0, 1.0));
    Real prev = jost.jost_function(Complex(0.0, 3.0)).real();
    for (int j = 1; j <= 60; ++j) {
      const Real g = 3.0 * std::pow(1e-5 / 3.0, j / 60.0);
      const Real cur = jost.jost_function(Complex(0.0, g)).real();
      if ((cur < 0.0) != (prev < 0.0)) return true;
      prev = cur;
    }
    return false;
  };
  Real first_sign = kInf;
  for (int i = 0; i <= 200; ++i) {
    const Real v0 = 2.0 + i * 0.005;
    if (has_sign_change(v0)) {
      first_sign = v0;
      break;
    }
  }
  auto count = [](Real v0) {
    const auto p = Potential::well(-v0, 1.0);
    return count_zeros(p, auto_region(p)).count;
  };
  Real lo = 2.0, hi = 3.0;
  const int c_lo = count(lo), c_hi = count(hi);
  while (hi - lo > 0.005) {
    const Real mid = 0.5 * (lo + hi);
    (count(mid) == 0 ? lo : hi) = mid;
  }
  const Real jump = hi;
  o.pass = c_lo == 0 && c_hi == 1 && std::abs(first_sign - threshold) <= 0.01 &&
           std::abs(jump - threshold) <= 0.01;
  o.detail = fmt("sign change first at V0 = %.4f, count 0->1 at V0 = %.4f, pi^2/4 = %.4f", first_sign, jump,
                 threshold);
  return o;
}

Outcome eigenvalue_accuracy() {
  Outcome o;
  const auto deep = Potential::well(-4.0, 1.0);
  const auto rep = locate_spectrum(deep);
  Real err = kInf;
  if (rep.points.size() == 1) err = std::abs(rep.points[0].k - Complex(0.0, kGamma4));
  const Real lowest = GridOperator::discretize(deep, 30.0, 3000).symmetric_eigenvalues()[0];
  const Real grid_err = std::abs(lowest + kGamma4 * kGamma4);
  o.pass = rep.count == 1 && err < 1e-8 && grid_err < 1e-3;
  o.detail = fmt("count = %g, |k - i gamma| = %.2e, grid lambda_0 = %.6f (error %.2e)", rep.count, err, lowest,
                 grid_err);
  return o;
}

Outcome estimate_suite() {
  Outcome o;
  o.time_limit = 120.0;
  int total = 0, held = 0;
  for (const auto& m : regression_family()) {
    const Real X = truncation_radius(m.p, 1e-12);
    const VectorXr x = default_grid(std::max(3.0, 1.2 * X), 40);
    std::vector<Complex> ks = {Complex(0.0, 1.0), Complex(1.0, 0.5), Complex(3.0, 0.0), Complex(0.4, 2.0),
                               Complex(2.0, -0.2)};
    for (Complex k : ks)
      for (Real alpha : {0.0, 0.5, 1.0}) {
        const auto rep = verify_estimates(m.p, k, alpha, x);
        for (const auto* c : {&rep.jost_deviation, &rep.jost_bound, &rep.regular_bound, &rep.jost_function}) {
          if (!c->applicable) continue;
          total += static_cast<int>(c->lhs.size());
          if (c->holds) {
            held += static_cast<int>(c->lhs.size());
          } else {
            for (Eigen::Index i = 0; i < c->lhs.size(); ++i)
              held += c->lhs[i] <= c->rhs[i] * (1 + 1e-9) + 1e-10 ? 1 : 0;
          }
        }
      }
  }
  o.pass = total > 0 && held == total;
  o.detail = fmt("%g of %g sampled inequalities hold", held, total);
  return o;
}

Outcome wronskian_drift() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<Real> u(0.0, 1.0);
  Real worst = 0.0;
  for (int draw = 0; draw < 50; ++draw) {
    Potential p = Potential::zero();
    const Complex strength(-6.0 * u(rng), 4.0 * (u(rng) - 0.5));
    switch (draw % 3) {
      case 0: p = Potential::well(strength, 0.3 + 2.0 * u(rng)); break;
      case 1: p = Potential::exponential(strength, 0.5 + u(rng)); break;
      default: p = Potential::gaussian(strength, 2.0 * u(rng), 0.3 + u(rng)); break;
    }
    const Complex k = std::polar(0.2 + 4.8 * u(rng), kPi * u(rng));
    const VectorXr x = default_grid(8.0, 120);
    SolverOptions so;
    const auto e = jost_solution(p, k, x, so);
    const auto s = regular_solution(p, k, x, so);
    const VectorXc w = wronskian(e, s);
    const Complex ref = JostEvaluator(p, so).jost_function(k);
    for (Eigen::Index i = 0; i < w.size(); ++i) worst = std::max(worst, std::abs(w[i] - ref) / std::abs(ref));
  }
  o.pass = worst < 1e-8;
  o.detail = fmt("max relative drift = %.2e over 50 draws", worst);
  return o;
}

Outcome certification() {
  Outcome o;
  o.time_limit = 300.0;
  int certified = 0, members = 0, c2_total = 0, c2_ok = 0;
  std::string failures;
  for (const auto& m : regression_family()) {
    const int count = locate_spectrum(m.p).count;
    const auto cert = optimize_bound(m.p, m.a, count);
    ++members;
    if (cert.satisfied) ++certified;
    else failures += " " + m.name;
    try {
      const auto c2 = corollary2_certificate(m.p, count);
      ++c2_total;
      if (c2.satisfied) ++c2_ok;
    } catch (const InapplicableError&) {
      // decay rate below b: not covered
    }
  }
  o.pass = certified == members && c2_ok == c2_total;
  o.detail = fmt("counting bound certified %g/%g, single-integral bound %g/%g", certified, members, c2_ok, c2_total) +
             failures;
  return o;
}

Outcome removable_singularity() {
  Outcome o;
  const auto deep = Potential::well(-4.0, 1.0);
  const auto A = WeightedFactor::sqrt_potential(deep);
  const auto B = WeightedFactor::sqrt_abs_potential(deep);
  const JostEvaluator jost(deep);
  const Complex k0(0.0, kGamma4);
  const Real ref_hs = scaled_hilbert_schmidt(deep, k0 + Complex(0.0, 0.1), A, B);
  const Real ref_inv = 1.0 / std::abs(jost.jost_function(k0 + Complex(0.0, 0.1)));
  Real worst_factor = 1.0, growth = 0.0;
  for (Real d : {3e-2, 1e-2, 1e-3, 1e-4, 1e-5}) {
    for (Complex dir : {Complex(0.0, 1.0), Complex(1.0, 0.0), Complex(0.0, -1.0)}) {
      const Complex k = k0 + d * dir;
      const Real hs = scaled_hilbert_schmidt(deep, k, A, B);
      worst_factor = std::max({worst_factor, hs / ref_hs, ref_hs / hs});
      growth = std::max(growth, (1.0 / std::abs(jost.jost_function(k))) / ref_inv);
    }
  }
  o.pass = worst_factor < 3.0 && growth >= 1e3;
  o.detail = fmt("|e| HS stays within factor %.3f, |1/e| grows by %.2e", worst_factor, growth);
  return o;
}

Outcome route_agreement() {
  Outcome o;
  o.time_limit = 300.0;
  const auto p = Potential::well(-0.5, 1.0);
  const auto packets = packet_dictionary(4);
  SmoothnessOptions so;
  so.grid_nodes = 3000;
  const auto A = WeightedFactor::sqrt_potential(p);
  const auto s = smoothness_integral(p, A, packets[0], Route::Stationary, so);
  const auto t = smoothness_integral(p, A, packets[0], Route::TimeDomain, so);
  const Real smooth = route_discrepancy(s, t);

  WaveOptions wo;
  wo.nodes = 3000;
  const ScatteringSetup setup(p, packets, wo);
  const auto& op = setup.perturbed();
  Real worst = 0.0;
  for (auto [i, j] : {std::pair{0, 1}, std::pair{1, 2}, std::pair{2, 3}}) {
    const auto form = stationary_wave_form(p, packets[i], packets[j], Direction::Plus);
    const VectorXc f = packets[i].sample(op.x()), g = packets[j].sample(op.x());
    const auto lim = setup.limit(f, Direction::Plus, WaveKind::Omega);
    const Complex corr = op.inner(lim.limit, g) - op.inner(f, g);
    worst = std::max(worst, std::abs(corr - form.correction) / std::abs(form.correction));
  }
  o.pass = smooth < 0.05 && worst < 0.05;
  o.detail = fmt("smoothness routes %.5f vs %.5f (rel. diff %.2e), wave-operator forms max rel. diff %.2e",
                 s.value, t.value, smooth, worst);
  return o;
}

Outcome similarity() {
  Outcome o;
  const auto p = Potential::well(-0.5, 1.0);
  const auto basis = packet_dictionary(5);
  std::vector<Real> r;
  for (int n : {4000, 8000}) {
    WaveOptions wo;
    wo.nodes = n;
    r.push_back(similarity_residual(ScatteringSetup(p, basis, wo), basis, Direction::Plus).max_residual);
  }
  const Real ratio = r[1] / r[0];
  o.pass = r[0] < 1e-2 && ratio < 0.6;
  o.detail = fmt("residual %.2e at n=4000, %.2e at n=8000, ratio %.3f", r[0], r[1], ratio);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"free-field identities", free_field},
      {"closed-form Jost function", closed_form},
      {"bound-state threshold", threshold_scan},
      {"eigenvalue accuracy", eigenvalue_accuracy},
      {"solution estimates", estimate_suite},
      {"Wronskian invariant", wronskian_drift},
      {"counting-bound certification", certification},
      {"removable singularity of e(k) A R B", removable_singularity},
      {"stationary vs time-domain routes", route_agreement},
      {"similarity residual", similarity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const Real secs = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.1fs", secs);
    if (o.time_limit > 0.0) {
      timing += fmt(" (limit %.0fs)", o.time_limit);
      if (secs > o.time_limit) {
        o.pass = false;
        timing += " over time";
      }
    }
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %-38s %s  %s  [%s]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu of %zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
