#include "halfline/spectrum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <sstream>

#include "halfline/parallel.hpp"
#include "halfline/quadrature.hpp"

namespace halfline {

std::string to_string(PointKind k) {
  switch (k) {
    case PointKind::Eigenvalue:
      return "eigenvalue";
    case PointKind::SpectralSingularity:
      return "spectral_singularity";
    case PointKind::BelowAxis:
      return "below_axis";
  }
  return "?";
}

bool SpectrumReport::has_eigenvalues() const {
  return std::any_of(points.begin(), points.end(),
                     [](const SpectralPoint& s) { return s.kind == PointKind::Eigenvalue; });
}

bool SpectrumReport::has_singularities() const {
  return std::any_of(points.begin(), points.end(), [](const SpectralPoint& s) {
    return s.kind == PointKind::SpectralSingularity;
  });
}

std::vector<Real> alpha_grid(int samples, Real hi) {
  std::vector<Real> out(samples);
  for (int i = 0; i < samples; ++i) out[i] = samples == 1 ? 0.0 : hi * i / (samples - 1);
  return out;
}

Real enclosing_radius(const Potential& p, Real alpha) {
  if (alpha < 0.0 || alpha >= 1.0) throw DomainError("enclosing_radius: alpha must lie in [0, 1)");
  if (p.is_zero()) return 0.0;
  QuadratureOptions q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  const Real moment = std::pow(2.0, alpha) * weighted_moment(p, {alpha, 0.0, 0.0}, q);
  return std::pow(moment / kLn2, 1.0 / (1.0 - alpha));
}

Real min_enclosing_radius(const Potential& p, int samples) {
  Real best = kInf;
  for (Real alpha : alpha_grid(samples)) best = std::min(best, enclosing_radius(p, alpha));
  return best;
}

SearchRegion auto_region(const Potential& p, Real R) {
  SearchRegion r;
  const Real s = 1.05 * R + 0.1;
  r.x0 = -s;
  r.x1 = s;
  r.y1 = s;
  const Real a = p.decay_rate();
  if (a > 0.0) {
    r.y0 = -std::min(0.25 * a, 1e-4 * (1.0 + R));
  } else {
    r.exclusion_radius = 1e-3;
    r.y0 = r.exclusion_radius;
  }
  return r;
}

SearchRegion auto_region(const Potential& p) { return auto_region(p, min_enclosing_radius(p)); }

namespace {

using Pair = Eigen::Matrix<Complex, 2, 1>;

struct EdgeResult {
  Pair value = Pair::Zero();
  Real error = 0.0;
  Real min_abs = kInf;
  int evaluations = 0;
};

EdgeResult edge_integral(const JostEvaluator& jost, Complex a, Complex b, Real scale) {
  const Complex dk = b - a;
  EdgeResult out;
  auto f = [&](Real t) {
    const Complex k = a + t * dk;
    const JostValue jv = jost.jost_function_with_derivative(k);
    out.min_abs = std::min(out.min_abs, std::abs(jv.value));
    const Complex r = jv.derivative / jv.value * dk;
    return Pair(r, k * r);
  };
  QuadratureOptions q;
  q.abs_tol = 1e-7 * (1.0 + scale);
  q.rel_tol = 1e-9;
  q.max_intervals = 2000;
  const auto res = integrate(f, 0.0, 1.0, q);
  out.value = res.value;
  out.error = res.converged ? res.error : kInf;
  out.evaluations = res.evaluations;
  return out;
}

// Winding number and first moment of one rectangle, or nothing when the
// contour is too close to a zero to count reliably.
std::optional<ZeroCount> try_count(const JostEvaluator& jost, const SearchRegion& r,
                                   std::string* why = nullptr) {
  const std::array<Complex, 4> corners = {Complex(r.x0, r.y0), Complex(r.x1, r.y0),
                                          Complex(r.x1, r.y1), Complex(r.x0, r.y1)};
  const Real scale = std::max({std::abs(r.x0), std::abs(r.x1), std::abs(r.y0), std::abs(r.y1)});
  std::array<EdgeResult, 4> edges;
  try {
    parallel_for(4, [&](int i) { edges[i] = edge_integral(jost, corners[i], corners[(i + 1) % 4], scale); });
  } catch (const RegionError&) {
    throw;
  } catch (const NonConvergenceError& e) {
    if (why) *why = e.what();
    return std::nullopt;
  }
  ZeroCount c;
  c.region = r;
  Pair total = Pair::Zero();
  for (const auto& e : edges) {
    total += e.value;
    c.error += e.error;
    c.min_abs_e = std::min(c.min_abs_e, e.min_abs);
    c.evaluations += e.evaluations;
  }
  const Complex two_pi_i(0.0, 2.0 * kPi);
  c.winding = total[0] / two_pi_i;
  c.moment = total[1] / two_pi_i;
  c.error /= 2.0 * kPi;
  c.count = static_cast<int>(std::lround(c.winding.real()));
  std::ostringstream msg;
  if (!(c.min_abs_e > 1e-9) || !std::isfinite(std::abs(c.winding))) {
    msg << "contour passes through a zero of the Jost function (min |e| = " << c.min_abs_e << ")";
  } else if (!(c.error < 0.25)) {
    msg << "argument-principle quadrature error " << c.error << " exceeds 0.25";
  } else if (std::abs(c.winding.real() - c.count) > 0.25 || std::abs(c.winding.imag()) > 0.25) {
    msg << "winding number " << c.winding.real() << " + " << c.winding.imag() << "i is not near an integer";
  } else {
    return c;
  }
  if (why) *why = msg.str();
  return std::nullopt;
}

SearchRegion perturbed(const SearchRegion& r, int attempt) {
  if (attempt == 0) return r;
  SearchRegion out = r;
  const Real w = r.width(), h = r.height();
  out.x0 -= 0.0137 * attempt * w;
  out.x1 += 0.0091 * attempt * w;
  out.y1 += 0.0113 * attempt * h;
  out.y0 *= 1.0 + 0.37 * attempt;
  if (out.y0 > 0.0) out.exclusion_radius = out.y0;
  return out;
}

Real classification_threshold(const SpectrumOptions& opts, Real R) {
  return opts.delta_sing < 0.0 ? 1e-6 * (1.0 + R) : opts.delta_sing;
}

SpectralPoint classify(Complex k, int m, Real residual, Real delta) {
  SpectralPoint s;
  s.k = k;
  s.lambda = k * k;
  s.multiplicity = m;
  s.residual = residual;
  const Real im = k.imag();
  if (im > delta)
    s.kind = PointKind::Eigenvalue;
  else if (im >= -delta)
    s.kind = PointKind::SpectralSingularity;
  else
    s.kind = PointKind::BelowAxis;
  s.ambiguous = std::abs(im) >= 0.5 * delta && std::abs(im) <= 2.0 * delta;
  return s;
}

struct Refined {
  Complex k;
  Real residual;
  bool converged;
};

// Newton on e(k), modified for a cluster of multiplicity m.
Refined newton(const JostEvaluator& jost, Complex k, int m, Real tol) {
  Refined out{k, kInf, false};
  try {
    for (int it = 0; it < 60; ++it) {
      const JostValue jv = jost.jost_function_with_derivative(k);
      out.k = k;
      out.residual = std::abs(jv.value);
      if (out.residual == 0.0) break;
      if (jv.derivative == Complex(0.0, 0.0)) break;
      const Complex step = static_cast<Real>(m) * jv.value / jv.derivative;
      k -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(k))) {
        out.k = k;
        out.residual = std::abs(jost.jost_function(k));
        break;
      }
    }
  } catch (const RegionError&) {
    return out;
  }
  out.converged = out.residual < tol;
  return out;
}

class Locator {
 public:
  Locator(const JostEvaluator& jost, const SpectrumOptions& opts, Real R)
      : jost_(jost), opts_(opts), delta_(classification_threshold(opts, R)),
        min_size_(1e-6 * (1.0 + R)) {}

  std::vector<SpectralPoint> found;

  void process(const SearchRegion& r, int n, Complex moment) {
    if (n <= 0) return;
    const Real size = std::max(r.width(), r.height());
    const bool tiny = size < min_size_;
    if (n == 1 || tiny) {
      if (n > opts_.multiplicity_cap)
        throw NonConvergenceError("refinement stagnation: cluster of multiplicity " +
                                  std::to_string(n) + " exceeds the cap");
      const Complex k0 = moment / static_cast<Real>(n);
      const Refined z = newton(jost_, k0, n, opts_.tol);
      const Real slack = 1e-3 * size;
      const bool inside = z.k.real() >= r.x0 - slack && z.k.real() <= r.x1 + slack &&
                          z.k.imag() >= r.y0 - slack && z.k.imag() <= r.y1 + slack;
      if (z.converged && inside) {
        found.push_back(classify(z.k, n, z.residual, delta_));
        return;
      }
      if (tiny) {
        std::ostringstream msg;
        msg << "refinement stagnation near k = " << k0.real() << " + " << k0.imag()
            << "i (residual " << z.residual << ")";
        throw NonConvergenceError(msg.str());
      }
    }
    split(r, n);
  }

 private:
  void split(const SearchRegion& r, int n) {
    static constexpr std::array<Real, 6> fracs = {0.4781, 0.5219, 0.4413, 0.5587, 0.3917, 0.6083};
    const bool vertical_cut = r.width() >= r.height();
    std::string why;
    for (Real f : fracs) {
      SearchRegion a = r, b = r;
      if (vertical_cut) {
        a.x1 = b.x0 = r.x0 + f * r.width();
      } else {
        a.y1 = b.y0 = r.y0 + f * r.height();
      }
      const auto ca = try_count(jost_, a, &why);
      if (!ca) continue;
      const auto cb = try_count(jost_, b, &why);
      if (!cb) continue;
      if (ca->count + cb->count != n || ca->count < 0 || cb->count < 0) continue;
      process(a, ca->count, ca->moment);
      process(b, cb->count, cb->moment);
      return;
    }
    throw NonConvergenceError("contour subdivision failed: " + why);
  }

  const JostEvaluator& jost_;
  const SpectrumOptions& opts_;
  Real delta_;
  Real min_size_;
};

// Golden-section minimum of |e| on the real segment [lo, hi].
std::pair<Real, Real> real_minimum(const JostEvaluator& jost, Real lo, Real hi) {
  const Real g = 0.5 * (std::sqrt(5.0) - 1.0);
  Real a = lo, b = hi;
  Real c = b - g * (b - a), d = a + g * (b - a);
  Real fc = std::abs(jost.jost_function(c)), fd = std::abs(jost.jost_function(d));
  for (int it = 0; it < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = std::abs(jost.jost_function(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = std::abs(jost.jost_function(d));
    }
  }
  return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

// Zeros on the real axis when the contour must stay above it (decay rate 0).
// The grid includes k = 0, which is the radial limit from the upper half-plane.
void scan_real_axis(const JostEvaluator& jost, const SearchRegion& r, const SpectrumOptions& opts,
                    Real delta, SpectrumReport& rep) {
  const int n = 801;
  std::vector<Real> tau(n), mod(n);
  for (int i = 0; i < n; ++i) {
    tau[i] = r.x0 + (r.x1 - r.x0) * i / (n - 1);
    if (i == n / 2) tau[i] = 0.0;
  }
  parallel_for(n, [&](int i) { mod[i] = std::abs(jost.jost_function(tau[i])); });
  for (int i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || mod[i] <= mod[i - 1];
    const bool right_ok = i == n - 1 || mod[i] <= mod[i + 1];
    if (!left_ok || !right_ok) continue;
    const Real lo = tau[std::max(i - 1, 0)], hi = tau[std::min(i + 1, n - 1)];
    const auto [t, m] = real_minimum(jost, lo, hi);
    if (m < opts.tol) {
      SpectralPoint s = classify(Complex(t, 0.0), 1, m, delta);
      s.ambiguous = true;  // multiplicity of a boundary zero is not resolved by winding
      rep.points.push_back(s);
      rep.notes.push_back("real-axis zero found by scan; multiplicity not resolved");
    }
  }
}

}  // namespace

ZeroCount count_zeros(const JostEvaluator& jost, const SearchRegion& region,
                      const SpectrumOptions& /*opts*/) {
  if (!(region.x1 > region.x0) || !(region.y1 > region.y0))
    throw DomainError("count_zeros: empty search region");
  if (jost.potential().is_zero()) {
    ZeroCount c;
    c.region = region;
    c.winding = 0.0;
    c.min_abs_e = 1.0;
    return c;
  }
  std::string why;
  for (int attempt = 0; attempt < 5; ++attempt) {
    const SearchRegion r = perturbed(region, attempt);
    jost.check_region(Complex(0.0, r.y0));
    if (auto c = try_count(jost, r, &why)) return *c;
  }
  throw NonConvergenceError("count_zeros: " + why);
}

ZeroCount count_zeros(const Potential& p, const SearchRegion& region, const SpectrumOptions& opts) {
  return count_zeros(JostEvaluator(p, opts.solver), region, opts);
}

SpectrumReport locate_spectrum(const Potential& p, const SearchRegion& region,
                               const SpectrumOptions& opts) {
  SpectrumReport rep;
  rep.radius = min_enclosing_radius(p);
  rep.delta_sing = classification_threshold(opts, rep.radius);
  rep.region = region;
  if (p.is_zero()) return rep;

  const JostEvaluator jost(p, opts.solver);
  const ZeroCount outer = count_zeros(jost, region, opts);
  rep.region = outer.region;
  rep.region_count = outer.count;

  Locator loc(jost, opts, rep.radius);
  loc.process(outer.region, outer.count, outer.moment);
  for (const auto& s : loc.found) {
    if (s.kind == PointKind::BelowAxis)
      rep.below_axis.push_back(s);
    else
      rep.points.push_back(s);
  }
  if (rep.region.y0 > 0.0) {
    scan_real_axis(jost, rep.region, opts, rep.delta_sing, rep);
    rep.notes.push_back("contour excludes the strip 0 <= Im k < " +
                        std::to_string(rep.region.y0) + "; real axis scanned separately");
  }
  auto lex = [](const SpectralPoint& a, const SpectralPoint& b) {
    return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
  };
  std::sort(rep.points.begin(), rep.points.end(), lex);
  std::sort(rep.below_axis.begin(), rep.below_axis.end(), lex);
  rep.count = 0;
  for (const auto& s : rep.points) rep.count += s.multiplicity;
  return rep;
}

SpectrumReport locate_spectrum(const Potential& p, const SpectrumOptions& opts) {
  const Real R = min_enclosing_radius(p);
  return locate_spectrum(p, auto_region(p, R), opts);
}

void require_empty_spectrum(const Potential& p, const SpectrumOptions& opts) {
  const SpectrumReport rep = locate_spectrum(p, opts);
  if (rep.empty()) return;
  std::ostringstream msg;
  msg << "hypothesis violated: the Jost function has " << rep.count
      << " zero(s) in the closed upper half-plane, first at k = " << rep.points.front().k.real()
      << " + " << rep.points.front().k.imag() << "i ("
      << to_string(rep.points.front().kind) << ")";
  throw HypothesisError(msg.str());
}

}  // namespace halfline
