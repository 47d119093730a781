// halfline: command-line front end. Every report embeds a run manifest; with
// --deterministic the wall time is zeroed so identical inputs give identical
// bytes.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "halfline/bounds.hpp"
#include "halfline/dynamics.hpp"
#include "halfline/io.hpp"
#include "halfline/parallel.hpp"
#include "halfline/resolvent.hpp"
#include "halfline/solver.hpp"
#include "halfline/spectrum.hpp"

namespace fs = std::filesystem;
using namespace halfline;

namespace {

constexpr const char* kVersion = "halfline 0.1.0";

struct Common {
  std::string potential;
  double tol = 1e-10;
  int threads = 1;
  std::string out = ".";
  std::uint64_t seed = 7;
  bool deterministic = false;
};

struct Context {
  const Common& common;
  std::string command;
  Potential p = Potential::zero();
  std::string digest;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  std::map<std::string, double> tolerances;

  Context(const Common& c, std::string cmd) : common(c), command(std::move(cmd)) {
    std::string text;
    p = load_potential(c.potential, &text);
    digest = fnv1a_hex(text);
    tolerances["tol"] = c.tol;
  }

  Json manifest() const {
    RunManifest m;
    m.command = command;
    m.potential_digest = digest;
    m.tolerances = tolerances;
    m.version = kVersion;
    m.threads = common.threads;
    m.seed = common.seed;
    if (!common.deterministic)
      m.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return to_json(m);
  }

  fs::path path(const std::string& name) const {
    fs::create_directories(common.out);
    return fs::path(common.out) / name;
  }

  void emit(Json report) const {
    report["manifest"] = manifest();
    report["potential"] = potential_to_json(p);
    const std::string text = report.dump(2);
    std::ofstream(path(command + ".json")) << text << '\n';
    std::cout << text << '\n';
  }
};

Complex parse_complex(const std::string& s) {
  std::stringstream in(s);
  Real re = 0.0, im = 0.0;
  char comma = 0;
  if (!(in >> re)) throw SchemaError("expected \"re,im\", got \"" + s + "\"");
  if (in >> comma) {
    if (comma != ',' || !(in >> im)) throw SchemaError("expected \"re,im\", got \"" + s + "\"");
  }
  return {re, im};
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

WeightedFactor parse_factor(const std::string& spec, const Potential& p) {
  if (spec == "sqrt_potential") return WeightedFactor::sqrt_potential(p);
  if (spec == "sqrt_abs_potential") return WeightedFactor::sqrt_abs_potential(p);
  const std::string prefix = "indicator:";
  if (spec.rfind(prefix, 0) == 0) {
    const Complex range = parse_complex(spec.substr(prefix.size()));
    return WeightedFactor::indicator(range.real(), range.imag());
  }
  throw SchemaError("unknown factor \"" + spec + "\"");
}

SpectrumOptions spectrum_options(const Common& c) {
  SpectrumOptions o;
  o.tol = c.tol;
  return o;
}

void write_csv(const fs::path& file, const std::string& header, const std::vector<std::vector<Real>>& rows) {
  std::ofstream out(file);
  out << header << '\n';
  out.precision(17);
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
    out << '\n';
  }
}

Json error_json(const std::string& stage, const Error& e) {
  static const char* names[] = {"schema", "domain", "hypothesis", "non_convergence"};
  return {{"stage", stage}, {"category", names[static_cast<int>(e.category())]}, {"message", e.what()}};
}

// ---- subcommands ----

struct JostArgs {
  std::string k = "1,0";
  int grid = 200;
  double x_max = 0.0;
  bool check = false;
  double alpha = 0.5;
};

void run_jost(const Common& c, const JostArgs& a) {
  Context ctx(c, "jost");
  const Complex k = parse_complex(a.k);
  SolverOptions so;
  so.rel_tol = std::min(1e-12, c.tol);
  const Real X = ctx.p.is_zero() ? 0.0 : truncation_radius(ctx.p, so.truncation_tol);
  const Real x_max = a.x_max > 0.0 ? a.x_max : std::max(5.0, 1.5 * X);
  const VectorXr x = default_grid(x_max, a.grid);
  const JostEvaluator jost(ctx.p, so);
  const auto rec = jost.solution(k, x);
  const auto jv = jost.jost_function_with_derivative(k);
  std::vector<std::vector<Real>> rows;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    rows.push_back({x[i], rec.values[i].real(), rec.values[i].imag(), rec.derivatives[i].real(),
                    rec.derivatives[i].imag()});
  const auto csv = ctx.path("jost.csv");
  write_csv(csv, "x,re_e,im_e,re_de,im_de", rows);
  Json r = {{"k", to_json(k)},
            {"jost", to_json(jv.value)},
            {"jost_derivative", to_json(jv.derivative)},
            {"truncation_radius", X},
            {"solution_csv", csv.string()}};
  if (a.check) r["estimates"] = to_json(verify_estimates(ctx.p, k, a.alpha, x, so));
  ctx.emit(r);
}

void run_spectrum(const Common& c, const std::string& region_spec) {
  Context ctx(c, "spectrum");
  const auto opts = spectrum_options(c);
  SpectrumReport rep;
  if (region_spec == "auto") {
    rep = locate_spectrum(ctx.p, opts);
  } else {
    std::stringstream in(region_spec);
    SearchRegion reg;
    char c1, c2, c3;
    if (!(in >> reg.x0 >> c1 >> reg.x1 >> c2 >> reg.y0 >> c3 >> reg.y1) || c1 != ',' || c2 != ',' || c3 != ',')
      throw SchemaError("region must be auto or \"x0,x1,y0,y1\"");
    if (!(reg.x1 > reg.x0) || !(reg.y1 > reg.y0)) throw DomainError("region: empty rectangle");
    rep = locate_spectrum(ctx.p, reg, opts);
  }
  ctx.emit(to_json(rep));
}

void run_certify(const Common& c, double a, bool corollary2) {
  Context ctx(c, "certify");
  ctx.tolerances["a"] = a;
  const int count = ctx.p.is_zero() ? 0 : locate_spectrum(ctx.p, spectrum_options(c)).count;
  Json r = {{"certificate", to_json(optimize_bound(ctx.p, a, count))}};
  if (corollary2) r["corollary2"] = to_json(corollary2_certificate(ctx.p, count));
  ctx.emit(r);
}

struct SmoothArgs {
  std::string state;
  std::string route = "both";
  std::string factor = "sqrt_potential";
  int nodes = 3000;
};

void run_smoothness(const Common& c, const SmoothArgs& a) {
  Context ctx(c, "smoothness");
  const WavePacket phi = state_from_json(read_json(a.state), c.seed);
  const auto factor = parse_factor(a.factor, ctx.p);
  SmoothnessOptions opts;
  opts.grid_nodes = a.nodes;
  opts.spectrum = spectrum_options(c);
  ctx.tolerances["rel_tol"] = opts.rel_tol;
  ctx.tolerances["dt"] = opts.dt;
  Json r = {{"state", to_json(phi)}, {"factor", factor.name}};
  if (a.route != "both" && a.route != "stationary" && a.route != "time")
    throw SchemaError("route must be stationary, time or both");
  std::optional<SmoothnessResult> s, t;
  if (a.route != "time") {
    s = smoothness_integral(ctx.p, factor, phi, Route::Stationary, opts);
    r["stationary"] = to_json(*s);
  }
  if (a.route != "stationary") {
    opts.check_hypothesis = !s.has_value();
    t = smoothness_integral(ctx.p, factor, phi, Route::TimeDomain, opts);
    r["time_domain"] = to_json(*t);
  }
  if (s && t) r["discrepancy"] = route_discrepancy(*s, *t);
  ctx.emit(r);
}

struct EvolveArgs {
  std::string state;
  std::string direction = "+";
  std::string mode = "wave-op";
  std::string kind = "omega";
  int nodes = 3000;
};

Json evolve_report(const Context& ctx, const WavePacket& phi, const EvolveArgs& a, const SpectrumOptions& so) {
  if (a.direction != "+" && a.direction != "-") throw SchemaError("direction must be + or -");
  if (a.kind != "omega" && a.kind != "reverse") throw SchemaError("kind must be omega or reverse");
  if (a.mode != "wave-op" && a.mode != "similarity") throw SchemaError("mode must be wave-op or similarity");
  const Direction d = a.direction == "+" ? Direction::Plus : Direction::Minus;
  WaveOptions opts;
  opts.nodes = a.nodes;
  opts.spectrum = so;
  const ScatteringSetup setup(ctx.p, {phi}, opts);
  const auto& op = setup.perturbed();
  Json r = {{"state", to_json(phi)}, {"box", op.box()}, {"nodes", op.size()}, {"T", setup.T()}};
  if (a.mode == "similarity") {
    r["similarity"] = to_json(similarity_residual(setup, {phi}, d));
    return r;
  }
  const VectorXc u = phi.sample(op.x());
  const auto res = setup.limit(u, d, a.kind == "omega" ? WaveKind::Omega : WaveKind::Reverse);
  r["wave_operator"] = to_json(res);
  std::vector<std::vector<Real>> trace, snap;
  for (const auto& g : res.trace) trace.push_back({g.t, g.difference, g.wall_mass});
  for (int i = 0; i < op.size(); ++i)
    snap.push_back({op.x()[i], u[i].real(), u[i].imag(), res.limit[i].real(), res.limit[i].imag()});
  const auto trace_csv = ctx.path(ctx.command + "_trace.csv");
  const auto snap_csv = ctx.path(ctx.command + "_snapshot.csv");
  write_csv(trace_csv, "t,difference,wall_mass", trace);
  write_csv(snap_csv, "x,re_phi,im_phi,re_limit,im_limit", snap);
  r["trace_csv"] = trace_csv.string();
  r["snapshot_csv"] = snap_csv.string();
  return r;
}

void run_evolve(const Common& c, const EvolveArgs& a) {
  Context ctx(c, "evolve");
  const WavePacket phi = state_from_json(read_json(a.state), c.seed);
  ctx.emit(evolve_report(ctx, phi, a, spectrum_options(c)));
}

void run_full_report(const Common& c, double a_weight, const std::string& state, int nodes) {
  Context ctx(c, "full-report");
  const Potential& p = ctx.p;
  Json r = Json::object();
  Json errors = Json::array();
  auto stage = [&](const std::string& name, auto&& fn) {
    try {
      fn();
      return true;
    } catch (const Error& e) {
      errors.push_back(error_json(name, e));
      return false;
    }
  };
  const Real a = a_weight > 0.0 ? a_weight : std::min(1.0, p.decay_rate());
  ctx.tolerances["a"] = a;

  stage("moments", [&] {
    Json m = {{"l1_norm", weighted_moment(p, {0.0, 0.0, 0.0})},
              {"first_moment", weighted_moment(p, {1.0, 0.0, 0.0})},
              {"min_enclosing_radius", min_enclosing_radius(p)},
              {"truncation_radius", p.is_zero() ? 0.0 : truncation_radius(p, c.tol)}};
    if (a > 0.0) m["exp_moment_a"] = weighted_moment(p, {0.0, a, 0.0});
    r["moments"] = m;
  });
  std::optional<SpectrumReport> spec;
  stage("spectrum", [&] {
    spec = locate_spectrum(p, spectrum_options(c));
    r["spectrum"] = to_json(*spec);
  });
  if (spec) {
    stage("certify", [&] {
      if (!(a > 0.0)) throw InapplicableError("certify: decay rate is zero, no exponential weight");
      r["certificate"] = to_json(optimize_bound(p, a, spec->count));
    });
    stage("corollary2", [&] { r["corollary2"] = to_json(corollary2_certificate(p, spec->count)); });
  }
  if (spec && spec->empty()) {
    const WavePacket phi = state.empty() ? packet_dictionary(1, c.seed)[0]
                                         : state_from_json(read_json(state), c.seed);
    r["state"] = to_json(phi);
    SmoothnessOptions so;
    so.grid_nodes = nodes;
    so.check_hypothesis = false;  // the spectrum stage already decided
    const auto factor = WeightedFactor::sqrt_potential(p);
    std::optional<SmoothnessResult> s, t;
    stage("smoothness_stationary", [&] { s = smoothness_integral(p, factor, phi, Route::Stationary, so); });
    stage("smoothness_time", [&] { t = smoothness_integral(p, factor, phi, Route::TimeDomain, so); });
    Json sm = Json::object();
    if (s) sm["stationary"] = to_json(*s);
    if (t) sm["time_domain"] = to_json(*t);
    if (s && t) sm["discrepancy"] = route_discrepancy(*s, *t);
    r["smoothness"] = sm;
    EvolveArgs ea;
    ea.nodes = nodes;
    SpectrumOptions spo = spectrum_options(c);
    stage("evolve", [&] { r["evolve"] = evolve_report(ctx, phi, ea, spo); });
  } else if (spec) {
    r["skipped"] = "smoothness and evolution need an empty spectrum";
  }
  r["errors"] = errors;
  ctx.emit(r);
}

int exit_code(const Error& e) {
  switch (e.category()) {
    case ErrorCategory::Schema:
    case ErrorCategory::Domain:
      return 2;
    case ErrorCategory::Hypothesis:
      return 3;
    case ErrorCategory::NonConvergence:
      return 4;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Jost functions, spectra, counting bounds and scattering for half-line Schrodinger operators"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  Common c;
  app.add_option("--potential", c.potential, "potential JSON file")->check(CLI::ExistingFile);
  app.add_option("--tol", c.tol, "residual / quadrature tolerance")->check(CLI::PositiveNumber);
  app.add_option("--threads", c.threads, "worker budget")->check(CLI::Range(1, 256));
  app.add_option("--out", c.out, "output directory");
  app.add_option("--seed", c.seed, "seed for the test-state dictionary");
  app.add_flag("--deterministic", c.deterministic, "zero the wall time in manifests");

  JostArgs ja;
  auto* jost = app.add_subcommand("jost", "Jost solution and function at one k");
  jost->add_option("--k", ja.k, "wavenumber as re,im")->required();
  jost->add_option("--grid", ja.grid, "number of x nodes")->check(CLI::Range(2, 1000000));
  jost->add_option("--x-max", ja.x_max, "right end of the x grid (default from the truncation radius)");
  jost->add_flag("--check-estimates", ja.check, "measure both sides of the solution estimates");
  jost->add_option("--alpha", ja.alpha, "exponent for the estimates")->check(CLI::Range(0.0, 1.0));

  std::string region = "auto";
  auto* spectrum = app.add_subcommand("spectrum", "zeros of the Jost function");
  spectrum->add_option("--region", region, "auto or x0,x1,y0,y1");

  double a = 0.0;
  bool corollary2 = false;
  auto* certify = app.add_subcommand("certify", "counting bound certificate");
  certify->add_option("--a", a, "exponential weight")->required()->check(CLI::PositiveNumber);
  certify->add_flag("--corollary2", corollary2, "also evaluate the single-integral bound");

  SmoothArgs sa;
  auto* smooth = app.add_subcommand("smoothness", "weighted resolvent / evolution integrals");
  smooth->add_option("--state", sa.state, "state JSON")->required()->check(CLI::ExistingFile);
  smooth->add_option("--route", sa.route, "stationary, time or both");
  smooth->add_option("--factor", sa.factor, "sqrt_potential, sqrt_abs_potential or indicator:lo,hi");
  smooth->add_option("--nodes", sa.nodes, "grid nodes for the time route")->check(CLI::Range(64, 1000000));

  EvolveArgs ea;
  auto* evolve = app.add_subcommand("evolve", "wave operators and the similarity residual");
  evolve->add_option("--state", ea.state, "state JSON")->required()->check(CLI::ExistingFile);
  evolve->add_option("--direction", ea.direction, "+ or -");
  evolve->add_option("--mode", ea.mode, "wave-op or similarity");
  evolve->add_option("--kind", ea.kind, "omega or reverse");
  evolve->add_option("--nodes", ea.nodes, "grid nodes")->check(CLI::Range(64, 1000000));

  double fa = 0.0;
  std::string fstate;
  int fnodes = 3000;
  auto* full = app.add_subcommand("full-report", "moments, spectrum, certificates and, if empty, dynamics");
  full->add_option("--a", fa, "exponential weight (default min(1, decay rate))");
  full->add_option("--state", fstate, "state JSON (default: first dictionary packet)");
  full->add_option("--nodes", fnodes, "grid nodes")->check(CLI::Range(64, 1000000));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (c.potential.empty()) {
    std::cerr << "--potential is required\n";
    return 2;
  }
  set_worker_budget(c.threads);
  try {
    if (*jost) run_jost(c, ja);
    else if (*spectrum) run_spectrum(c, region);
    else if (*certify) run_certify(c, a, corollary2);
    else if (*smooth) run_smoothness(c, sa);
    else if (*evolve) run_evolve(c, ea);
    else if (*full) run_full_report(c, fa, fstate, fnodes);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
