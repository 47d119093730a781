#include "halfline/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace halfline {

namespace {

const Json& require(const Json& obj, const char* key, const char* where) {
  if (!obj.is_object() || !obj.contains(key))
    throw SchemaError(std::string(where) + ": missing \"" + key + "\"");
  return obj.at(key);
}

Real real_from(const Json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  const Real v = j.get<Real>();
  if (!std::isfinite(v)) throw SchemaError(std::string(what) + " must be finite");
  return v;
}

Real real_param(const Json& params, const char* key, const char* where) {
  return real_from(require(params, key, where), key);
}

template <class T>
std::vector<T> list(const Json& j, const char* what, T (*conv)(const Json&)) {
  if (!j.is_array() || j.empty()) throw SchemaError(std::string(what) + " must be a nonempty array");
  std::vector<T> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(conv(e));
  return out;
}

Real plain_real(const Json& j) { return real_from(j, "array entry"); }

Json to_json(const VectorXr& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Json region_json(const SearchRegion& r) {
  return {{"x0", r.x0}, {"x1", r.x1}, {"y0", r.y0}, {"y1", r.y1}, {"exclusion_radius", r.exclusion_radius}};
}

}  // namespace

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return real_from(j, "complex value");
  if (j.is_array() && j.size() == 2) return {real_from(j[0], "real part"), real_from(j[1], "imaginary part")};
  throw SchemaError("complex numbers are written as [re, im]");
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Potential potential_from_json(const Json& j) {
  if (!j.is_object()) throw SchemaError("potential: expected a JSON object");
  const Json& fam = require(j, "family", "potential");
  if (!fam.is_string()) throw SchemaError("potential: family must be a string");
  const std::string family = fam.get<std::string>();
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  if (!params.is_object()) throw SchemaError("potential: params must be an object");
  std::optional<Real> support;
  if (j.contains("support") && !j.at("support").is_null()) {
    support = real_from(j.at("support"), "support");
    if (!(*support > 0.0)) throw SchemaError("potential: support must be positive");
  }
  std::optional<Real> decay;
  if (j.contains("decay_rate_a") && !j.at("decay_rate_a").is_null()) {
    decay = real_from(j.at("decay_rate_a"), "decay_rate_a");
    if (*decay < 0.0) throw SchemaError("potential: decay_rate_a must be nonnegative");
  }

  Potential p = Potential::zero();
  if (family == "well") {
    if (params.contains("edges")) {
      p = Potential::piecewise(list<Real>(params.at("edges"), "edges", plain_real),
                               list<Complex>(require(params, "levels", "well"), "levels", complex_from_json));
    } else {
      p = Potential::well(complex_from_json(require(params, "value", "well")),
                          real_param(params, "width", "well"));
    }
  } else if (family == "exponential") {
    const Real ell = params.contains("ell") ? real_param(params, "ell", "exponential") : 1.0;
    p = Potential::exponential(complex_from_json(require(params, "c", "exponential")), ell);
  } else if (family == "gaussian") {
    p = Potential::gaussian(complex_from_json(require(params, "c", "gaussian")),
                            real_param(params, "center", "gaussian"), real_param(params, "width", "gaussian"));
  } else if (family == "sampled") {
    p = Potential::sampled(list<Real>(require(params, "x", "sampled"), "x", plain_real),
                           list<Complex>(require(params, "values", "sampled"), "values", complex_from_json));
  } else if (family == "expression") {
    const Json& src = require(params, "source", "expression");
    if (!src.is_string()) throw SchemaError("expression: source must be a string");
    if (!decay) throw SchemaError("expression: decay_rate_a is required");
    p = Potential::expression(src.get<std::string>(), *decay, support);
  } else {
    throw SchemaError("potential: unknown family \"" + family + "\"");
  }
  if (family != "expression") {
    // closed-form families know their own decay and support; a declared value
    // may be more conservative but not more optimistic
    if (decay && *decay > p.decay_rate())
      throw SchemaError("potential: decay_rate_a exceeds the family's decay rate");
  }
  if (params.contains("conjugate")) {
    if (!params.at("conjugate").is_boolean()) throw SchemaError("potential: conjugate must be a boolean");
    if (params.at("conjugate").get<bool>()) p = p.conjugate();
  }
  return p;
}

Json potential_to_json(const Potential& p) {
  Json params = Json::object();
  switch (p.family()) {
    case Family::Well:
      if (p.edges().size() == 1) {
        params["value"] = to_json(p.levels()[0]);
        params["width"] = p.edges()[0];
      } else {
        params["edges"] = p.edges();
        Json lv = Json::array();
        for (auto z : p.levels()) lv.push_back(to_json(z));
        params["levels"] = lv;
      }
      break;
    case Family::Exponential:
      params["c"] = to_json(p.strength());
      params["ell"] = p.length();
      break;
    case Family::Gaussian:
      params["c"] = to_json(p.strength());
      params["center"] = p.center();
      params["width"] = p.length();
      break;
    case Family::Sampled: {
      params["x"] = p.edges();
      Json lv = Json::array();
      for (auto z : p.levels()) lv.push_back(to_json(z));
      params["values"] = lv;
      break;
    }
    case Family::Expression:
      params["source"] = p.source();
      break;
  }
  if (p.conjugated()) params["conjugate"] = true;
  Json j = {{"family", to_string(p.family())}, {"params", params}};
  j["decay_rate_a"] = std::isfinite(p.decay_rate()) ? Json(p.decay_rate()) : Json(nullptr);
  j["support"] = p.support() ? Json(*p.support()) : Json(nullptr);
  return j;
}

Potential load_potential(const std::string& path, std::string* text) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot read potential file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string raw = buf.str();
  if (text) *text = raw;
  Json j;
  try {
    j = Json::parse(raw);
  } catch (const Json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return potential_from_json(j);
}

WavePacket state_from_json(const Json& j, std::uint64_t seed) {
  if (!j.is_object()) throw SchemaError("state: expected a JSON object");
  if (j.contains("dictionary")) {
    const Json& d = j.at("dictionary");
    if (!d.is_number_integer() || d.get<int>() < 0) throw SchemaError("state: dictionary must be an index >= 0");
    const int i = d.get<int>();
    return packet_dictionary(i + 1, seed)[i];
  }
  try {
    return WavePacket(real_param(j, "center", "state"), real_param(j, "width", "state"),
                      real_param(j, "momentum", "state"));
  } catch (const DomainError& e) {
    throw SchemaError(std::string("state: ") + e.what());
  }
}

Json to_json(const WavePacket& w) {
  return {{"center", w.center()}, {"width", w.width()}, {"momentum", w.momentum()}};
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

Json to_json(const RunManifest& m) {
  Json tol = Json::object();
  for (const auto& [k, v] : m.tolerances) tol[k] = v;
  return {{"command", m.command},   {"potential_digest", m.potential_digest},
          {"tolerances", tol},      {"version", m.version},
          {"wall_time", m.wall_time}, {"threads", m.threads},
          {"seed", m.seed}};
}

Json to_json(const SpectralPoint& p) {
  return {{"k", to_json(p.k)},
          {"lambda", to_json(p.lambda)},
          {"multiplicity", p.multiplicity},
          {"kind", to_string(p.kind)},
          {"residual", p.residual},
          {"ambiguous", p.ambiguous}};
}

Json to_json(const SpectrumReport& r) {
  Json pts = Json::array(), below = Json::array();
  for (const auto& p : r.points) pts.push_back(to_json(p));
  for (const auto& p : r.below_axis) below.push_back(to_json(p));
  return {{"count", r.count},
          {"points", pts},
          {"below_axis", below},
          {"region", region_json(r.region)},
          {"radius", r.radius},
          {"delta_sing", r.delta_sing},
          {"region_count", r.region_count},
          {"notes", r.notes}};
}

Json to_json(const BoundCertificate& c) {
  return {{"a", c.a},
          {"alpha", c.alpha},
          {"beta", c.beta},
          {"A", c.A},
          {"R_used", c.R_used},
          {"A_min", c.A_min},
          {"bound_value", c.bound_value},
          {"computed_count", c.computed_count},
          {"satisfied", c.satisfied},
          {"grid_points", c.grid_points},
          {"grid_minimum", std::isfinite(c.grid_minimum) ? Json(c.grid_minimum) : Json(nullptr)}};
}

Json to_json(const Corollary2Result& c) {
  return {{"b", c.b},
          {"bound_value", c.bound_value},
          {"short_circuit", c.short_circuit},
          {"computed_count", c.computed_count},
          {"satisfied", c.satisfied}};
}

Json to_json(const EstimateCheck& c) {
  return {{"name", c.name},
          {"applicable", c.applicable},
          {"note", c.note},
          {"holds", c.holds},
          {"worst_ratio", c.worst_ratio},
          {"lhs", to_json(c.lhs)},
          {"rhs", to_json(c.rhs)}};
}

Json to_json(const EstimateReport& r) {
  return {{"k", to_json(r.k)},
          {"alpha", r.alpha},
          {"x", to_json(r.x)},
          {"jost_deviation", to_json(r.jost_deviation)},
          {"jost_bound", to_json(r.jost_bound)},
          {"regular_bound", to_json(r.regular_bound)},
          {"jost_function", to_json(r.jost_function)},
          {"all_hold", r.all_hold()}};
}

Json to_json(const SmoothnessResult& r) {
  return {{"route", to_string(r.route)},
          {"value", r.value},
          {"tail_estimate", r.tail_estimate},
          {"truncation", r.truncation},
          {"evaluations", r.evaluations}};
}

Json to_json(const WaveOperatorResult& r) {
  Json trace = Json::array();
  for (const auto& g : r.trace)
    trace.push_back({{"t", g.t}, {"difference", g.difference}, {"wall_mass", g.wall_mass}});
  return {{"direction", to_string(r.direction)},
          {"kind", to_string(r.kind)},
          {"trace", trace},
          {"converged", r.converged},
          {"monotone", r.monotone}};
}

Json to_json(const SimilarityResult& r) {
  return {{"residuals", r.residuals}, {"max_residual", r.max_residual}};
}

Json to_json(const StationaryForm& f) {
  return {{"value", to_json(f.value)},
          {"overlap", to_json(f.overlap)},
          {"correction", to_json(f.correction)},
          {"error", f.error},
          {"evaluations", f.evaluations}};
}

}  // namespace halfline
