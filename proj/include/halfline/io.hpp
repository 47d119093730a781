#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "json.hpp"

#include "halfline/bounds.hpp"
#include "halfline/dynamics.hpp"
#include "halfline/potential.hpp"
#include "halfline/resolvent.hpp"
#include "halfline/solver.hpp"
#include "halfline/spectrum.hpp"
#include "halfline/states.hpp"

namespace halfline {

using Json = nlohmann::json;

/// Complex numbers travel as [re, im]; a bare number is read as real.
Complex complex_from_json(const Json& j);
Json to_json(Complex z);

/// Potential schema:
///   { "family": "well" | "exponential" | "gaussian" | "sampled" | "expression",
///     "params": {...}, "decay_rate_a": number, "support": number | null }
/// well:        value, width  (or edges, levels for several steps)
/// exponential: c, ell
/// gaussian:    c, center, width
/// sampled:     x, values
/// expression:  source (decay_rate_a required, support optional)
/// Any family may carry "conjugate": true in params. Throws SchemaError.
Potential potential_from_json(const Json& j);
Json potential_to_json(const Potential& p);
/// Reads and parses a file; the raw text is returned through `text` for hashing.
Potential load_potential(const std::string& path, std::string* text = nullptr);

/// { "center", "width", "momentum" } or { "dictionary": i } (i-th packet of
/// packet_dictionary(i + 1, seed)).
WavePacket state_from_json(const Json& j, std::uint64_t seed);
Json to_json(const WavePacket& w);

/// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

struct RunManifest {
  std::string command;
  std::string potential_digest;
  std::map<std::string, double> tolerances;
  std::string version;
  double wall_time = 0.0;  // 0 in deterministic mode
  int threads = 1;
  std::uint64_t seed = 7;
};
Json to_json(const RunManifest& m);

Json to_json(const SpectralPoint& p);
Json to_json(const SpectrumReport& r);
Json to_json(const BoundCertificate& c);
Json to_json(const Corollary2Result& c);
Json to_json(const EstimateCheck& c);
Json to_json(const EstimateReport& r);
Json to_json(const SmoothnessResult& r);
Json to_json(const WaveOperatorResult& r);
Json to_json(const SimilarityResult& r);
Json to_json(const StationaryForm& f);

}  // namespace halfline
