#include "doctest.h"

#include "halfline/io.hpp"

using namespace halfline;

TEST_CASE("potential schema round trip") {
  const std::vector<Potential> ps = {Potential::well({-2.0, -2.0}, 1.5), Potential::exponential(-3.0, 0.5),
                                     Potential::gaussian({1.0, 0.5}, 2.0, 0.7),
                                     Potential::piecewise({1.0, 2.0}, {-1.0, 0.5})};
  for (const auto& p : ps) {
    const Potential q = potential_from_json(potential_to_json(p));
    for (Real x : {0.1, 0.9, 1.4, 1.7, 3.0}) CHECK(std::abs(q(x) - p(x)) == 0.0);
    CHECK(q.decay_rate() == p.decay_rate());
  }
  const auto c = potential_from_json(Json::parse(R"j({"family":"well","params":{"value":[-1,2],"width":1,"conjugate":true}})j"));
  CHECK(c(0.5) == Complex(-1.0, -2.0));
  const auto e = potential_from_json(
      Json::parse(R"j({"family":"expression","params":{"source":"-2*exp(-x)"},"decay_rate_a":1})j"));
  CHECK(std::abs(e(1.0) + 2.0 * std::exp(-1.0)) < 1e-14);
}

TEST_CASE("schema violations") {
  for (const char* bad : {R"j([])j", R"j({"params":{}})j", R"j({"family":"square"})j",
                          R"j({"family":"well","params":{"value":"deep","width":1}})j",
                          R"j({"family":"well","params":{"value":-1}})j",
                          R"j({"family":"exponential","params":{"c":-1},"decay_rate_a":2})j",
                          R"j({"family":"expression","params":{"source":"exp(-x)"}})j",
                          R"j({"family":"well","params":{"value":-1,"width":1},"support":-1})j",
                          R"j({"family":"well","params":{"value":[1,2,3],"width":1}})j"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(potential_from_json(Json::parse(bad)), SchemaError);
  }
  CHECK_THROWS_AS(load_potential("/nonexistent/potential.json"), SchemaError);
  CHECK_THROWS_AS(state_from_json(Json::parse(R"j({"center":1})j"), 7), SchemaError);
  CHECK_THROWS_AS(state_from_json(Json::parse(R"j({"dictionary":-1})j"), 7), SchemaError);
}

TEST_CASE("states and digests") {
  const auto w = state_from_json(Json::parse(R"j({"dictionary":2})j"), 7);
  CHECK(w.center() == packet_dictionary(3, 7)[2].center());
  const auto v = state_from_json(to_json(w), 7);
  CHECK(v.momentum() == w.momentum());
  // published FNV-1a 64 test vectors
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}
