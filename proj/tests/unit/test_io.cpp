#include "doctest.h"
#include "orthodec/error.hpp"
#include "orthodec/io.hpp"

using namespace orthodec;

TEST_CASE("chaos element JSON round trip") {
  const ChaosElement f(2, {{{0, 0}, 0.1}, {{3, 1}, -2.5}});
  const Json j = to_json(f);
  CHECK(j["d"] == 2);
  CHECK(j["entries"].size() == 2);
  CHECK(chaos_from_json(j) == f);
  CHECK(chaos_from_json(Json::parse(j.dump())) == f);
}

TEST_CASE("malformed chaos JSON is rejected") {
  CHECK_THROWS_AS(chaos_from_json(Json::parse(R"({"entries": []})")), InputError);
  CHECK_THROWS_AS(chaos_from_json(Json::parse(R"({"d": 1, "entries": [{"index": [0, 1], "coeff": 1}]})")),
                  InputError);
  CHECK_THROWS_AS(
      chaos_from_json(Json::parse(R"({"d": 1, "entries": [{"index": [0], "coeff": 1}, {"index": [0], "coeff": 2}]})")),
      InputError);
}

TEST_CASE("decomposition JSON round trip") {
  Decomposition dec(2);
  dec.m = ChaosElement(2, {{{0, 0}, 3.0}});
  dec.set_term(axis_bit(2), ChaosElement(2, {{{0, 1}, -1.0}}));
  dec.corner = ChaosElement(2, {{{1, 1}, 0.5}});
  const Decomposition back = decomposition_from_json(Json::parse(to_json(dec).dump()));
  CHECK(back.m == dec.m);
  CHECK(back.boundary_terms == dec.boundary_terms);
  CHECK(back.corner == dec.corner);
  Json bad = to_json(dec);
  bad["mJ"]["3"] = to_json(ChaosElement(2));
  CHECK_THROWS_AS(decomposition_from_json(bad), InputError);
}

TEST_CASE("laws and rectangles from JSON") {
  CHECK(law_from_json("rademacher").kind() == InnovationLaw::Kind::rademacher);
  CHECK(law_from_json("gaussian:2.5").variance() == 2.5);
  const auto c = law_from_json(Json::parse(R"({"kind": "custom", "points": [-2, 2], "probs": [0.5, 0.5]})"));
  CHECK(c.variance() == 4.0);
  CHECK_THROWS_AS(law_from_json("cauchy"), InputError);
  CHECK(rect_from_json(Json::parse("[0.5, 1]")) == Rect::quadrant({0.5, 1.0}));
  CHECK(rect_from_json(Json::parse(R"({"lower": [0.25], "upper": [0.75]})")) == Rect({0.25}, {0.75}));
}

TEST_CASE("hashing") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(0xabcull) == "0000000000000abc");
}
