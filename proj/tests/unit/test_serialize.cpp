#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "symimg/errors.hpp"
#include "symimg/maps.hpp"
#include "symimg/serialize.hpp"

using namespace symimg;

TEST_SUITE("serialize") {
  TEST_CASE("format_double round-trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int t = 0; t < 500; ++t) {
      const double v = u(rng) / (1.0 + static_cast<double>(t));
      CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(1.0) == "1");
  }

  TEST_CASE("covering and graph shapes") {
    const auto g = build_symbolic_image(square_map(), initial_covering(Domain::interval(0.0, 1.0), {2}), EdgeMode::outer());
    const Json c = covering_json(*g->covering);
    CHECK(c["dim"] == 1);
    CHECK(c["cells"].size() == 2);
    CHECK(c["cells"][1]["lo"][0] == 0.5);
    CHECK(c["cells"][0]["parent"].is_null());
    CHECK(c["domain"]["wrap"][0] == false);
    const Json j = graph_json(*g, recurrent_vertices(*g));
    CHECK(j["edge_mode"] == "outer");
    CHECK(j["arcs"] == Json::parse("[[0,0],[1,0],[1,1]]"));
    CHECK(j["classes"] == Json::parse("[[0],[1]]"));
    CHECK(dump(j).back() == '\n');
  }

  TEST_CASE("flows and measures") {
    Flow f;
    f.weights[{0, 1}] = 0.5;
    f.weights[{1, 0}] = 0.5;
    const Json fj = flow_json(f, "graph.json");
    CHECK(fj["graph_ref"] == "graph.json");
    CHECK(fj["arcs"][0] == Json::parse("[0,1,0.5]"));
    ExactFlow e;
    e.weights[{0, 0}] = Rational(1, 3);
    e.weights[{1, 1}] = Rational(2, 3);
    const Json ej = exact_flow_json(e, "g");
    CHECK(ej["exact"][0][2] == "1/3");
    CellMeasure mu;
    mu.masses = {0.0, 1.0, 0.0};
    CHECK(measure_json(mu, "c")["masses"] == Json::parse("[[1,1.0]]"));
  }

  TEST_CASE("path round-trip and errors") {
    const PathWindow p{-2, {3, 1, 4, 1, 5}};
    CHECK(path_from_json(path_json(p)) == p);
    CHECK_THROWS_AS(path_from_json(Json::parse(R"({"offset":0})")), ParseError);
    CHECK_THROWS_AS(path_from_json(Json::parse(R"({"vertices":["a"]})")), ParseError);
  }

  TEST_CASE("orbit CSV round-trip") {
    const OrbitWindow o = orbit_segment(standard_map(0.9), {0.1, 0.3}, 25, 4);
    std::stringstream ss;
    write_orbit_csv(ss, o);
    CHECK(ss.str().rfind("k,x_0,x_1\n4,", 0) == 0);
    const OrbitWindow back = read_orbit_csv(ss);
    CHECK(back.offset == 4);
    CHECK(back.points == o.points);
  }

  TEST_CASE("malformed orbit CSV") {
    std::stringstream none("");
    CHECK_THROWS_AS(read_orbit_csv(none), ParseError);
    std::stringstream gap("k,x_0\n0,0.1\n2,0.2\n");
    CHECK_THROWS_AS(read_orbit_csv(gap), ParseError);
    std::stringstream width("k,x_0\n0,0.1,0.2\n");
    CHECK_THROWS_AS(read_orbit_csv(width), ParseError);
    std::stringstream text("k,x_0\n0,abc\n");
    CHECK_THROWS_AS(read_orbit_csv(text), ParseError);
  }

  TEST_CASE("spectrum shape") {
    const auto g = build_symbolic_image(rotation_map(0.25), initial_covering(Domain::circle(), {4}), EdgeMode::outer());
    const Json j = spectrum_json(spectrum(*g, frame(*g, [](const Point& x) { return x[0]; })));
    REQUIRE(j["classes"].size() == 1);
    CHECK(j["classes"][0]["size"] == 4);
    CHECK(j["classes"][0]["alpha"].get<double>() <= j["classes"][0]["beta"].get<double>());
  }
}
