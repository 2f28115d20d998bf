#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "symimg/errors.hpp"
#include "symimg/maps.hpp"
#include "symimg/oracles.hpp"
#include "symimg/spectrum.hpp"

using namespace symimg;

namespace {

double cos2pi(const Point& x) { return std::cos(2.0 * std::numbers::pi * x[0]); }

}  // namespace

TEST_SUITE("spectrum") {
  TEST_CASE("framings at cell centers") {
    const auto rot = build_symbolic_image(rotation_map(0.25), initial_covering(Domain::circle(), {4}), EdgeMode::outer());
    const Framing f = frame(*rot, cos2pi);
    const double h = std::sqrt(0.5);
    CHECK(f.values[0] == doctest::Approx(h));
    CHECK(f.values[1] == doctest::Approx(-h));
    CHECK(f.values[2] == doctest::Approx(-h));
    CHECK(f.values[3] == doctest::Approx(h));
    CHECK(frame(*rot, [](const Point&) { return 2.5; }).values == std::vector<double>(4, 2.5));
    CHECK_THROWS_AS(frame(*rot, [](const Point&) { return std::nan(""); }), PreconditionError);

    const auto sq = build_symbolic_image(square_map(), initial_covering(Domain::interval(0.0, 1.0), {2}), EdgeMode::outer());
    CHECK(frame(*sq, [](const Point& x) { return x[0]; }).values == std::vector<double>{0.25, 0.75});
  }

  TEST_CASE("mean cycles on hand cases") {
    const Digraph two(2, {{0, 1}, {1, 0}});
    const auto lo = min_mean_cycle(two, std::vector<double>{0.0, 1.0});
    CHECK(lo.value == doctest::Approx(0.5));
    CHECK(lo.cycle == SimpleCycle{{0, 1}});
    const Digraph loop(1, {{0, 0}});
    const auto one = max_mean_cycle(loop, std::vector<Rational>{Rational(2)});
    CHECK(one.value == Rational(2));
    CHECK(one.cycle == SimpleCycle{{0}});
    const auto flat = max_mean_cycle(two, std::vector<Rational>{Rational(3, 2), Rational(3, 2)});
    CHECK(flat.value == Rational(3, 2));
    CHECK_THROWS_AS(min_mean_cycle(Digraph(2, {{0, 1}}), std::vector<double>{0, 0}), PreconditionError);
    CHECK_THROWS_AS(min_mean_cycle(Digraph(1), std::vector<double>{0}), PreconditionError);
  }

  TEST_CASE("spectrum over classes with separate cycles") {
    // {0,1} form a 2-cycle, {2} a self-loop: two classes.
    const auto cov = initial_covering(Domain::interval(0.0, 1.0), {3});
    auto g = std::make_shared<SymbolicImage>();
    g->covering = cov;
    g->graph = Digraph(3, {{0, 1}, {1, 0}, {2, 2}});
    Framing f{{0.0, 1.0, 5.0}, "b"};
    const auto spec = spectrum(*g, f);
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].alpha == 0.5);
    CHECK(spec[0].beta == 0.5);
    CHECK(spec[0].min_cycle == SimpleCycle{{0, 1}});
    CHECK(spec[1].alpha == 5.0);
    CHECK(spec[1].max_cycle == SimpleCycle{{2}});
  }

  TEST_CASE("Karp agrees with brute-force enumeration") {
    std::mt19937_64 rng(41);
    for (int t = 0; t < 60; ++t) {
      const Digraph g = oracle::random_strong_graph(1 + rng() % 8, 0.1 + 0.35 * oracle::uniform(rng), rng);
      std::vector<Rational> b;
      std::vector<double> bd;
      for (std::size_t v = 0; v < g.size(); ++v) {
        b.emplace_back(static_cast<std::int64_t>(rng() % 41) - 20, 1 + static_cast<std::int64_t>(rng() % 6));
        bd.push_back(b.back().to_double());
      }
      const auto lo = min_mean_cycle(g, b);
      const auto hi = max_mean_cycle(g, b);
      CHECK(lo.value == oracle::brute_min_mean(g, b));
      CHECK(hi.value == oracle::brute_max_mean(g, b));
      Rational sum;
      for (int v : lo.cycle.vertices) sum += b[static_cast<std::size_t>(v)];
      CHECK(sum / Rational(static_cast<std::int64_t>(lo.cycle.size())) == lo.value);
      validate_cycle(lo.cycle, g);
      validate_cycle(hi.cycle, g);
      CHECK(min_mean_cycle(g, bd).value == doctest::Approx(oracle::brute_min_mean(g, bd)));
      CHECK(max_mean_cycle(g, bd).value == doctest::Approx(oracle::brute_max_mean(g, bd)));
    }
  }

  TEST_CASE("rotation on four cells") {
    const auto g = build_symbolic_image(rotation_map(0.25), initial_covering(Domain::circle(), {4}), EdgeMode::outer());
    const auto spec = spectrum(*g, frame(*g, cos2pi));
    REQUIRE(spec.size() == 1);
    const double third = std::sqrt(0.5) / 3.0;
    CHECK(spec[0].alpha == doctest::Approx(-third));
    CHECK(spec[0].beta == doctest::Approx(third));
    CHECK(spec[0].min_cycle.size() == 3);
    CHECK(spec[0].max_cycle.size() == 3);
  }

  TEST_CASE("squaring map endpoints and extremal measures") {
    const auto g = build_symbolic_image(square_map(), initial_covering(Domain::interval(0.0, 1.0), {2}), EdgeMode::outer());
    const ScalarFunction x = [](const Point& p) { return p[0]; };
    const auto spec = spectrum(*g, frame(*g, x));
    REQUIRE(spec.size() == 2);
    CHECK(spec[0].alpha == 0.25);
    CHECK(spec[0].beta == 0.25);
    CHECK(spec[1].alpha == 0.75);
    CHECK(spec[1].beta == 0.75);
    const auto ext = extremal_measures(*g, spec);
    CHECK(ext[1].mu_beta.masses == std::vector<double>{0.0, 1.0});
    CHECK(integrate(ext[1].mu_beta, x) == spec[1].beta);
  }

  TEST_CASE("constant functions give degenerate intervals") {
    const auto g = build_symbolic_image(cat_map(), initial_covering(Domain::unit_torus(), {4, 4}), EdgeMode::outer());
    const ScalarFunction c = [](const Point&) { return 0.75; };
    const auto spec = spectrum(*g, frame(*g, c));
    for (const auto& iv : spec) {
      CHECK(iv.alpha == doctest::Approx(0.75));
      CHECK(iv.beta == doctest::Approx(0.75));
    }
    for (const auto& em : extremal_measures(*g, spec)) {
      CHECK(integrate(em.mu_alpha, c) == doctest::Approx(0.75));
      CHECK(integrate(em.mu_beta, c) == doctest::Approx(0.75));
    }
  }

  TEST_CASE("rotation spectrum shrinks with depth") {
    const Localization loc =
        localize(rotation_map((std::sqrt(5.0) - 1.0) / 2.0), Domain::circle(), {8}, 5, EdgeMode::outer());
    double width = 1e9;
    for (const auto& lv : loc.levels) {
      const auto spec = spectrum(*lv.image, frame(*lv.image, cos2pi));
      REQUIRE(spec.size() == 1);
      CHECK(spec[0].beta - spec[0].alpha <= width);
      width = spec[0].beta - spec[0].alpha;
      const auto ext = extremal_measures(*lv.image, spec);
      CHECK(std::abs(integrate(ext[0].mu_beta, cos2pi) - spec[0].beta) <= 1e-12);
    }
  }
}
