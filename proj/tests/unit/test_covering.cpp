#include <doctest.h>

#include <cmath>
#include <random>

#include "symimg/covering.hpp"
#include "symimg/errors.hpp"

using namespace symimg;

TEST_SUITE("covering") {
  TEST_CASE("uniform grids") {
    const auto c = initial_covering(Domain::circle(), {4});
    REQUIRE(c->size() == 4);
    CHECK(c->cell(1).box == Box{{0.25}, {0.5}});
    CHECK(c->diameter() == 0.25);
    CHECK(c->volume() == doctest::Approx(1.0));

    const auto sq = initial_covering(Domain({0, 0}, {1, 1}, {false, false}), {2, 2});
    CHECK(sq->size() == 4);
    CHECK(sq->diameter() == doctest::Approx(std::sqrt(2.0) / 2.0));

    const auto one = initial_covering(Domain::circle(), {1});
    CHECK(one->size() == 1);
    CHECK(one->cell(0).box == Domain::circle().box());
  }

  TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(initial_covering(Domain::circle(), {0}), PreconditionError);
    CHECK_THROWS_AS(initial_covering(Domain::circle(), {2, 2}), PreconditionError);
  }

  TEST_CASE("full bisection keeps lineage") {
    const auto c = initial_covering(Domain::circle(), {4});
    const Subdivision s = subdivide(*c, {0, 1, 2, 3}, SubdivisionScheme::all_axes);
    REQUIRE(s.covering->size() == 8);
    CHECK(s.covering->diameter() == 0.125);
    for (int k = 0; k < 8; ++k) {
      CHECK(s.parent_map[static_cast<std::size_t>(k)] == k / 2);
      CHECK(s.covering->cell(k).depth == 1);
      CHECK(s.covering->cell(k).parent == k / 2);
    }
  }

  TEST_CASE("partial subdivision with the rest kept") {
    const auto c = initial_covering(Domain::circle(), {4});
    const Subdivision s = subdivide(*c, {0}, SubdivisionScheme::all_axes, true);
    CHECK(s.covering->size() == 5);
    CHECK(s.covering->diameter() == 0.25);
    CHECK(s.covering->volume() == doctest::Approx(1.0));
    CHECK(s.covering->cell(2).depth == 0);
    CHECK(s.parent_map == std::vector<int>{0, 0, 1, 2, 3});
    CHECK_THROWS_AS(subdivide(*c, {}, SubdivisionScheme::all_axes), PreconditionError);
    CHECK_THROWS_AS(subdivide(*c, {9}, SubdivisionScheme::all_axes), PreconditionError);
  }

  TEST_CASE("diameters halve under repeated subdivision") {
    auto c = initial_covering(Domain::interval(0.0, 1.0), {3});
    const double d0 = c->diameter();
    for (int t = 1; t <= 6; ++t) {
      std::vector<int> all(c->size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      c = subdivide(*c, all, SubdivisionScheme::all_axes).covering;
      CHECK(c->diameter() == doctest::Approx(d0 / std::pow(2.0, t)));
    }
  }

  TEST_CASE("longest-axis scheme splits one axis") {
    const auto c = initial_covering(Domain({0, 0}, {2, 1}, {false, false}), {1, 1});
    const Subdivision s = subdivide(*c, {0}, SubdivisionScheme::longest_axis);
    REQUIRE(s.covering->size() == 2);
    CHECK(s.covering->cell(0).box == Box{{0, 0}, {1, 1}});
    CHECK(s.covering->cell(1).box == Box{{1, 0}, {2, 1}});
    const Subdivision a = subdivide(*c, {0}, SubdivisionScheme::all_axes);
    CHECK(a.covering->size() == 4);
  }

  TEST_CASE("members and locate follow the attribution rule") {
    const auto c = initial_covering(Domain::circle(), {4});
    CHECK(c->members({0.1}) == std::vector<int>{0});
    CHECK(c->members({0.25}) == std::vector<int>{0, 1});
    CHECK(c->locate({0.25}) == 1);
    CHECK(c->locate({0.0}) == 0);
    CHECK(c->locate({1.0}) == 0);
    CHECK(c->members({0.0}) == std::vector<int>{0, 3});

    const auto sq = initial_covering(Domain({0, 0}, {1, 1}, {false, false}), {2, 2});
    CHECK(sq->members({0.5, 0.5}).size() == 4);
    const int owner = sq->locate({0.5, 0.5});
    CHECK(sq->cell(owner).box.lo == Point{0.5, 0.5});
    // The top face of a non-wrapped domain belongs to the last cell.
    CHECK(sq->cell(sq->locate({1.0, 1.0})).box.hi == Point{1.0, 1.0});

    const auto line = initial_covering(Domain::interval(0.0, 1.0), {2});
    CHECK_THROWS_AS(line->members({1.5}), NotCoveredError);
  }

  TEST_CASE("locate on a partial covering") {
    const auto c = initial_covering(Domain::interval(0.0, 1.0), {4});
    const Subdivision s = subdivide(*c, {1}, SubdivisionScheme::all_axes);
    CHECK(s.covering->locate({0.375}) == 1);
    CHECK(s.covering->locate({0.5}) == 1);
    CHECK_THROWS_AS(s.covering->members({0.75}), NotCoveredError);
  }

  TEST_CASE("grid index agrees with a linear scan") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto c = initial_covering(Domain::unit_torus(), {8, 8});
    std::vector<int> half;
    for (int i = 0; i < 64; i += 3) half.push_back(i);
    c = subdivide(*c, half, SubdivisionScheme::all_axes, true).covering;
    for (int t = 0; t < 300; ++t) {
      const double x0 = u(rng), y0 = u(rng);
      const Box q{{x0, y0}, {x0 + 0.3 * u(rng), y0 + 0.3 * u(rng)}};
      std::vector<int> expect;
      for (const Cell& cell : c->cells())
        if (c->domain().meets_half_open(q, cell.box)) expect.push_back(cell.id);
      CHECK(c->intersecting(q) == expect);
    }
  }
}
