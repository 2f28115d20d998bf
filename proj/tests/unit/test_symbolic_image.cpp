#include <doctest.h>

#include <cmath>

#include "symimg/errors.hpp"
#include "symimg/maps.hpp"
#include "symimg/symbolic_image.hpp"

using namespace symimg;

namespace {

std::vector<Arc> rotation_arcs(int n, int step) {
  std::vector<Arc> arcs;
  for (int i = 0; i < n; ++i) {
    arcs.emplace_back(i, (i + step) % n);
    arcs.emplace_back(i, (i + step + 1) % n);
  }
  return Digraph(static_cast<std::size_t>(n), arcs).arcs();
}

}  // namespace

TEST_SUITE("symbolic image") {
  TEST_CASE("rotation by a quarter on four cells") {
    const auto g = build_symbolic_image(rotation_map(0.25), initial_covering(Domain::circle(), {4}), EdgeMode::outer());
    CHECK(g->graph.arcs() == rotation_arcs(4, 1));
    CHECK(g->q == doctest::Approx(0.25));
    const auto rc = recurrent_vertices(*g);
    CHECK(rc.classes == std::vector<std::vector<int>>{{0, 1, 2, 3}});
    const Neighborhood p = chain_recurrent_neighborhood(*g, rc);
    CHECK(p.cells.size() == 4);
    CHECK(p.volume == doctest::Approx(1.0));
  }

  TEST_CASE("identity map: self-arcs plus the touching successor") {
    const auto g = build_symbolic_image(identity_map(), initial_covering(Domain::circle(), {4}), EdgeMode::outer());
    CHECK(g->graph.arcs() == rotation_arcs(4, 0));
  }

  TEST_CASE("squaring map on two cells") {
    const auto g = build_symbolic_image(square_map(), initial_covering(Domain::interval(0.0, 1.0), {2}), EdgeMode::outer());
    CHECK(g->graph.arcs() == std::vector<Arc>{{0, 0}, {1, 0}, {1, 1}});
    const auto rc = recurrent_vertices(*g);
    CHECK(rc.vertices == std::vector<int>{0, 1});
    CHECK(rc.classes == std::vector<std::vector<int>>{{0}, {1}});
    CHECK(chain_recurrent_neighborhood(*g).cells == std::vector<int>{0, 1});
  }

  TEST_CASE("sample mode is a subset of outer mode") {
    for (const SystemMap& m : {rotation_map(0.3), square_map(), cat_map(), standard_map(0.7)}) {
      const std::vector<int> splits(m.domain().dim(), m.domain().dim() == 1 ? 32 : 8);
      const auto cov = initial_covering(m.domain(), splits);
      const auto outer = build_symbolic_image(m, cov, EdgeMode::outer());
      const auto sample = build_symbolic_image(m, cov, EdgeMode::sample(4));
      for (const Arc& a : sample->graph.arcs()) CHECK(outer->graph.has_arc(a.first, a.second));
      CHECK(sample->graph.arc_count() <= outer->graph.arc_count());
    }
  }

  TEST_CASE("threaded construction is deterministic") {
    const auto cov = initial_covering(Domain::unit_torus(), {16, 16});
    const auto a = build_symbolic_image(cat_map(), cov, EdgeMode::outer(), 1);
    const auto b = build_symbolic_image(cat_map(), cov, EdgeMode::outer(), 4);
    CHECK(a->graph == b->graph);
    CHECK(a->image_diameters == b->image_diameters);
  }

  TEST_CASE("domain mismatch is a precondition error") {
    CHECK_THROWS_AS(build_symbolic_image(square_map(), initial_covering(Domain::circle(), {4}), EdgeMode::outer()),
                    PreconditionError);
  }

  TEST_CASE("localization of the squaring map") {
    const Localization loc = localize(square_map(), Domain::interval(0.0, 1.0), {2}, 4, EdgeMode::outer());
    REQUIRE(loc.levels.size() == 4);
    CHECK_FALSE(loc.empty_terminal);
    const auto& last = loc.levels.back();
    const double d = last.image->diameter();
    CHECK(d == 0.0625);
    CHECK(last.neighborhood.volume <= 4.0 * d);
    bool has0 = false, has1 = false;
    for (int id : last.neighborhood.cells) {
      const Box& b = last.image->covering->cell(id).box;
      has0 = has0 || b.lo[0] == 0.0;
      has1 = has1 || b.hi[0] == 1.0;
    }
    CHECK(has0);
    CHECK(has1);
    for (std::size_t t = 1; t < loc.levels.size(); ++t)
      CHECK(loc.levels[t].neighborhood.volume <= loc.levels[t - 1].neighborhood.volume);
  }

  TEST_CASE("rotation keeps every cell") {
    const Localization loc = localize(rotation_map(0.3), Domain::circle(), {4}, 4, EdgeMode::outer());
    for (const auto& lv : loc.levels) CHECK(lv.neighborhood.volume == doctest::Approx(1.0));
    CHECK(loc.levels.back().image->size() == 32);
  }

  TEST_CASE("a shift with no recurrence terminates empty") {
    const Localization loc = localize(affine_map(1.0, 0.6), Domain::interval(0.0, 1.0), {4}, 3, EdgeMode::outer());
    CHECK(loc.empty_terminal);
    CHECK(loc.levels.size() == 1);
    CHECK(loc.levels[0].recurrent.vertices.empty());
  }

  TEST_CASE("depth must be positive") {
    CHECK_THROWS_AS(localize(square_map(), Domain::interval(0.0, 1.0), {2}, 0, EdgeMode::outer()),
                    PreconditionError);
  }

  TEST_CASE("subdivision map sends child arcs to parent arcs") {
    const auto parent_cov = initial_covering(Domain::circle(), {4});
    const Subdivision sub = subdivide(*parent_cov, {0, 1, 2, 3}, SubdivisionScheme::all_axes);
    const auto parent = build_symbolic_image(rotation_map(0.25), parent_cov, EdgeMode::outer());
    const auto child = build_symbolic_image(rotation_map(0.25), sub.covering, EdgeMode::outer());
    const GraphMap s = make_graph_map(child, parent, sub.parent_map);
    for (const auto& [u, v] : child->graph.arcs()) CHECK(parent->graph.has_arc(s(u), s(v)));
    CHECK(s(5) == 2);
    CHECK_THROWS_AS(s(8), LineageError);

    const auto sample_child = build_symbolic_image(rotation_map(0.25), sub.covering, EdgeMode::sample(3));
    std::vector<Arc> violations;
    make_graph_map(sample_child, parent, sub.parent_map, &violations);
    CHECK(violations.empty());
  }

  TEST_CASE("lineage errors") {
    const auto parent_cov = initial_covering(Domain::circle(), {4});
    const Subdivision sub = subdivide(*parent_cov, {0, 1, 2, 3}, SubdivisionScheme::all_axes);
    const auto parent = build_symbolic_image(rotation_map(0.25), parent_cov, EdgeMode::outer());
    const auto child = build_symbolic_image(rotation_map(0.25), sub.covering, EdgeMode::outer());
    std::vector<int> bad = sub.parent_map;
    bad[0] = 3;
    CHECK_THROWS_AS(make_graph_map(child, parent, bad), LineageError);
    bad.pop_back();
    CHECK_THROWS_AS(make_graph_map(child, parent, bad), LineageError);
  }

  TEST_CASE("localization levels compose into graph maps") {
    const Localization loc = localize(square_map(), Domain::interval(0.0, 1.0), {2}, 5, EdgeMode::outer());
    for (std::size_t t = 1; t < loc.levels.size(); ++t) {
      const GraphMap s = level_map(loc, t);
      for (const auto& [u, v] : s.child->graph.arcs()) CHECK(s.parent->graph.has_arc(s(u), s(v)));
    }
    CHECK_THROWS_AS(level_map(loc, 0), PreconditionError);
  }
}
