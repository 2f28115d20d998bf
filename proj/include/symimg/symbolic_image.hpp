#pragma once

#include <memory>
#include <vector>

#include "symimg/covering.hpp"
#include "symimg/digraph.hpp"
#include "symimg/system.hpp"

namespace symimg {

/// Directed graph over the cells of a covering: i → j iff the computed
/// enclosure of f(M(i)) meets the closed cell M(j).
struct SymbolicImage {
  CoveringPtr covering;
  Digraph graph;
  EdgeMode edge_mode;
  /// Largest diameter of a computed image enclosure.
  double q = 0.0;
  std::vector<double> image_diameters;

  std::size_t size() const noexcept { return graph.size(); }
  double diameter() const { return covering->diameter(); }
};

using SymbolicImagePtr = std::shared_ptr<const SymbolicImage>;

/// threads = 0 uses the hardware concurrency; results do not depend on it.
SymbolicImagePtr build_symbolic_image(const SystemMap& map, CoveringPtr covering, EdgeMode mode,
                                      unsigned threads = 1);

RecurrentClasses recurrent_vertices(const SymbolicImage& g);

struct Neighborhood {
  std::vector<int> cells;  // ascending
  double volume = 0.0;
};

/// P(d): union of the cells of recurrent vertices.
Neighborhood chain_recurrent_neighborhood(const SymbolicImage& g);
Neighborhood chain_recurrent_neighborhood(const SymbolicImage& g, const RecurrentClasses& rv);

/// Subdivision graph map s from a child symbolic image onto its parent.
struct GraphMap {
  SymbolicImagePtr child;
  SymbolicImagePtr parent;
  std::vector<int> s;  // child vertex → parent vertex

  int operator()(int v) const;
};

/// Checks lineage (child cells nest in their parents) and inclusion: every
/// child arc maps to a parent arc. A failed inclusion raises
/// ConsistencyError when the parent was built in outer mode; otherwise it is
/// reported through `inclusion_violations`.
GraphMap make_graph_map(SymbolicImagePtr child, SymbolicImagePtr parent, std::vector<int> parent_map,
                        std::vector<Arc>* inclusion_violations = nullptr);

struct LocalizationLevel {
  SymbolicImagePtr image;
  RecurrentClasses recurrent;
  Neighborhood neighborhood;
  /// Map onto the previous level's cells; empty at the first level.
  std::vector<int> parent_map;
};

struct Localization {
  std::vector<LocalizationLevel> levels;
  /// Set when some level had no recurrent vertex; levels stop there.
  bool empty_terminal = false;
};

/// Build → recurrent vertices → subdivide recurrent cells, `depth` levels.
Localization localize(const SystemMap& map, const Domain& domain, const std::vector<int>& splits,
                      int depth, EdgeMode mode,
                      SubdivisionScheme scheme = SubdivisionScheme::all_axes, unsigned threads = 1);

/// Graph map between consecutive localization levels t and t+1 (0-based).
GraphMap level_map(const Localization& loc, std::size_t child_level);

}  // namespace symimg
