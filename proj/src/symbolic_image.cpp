#include "symimg/symbolic_image.hpp"

#include <algorithm>
#include <exception>
#include <string>
#include <thread>

#include "symimg/errors.hpp"

namespace symimg {

namespace {

struct CellImage {
  std::vector<int> targets;
  double diameter = 0.0;
};

double enclosure_diameter(const Domain& domain, const BoxEnclosure& enc) {
  if (enc.boxes.size() == 1) return domain.diameter(enc.boxes.front());
  double best = 0.0;
  for (std::size_t i = 0; i < enc.boxes.size(); ++i) {
    best = std::max(best, domain.diameter(enc.boxes[i]));
    for (std::size_t j = i + 1; j < enc.boxes.size(); ++j)
      best = std::max(best, domain.distance(enc.boxes[i].lo, enc.boxes[j].lo));
  }
  return best;
}

CellImage image_of_cell(const SystemMap& map, const Covering& cov, int id, EdgeMode mode) {
  CellImage out;
  const BoxEnclosure enc = map.box_image(cov.cell(id).box, mode);
  for (const Box& b : enc.boxes) {
    const auto hit = cov.intersecting(b);
    out.targets.insert(out.targets.end(), hit.begin(), hit.end());
  }
  std::sort(out.targets.begin(), out.targets.end());
  out.targets.erase(std::unique(out.targets.begin(), out.targets.end()), out.targets.end());
  out.diameter = enclosure_diameter(map.domain(), enc);
  return out;
}

}  // namespace

SymbolicImagePtr build_symbolic_image(const SystemMap& map, CoveringPtr covering, EdgeMode mode,
                                      unsigned threads) {
  if (!covering) throw PreconditionError("build needs a covering");
  if (!(covering->domain() == map.domain()))
    throw PreconditionError("covering domain " + covering->domain().to_string() +
                            " differs from map domain " + map.domain().to_string());
  const std::size_t n = covering->size();
  std::vector<CellImage> images(n);
  if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      images[i] = image_of_cell(map, *covering, static_cast<int>(i), mode);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = t; i < n; i += threads)
            images[i] = image_of_cell(map, *covering, static_cast<int>(i), mode);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  auto g = std::make_shared<SymbolicImage>();
  g->covering = std::move(covering);
  g->edge_mode = mode;
  std::vector<std::vector<int>> adj(n);
  g->image_diameters.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    adj[i] = std::move(images[i].targets);
    g->image_diameters[i] = images[i].diameter;
    g->q = std::max(g->q, images[i].diameter);
  }
  g->graph = Digraph::from_adjacency(std::move(adj));
  return g;
}

RecurrentClasses recurrent_vertices(const SymbolicImage& g) { return recurrent_classes(g.graph); }

Neighborhood chain_recurrent_neighborhood(const SymbolicImage& g) {
  return chain_recurrent_neighborhood(g, recurrent_vertices(g));
}

Neighborhood chain_recurrent_neighborhood(const SymbolicImage& g, const RecurrentClasses& rv) {
  Neighborhood out;
  out.cells = rv.vertices;
  for (int id : out.cells) out.volume += g.covering->cell(id).box.volume();
  return out;
}

int GraphMap::operator()(int v) const {
  if (v < 0 || static_cast<std::size_t>(v) >= s.size())
    throw LineageError("vertex " + std::to_string(v) + " is outside the graph map's domain");
  return s[static_cast<std::size_t>(v)];
}

GraphMap make_graph_map(SymbolicImagePtr child, SymbolicImagePtr parent, std::vector<int> parent_map,
                        std::vector<Arc>* inclusion_violations) {
  if (!child || !parent) throw PreconditionError("graph map needs both graphs");
  const Covering& cc = *child->covering;
  const Covering& pc = *parent->covering;
  if (!(cc.domain() == pc.domain())) throw LineageError("coverings live on different domains");
  if (parent_map.size() != cc.size())
    throw LineageError("parent map has " + std::to_string(parent_map.size()) +
                       " entries for a child covering of " + std::to_string(cc.size()) + " cells");
  for (std::size_t i = 0; i < cc.size(); ++i) {
    const int p = parent_map[i];
    if (p < 0 || static_cast<std::size_t>(p) >= pc.size())
      throw LineageError("child cell " + std::to_string(i) + " maps to missing parent " +
                         std::to_string(p));
    const Box& cb = cc.cells()[i].box;
    const Box& pb = pc.cells()[static_cast<std::size_t>(p)].box;
    for (std::size_t a = 0; a < cb.dim(); ++a)
      if (cb.lo[a] < pb.lo[a] || cb.hi[a] > pb.hi[a])
        throw LineageError("child cell " + std::to_string(i) + " is not inside parent cell " +
                           std::to_string(p));
  }
  for (const auto& [u, v] : child->graph.arcs()) {
    const int su = parent_map[static_cast<std::size_t>(u)];
    const int sv = parent_map[static_cast<std::size_t>(v)];
    if (parent->graph.has_arc(su, sv)) continue;
    if (parent->edge_mode.is_outer())
      throw ConsistencyError("child arc " + std::to_string(u) + "->" + std::to_string(v) +
                                 " has no parent arc " + std::to_string(su) + "->" +
                                 std::to_string(sv),
                             -1, u);
    if (inclusion_violations) inclusion_violations->emplace_back(u, v);
  }
  return GraphMap{std::move(child), std::move(parent), std::move(parent_map)};
}

Localization localize(const SystemMap& map, const Domain& domain, const std::vector<int>& splits,
                      int depth, EdgeMode mode, SubdivisionScheme scheme, unsigned threads) {
  if (depth < 1) throw PreconditionError("localize needs depth >= 1");
  const SystemMap m = map.domain() == domain ? map : map.rehomed(domain);
  Localization out;
  CoveringPtr cov = initial_covering(domain, splits);
  std::vector<int> parent_map;
  for (int t = 0; t < depth; ++t) {
    LocalizationLevel level;
    level.image = build_symbolic_image(m, cov, mode, threads);
    level.recurrent = recurrent_vertices(*level.image);
    level.neighborhood = chain_recurrent_neighborhood(*level.image, level.recurrent);
    level.parent_map = std::move(parent_map);
    const bool empty = level.recurrent.vertices.empty();
    const std::vector<int> targets = level.recurrent.vertices;
    out.levels.push_back(std::move(level));
    if (empty) {
      out.empty_terminal = true;
      break;
    }
    if (t + 1 == depth) break;
    Subdivision sub = subdivide(*cov, targets, scheme);
    cov = std::move(sub.covering);
    parent_map = std::move(sub.parent_map);
  }
  return out;
}

GraphMap level_map(const Localization& loc, std::size_t child_level) {
  if (child_level == 0 || child_level >= loc.levels.size())
    throw PreconditionError("level_map needs a child level in 1.." +
                            std::to_string(loc.levels.size() - 1));
  const auto& child = loc.levels[child_level];
  const auto& parent = loc.levels[child_level - 1];
  return make_graph_map(child.image, parent.image, child.parent_map);
}

}  // namespace symimg
