#include "symimg/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace symimg {

namespace {

void require_same_window(long off_a, std::size_t len_a, long off_b, std::size_t len_b) {
  if (off_a != off_b || len_a != len_b)
    throw PreconditionError("windows differ (offset " + std::to_string(off_a) + "/" +
                            std::to_string(off_b) + ", length " + std::to_string(len_a) + "/" +
                            std::to_string(len_b) + ")");
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Point random_point(const Box& b, std::mt19937_64& rng) {
  Point p(b.dim());
  for (std::size_t a = 0; a < b.dim(); ++a) p[a] = b.lo[a] + unit_draw(rng) * b.width(a);
  return p;
}

// s^m from level t+m down to level t, as a table over level-(t+m) vertices.
std::vector<int> composed_map(const std::vector<GraphMap>& maps, std::size_t level, std::size_t m) {
  if (level + m > maps.size())
    throw PreconditionError("graph map chain has only " + std::to_string(maps.size() + 1) +
                            " levels");
  std::vector<int> table;
  if (m == 0) return table;
  table = maps[level + m - 1].s;
  for (std::size_t k = level + m - 1; k-- > level;)
    for (int& v : table) v = maps[k](v);
  return table;
}

}  // namespace

OrbitWindow orbit_segment(const SystemMap& map, const Point& x0, std::size_t length, long offset) {
  OrbitWindow out{offset, {}};
  if (length == 0) return out;
  out.points.reserve(length);
  out.points.push_back(map.domain().normalize(x0));
  for (std::size_t k = 1; k < length; ++k) {
    try {
      out.points.push_back(map.eval(out.points.back()));
    } catch (const DomainEscapeError& e) {
      throw e.at_index(static_cast<std::ptrdiff_t>(k - 1));
    }
  }
  return out;
}

PathWindow encode(const OrbitWindow& orbit, const Covering& cov) {
  PathWindow out{orbit.offset, {}};
  out.vertices.reserve(orbit.size());
  for (const Point& x : orbit.points) out.vertices.push_back(cov.locate(x));
  return out;
}

std::vector<PathWindow> encode_all(const OrbitWindow& orbit, const Covering& cov, std::size_t cap) {
  std::vector<std::vector<int>> choices;
  double count = 1.0;
  for (const Point& x : orbit.points) {
    choices.push_back(cov.members(x));
    count *= static_cast<double>(choices.back().size());
    if (count > static_cast<double>(cap))
      throw CapError("orbit has more than " + std::to_string(cap) + " encodings");
  }
  std::vector<PathWindow> out;
  std::vector<std::size_t> pos(choices.size(), 0);
  while (true) {
    PathWindow p{orbit.offset, std::vector<int>(choices.size())};
    for (std::size_t k = 0; k < choices.size(); ++k) p.vertices[k] = choices[k][pos[k]];
    out.push_back(std::move(p));
    std::size_t k = choices.size();
    while (k-- > 0) {
      if (++pos[k] < choices[k].size()) break;
      pos[k] = 0;
    }
    if (k == static_cast<std::size_t>(-1)) break;
  }
  return out;
}

Admissibility is_admissible(const PathWindow& path, const Digraph& g) {
  for (std::size_t k = 0; k + 1 < path.size(); ++k)
    if (!g.has_arc(path.vertices[k], path.vertices[k + 1])) return {false, k};
  return {};
}

Trace trace_path(const PathWindow& path, const SymbolicImage& g, TraceStrategy strategy,
                 const SystemMap* map) {
  const Admissibility adm = is_admissible(path, g.graph);
  if (!adm.admissible) {
    const std::size_t k = *adm.first_violation;
    throw PreconditionError("path is not admissible: missing arc " +
                            std::to_string(path.vertices[k]) + "->" +
                            std::to_string(path.vertices[k + 1]) + " at position " +
                            std::to_string(k));
  }
  for (int v : path.vertices)
    if (v < 0 || static_cast<std::size_t>(v) >= g.size())
      throw PreconditionError("path vertex " + std::to_string(v) + " is not in the graph");
  const Covering& cov = *g.covering;
  Trace out;
  out.orbit.offset = path.offset;
  out.defect_bound = g.q + cov.diameter();
  switch (strategy.kind) {
    case TraceStrategy::Kind::center:
      for (int v : path.vertices) out.orbit.points.push_back(cov.cell(v).box.center());
      break;
    case TraceStrategy::Kind::seeded_random: {
      std::mt19937_64 rng(strategy.seed);
      for (int v : path.vertices) out.orbit.points.push_back(random_point(cov.cell(v).box, rng));
      break;
    }
    case TraceStrategy::Kind::preimage_sample: {
      if (!map) throw PreconditionError("preimage_sample tracing needs the map");
      bool all_found = true;
      for (std::size_t k = 0; k < path.size(); ++k) {
        const Box& box = cov.cell(path.vertices[k]).box;
        std::optional<Point> pick;
        if (k + 1 < path.size()) {
          const Box& next = cov.cell(path.vertices[k + 1]).box;
          for (const Point& p : stratified_points(box, std::max(1, strategy.samples))) {
            const Point y = map->eval(p);
            if (cov.domain().cell_contains(next, y)) {
              pick = p;
              break;
            }
          }
        } else {
          pick = box.center();
        }
        if (!pick) {
          all_found = false;
          pick = box.center();
        }
        out.orbit.points.push_back(*pick);
      }
      if (all_found) out.defect_bound = cov.diameter();
      break;
    }
  }
  return out;
}

double verify_eps_trajectory(const OrbitWindow& orbit, const SystemMap& map) {
  if (orbit.size() < 2) throw PreconditionError("defect needs a window of length >= 2");
  const Domain& d = map.domain();
  double worst = 0.0;
  for (std::size_t k = 0; k + 1 < orbit.size(); ++k) {
    Point fx;
    try {
      fx = map.eval(orbit.points[k]);
    } catch (const DomainEscapeError& e) {
      throw e.at_index(static_cast<std::ptrdiff_t>(k));
    }
    worst = std::max(worst, d.distance(fx, orbit.points[k + 1]));
  }
  return worst;
}

double path_metric(const PathWindow& a, const PathWindow& b, double lambda) {
  require_same_window(a.offset, a.size(), b.offset, b.size());
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("path metric needs 0 < lambda < 1");
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.vertices[k] != b.vertices[k])
      sum += std::pow(lambda, static_cast<double>(std::labs(a.offset + static_cast<long>(k))));
  return sum;
}

double path_metric0(const PathWindow& a, const PathWindow& b) {
  require_same_window(a.offset, a.size(), b.offset, b.size());
  long nearest = -1;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a.vertices[k] == b.vertices[k]) continue;
    const long r = std::labs(a.offset + static_cast<long>(k));
    if (nearest < 0 || r < nearest) nearest = r;
  }
  if (nearest < 0) return 0.0;
  return std::ldexp(1.0, -static_cast<int>(nearest - 1));
}

double orbit_metric(const OrbitWindow& a, const OrbitWindow& b, const Domain& domain) {
  require_same_window(a.offset, a.size(), b.offset, b.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const long r = std::labs(a.offset + static_cast<long>(k));
    sum += std::ldexp(domain.distance(a.points[k], b.points[k]), -static_cast<int>(r));
  }
  return sum;
}

PathWindow project_path(const PathWindow& path, const GraphMap& s) {
  PathWindow out{path.offset, {}};
  out.vertices.reserve(path.size());
  for (int v : path.vertices) out.vertices.push_back(s(v));
  return out;
}

void check_consistent(const ConsistentPathFamily& family) {
  const std::size_t levels = family.paths.size();
  if (levels == 0) throw PreconditionError("empty path family");
  if (family.images.size() != levels || family.maps.size() + 1 != levels)
    throw PreconditionError("path family needs one graph per level and one map between levels");
  for (std::size_t t = 0; t < levels; ++t) {
    const PathWindow& p = family.paths[t];
    require_same_window(p.offset, p.size(), family.paths[0].offset, family.paths[0].size());
    const Digraph& g = family.images[t]->graph;
    for (std::size_t k = 0; k < p.size(); ++k)
      if (p.vertices[k] < 0 || static_cast<std::size_t>(p.vertices[k]) >= g.size())
        throw ConsistencyError("vertex is not in the level graph", static_cast<int>(t),
                               p.offset + static_cast<long>(k));
    const Admissibility adm = is_admissible(p, g);
    if (!adm.admissible)
      throw ConsistencyError("path is not admissible", static_cast<int>(t),
                             p.offset + static_cast<long>(*adm.first_violation));
    if (t == 0) continue;
    const GraphMap& s = family.maps[t - 1];
    const PathWindow& coarse = family.paths[t - 1];
    for (std::size_t k = 0; k < p.size(); ++k)
      if (s(p.vertices[k]) != coarse.vertices[k])
        throw ConsistencyError("s(w_{t+1}) differs from w_t", static_cast<int>(t),
                               p.offset + static_cast<long>(k));
  }
}

std::optional<std::size_t> window_period(const PathWindow& path) {
  const std::size_t n = path.size();
  for (std::size_t p = 1; p <= n / 2; ++p) {
    bool ok = true;
    for (std::size_t k = 0; k + p < n && ok; ++k) ok = path.vertices[k] == path.vertices[k + p];
    if (ok) return p;
  }
  return std::nullopt;
}

ShadowResult shadow(const ConsistentPathFamily& family) {
  check_consistent(family);
  const PathWindow& deep = family.paths.back();
  const Covering& cov = *family.images.back()->covering;
  ShadowResult out;
  out.orbit.offset = deep.offset;
  for (int v : deep.vertices) {
    const Box& b = cov.cell(v).box;
    out.orbit.points.push_back(b.center());
    const double e = cov.domain().diameter(b);
    out.error_bound.push_back(e);
    out.max_error_bound = std::max(out.max_error_bound, e);
  }
  out.recurrent = std::all_of(family.paths.begin(), family.paths.end(),
                              [](const PathWindow& p) { return window_period(p).has_value(); });
  return out;
}

ConsistentPathFamily family_from_orbit(const Localization& loc, const OrbitWindow& orbit) {
  ConsistentPathFamily fam;
  for (std::size_t t = 0; t < loc.levels.size(); ++t) {
    fam.images.push_back(loc.levels[t].image);
    fam.paths.push_back(encode(orbit, *loc.levels[t].image->covering));
    if (t > 0) fam.maps.push_back(level_map(loc, t));
  }
  return fam;
}

bool lifts_to(const PathWindow& path, const std::vector<GraphMap>& maps, std::size_t level,
              std::size_t m) {
  if (m == 0) return true;
  const std::vector<int> down = composed_map(maps, level, m);
  const Digraph& fine = maps[level + m - 1].child->graph;
  std::vector<char> reach(fine.size(), 0);
  std::vector<int> current;
  for (std::size_t v = 0; v < down.size(); ++v)
    if (!path.vertices.empty() && down[v] == path.vertices[0]) current.push_back(static_cast<int>(v));
  for (std::size_t k = 1; k < path.size() && !current.empty(); ++k) {
    std::vector<int> next;
    for (int v : current)
      for (int w : fine.successors(v))
        if (down[static_cast<std::size_t>(w)] == path.vertices[k] && !reach[static_cast<std::size_t>(w)]) {
          reach[static_cast<std::size_t>(w)] = 1;
          next.push_back(w);
        }
    for (int w : next) reach[static_cast<std::size_t>(w)] = 0;
    current = std::move(next);
  }
  return !current.empty();
}

CodingWindowSets coding_window_sets(const std::vector<SymbolicImagePtr>& images,
                                    const std::vector<GraphMap>& maps, std::size_t level,
                                    std::size_t window, std::size_t m_max, std::size_t cap) {
  if (images.size() != maps.size() + 1)
    throw PreconditionError("need one graph map between consecutive levels");
  if (level + m_max >= images.size())
    throw PreconditionError("level + m_max exceeds the available levels");
  if (window == 0) throw PreconditionError("window length must be positive");
  CodingWindowSets out;
  out.level = level;
  const Digraph& g = images[level]->graph;

  // Admissible windows by depth-first extension, lexicographic.
  std::vector<PathWindow> all;
  std::vector<int> stack;
  std::vector<std::size_t> pos;
  for (std::size_t v = 0; v < g.size(); ++v) {
    stack.assign(1, static_cast<int>(v));
    pos.assign(1, 0);
    while (!stack.empty()) {
      if (stack.size() == window) {
        if (all.size() >= cap) {
          out.sets.push_back(std::move(all));
          throw CodingCapError("more than " + std::to_string(cap) + " admissible window paths",
                               std::move(out));
        }
        all.push_back(PathWindow{0, stack});
        stack.pop_back();
        pos.pop_back();
        continue;
      }
      const auto& succ = g.successors(stack.back());
      if (pos.back() < succ.size()) {
        const int w = succ[pos.back()++];
        stack.push_back(w);
        pos.push_back(0);
      } else {
        stack.pop_back();
        pos.pop_back();
      }
    }
  }
  out.sets.push_back(std::move(all));
  for (std::size_t m = 1; m <= m_max; ++m) {
    std::vector<PathWindow> kept;
    for (const PathWindow& p : out.sets.front())
      if (lifts_to(p, maps, level, m)) kept.push_back(p);
    out.sets.push_back(std::move(kept));
  }
  for (std::size_t m = 1; m < out.sets.size(); ++m)
    out.nested = out.nested && std::includes(out.sets[m - 1].begin(), out.sets[m - 1].end(),
                                             out.sets[m].begin(), out.sets[m].end());
  return out;
}

}  // namespace symimg
