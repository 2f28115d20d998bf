#include "symimg/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>

namespace symimg {

namespace {

constexpr double kDropWeight = 1e-13;

std::string arc_name(const Arc& a) {
  return std::to_string(a.first) + "->" + std::to_string(a.second);
}

template <class W>
BasicFlow<W> project_impl(const BasicFlow<W>& f, const std::vector<int>& s, const Digraph* parent) {
  BasicFlow<W> out;
  for (const auto& [arc, w] : f.weights) {
    const auto u = static_cast<std::size_t>(arc.first);
    const auto v = static_cast<std::size_t>(arc.second);
    if (arc.first < 0 || arc.second < 0 || u >= s.size() || v >= s.size())
      throw LineageError("graph map is undefined on arc " + arc_name(arc));
    const Arc pa{s[u], s[v]};
    if (parent && !parent->has_arc(pa.first, pa.second))
      throw StructuralError("child arc " + arc_name(arc) + " projects to missing parent arc " + arc_name(pa));
    out.weights[pa] += w;
  }
  for (auto it = out.weights.begin(); it != out.weights.end();)
    it = it->second == W{} ? out.weights.erase(it) : std::next(it);
  return out;
}

// Layer of each child vertex along the parent cycle, or -1.
std::vector<int> cycle_layers(const SimpleCycle& cycle, const Digraph& child,
                              const std::vector<int>& s) {
  if (cycle.vertices.empty()) throw PreconditionError("empty cycle");
  if (s.size() != child.size())
    throw LineageError("graph map size " + std::to_string(s.size()) + " differs from child graph size " +
                       std::to_string(child.size()));
  std::map<int, int> position;
  for (std::size_t j = 0; j < cycle.size(); ++j)
    if (!position.emplace(cycle.vertices[j], static_cast<int>(j)).second)
      throw PreconditionError("cycle repeats vertex " + std::to_string(cycle.vertices[j]));
  std::vector<int> layer(child.size(), -1);
  for (std::size_t v = 0; v < s.size(); ++v) {
    const auto it = position.find(s[v]);
    if (it != position.end()) layer[v] = it->second;
  }
  return layer;
}

// Arcs of the layered subgraph: v → w with layer(w) = layer(v) + 1 mod p.
Digraph layered_subgraph(const Digraph& child, const std::vector<int>& layer, int p) {
  std::vector<std::vector<int>> adj(child.size());
  for (std::size_t v = 0; v < child.size(); ++v) {
    if (layer[v] < 0) continue;
    const int next = (layer[v] + 1) % p;
    for (int w : child.successors(static_cast<int>(v)))
      if (layer[static_cast<std::size_t>(w)] == next) adj[v].push_back(w);
  }
  return Digraph::from_adjacency(std::move(adj));
}

// Simple cycles of exactly `length` through `start`, where every vertex
// other than start must satisfy `allowed`. Appends in lexicographic order.
template <class Allowed>
void cycles_of_length(const Digraph& g, int start, std::size_t length, const Allowed& allowed,
                      std::vector<SimpleCycle>& out, std::size_t limit, std::size_t& budget) {
  std::vector<int> path{start};
  std::vector<std::size_t> pos{0};
  std::vector<char> used(g.size(), 0);
  used[static_cast<std::size_t>(start)] = 1;
  while (!path.empty()) {
    if (budget == 0 || out.size() >= limit) return;
    --budget;
    const auto& succ = g.successors(path.back());
    if (pos.back() >= succ.size()) {
      used[static_cast<std::size_t>(path.back())] = 0;
      path.pop_back();
      pos.pop_back();
      if (path.empty()) used[static_cast<std::size_t>(start)] = 0;
      continue;
    }
    const int w = succ[pos.back()++];
    if (w == start) {
      if (path.size() == length) out.push_back(SimpleCycle{path});
      continue;
    }
    if (path.size() >= length || used[static_cast<std::size_t>(w)] || !allowed(w)) continue;
    used[static_cast<std::size_t>(w)] = 1;
    path.push_back(w);
    pos.push_back(0);
  }
}

}  // namespace

Flow to_double(const ExactFlow& f) {
  Flow out;
  for (const auto& [arc, w] : f.weights) out.weights[arc] = w.to_double();
  return out;
}

SimpleCycle SimpleCycle::canonical() const {
  if (vertices.empty()) return *this;
  const auto it = std::min_element(vertices.begin(), vertices.end());
  SimpleCycle out;
  out.vertices.insert(out.vertices.end(), it, vertices.end());
  out.vertices.insert(out.vertices.end(), vertices.begin(), it);
  return out;
}

void validate_cycle(const SimpleCycle& c, const Digraph& g) {
  if (c.vertices.empty()) throw PreconditionError("empty cycle");
  std::set<int> seen;
  for (int v : c.vertices) {
    if (v < 0 || static_cast<std::size_t>(v) >= g.size())
      throw PreconditionError("cycle vertex " + std::to_string(v) + " is not in the graph");
    if (!seen.insert(v).second)
      throw PreconditionError("cycle repeats vertex " + std::to_string(v));
  }
  for (std::size_t k = 0; k < c.size(); ++k) {
    const int u = c.vertices[k];
    const int v = c.vertices[(k + 1) % c.size()];
    if (!g.has_arc(u, v)) throw PreconditionError("cycle uses missing arc " + arc_name({u, v}));
  }
}

FlowCheck is_flow(const Flow& f, const Digraph& g, double tol) {
  FlowCheck out;
  std::vector<double> balance(g.size(), 0.0);
  double total = 0.0;
  for (const auto& [arc, w] : f.weights) {
    if (!g.has_arc(arc.first, arc.second))
      throw StructuralError("flow has weight on missing arc " + arc_name(arc));
    if (!(w >= 0.0)) out.nonnegative = false;
    total += w;
    balance[static_cast<std::size_t>(arc.first)] += w;
    balance[static_cast<std::size_t>(arc.second)] -= w;
  }
  out.normalization_residual = std::abs(total - 1.0);
  for (double b : balance) out.balance_residual = std::max(out.balance_residual, std::abs(b));
  out.valid = out.nonnegative && out.normalization_residual <= tol && out.balance_residual <= tol;
  return out;
}

ExactFlow simple_flow_exact(const SimpleCycle& c, const Digraph& g) {
  validate_cycle(c, g);
  ExactFlow out;
  const Rational w(1, static_cast<std::int64_t>(c.size()));
  for (std::size_t k = 0; k < c.size(); ++k)
    out.weights[{c.vertices[k], c.vertices[(k + 1) % c.size()]}] = w;
  return out;
}

Flow simple_flow(const SimpleCycle& c, const Digraph& g) { return to_double(simple_flow_exact(c, g)); }

Flow mix(const std::vector<Flow>& flows, const std::vector<double>& coefficients, double tol) {
  if (flows.size() != coefficients.size() || flows.empty())
    throw PreconditionError("mix needs one coefficient per flow");
  double sum = 0.0;
  for (double c : coefficients) {
    if (!(c >= 0.0)) throw PreconditionError("mix coefficients must be nonnegative");
    sum += c;
  }
  if (std::abs(sum - 1.0) > tol)
    throw PreconditionError("mix coefficients sum to " + std::to_string(sum) + ", not 1");
  Flow out;
  for (std::size_t k = 0; k < flows.size(); ++k) {
    if (coefficients[k] == 0.0) continue;
    for (const auto& [arc, w] : flows[k].weights) out.weights[arc] += coefficients[k] * w;
  }
  for (auto it = out.weights.begin(); it != out.weights.end();)
    it = it->second == 0.0 ? out.weights.erase(it) : std::next(it);
  return out;
}

std::vector<CycleTerm> decompose(const Flow& f, const Digraph& g) {
  const FlowCheck check = is_flow(f, g, 1e-9);
  if (!check.valid)
    throw PreconditionError("decompose needs a flow (normalization residual " +
                            std::to_string(check.normalization_residual) + ", balance residual " +
                            std::to_string(check.balance_residual) + ")");
  std::map<Arc, double> rest;
  for (const auto& [arc, w] : f.weights)
    if (w > kDropWeight) rest[arc] = w;
  std::vector<CycleTerm> terms;
  const std::size_t n = g.size();
  while (!rest.empty()) {
    auto min_it = rest.begin();
    for (auto it = rest.begin(); it != rest.end(); ++it)
      if (it->second < min_it->second) min_it = it;
    const auto [u, v] = min_it->first;
    const double wmin = min_it->second;
    std::vector<int> cycle;
    if (u == v) {
      cycle = {u};
    } else {
      // Shortest return path v → u in the remaining support.
      std::vector<std::vector<int>> adj(n);
      for (const auto& [arc, w] : rest) adj[static_cast<std::size_t>(arc.first)].push_back(arc.second);
      std::vector<int> pred(n, -1);
      std::deque<int> queue{v};
      pred[static_cast<std::size_t>(v)] = v;
      while (!queue.empty() && pred[static_cast<std::size_t>(u)] < 0) {
        const int x = queue.front();
        queue.pop_front();
        for (int y : adj[static_cast<std::size_t>(x)]) {
          if (pred[static_cast<std::size_t>(y)] >= 0) continue;
          pred[static_cast<std::size_t>(y)] = x;
          queue.push_back(y);
        }
      }
      if (pred[static_cast<std::size_t>(u)] < 0) {
        // Only rounding residue can be unbalanced here; discard it.
        rest.erase(min_it);
        continue;
      }
      for (int x = u; x != v; x = pred[static_cast<std::size_t>(x)]) cycle.push_back(x);
      cycle.push_back(v);
      std::reverse(cycle.begin(), cycle.end());
      // cycle = v ... u; rotate so the extracted arc u → v closes it.
      std::rotate(cycle.begin(), cycle.end() - 1, cycle.end());
    }
    const std::size_t p = cycle.size();
    for (std::size_t k = 0; k < p; ++k) {
      const Arc a{cycle[k], cycle[(k + 1) % p]};
      auto it = rest.find(a);
      it->second -= wmin;
      if (it->second <= kDropWeight) rest.erase(it);
    }
    terms.push_back(CycleTerm{SimpleCycle{cycle}.canonical(), wmin * static_cast<double>(p)});
  }
  double sum = 0.0;
  for (const auto& t : terms) sum += t.coefficient;
  if (sum > 0.0)
    for (auto& t : terms) t.coefficient /= sum;
  return terms;
}

Flow project_flow(const Flow& f, const GraphMap& s) {
  return project_impl(f, s.s, &s.parent->graph);
}

ExactFlow project_flow(const ExactFlow& f, const GraphMap& s) {
  return project_impl(f, s.s, &s.parent->graph);
}

Flow project_flow(const Flow& f, const std::vector<int>& s, const Digraph* parent) {
  return project_impl(f, s, parent);
}

double CellMeasure::operator()(const Box& a) const {
  double sum = 0.0;
  const Domain& d = covering->domain();
  for (const Cell& c : covering->cells()) {
    const double m = masses[static_cast<std::size_t>(c.id)];
    if (m == 0.0) continue;
    sum += m * d.overlap_volume(a, c.box) / c.box.volume();
  }
  return sum;
}

double CellMeasure::total() const {
  double s = 0.0;
  for (double m : masses) s += m;
  return s;
}

CellMeasure measure_of_flow(const Flow& f, CoveringPtr covering) {
  if (!covering) throw PreconditionError("measure needs a covering");
  for (const Cell& c : covering->cells())
    if (!(c.box.volume() > 0.0))
      throw PreconditionError("cell " + std::to_string(c.id) + " has zero volume");
  for (const auto& [arc, w] : f.weights)
    if (static_cast<std::size_t>(std::max(arc.first, arc.second)) >= covering->size())
      throw StructuralError("flow arc " + arc_name(arc) + " is outside the covering");
  CellMeasure mu;
  mu.masses = f.masses(covering->size());
  mu.covering = std::move(covering);
  return mu;
}

double integrate(const CellMeasure& mu, const ScalarFunction& phi) {
  double sum = 0.0;
  for (const Cell& c : mu.covering->cells()) {
    const double m = mu.masses[static_cast<std::size_t>(c.id)];
    if (m != 0.0) sum += m * phi(c.box.center());
  }
  return sum;
}

MeasureSampler lebesgue_sampler() {
  return [](const Covering& cov, int n) {
    std::vector<WeightedPoint> out;
    const double total = cov.volume();
    for (const Cell& c : cov.cells()) {
      const auto pts = stratified_points(c.box, n);
      const double w = c.box.volume() / total / static_cast<double>(pts.size());
      for (const Point& p : pts) out.push_back({p, w});
    }
    return out;
  };
}

MeasureSampler cell_measure_sampler(CellMeasure mu) {
  return [mu = std::move(mu)](const Covering& cov, int n) {
    if (mu.masses.size() != cov.size())
      throw PreconditionError("cell measure lives on a different covering");
    std::vector<WeightedPoint> out;
    for (const Cell& c : mu.covering->cells()) {
      const double m = mu.masses[static_cast<std::size_t>(c.id)];
      if (m == 0.0) continue;
      const auto pts = stratified_points(c.box, n);
      for (const Point& p : pts) out.push_back({p, m / static_cast<double>(pts.size())});
    }
    return out;
  };
}

MeasureSampler dirac_sampler(Point x) {
  return [x = std::move(x)](const Covering&, int) { return std::vector<WeightedPoint>{{x, 1.0}}; };
}

MeasureSampler mixture_sampler(std::vector<std::pair<double, MeasureSampler>> parts) {
  return [parts = std::move(parts)](const Covering& cov, int n) {
    std::vector<WeightedPoint> out;
    for (const auto& [c, sampler] : parts)
      for (WeightedPoint wp : sampler(cov, n)) {
        wp.weight *= c;
        out.push_back(std::move(wp));
      }
    return out;
  };
}

double repair_balance(Flow& f, std::size_t n, int max_rounds) {
  double change2 = 0.0;
  for (int round = 0; round < max_rounds; ++round) {
    std::vector<double> r(n, 0.0);
    for (const auto& [arc, w] : f.weights) {
      r[static_cast<std::size_t>(arc.first)] += w;
      r[static_cast<std::size_t>(arc.second)] -= w;
    }
    double worst = 0.0;
    for (double x : r) worst = std::max(worst, std::abs(x));
    if (worst <= 1e-15) break;

    // Ground one vertex per weakly connected component of the support so
    // the support Laplacian becomes positive definite.
    std::vector<int> comp(n, -1);
    std::vector<std::vector<int>> und(n);
    for (const auto& [arc, w] : f.weights)
      if (arc.first != arc.second) {
        und[static_cast<std::size_t>(arc.first)].push_back(arc.second);
        und[static_cast<std::size_t>(arc.second)].push_back(arc.first);
      }
    std::vector<int> index(n, -1);
    int reduced = 0;
    for (std::size_t root = 0; root < n; ++root) {
      if (comp[root] >= 0) continue;
      comp[root] = static_cast<int>(root);
      std::vector<int> stack{static_cast<int>(root)};
      while (!stack.empty()) {
        const int x = stack.back();
        stack.pop_back();
        for (int y : und[static_cast<std::size_t>(x)])
          if (comp[static_cast<std::size_t>(y)] < 0) {
            comp[static_cast<std::size_t>(y)] = static_cast<int>(root);
            index[static_cast<std::size_t>(y)] = reduced++;
            stack.push_back(y);
          }
      }
    }
    std::vector<double> y(n, 0.0);
    if (reduced > 0) {
      std::vector<Eigen::Triplet<double>> trip;
      for (const auto& [arc, w] : f.weights) {
        if (arc.first == arc.second) continue;
        const int a = index[static_cast<std::size_t>(arc.first)];
        const int b = index[static_cast<std::size_t>(arc.second)];
        if (a >= 0) trip.emplace_back(a, a, 1.0);
        if (b >= 0) trip.emplace_back(b, b, 1.0);
        if (a >= 0 && b >= 0) {
          trip.emplace_back(a, b, -1.0);
          trip.emplace_back(b, a, -1.0);
        }
      }
      Eigen::SparseMatrix<double> lap(reduced, reduced);
      lap.setFromTriplets(trip.begin(), trip.end());
      Eigen::VectorXd rhs(reduced);
      for (std::size_t v = 0; v < n; ++v)
        if (index[v] >= 0) rhs[index[v]] = r[v];
      Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(lap);
      if (solver.info() != Eigen::Success) throw Error("balance repair: factorization failed");
      const Eigen::VectorXd sol = solver.solve(rhs);
      for (std::size_t v = 0; v < n; ++v)
        if (index[v] >= 0) y[v] = sol[index[v]];
    }
    for (auto it = f.weights.begin(); it != f.weights.end();) {
      const auto [u, v] = it->first;
      const double d = -(y[static_cast<std::size_t>(u)] - y[static_cast<std::size_t>(v)]);
      change2 += d * d;
      it->second += d;
      if (it->second <= 0.0) {
        change2 += it->second * it->second;
        it = f.weights.erase(it);
      } else {
        ++it;
      }
    }
    const double total = f.total();
    if (!(total > 0.0)) throw Error("balance repair removed all mass");
    for (auto& [arc, w] : f.weights) w /= total;
  }
  return std::sqrt(change2);
}

FlowEstimate flow_of_measure(const MeasureSampler& sampler, const PartitionView& view,
                             const SystemMap& map, const Digraph& g, int samples_per_cell) {
  if (samples_per_cell < 1) throw PreconditionError("need at least one sample per cell");
  const Covering& cov = view.covering();
  if (g.size() != cov.size()) throw PreconditionError("graph and covering sizes differ");
  FlowEstimate out;
  if (samples_per_cell < (1 << std::min<std::size_t>(cov.domain().dim(), 20)))
    out.warnings.push_back("fewer than 2^dim samples per cell: only cell centers are sampled");
  std::size_t uncovered = 0;
  std::size_t escaped = 0;
  std::map<Arc, std::size_t> missing;
  std::map<Arc, double> acc;
  for (const WeightedPoint& wp : sampler(cov, samples_per_cell)) {
    if (wp.weight == 0.0) continue;
    int i = 0;
    int j = 0;
    try {
      i = view.locate(wp.x);
    } catch (const NotCoveredError&) {
      ++uncovered;
      out.dropped_mass += wp.weight;
      continue;
    }
    try {
      j = view.locate(map.eval(wp.x));
    } catch (const NotCoveredError&) {
      ++uncovered;
      out.dropped_mass += wp.weight;
      continue;
    } catch (const DomainEscapeError&) {
      ++escaped;
      out.dropped_mass += wp.weight;
      continue;
    }
    if (!g.has_arc(i, j)) {
      ++missing[{i, j}];
      out.dropped_mass += wp.weight;
      continue;
    }
    acc[{i, j}] += wp.weight;
  }
  if (uncovered)
    out.warnings.push_back(std::to_string(uncovered) + " samples (or their images) were not covered");
  if (escaped) out.warnings.push_back(std::to_string(escaped) + " sample images escaped the domain");
  for (const auto& [arc, count] : missing)
    out.warnings.push_back("arc " + arc_name(arc) + " is not in the graph (" + std::to_string(count) +
                           " samples dropped)");
  double total = 0.0;
  for (const auto& [arc, w] : acc) total += w;
  if (!(total > 0.0)) throw PreconditionError("no sample mass landed on graph arcs");
  for (const auto& [arc, w] : acc) out.flow.weights[arc] = w / total;
  out.repair_change = repair_balance(out.flow, g.size());
  return out;
}

std::vector<SimpleCycle> shortest_simple_cycles(const Digraph& g, const std::vector<int>& vertices,
                                                std::size_t limit) {
  std::vector<char> inside(g.size(), 0);
  for (int v : vertices) inside[static_cast<std::size_t>(v)] = 1;
  std::vector<int> sorted = vertices;
  std::sort(sorted.begin(), sorted.end());
  std::vector<SimpleCycle> out;
  std::size_t budget = 20'000'000;
  for (std::size_t len = 1; len <= sorted.size() && out.size() < limit && budget > 0; ++len)
    for (int start : sorted) {
      cycles_of_length(
          g, start, len,
          [&](int w) { return inside[static_cast<std::size_t>(w)] && w > start; }, out, limit,
          budget);
      if (out.size() >= limit) break;
    }
  return out;
}

std::vector<SimpleCycle> extension_candidates(const SimpleCycle& cycle, const Digraph& child,
                                              const std::vector<int>& s, std::size_t limit) {
  const std::vector<int> layer = cycle_layers(cycle, child, s);
  const int p = static_cast<int>(cycle.size());
  const Digraph h = layered_subgraph(child, layer, p);
  std::vector<int> starts;
  std::size_t layered = 0;
  for (std::size_t v = 0; v < layer.size(); ++v) {
    if (layer[v] == 0) starts.push_back(static_cast<int>(v));
    if (layer[v] >= 0) ++layered;
  }
  std::vector<SimpleCycle> out;
  std::size_t budget = 20'000'000;
  for (std::size_t len = static_cast<std::size_t>(p); len <= layered && out.size() < limit && budget > 0;
       len += static_cast<std::size_t>(p))
    for (int start : starts) {
      // Canonical start: the smallest first-layer vertex on the cycle.
      cycles_of_length(
          h, start, len,
          [&](int w) { return layer[static_cast<std::size_t>(w)] != 0 || w > start; }, out, limit,
          budget);
      if (out.size() >= limit) break;
    }
  return out;
}

std::optional<SimpleCycle> extend_simple_flow(const SimpleCycle& cycle, const Digraph& child,
                                              const std::vector<int>& s) {
  const std::vector<int> layer = cycle_layers(cycle, child, s);
  const Digraph h = layered_subgraph(child, layer, static_cast<int>(cycle.size()));
  std::optional<SimpleCycle> best;
  for (std::size_t v = 0; v < layer.size(); ++v) {
    if (layer[v] != 0) continue;
    std::vector<int> c = shortest_cycle_through(h, static_cast<int>(v));
    if (c.empty()) continue;
    if (!best || c.size() < best->size()) best = SimpleCycle{std::move(c)};
  }
  return best;
}

std::optional<SimpleCycle> extend_simple_flow(const SimpleCycle& cycle, const GraphMap& s) {
  validate_cycle(cycle, s.parent->graph);
  return extend_simple_flow(cycle, s.child->graph, s.s);
}

namespace {

struct ChainSearch {
  const Localization& loc;
  const RefineOptions& options;
  std::vector<SimpleCycle> path;
  std::vector<SimpleCycle> deepest;
  std::size_t nodes = 0;

  bool descend(std::size_t level) {
    if (path.size() > deepest.size()) deepest = path;
    if (level + 1 == loc.levels.size()) return true;
    const auto& child = loc.levels[level + 1];
    const auto candidates = extension_candidates(path.back(), child.image->graph, child.parent_map,
                                                 options.candidates_per_level);
    for (const SimpleCycle& c : candidates) {
      if (++nodes > options.node_limit) return false;
      path.push_back(c);
      if (descend(level + 1)) return true;
      path.pop_back();
    }
    return false;
  }
};

ErgodicChain assemble_chain(const Localization& loc, const std::vector<SimpleCycle>& cycles) {
  ErgodicChain chain;
  for (std::size_t k = 0; k < cycles.size(); ++k) {
    ErgodicLevel lv;
    lv.image = loc.levels[k].image;
    lv.parent_map = loc.levels[k].parent_map;
    lv.cycle = cycles[k];
    lv.flow = simple_flow_exact(cycles[k], lv.image->graph);
    lv.measure = measure_of_flow(to_double(lv.flow), lv.image->covering);
    chain.levels.push_back(std::move(lv));
  }
  chain.consistent = true;
  for (std::size_t k = 1; k < chain.levels.size(); ++k) {
    const ExactFlow down = project_impl(chain.levels[k].flow, chain.levels[k].parent_map,
                                        &chain.levels[k - 1].image->graph);
    if (!(down == chain.levels[k - 1].flow)) chain.consistent = false;
  }
  return chain;
}

}  // namespace

ErgodicChain refine_to_ergodic(const SystemMap& map, const Domain& domain,
                               const std::vector<int>& splits, int depth, const SeedRule& seed,
                               const RefineOptions& options) {
  if (depth < 2) throw PreconditionError("refine_to_ergodic needs depth >= 2");
  const Localization loc =
      localize(map, domain, splits, depth, options.edge_mode, options.scheme, options.threads);
  const auto& first = loc.levels.front();
  if (first.recurrent.vertices.empty())
    throw RefinementExhaustedError("the first level has no recurrent vertex", ErgodicChain{});
  const Digraph& g0 = first.image->graph;

  std::vector<SimpleCycle> seeds;
  switch (seed.kind) {
    case SeedRule::Kind::shortest_in_largest_class: {
      const std::vector<int>* largest = nullptr;
      for (const auto& cls : first.recurrent.classes)
        if (!largest || cls.size() > largest->size()) largest = &cls;
      seeds = shortest_simple_cycles(g0, *largest, options.candidates_per_level);
      break;
    }
    case SeedRule::Kind::containing_point: {
      const std::vector<int> ids = first.image->covering->members(seed.point);
      for (int v : ids) {
        std::vector<int> c = shortest_cycle_through(g0, v);
        if (!c.empty() && std::find(seeds.begin(), seeds.end(), SimpleCycle{c}) == seeds.end())
          seeds.push_back(SimpleCycle{std::move(c)});
      }
      break;
    }
    case SeedRule::Kind::explicit_cycle:
      validate_cycle(seed.cycle, g0);
      seeds.push_back(seed.cycle);
      break;
  }
  if (seeds.empty())
    throw RefinementExhaustedError("no seed cycle matches the seed rule", ErgodicChain{});

  ChainSearch search{loc, options, {}, {}, 0};
  for (const SimpleCycle& c : seeds) {
    if (++search.nodes > options.node_limit) break;
    search.path.assign(1, c);
    if (search.descend(0)) {
      ErgodicChain chain = assemble_chain(loc, search.path);
      chain.search_nodes = search.nodes;
      return chain;
    }
    if (search.nodes > options.node_limit) break;
  }
  ErgodicChain partial = assemble_chain(loc, search.deepest);
  partial.search_nodes = search.nodes;
  const bool capped = search.nodes > options.node_limit;
  throw RefinementExhaustedError(
      std::string(capped ? "search node limit reached" : "no consistent extension exists") +
          "; deepest chain reaches level " + std::to_string(search.deepest.size()) + " of " +
          std::to_string(loc.levels.size()),
      std::move(partial));
}

// ---- NNLS and hull membership ----

std::vector<double> nnls(const std::vector<std::vector<double>>& a_rows, const std::vector<double>& b_in,
                         double* residual) {
  const auto rows = static_cast<Eigen::Index>(a_rows.size());
  const auto cols = rows ? static_cast<Eigen::Index>(a_rows[0].size()) : 0;
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = a_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) b[i] = b_in[static_cast<std::size_t>(i)];

  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff());
  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    Eigen::MatrixXd ap(rows, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) ap.col(static_cast<Eigen::Index>(k)) = a.col(idx[k]);
    const Eigen::VectorXd zp = ap.colPivHouseholderQr().solve(b);
    z = Eigen::VectorXd::Zero(cols);
    for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = zp[static_cast<Eigen::Index>(k)];
  };
  for (int outer = 0; outer < 3 * static_cast<int>(cols) + 10; ++outer) {
    const Eigen::VectorXd w = a.transpose() * (b - a * x);
    Eigen::Index best = -1;
    for (Eigen::Index j = 0; j < cols; ++j)
      if (!passive[static_cast<std::size_t>(j)] && w[j] > tol && (best < 0 || w[j] > w[best])) best = j;
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;
    for (int inner = 0; inner < 3 * static_cast<int>(cols) + 10; ++inner) {
      Eigen::VectorXd z;
      solve_passive(z);
      bool feasible = true;
      for (Eigen::Index j = 0; j < cols; ++j)
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < cols; ++j)
        if (passive[static_cast<std::size_t>(j)] && z[j] <= 0.0)
          alpha = std::min(alpha, x[j] / (x[j] - z[j]));
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < cols; ++j)
        if (passive[static_cast<std::size_t>(j)] && x[j] <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x[j] = 0.0;
        }
    }
  }
  if (residual) *residual = (a * x - b).norm();
  return std::vector<double>(x.data(), x.data() + cols);
}

bool in_convex_hull(const std::vector<std::vector<double>>& points, const std::vector<double>& point,
                    double tol) {
  if (points.empty()) return false;
  const std::size_t dim = point.size();
  std::vector<std::vector<double>> a(dim + 1, std::vector<double>(points.size(), 1.0));
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < points.size(); ++j) a[i][j] = points[j][i];
  std::vector<double> b(point);
  b.push_back(1.0);
  double res = 0.0;
  nnls(a, b, &res);
  return res <= tol;
}

// ---- extreme-point check ----

ExtremeCheckReport extreme_projection_check(const Digraph& child, const Digraph& parent,
                                            const std::vector<int>& s,
                                            const ExtremeCheckOptions& options) {
  if (child.size() > options.max_vertices || child.arc_count() > options.max_arcs)
    throw CapError("extreme_projection_check is limited to " + std::to_string(options.max_vertices) +
                   " vertices and " + std::to_string(options.max_arcs) + " arcs (got " +
                   std::to_string(child.size()) + ", " + std::to_string(child.arc_count()) + ")");
  if (s.size() != child.size()) throw LineageError("graph map size differs from child graph size");
  ExtremeCheckReport rep;
  const std::vector<Arc> parent_arcs = parent.arcs();
  auto coords = [&](const Flow& f) {
    std::vector<double> x(parent_arcs.size(), 0.0);
    for (const auto& [arc, w] : f.weights) {
      const long k = parent.arc_index(arc.first, arc.second);
      if (k < 0) throw StructuralError("projection hits missing parent arc " + arc_name(arc));
      x[static_cast<std::size_t>(k)] = w;
    }
    return x;
  };
  std::vector<int> all(child.size());
  for (std::size_t v = 0; v < all.size(); ++v) all[v] = static_cast<int>(v);
  const auto cycles = shortest_simple_cycles(child, all, static_cast<std::size_t>(-1));
  rep.child_cycles = cycles.size();

  // Simple child flows must be extreme points of M(Q).
  const std::vector<Arc> child_arcs = child.arcs();
  std::vector<std::vector<double>> child_pts;
  for (const auto& c : cycles) {
    std::vector<double> x(child_arcs.size(), 0.0);
    for (const auto& [arc, w] : simple_flow(c, child).weights)
      x[static_cast<std::size_t>(child.arc_index(arc.first, arc.second))] = w;
    child_pts.push_back(std::move(x));
  }
  for (std::size_t k = 0; k < child_pts.size(); ++k) {
    std::vector<std::vector<double>> others;
    for (std::size_t j = 0; j < child_pts.size(); ++j)
      if (j != k) others.push_back(child_pts[j]);
    if (in_convex_hull(others, child_pts[k], options.tol)) {
      rep.inclusion_holds = false;
      rep.failures.push_back("simple child flow on cycle " + std::to_string(k) + " is not extreme");
    }
  }

  std::vector<std::vector<double>> projected;
  for (const auto& c : cycles) {
    const std::vector<double> x = coords(project_flow(simple_flow(c, child), s, &parent));
    bool dup = false;
    for (const auto& y : projected) {
      double diff = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) diff = std::max(diff, std::abs(x[i] - y[i]));
      if (diff <= options.tol) dup = true;
    }
    if (!dup) projected.push_back(x);
  }
  rep.projected_points = projected.size();

  // Extreme points of the projected polytope: points outside the hull of the rest.
  std::vector<std::vector<double>> extremes;
  for (std::size_t k = 0; k < projected.size(); ++k) {
    std::vector<std::vector<double>> others;
    for (std::size_t j = 0; j < projected.size(); ++j)
      if (j != k) others.push_back(projected[j]);
    if (others.empty() || !in_convex_hull(others, projected[k], options.tol))
      extremes.push_back(projected[k]);
  }
  rep.extreme_points = extremes.size();

  // Every projected flow (sampled mixtures) must lie in the hull of the
  // extreme points, otherwise some extreme point was missed.
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 8 && !cycles.empty(); ++trial) {
    std::vector<Flow> flows;
    std::vector<double> coef;
    double sum = 0.0;
    for (const auto& c : cycles) {
      flows.push_back(simple_flow(c, child));
      coef.push_back(static_cast<double>(rng() >> 11) * 0x1.0p-53 + 1e-3);
      sum += coef.back();
    }
    for (double& c : coef) c /= sum;
    const auto x = coords(project_flow(mix(flows, coef, 1e-9), s, &parent));
    if (!in_convex_hull(extremes, x, options.tol)) {
      rep.inclusion_holds = false;
      rep.failures.push_back("projected mixture outside the hull of extreme projections");
    }
  }

  // Simple parent flows: in the image ⇔ a simple child cycle lifts them.
  std::vector<int> pall(parent.size());
  for (std::size_t v = 0; v < pall.size(); ++v) pall[v] = static_cast<int>(v);
  for (const auto& pc : shortest_simple_cycles(parent, pall, static_cast<std::size_t>(-1))) {
    ++rep.parent_simple_flows;
    const Flow target = simple_flow(pc, parent);
    const auto tx = coords(target);
    const bool in_image = in_convex_hull(projected, tx, options.tol);
    if (in_image) ++rep.parent_simple_flows_in_image;
    const auto lift = extend_simple_flow(pc, child, s);
    bool lift_ok = false;
    if (lift) {
      const auto lx = coords(project_flow(simple_flow(*lift, child), s, &parent));
      double diff = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) diff = std::max(diff, std::abs(lx[i] - tx[i]));
      lift_ok = diff <= options.tol;
    }
    if (in_image != lift_ok) {
      rep.witness_holds = false;
      std::string name;
      for (int v : pc.vertices) name += std::to_string(v) + " ";
      rep.failures.push_back("parent cycle [ " + name + "]: in image " + (in_image ? "yes" : "no") +
                             ", simple lift " + (lift_ok ? "yes" : "no"));
    }
  }
  return rep;
}

ExtremeCheckReport extreme_projection_check(const GraphMap& s, const ExtremeCheckOptions& options) {
  return extreme_projection_check(s.child->graph, s.parent->graph, s.s, options);
}

}  // namespace symimg
