#include "symimg/oracles.hpp"

#include <algorithm>
#include <numeric>

#include "symimg/errors.hpp"

namespace symimg::oracle {

std::vector<SimpleCycle> all_simple_cycles(const Digraph& g) {
  const std::size_t n = g.size();
  if (n > 12) throw CapError("brute-force cycle enumeration is limited to 12 vertices");
  std::vector<SimpleCycle> out;
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    std::vector<int> members;
    for (std::size_t v = 0; v < n; ++v)
      if (mask & (1U << v)) members.push_back(static_cast<int>(v));
    // members[0] is the smallest; permute the rest.
    std::vector<int> rest(members.begin() + 1, members.end());
    do {
      std::vector<int> seq{members[0]};
      seq.insert(seq.end(), rest.begin(), rest.end());
      bool ok = true;
      for (std::size_t k = 0; k < seq.size() && ok; ++k)
        ok = g.has_arc(seq[k], seq[(k + 1) % seq.size()]);
      if (ok) out.push_back(SimpleCycle{seq});
    } while (std::next_permutation(rest.begin(), rest.end()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

RecurrentClasses closure_recurrent_classes(const Digraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (std::size_t u = 0; u < n; ++u)
    for (int v : g.successors(static_cast<int>(u))) reach[u][static_cast<std::size_t>(v)] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = 1;
  RecurrentClasses out;
  std::vector<char> assigned(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (!reach[v][v]) continue;
    out.vertices.push_back(static_cast<int>(v));
    if (assigned[v]) continue;
    std::vector<int> cls;
    for (std::size_t w = 0; w < n; ++w)
      if (reach[w][w] && reach[v][w] && reach[w][v]) {
        cls.push_back(static_cast<int>(w));
        assigned[w] = 1;
      }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

namespace {

template <class T>
T brute_extreme_mean(const Digraph& g, const std::vector<T>& b, bool want_min) {
  const auto cycles = all_simple_cycles(g);
  if (cycles.empty()) throw PreconditionError("graph has no cycle");
  bool first = true;
  T best{};
  for (const auto& c : cycles) {
    T sum{};
    for (int v : c.vertices) sum += b[static_cast<std::size_t>(v)];
    const T mean = sum / T(static_cast<std::int64_t>(c.size()));
    if (first || (want_min ? mean < best : best < mean)) best = mean;
    first = false;
  }
  return best;
}

}  // namespace

Rational brute_min_mean(const Digraph& g, const std::vector<Rational>& b) {
  return brute_extreme_mean(g, b, true);
}
Rational brute_max_mean(const Digraph& g, const std::vector<Rational>& b) {
  return brute_extreme_mean(g, b, false);
}
double brute_min_mean(const Digraph& g, const std::vector<double>& b) {
  return brute_extreme_mean(g, b, true);
}
double brute_max_mean(const Digraph& g, const std::vector<double>& b) {
  return brute_extreme_mean(g, b, false);
}

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Digraph random_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<Arc> arcs;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = 0; v < n; ++v)
      if (uniform(rng) < p) arcs.emplace_back(static_cast<int>(u), static_cast<int>(v));
  return Digraph(n, arcs);
}

Digraph random_strong_graph(std::size_t n, double p, std::mt19937_64& rng) {
  std::vector<Arc> arcs = random_graph(n, p, rng).arcs();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng() % i]);
  for (std::size_t k = 0; k < n; ++k) arcs.emplace_back(perm[k], perm[(k + 1) % n]);
  return Digraph(n, arcs);
}

Flow random_cycle_mixture(const Digraph& g, std::size_t terms, std::mt19937_64& rng) {
  const auto cycles = all_simple_cycles(g);
  if (cycles.empty() || terms == 0) return {};
  const std::size_t k = 1 + rng() % terms;
  std::vector<Flow> flows;
  std::vector<double> coef;
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    flows.push_back(simple_flow(cycles[rng() % cycles.size()], g));
    coef.push_back(0.05 + uniform(rng));
    sum += coef.back();
  }
  for (double& c : coef) c /= sum;
  return mix(flows, coef, 1e-9);
}

GraphPair random_graph_pair(std::size_t child_n, std::size_t parent_n, double p, bool extra_arcs,
                            std::mt19937_64& rng) {
  if (parent_n == 0 || child_n < parent_n) throw PreconditionError("need child_n >= parent_n >= 1");
  GraphPair gp;
  gp.s.resize(child_n);
  for (std::size_t v = 0; v < child_n; ++v)
    gp.s[v] = v < parent_n ? static_cast<int>(v) : static_cast<int>(rng() % parent_n);
  gp.child = random_graph(child_n, p, rng);
  std::vector<Arc> parent_arcs;
  for (const auto& [u, v] : gp.child.arcs())
    parent_arcs.emplace_back(gp.s[static_cast<std::size_t>(u)], gp.s[static_cast<std::size_t>(v)]);
  if (extra_arcs)
    for (std::size_t u = 0; u < parent_n; ++u)
      for (std::size_t v = 0; v < parent_n; ++v)
        if (uniform(rng) < p / 2) parent_arcs.emplace_back(static_cast<int>(u), static_cast<int>(v));
  gp.parent = Digraph(parent_n, parent_arcs);
  return gp;
}

std::vector<GraphPair> small_graph_corpus(std::uint64_t seed, std::size_t random_count) {
  std::vector<GraphPair> out;
  // Two disjoint self-loops collapsed onto one parent vertex.
  out.push_back({Digraph(2, {{0, 0}, {1, 1}}), Digraph(1, {{0, 0}}), {0, 0}});
  // Figure-eight child over a parent with two self-loops.
  out.push_back({Digraph(3, {{0, 1}, {1, 0}, {0, 2}, {2, 0}}), Digraph(2, {{0, 0}, {1, 1}, {0, 1}, {1, 0}}),
                 {0, 0, 1}});
  // Double cover of a 2-cycle: child 4-cycle 0a→1a→0b→1b.
  out.push_back({Digraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}), Digraph(2, {{0, 1}, {1, 0}}), {0, 1, 0, 1}});
  // Parent 2-cycle with a lift that needs two windings plus a spurious loop.
  out.push_back({Digraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}, {1, 1}}), Digraph(2, {{0, 1}, {1, 0}, {1, 1}, {0, 0}}),
                 {0, 1, 0, 1}});
  std::mt19937_64 rng(seed);
  while (out.size() < 4 + random_count) {
    const std::size_t parent_n = 1 + rng() % 4;
    const std::size_t child_n = parent_n + rng() % (9 - parent_n);
    GraphPair gp = random_graph_pair(child_n, parent_n, 0.15 + 0.25 * uniform(rng), rng() % 2 == 0, rng);
    if (gp.child.arc_count() > 16 || gp.child.size() > 8) continue;
    out.push_back(std::move(gp));
  }
  return out;
}

}  // namespace symimg::oracle
