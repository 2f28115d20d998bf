#include "symimg/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "symimg/rational.hpp"

namespace symimg {

namespace {

template <class T>
bool tight(const T& lhs, const T& rhs);

template <>
bool tight<Rational>(const Rational& lhs, const Rational& rhs) {
  return lhs == rhs;
}

template <>
bool tight<double>(const double& lhs, const double& rhs) {
  return std::abs(lhs - rhs) <= 1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

// Vertices reachable from `from` inside `allowed`, with `target` counted
// as reachable when an allowed vertex has an arc into it.
bool reaches(const std::vector<std::vector<int>>& adj, int from, int target,
             const std::vector<char>& allowed) {
  std::vector<char> seen(adj.size(), 0);
  std::vector<int> stack{from};
  seen[static_cast<std::size_t>(from)] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (int y : adj[static_cast<std::size_t>(x)]) {
      if (y == target) return true;
      if (seen[static_cast<std::size_t>(y)] || !allowed[static_cast<std::size_t>(y)]) continue;
      seen[static_cast<std::size_t>(y)] = 1;
      stack.push_back(y);
    }
  }
  return false;
}

// Lexicographically smallest simple cycle of the graph `adj`, or empty.
std::vector<int> smallest_cycle(const std::vector<std::vector<int>>& adj) {
  const std::size_t n = adj.size();
  for (std::size_t s = 0; s < n; ++s) {
    const int start = static_cast<int>(s);
    std::vector<char> allowed(n, 0);
    for (std::size_t v = s + 1; v < n; ++v) allowed[v] = 1;
    if (!reaches(adj, start, start, allowed)) continue;
    std::vector<int> cycle{start};
    int cur = start;
    while (true) {
      const auto& succ = adj[static_cast<std::size_t>(cur)];
      if (std::find(succ.begin(), succ.end(), start) != succ.end()) return cycle;
      int next = -1;
      for (int w : succ) {
        if (!allowed[static_cast<std::size_t>(w)]) continue;
        allowed[static_cast<std::size_t>(w)] = 0;
        const bool ok = reaches(adj, w, start, allowed);
        allowed[static_cast<std::size_t>(w)] = 1;
        if (ok) {
          next = w;
          break;
        }
      }
      if (next < 0) break;  // cannot happen when `start` lies on a cycle
      allowed[static_cast<std::size_t>(next)] = 0;
      cycle.push_back(next);
      cur = next;
    }
  }
  return {};
}

}  // namespace

Framing frame(const SymbolicImage& g, const ScalarFunction& phi, std::string label) {
  Framing f;
  f.label = std::move(label);
  f.values.reserve(g.size());
  for (const Cell& c : g.covering->cells()) {
    double v = 0.0;
    try {
      v = phi(c.box.center());
    } catch (const std::exception& e) {
      throw PreconditionError("framing failed at vertex " + std::to_string(c.id) + ": " + e.what());
    }
    if (!std::isfinite(v))
      throw PreconditionError("framing is not finite at vertex " + std::to_string(c.id));
    f.values.push_back(v);
  }
  return f;
}

template <class T>
MeanCycle<T> min_mean_cycle(const Digraph& g, const std::vector<T>& b) {
  const std::size_t n = g.size();
  if (n == 0) throw PreconditionError("min_mean_cycle needs a nonempty class");
  if (b.size() != n) throw PreconditionError("framing size differs from graph size");
  if (strongly_connected_components(g).size() != 1 || (n == 1 && !g.has_arc(0, 0)))
    throw PreconditionError("min_mean_cycle needs a strongly connected class with a cycle");

  // Karp: D[k][v] = minimum weight of a k-arc walk from vertex 0 to v.
  std::vector<std::vector<std::optional<T>>> d(n + 1, std::vector<std::optional<T>>(n));
  d[0][0] = T{};
  for (std::size_t k = 1; k <= n; ++k)
    for (std::size_t u = 0; u < n; ++u) {
      if (!d[k - 1][u]) continue;
      const T base = *d[k - 1][u] + b[u];
      for (int v : g.successors(static_cast<int>(u))) {
        auto& slot = d[k][static_cast<std::size_t>(v)];
        if (!slot || base < *slot) slot = base;
      }
    }
  std::optional<T> best;
  for (std::size_t v = 0; v < n; ++v) {
    if (!d[n][v]) continue;
    std::optional<T> worst;
    for (std::size_t k = 0; k < n; ++k) {
      if (!d[k][v]) continue;
      const T val = (*d[n][v] - *d[k][v]) / T(static_cast<std::int64_t>(n - k));
      if (!worst || *worst < val) worst = val;
    }
    if (worst && (!best || *worst < *best)) best = worst;
  }
  const T lambda = *best;

  // Potentials for reduced weights b(u) - λ (no negative cycles), then the
  // tight subgraph carries exactly the optimal cycles.
  std::vector<T> pi(n, T{});
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u)
      for (int v : g.successors(static_cast<int>(u))) {
        const T cand = pi[u] + b[u] - lambda;
        if (cand < pi[static_cast<std::size_t>(v)] &&
            !tight(cand, pi[static_cast<std::size_t>(v)])) {
          pi[static_cast<std::size_t>(v)] = cand;
          changed = true;
        }
      }
    if (!changed) break;
  }
  std::vector<std::vector<int>> tight_adj(n);
  for (std::size_t u = 0; u < n; ++u)
    for (int v : g.successors(static_cast<int>(u)))
      if (tight(pi[u] + b[u] - lambda, pi[static_cast<std::size_t>(v)]))
        tight_adj[u].push_back(v);
  std::vector<int> cyc = smallest_cycle(tight_adj);
  if (cyc.empty()) throw Error("min_mean_cycle: no tight cycle found");
  MeanCycle<T> out;
  out.value = lambda;
  out.cycle.vertices = std::move(cyc);
  return out;
}

template <class T>
MeanCycle<T> max_mean_cycle(const Digraph& g, const std::vector<T>& b) {
  std::vector<T> neg;
  neg.reserve(b.size());
  for (const T& x : b) neg.push_back(-x);
  MeanCycle<T> r = min_mean_cycle(g, neg);
  r.value = -r.value;
  return r;
}

template MeanCycle<double> min_mean_cycle<double>(const Digraph&, const std::vector<double>&);
template MeanCycle<Rational> min_mean_cycle<Rational>(const Digraph&, const std::vector<Rational>&);
template MeanCycle<double> max_mean_cycle<double>(const Digraph&, const std::vector<double>&);
template MeanCycle<Rational> max_mean_cycle<Rational>(const Digraph&, const std::vector<Rational>&);

double cycle_mean(const SimpleCycle& c, const std::vector<double>& b) {
  if (c.vertices.empty()) throw PreconditionError("empty cycle");
  double s = 0.0;
  for (int v : c.vertices) s += b[static_cast<std::size_t>(v)];
  return s / static_cast<double>(c.size());
}

std::vector<SpectrumInterval> spectrum(const SymbolicImage& g, const Framing& framing) {
  if (framing.values.size() != g.size()) throw PreconditionError("framing size differs from graph size");
  std::vector<SpectrumInterval> out;
  const RecurrentClasses rc = recurrent_vertices(g);
  for (std::size_t k = 0; k < rc.classes.size(); ++k) {
    const auto& cls = rc.classes[k];
    const Digraph sub = g.graph.induced(cls);
    std::vector<double> b;
    for (int v : cls) b.push_back(framing.values[static_cast<std::size_t>(v)]);
    const auto lo = min_mean_cycle(sub, b);
    const auto hi = max_mean_cycle(sub, b);
    SpectrumInterval iv;
    iv.class_id = k;
    iv.vertices = cls;
    for (int v : lo.cycle.vertices) iv.min_cycle.vertices.push_back(cls[static_cast<std::size_t>(v)]);
    for (int v : hi.cycle.vertices) iv.max_cycle.vertices.push_back(cls[static_cast<std::size_t>(v)]);
    // Report the witness means so value and witness agree to rounding.
    iv.alpha = cycle_mean(iv.min_cycle, framing.values);
    iv.beta = cycle_mean(iv.max_cycle, framing.values);
    out.push_back(std::move(iv));
  }
  return out;
}

std::vector<ExtremalMeasures> extremal_measures(const SymbolicImage& g,
                                                const std::vector<SpectrumInterval>& spec) {
  std::vector<ExtremalMeasures> out;
  for (const auto& iv : spec) {
    ExtremalMeasures em;
    em.class_id = iv.class_id;
    em.mu_alpha = measure_of_flow(simple_flow(iv.min_cycle, g.graph), g.covering);
    em.mu_beta = measure_of_flow(simple_flow(iv.max_cycle, g.graph), g.covering);
    out.push_back(std::move(em));
  }
  return out;
}

}  // namespace symimg
