#include "symimg/digraph.hpp"

#include <algorithm>
#include <deque>
#include <string>

#include "symimg/errors.hpp"

namespace symimg {

Digraph::Digraph(std::size_t n, const std::vector<Arc>& arcs) : adj_(n) {
  for (const auto& [u, v] : arcs) {
    if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n || static_cast<std::size_t>(v) >= n)
      throw PreconditionError("arc (" + std::to_string(u) + "," + std::to_string(v) +
                              ") references a missing vertex");
    adj_[static_cast<std::size_t>(u)].push_back(v);
  }
  finalize();
}

Digraph Digraph::from_adjacency(std::vector<std::vector<int>> adj) {
  Digraph g;
  const auto n = static_cast<int>(adj.size());
  for (const auto& row : adj)
    for (int v : row)
      if (v < 0 || v >= n) throw PreconditionError("adjacency references a missing vertex");
  g.adj_ = std::move(adj);
  g.finalize();
  return g;
}

void Digraph::finalize() {
  offsets_.assign(adj_.size() + 1, 0);
  arc_count_ = 0;
  for (std::size_t u = 0; u < adj_.size(); ++u) {
    auto& row = adj_[u];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    offsets_[u] = arc_count_;
    arc_count_ += row.size();
  }
  offsets_[adj_.size()] = arc_count_;
}

bool Digraph::has_arc(int u, int v) const {
  if (u < 0 || static_cast<std::size_t>(u) >= adj_.size()) return false;
  const auto& row = adj_[static_cast<std::size_t>(u)];
  return std::binary_search(row.begin(), row.end(), v);
}

std::vector<Arc> Digraph::arcs() const {
  std::vector<Arc> out;
  out.reserve(arc_count_);
  for (std::size_t u = 0; u < adj_.size(); ++u)
    for (int v : adj_[u]) out.emplace_back(static_cast<int>(u), v);
  return out;
}

long Digraph::arc_index(int u, int v) const {
  if (u < 0 || static_cast<std::size_t>(u) >= adj_.size()) return -1;
  const auto& row = adj_[static_cast<std::size_t>(u)];
  const auto it = std::lower_bound(row.begin(), row.end(), v);
  if (it == row.end() || *it != v) return -1;
  return static_cast<long>(offsets_[static_cast<std::size_t>(u)] +
                           static_cast<std::size_t>(it - row.begin()));
}

Digraph Digraph::reversed() const {
  std::vector<std::vector<int>> r(adj_.size());
  for (std::size_t u = 0; u < adj_.size(); ++u)
    for (int v : adj_[u]) r[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
  return from_adjacency(std::move(r));
}

Digraph Digraph::induced(const std::vector<int>& vertices) const {
  std::vector<int> local(adj_.size(), -1);
  for (std::size_t k = 0; k < vertices.size(); ++k)
    local[static_cast<std::size_t>(vertices[k])] = static_cast<int>(k);
  std::vector<std::vector<int>> adj(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k)
    for (int v : adj_[static_cast<std::size_t>(vertices[k])])
      if (local[static_cast<std::size_t>(v)] >= 0) adj[k].push_back(local[static_cast<std::size_t>(v)]);
  return from_adjacency(std::move(adj));
}

std::vector<std::vector<int>> strongly_connected_components(const Digraph& g) {
  // Iterative Tarjan.
  const std::size_t n = g.size();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;  // (vertex, next successor position)
  std::vector<std::vector<int>> comps;
  int counter = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] >= 0) continue;
    call.emplace_back(static_cast<int>(root), 0);
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      const auto vi = static_cast<std::size_t>(v);
      if (pos == 0 && index[vi] < 0) {
        index[vi] = low[vi] = counter++;
        stack.push_back(v);
        on_stack[vi] = true;
      }
      const auto& succ = g.successors(v);
      if (pos < succ.size()) {
        const int w = succ[pos++];
        const auto wi = static_cast<std::size_t>(w);
        if (index[wi] < 0)
          call.emplace_back(w, 0);
        else if (on_stack[wi])
          low[vi] = std::min(low[vi], index[wi]);
        continue;
      }
      if (low[vi] == index[vi]) {
        std::vector<int> comp;
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
      const int done = v;
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().first);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(done)]);
      }
    }
  }
  std::sort(comps.begin(), comps.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return comps;
}

RecurrentClasses recurrent_classes(const Digraph& g) {
  RecurrentClasses out;
  for (auto& comp : strongly_connected_components(g)) {
    if (comp.size() == 1 && !g.has_arc(comp[0], comp[0])) continue;
    out.vertices.insert(out.vertices.end(), comp.begin(), comp.end());
    out.classes.push_back(std::move(comp));
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

std::vector<int> shortest_cycle_through(const Digraph& g, int start) {
  if (g.has_arc(start, start)) return {start};
  std::vector<int> pred(g.size(), -1);
  std::deque<int> queue;
  for (int w : g.successors(start)) {
    if (pred[static_cast<std::size_t>(w)] >= 0) continue;
    pred[static_cast<std::size_t>(w)] = start;
    queue.push_back(w);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.successors(v)) {
      if (w == start) {
        std::vector<int> cycle;
        for (int x = v; x != start; x = pred[static_cast<std::size_t>(x)]) cycle.push_back(x);
        cycle.push_back(start);
        std::reverse(cycle.begin(), cycle.end());
        return cycle;
      }
      if (pred[static_cast<std::size_t>(w)] >= 0) continue;
      pred[static_cast<std::size_t>(w)] = v;
      queue.push_back(w);
    }
  }
  return {};
}

}  // namespace symimg
