#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace symimg {

using Arc = std::pair<int, int>;

/// Directed graph on vertices 0..n-1 with sorted, duplicate-free adjacency.
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : adj_(n) {}
  Digraph(std::size_t n, const std::vector<Arc>& arcs);
  /// Takes adjacency lists as given; sorts and deduplicates them.
  static Digraph from_adjacency(std::vector<std::vector<int>> adj);

  std::size_t size() const noexcept { return adj_.size(); }
  std::size_t arc_count() const noexcept { return arc_count_; }
  const std::vector<int>& successors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
  bool has_arc(int u, int v) const;
  /// All arcs in (source, target) lexicographic order.
  std::vector<Arc> arcs() const;
  /// Index of arc (u, v) in arcs(), or -1.
  long arc_index(int u, int v) const;
  Digraph reversed() const;
  /// Subgraph induced by `vertices` (ascending), relabelled 0..k-1.
  Digraph induced(const std::vector<int>& vertices) const;

  bool operator==(const Digraph& o) const { return adj_ == o.adj_; }

 private:
  void finalize();

  std::vector<std::vector<int>> adj_;
  std::vector<std::size_t> offsets_;  // arc index of the first arc of each vertex
  std::size_t arc_count_ = 0;
};

/// Strongly connected components, each sorted ascending, ordered by their
/// smallest vertex.
std::vector<std::vector<int>> strongly_connected_components(const Digraph& g);

struct RecurrentClasses {
  std::vector<int> vertices;               // RV, ascending
  std::vector<std::vector<int>> classes;   // SCCs with a cycle, ordered by min id
};

/// Vertices on some cycle and their equivalence classes: SCCs of size > 1,
/// plus singletons carrying a self-loop.
RecurrentClasses recurrent_classes(const Digraph& g);

/// Vertex sequence of a shortest cycle through `start` (BFS), without the
/// repeated start; empty if `start` lies on no cycle.
std::vector<int> shortest_cycle_through(const Digraph& g, int start);

}  // namespace symimg
