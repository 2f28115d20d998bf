#pragma once

#include <random>
#include <vector>

#include "symimg/digraph.hpp"
#include "symimg/flow.hpp"
#include "symimg/rational.hpp"

// Brute-force reference implementations and random generators, kept
// deliberately naive and independent of the production algorithms.
namespace symimg::oracle {

/// All simple cycles by subset × permutation enumeration, canonical form,
/// sorted. Intended for graphs with at most ~9 vertices.
std::vector<SimpleCycle> all_simple_cycles(const Digraph& g);

/// Vertices on a cycle and their classes via transitive closure.
RecurrentClasses closure_recurrent_classes(const Digraph& g);

/// Extremal cycle means over all simple cycles.
Rational brute_min_mean(const Digraph& g, const std::vector<Rational>& b);
Rational brute_max_mean(const Digraph& g, const std::vector<Rational>& b);
double brute_min_mean(const Digraph& g, const std::vector<double>& b);
double brute_max_mean(const Digraph& g, const std::vector<double>& b);

/// Each arc present independently with probability p (self-loops included).
Digraph random_graph(std::size_t n, double p, std::mt19937_64& rng);
/// random_graph plus a Hamiltonian cycle along a random permutation.
Digraph random_strong_graph(std::size_t n, double p, std::mt19937_64& rng);

/// Random convex combination of up to `terms` simple flows; empty flow if
/// the graph has no cycle.
Flow random_cycle_mixture(const Digraph& g, std::size_t terms, std::mt19937_64& rng);

/// Uniform double in [0, 1).
double uniform(std::mt19937_64& rng);

struct GraphPair {
  Digraph child;
  Digraph parent;
  std::vector<int> s;
};

/// Child graph with a surjective vertex map s onto a parent whose arcs are
/// exactly the images of child arcs (plus optional extra parent arcs).
GraphPair random_graph_pair(std::size_t child_n, std::size_t parent_n, double p, bool extra_arcs,
                            std::mt19937_64& rng);

/// Deterministic corpus of small (child, parent, s) triples: hand-built
/// cases plus seeded random ones, all within 8 vertices and 16 arcs.
std::vector<GraphPair> small_graph_corpus(std::uint64_t seed, std::size_t random_count);

}  // namespace symimg::oracle
