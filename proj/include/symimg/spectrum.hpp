#pragma once

#include <string>
#include <vector>

#include "symimg/flow.hpp"
#include "symimg/symbolic_image.hpp"

namespace symimg {

/// Vertex values b(i) = φ(center of M(i)).
struct Framing {
  std::vector<double> values;
  std::string label;  // description of φ, for reports
};

/// Throws PreconditionError naming the vertex where φ is not finite.
Framing frame(const SymbolicImage& g, const ScalarFunction& phi, std::string label = "phi");

template <class T>
struct MeanCycle {
  T value{};
  SimpleCycle cycle;  // canonical, lexicographically smallest optimal cycle
};

/// Minimum cycle mean of Σ b(i)/p over the cycles of a strongly connected
/// graph (Karp), with b(i) on every arc leaving i. The witness is the
/// lexicographically smallest optimal simple cycle. Vertices are local to g.
template <class T>
MeanCycle<T> min_mean_cycle(const Digraph& g, const std::vector<T>& b);

/// Same with negated weights: the maximum cycle mean.
template <class T>
MeanCycle<T> max_mean_cycle(const Digraph& g, const std::vector<T>& b);

struct SpectrumInterval {
  std::size_t class_id = 0;
  std::vector<int> vertices;
  double alpha = 0.0;
  double beta = 0.0;
  SimpleCycle min_cycle;  // global vertex ids
  SimpleCycle max_cycle;
};

/// One interval per recurrent class, in class order.
std::vector<SpectrumInterval> spectrum(const SymbolicImage& g, const Framing& framing);

struct ExtremalMeasures {
  std::size_t class_id = 0;
  CellMeasure mu_alpha;
  CellMeasure mu_beta;
};

std::vector<ExtremalMeasures> extremal_measures(const SymbolicImage& g,
                                                const std::vector<SpectrumInterval>& spec);

/// Mean of b along a cycle.
double cycle_mean(const SimpleCycle& c, const std::vector<double>& b);

}  // namespace symimg
