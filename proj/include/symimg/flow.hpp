#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symimg/covering.hpp"
#include "symimg/digraph.hpp"
#include "symimg/errors.hpp"
#include "symimg/rational.hpp"
#include "symimg/symbolic_image.hpp"
#include "symimg/system.hpp"

namespace symimg {

/// Arc distribution; only arcs with nonzero weight are stored.
template <class W>
struct BasicFlow {
  std::map<Arc, W> weights;

  W total() const {
    W s{};
    for (const auto& [arc, w] : weights) s += w;
    return s;
  }
  /// m_i = Σ_j m_ij for i in 0..n-1.
  std::vector<W> masses(std::size_t n) const {
    std::vector<W> m(n, W{});
    for (const auto& [arc, w] : weights) m[static_cast<std::size_t>(arc.first)] += w;
    return m;
  }
  W weight(const Arc& a) const {
    const auto it = weights.find(a);
    return it == weights.end() ? W{} : it->second;
  }
  bool operator==(const BasicFlow&) const = default;
};

using Flow = BasicFlow<double>;
using ExactFlow = BasicFlow<Rational>;

Flow to_double(const ExactFlow& f);

/// Ordered distinct vertices i_1 → ... → i_p → i_1.
struct SimpleCycle {
  std::vector<int> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
  /// Rotation starting at the smallest vertex.
  SimpleCycle canonical() const;
  bool operator==(const SimpleCycle&) const = default;
  auto operator<=>(const SimpleCycle&) const = default;
};

/// Throws PreconditionError on repeated vertices or missing arcs.
void validate_cycle(const SimpleCycle& c, const Digraph& g);

struct FlowCheck {
  bool valid = false;
  double normalization_residual = 0.0;
  double balance_residual = 0.0;
  bool nonnegative = true;
};

/// Checks nonnegativity, unit mass and balance at every vertex with tolerance
/// `tol`. Weight on a missing arc throws StructuralError.
FlowCheck is_flow(const Flow& f, const Digraph& g, double tol = 1e-12);

ExactFlow simple_flow_exact(const SimpleCycle& c, const Digraph& g);
Flow simple_flow(const SimpleCycle& c, const Digraph& g);

Flow mix(const std::vector<Flow>& flows, const std::vector<double>& coefficients, double tol = 1e-12);

struct CycleTerm {
  SimpleCycle cycle;
  double coefficient = 0.0;
};

/// Repeatedly extracts a cycle through the minimum-weight arc.
std::vector<CycleTerm> decompose(const Flow& f, const Digraph& g);

/// s*: m*_{ij} = Σ over child arcs p→q with s(p)→s(q) = i→j.
Flow project_flow(const Flow& f, const GraphMap& s);
ExactFlow project_flow(const ExactFlow& f, const GraphMap& s);
/// Same on bare graphs; parent arcs are checked when `parent` is given.
Flow project_flow(const Flow& f, const std::vector<int>& s, const Digraph* parent = nullptr);

/// Piecewise-constant density m_i / v(M(i)) on each cell.
struct CellMeasure {
  CoveringPtr covering;
  std::vector<double> masses;

  /// μ(A) for a box A (wrap-aware).
  double operator()(const Box& a) const;
  double total() const;
};

/// Measure giving cell M(i) the flow mass through vertex i, spread uniformly
/// over the cell. Throws PreconditionError on zero-volume cells.
CellMeasure measure_of_flow(const Flow& f, CoveringPtr covering);

using ScalarFunction = std::function<double(const Point&)>;

/// Σ_i m_i φ(center(M(i))).
double integrate(const CellMeasure& mu, const ScalarFunction& phi);

// ---- measure → flow trace (h*) ----

struct WeightedPoint {
  Point x;
  double weight = 0.0;
};

/// Produces weighted points for a covering; `n` is the per-cell sample count.
using MeasureSampler = std::function<std::vector<WeightedPoint>(const Covering&, int n)>;

/// Lebesgue measure normalized over the covered volume.
MeasureSampler lebesgue_sampler();
/// Piecewise-constant density of a CellMeasure on the same covering.
MeasureSampler cell_measure_sampler(CellMeasure mu);
MeasureSampler dirac_sampler(Point x);
MeasureSampler mixture_sampler(std::vector<std::pair<double, MeasureSampler>> parts);

struct FlowEstimate {
  Flow flow;
  std::vector<std::string> warnings;
  double dropped_mass = 0.0;      // sample mass whose arc was missing or uncovered
  double repair_change = 0.0;     // ℓ² size of the balance correction
};

/// m_ij ≈ μ({x ∈ M*(i) : f(x) ∈ M*(j)}) from stratified samples, then
/// normalized and projected onto Kirchhoff balance on the sample support.
FlowEstimate flow_of_measure(const MeasureSampler& sampler, const PartitionView& view,
                             const SystemMap& map, const Digraph& g, int samples_per_cell);

/// Minimal ℓ² correction on the support of `f` restoring balance; negative
/// results are clipped and the correction repeated. Returns the total change.
double repair_balance(Flow& f, std::size_t n_vertices, int max_rounds = 50);

// ---- lifting simple flows through subdivision ----

/// Simple child cycle whose simple flow projects onto the simple flow of
/// `cycle`: shortest cycle of the layered subgraph, smallest start first.
/// The result starts at a child of cycle.vertices[0] and its k-th vertex
/// lies over cycle.vertices[k mod p]. nullopt when no extension exists.
std::optional<SimpleCycle> extend_simple_flow(const SimpleCycle& cycle, const GraphMap& s);
std::optional<SimpleCycle> extend_simple_flow(const SimpleCycle& cycle, const Digraph& child,
                                              const std::vector<int>& s);

/// Distinct simple extensions ordered by (length, vertex sequence), at most
/// `limit` of them.
std::vector<SimpleCycle> extension_candidates(const SimpleCycle& cycle, const Digraph& child,
                                              const std::vector<int>& s, std::size_t limit);

/// Simple cycles of g inside `vertices` (ascending), canonical form,
/// ordered by (length, vertex sequence); at most `limit` of them.
std::vector<SimpleCycle> shortest_simple_cycles(const Digraph& g, const std::vector<int>& vertices,
                                                std::size_t limit);

// ---- consistent simple-flow chains ----

struct SeedRule {
  enum class Kind { shortest_in_largest_class, containing_point, explicit_cycle };
  Kind kind = Kind::shortest_in_largest_class;
  Point point;
  SimpleCycle cycle;

  static SeedRule shortest_in_largest_class() { return {}; }
  static SeedRule containing_point(Point x) { return {Kind::containing_point, std::move(x), {}}; }
  static SeedRule explicit_cycle(SimpleCycle c) { return {Kind::explicit_cycle, {}, std::move(c)}; }
};

struct ErgodicLevel {
  SymbolicImagePtr image;
  std::vector<int> parent_map;  // empty at the first level
  SimpleCycle cycle;
  ExactFlow flow;
  CellMeasure measure;
};

struct ErgodicChain {
  std::vector<ErgodicLevel> levels;
  /// s* m^{k+1} = m^k verified in exact arithmetic for every k.
  bool consistent = false;
  std::size_t search_nodes = 0;
};

struct RefineOptions {
  EdgeMode edge_mode = EdgeMode::outer();
  SubdivisionScheme scheme = SubdivisionScheme::all_axes;
  std::size_t candidates_per_level = 32;
  std::size_t node_limit = 200000;
  unsigned threads = 1;
};

class RefinementExhaustedError : public ExhaustionError {
 public:
  RefinementExhaustedError(const std::string& what, ErgodicChain partial)
      : ExhaustionError(what), partial_(std::move(partial)) {}
  const ErgodicChain& partial() const noexcept { return partial_; }

 private:
  ErgodicChain partial_;
};

/// Builds `depth` localization levels, picks a seed cycle at the first level
/// and lifts it level by level, backtracking over candidate extensions.
ErgodicChain refine_to_ergodic(const SystemMap& map, const Domain& domain,
                               const std::vector<int>& splits, int depth, const SeedRule& seed,
                               const RefineOptions& options = {});

// ---- extreme points of projected flow polytopes ----

struct ExtremeCheckOptions {
  std::size_t max_vertices = 8;
  std::size_t max_arcs = 16;
  double tol = 1e-9;
};

struct ExtremeCheckReport {
  std::size_t child_cycles = 0;
  std::size_t projected_points = 0;  // distinct projections
  std::size_t extreme_points = 0;
  /// ext(s*(M(Q))) ⊆ s*(ext(M(Q))).
  bool inclusion_holds = true;
  std::size_t parent_simple_flows = 0;
  std::size_t parent_simple_flows_in_image = 0;
  /// Every parent simple flow in the image has a simple child preimage found
  /// by extend_simple_flow, and every found extension lies in the image.
  bool witness_holds = true;
  std::vector<std::string> failures;

  bool ok() const { return inclusion_holds && witness_holds; }
};

ExtremeCheckReport extreme_projection_check(const Digraph& child, const Digraph& parent,
                                            const std::vector<int>& s,
                                            const ExtremeCheckOptions& options = {});
ExtremeCheckReport extreme_projection_check(const GraphMap& s, const ExtremeCheckOptions& options = {});

/// Lawson–Hanson nonnegative least squares: argmin_{x ≥ 0} ||A x - b||.
/// A is row-major rows × cols. Returns x; `residual` receives ||A x - b||.
std::vector<double> nnls(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                         double* residual = nullptr);

/// Whether `point` lies in the convex hull of `points` within `tol`.
bool in_convex_hull(const std::vector<std::vector<double>>& points, const std::vector<double>& point,
                    double tol);

}  // namespace symimg
