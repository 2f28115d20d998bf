#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "symimg/covering.hpp"
#include "symimg/errors.hpp"
#include "symimg/symbolic_image.hpp"
#include "symimg/system.hpp"

namespace symimg {

// Doubly infinite paths and orbits are represented by finite windows: entry
// k of a window has sequence index offset + k. Metric sums run over the
// window only.

struct PathWindow {
  long offset = 0;
  std::vector<int> vertices;

  std::size_t size() const noexcept { return vertices.size(); }
  bool operator==(const PathWindow&) const = default;
  auto operator<=>(const PathWindow&) const = default;
};

struct OrbitWindow {
  long offset = 0;
  std::vector<Point> points;

  std::size_t size() const noexcept { return points.size(); }
};

/// x, f(x), ..., f^{length-1}(x).
OrbitWindow orbit_segment(const SystemMap& map, const Point& x0, std::size_t length, long offset = 0);

/// Encoding under the half-open partition view: one path.
PathWindow encode(const OrbitWindow& orbit, const Covering& cov);
/// Every encoding through closed-cell memberships, lexicographic by cell id.
/// Throws CapError when more than `cap` paths would result.
std::vector<PathWindow> encode_all(const OrbitWindow& orbit, const Covering& cov,
                                   std::size_t cap = 4096);

struct Admissibility {
  bool admissible = true;
  /// Position k of the first missing arc z_k → z_{k+1}.
  std::optional<std::size_t> first_violation;
};

Admissibility is_admissible(const PathWindow& path, const Digraph& g);

struct TraceStrategy {
  enum class Kind { center, seeded_random, preimage_sample };
  Kind kind = Kind::center;
  std::uint64_t seed = 0;
  int samples = 64;  // preimage_sample: candidate points per cell

  static TraceStrategy center() { return {}; }
  static TraceStrategy seeded_random(std::uint64_t seed) { return {Kind::seeded_random, seed, 0}; }
  static TraceStrategy preimage_sample(int samples) { return {Kind::preimage_sample, 0, samples}; }
};

struct Trace {
  OrbitWindow orbit;
  /// Guaranteed bound on the defect of `orbit`: d when every point was
  /// chosen in M(z_k) ∩ f^{-1}(M(z_{k+1})), else q + d.
  double defect_bound = 0.0;
};

/// Pointwise selection x_k ∈ M(z_k). `map` is needed for preimage_sample.
/// Throws PreconditionError naming the first missing arc.
Trace trace_path(const PathWindow& path, const SymbolicImage& g, TraceStrategy strategy,
                 const SystemMap* map = nullptr);

/// max_k ρ(f(x_k), x_{k+1}).
double verify_eps_trajectory(const OrbitWindow& orbit, const SystemMap& map);

/// Σ_window λ^{|r|} δ(i_r, j_r).
double path_metric(const PathWindow& a, const PathWindow& b, double lambda);
/// 2^{-m} with m the largest radius on which the windows agree; 0 if equal.
double path_metric0(const PathWindow& a, const PathWindow& b);
/// Σ_window ρ(x_k, y_k) / 2^{|k|}.
double orbit_metric(const OrbitWindow& a, const OrbitWindow& b, const Domain& domain);

/// Vertexwise application of s.
PathWindow project_path(const PathWindow& path, const GraphMap& s);

/// Paths at successive subdivision levels with ω_t = s(ω_{t+1}).
struct ConsistentPathFamily {
  std::vector<SymbolicImagePtr> images;  // level 0 (coarsest) .. T
  std::vector<GraphMap> maps;            // maps[t]: level t+1 → level t
  std::vector<PathWindow> paths;
};

struct ShadowResult {
  OrbitWindow orbit;              // centers of the deepest cells
  std::vector<double> error_bound;  // per index: deepest cell diameter
  double max_error_bound = 0.0;   // d_T
  bool recurrent = false;         // every level's path periodic in the window
};

/// Throws ConsistencyError naming the failing level and index.
void check_consistent(const ConsistentPathFamily& family);
ShadowResult shadow(const ConsistentPathFamily& family);

/// Smallest p with 1 ≤ p ≤ size/2 and z_{k+p} = z_k on the window, if any.
std::optional<std::size_t> window_period(const PathWindow& path);

/// Family obtained by encoding `orbit` at every level of a localization
/// chain (partition view).
ConsistentPathFamily family_from_orbit(const Localization& loc, const OrbitWindow& orbit);

struct CodingWindowSets {
  std::size_t level = 0;
  /// sets[m]: window paths at `level` that lift to admissible paths at
  /// level + m, sorted.
  std::vector<std::vector<PathWindow>> sets;
  bool nested = true;
  const std::vector<PathWindow>& cod() const { return sets.back(); }
};

class CodingCapError : public CapError {
 public:
  CodingCapError(const std::string& what, CodingWindowSets partial)
      : CapError(what), partial_(std::move(partial)) {}
  const CodingWindowSets& partial() const noexcept { return partial_; }

 private:
  CodingWindowSets partial_;
};

/// images[0..] with maps[t]: level t+1 → level t. Enumerates admissible
/// window paths at `level` (at most `cap`) and filters by liftability.
CodingWindowSets coding_window_sets(const std::vector<SymbolicImagePtr>& images,
                                    const std::vector<GraphMap>& maps, std::size_t level,
                                    std::size_t window, std::size_t m_max,
                                    std::size_t cap = 100000);

/// True when `path` at level t lifts to an admissible path at level t + m.
bool lifts_to(const PathWindow& path, const std::vector<GraphMap>& maps, std::size_t level,
              std::size_t m);

}  // namespace symimg
