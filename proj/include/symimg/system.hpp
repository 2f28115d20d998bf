#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symimg/geometry.hpp"
#include "symimg/interval.hpp"

namespace symimg {

using IntervalVector = std::vector<Interval>;

/// How f(M(i)) is realized when building arcs.
struct EdgeMode {
  enum class Kind { outer, sample };
  Kind kind = Kind::outer;
  int samples = 0;  // sample mode only

  static EdgeMode outer() { return {Kind::outer, 0}; }
  static EdgeMode sample(int n) { return {Kind::sample, n}; }
  bool is_outer() const { return kind == Kind::outer; }
  std::string to_string() const;  // "outer" or "sample:<n>"
  bool operator==(const EdgeMode&) const = default;
};

/// Parses "outer" / "sample:<n>".
EdgeMode parse_edge_mode(const std::string& text);

struct BoxEnclosure {
  std::vector<Box> boxes;  // lifted coordinates on wrapped axes
  bool guaranteed_outer = false;
};

/// A homeomorphism f of a box/torus domain, given by point and interval rules.
///
/// All rules work in lifted coordinates: on wrapped axes the forward rule
/// may return values outside [lower, upper) and `eval` wraps them. Interval
/// extensions and Lipschitz bounds refer to the same lifted rule.
class SystemMap {
 public:
  struct Rules {
    std::function<Point(const Point&)> forward;
    std::function<Point(const Point&)> inverse;                       // optional
    std::function<IntervalVector(const IntervalVector&)> interval;    // optional
    std::function<double(const Box&)> box_lipschitz;                  // optional
    std::optional<double> lipschitz;  // global bound, drives modulus_bound
  };

  SystemMap(std::string name, std::map<std::string, double> parameters, Domain domain,
            Rules rules);

  const std::string& name() const noexcept { return name_; }
  const std::map<std::string, double>& parameters() const noexcept { return parameters_; }
  const Domain& domain() const noexcept { return domain_; }
  bool has_inverse() const { return static_cast<bool>(rules_.inverse); }
  bool has_interval_extension() const { return static_cast<bool>(rules_.interval); }
  bool has_lipschitz() const { return rules_.lipschitz.has_value() || rules_.box_lipschitz; }
  /// Same rules on another domain of equal dimension.
  SystemMap rehomed(Domain domain) const;
  /// Canonical "name:key=value,..." string.
  std::string spec() const;

  /// f(x), wrapped into the domain. Throws DomainEscapeError.
  Point eval(const Point& x) const;
  /// f^{-1}(x); throws CapabilityError when no inverse is configured.
  Point eval_inverse(const Point& x) const;
  /// Unwrapped forward rule, for callers that track lifts themselves.
  Point eval_lifted(const Point& x) const;

  /// Outer enclosure (interval extension ∩ Lipschitz ball) or sampled image.
  BoxEnclosure box_image(const Box& box, EdgeMode mode) const;

  /// η(δ) = L·δ with the configured global Lipschitz constant.
  double modulus_bound(double delta) const;
  /// Σ_{l<k} η^l(ε): bound on ρ(x_k, f^k(x_0)) for an ε-pseudo-orbit.
  double pseudo_orbit_deviation_bound(double eps, int k) const;

  /// Largest |f(f^{-1}(x)) - x| and |f^{-1}(f(x)) - x| over a sample grid.
  double inverse_defect(int samples_per_axis) const;

 private:
  Box outer_image(const Box& box) const;
  std::vector<Box> sampled_image(const Box& box, int n) const;
  Box canonical_lift(Box b) const;

  std::string name_;
  std::map<std::string, double> parameters_;
  Domain domain_;
  Rules rules_;
};

/// Deterministic stratified sample points of a box: k points per axis with
/// k^dim close to n, at the centers of the sub-boxes.
std::vector<Point> stratified_points(const Box& box, int n);

}  // namespace symimg
