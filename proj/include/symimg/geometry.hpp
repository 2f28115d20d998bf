#pragma once

#include <string>
#include <vector>

namespace symimg {

using Point = std::vector<double>;

/// Closed axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const noexcept { return lo.size(); }
  Point center() const;
  double volume() const;
  double width(std::size_t axis) const { return hi[axis] - lo[axis]; }
  bool operator==(const Box&) const = default;
};

/// Box-shaped phase space; axes flagged `wrap` are identified end to end
/// (circle / torus factors).
class Domain {
 public:
  Domain(Point lower, Point upper, std::vector<bool> wrap);

  static Domain interval(double lo, double hi, bool wrap = false);
  static Domain circle() { return interval(0.0, 1.0, true); }
  static Domain unit_torus(std::size_t dim = 2);

  std::size_t dim() const noexcept { return lower_.size(); }
  double lower(std::size_t a) const { return lower_[a]; }
  double upper(std::size_t a) const { return upper_[a]; }
  double period(std::size_t a) const { return upper_[a] - lower_[a]; }
  bool wraps(std::size_t a) const { return wrap_[a]; }
  const Point& lower() const noexcept { return lower_; }
  const Point& upper() const noexcept { return upper_; }
  const std::vector<bool>& wrap() const noexcept { return wrap_; }
  Box box() const { return Box{lower_, upper_}; }
  double volume() const { return box().volume(); }

  /// Wraps torus coordinates into [lower, upper); throws DomainEscapeError
  /// if a non-wrapped coordinate lies outside [lower, upper].
  Point normalize(const Point& x) const;
  /// Wraps one coordinate; no range check on non-wrapped axes.
  double wrap_coordinate(std::size_t a, double v) const;
  bool contains(const Point& x) const;

  /// Euclidean distance with the shortest representative on wrapped axes.
  double distance(const Point& x, const Point& y) const;
  double axis_distance(std::size_t a, double u, double v) const;
  /// Largest wrap-aware distance between two points of the box.
  double diameter(const Box& b) const;

  /// Closed intersection test; `image` may be given in lifted coordinates
  /// on wrapped axes, `cell` must lie inside the domain box.
  bool intersects(const Box& image, const Box& cell) const;
  /// Whether `image` meets the cell taken half-open, [lo, hi) per axis, with
  /// the upper face of a non-wrapped axis closed when it is the domain face.
  bool meets_half_open(const Box& image, const Box& cell) const;
  /// Closed containment of x (already normalized) in the cell.
  bool cell_contains(const Box& cell, const Point& x) const;
  /// Volume of image ∩ cell, wrap-aware.
  double overlap_volume(const Box& a, const Box& cell) const;

  std::string to_string() const;
  bool operator==(const Domain&) const = default;

 private:
  Point lower_;
  Point upper_;
  std::vector<bool> wrap_;
};

/// Parses "lo,hi[,wrap];lo,hi[,wrap];..." into a Domain.
Domain parse_domain(const std::string& text);

}  // namespace symimg
