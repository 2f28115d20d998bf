#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "symimg/geometry.hpp"

namespace symimg {

struct Cell {
  int id = 0;
  Box box;
  int depth = 0;
  /// Id of the cell in the previous covering this cell came from. Split
  /// children have depth = parent depth + 1; cells carried over unsplit
  /// (keep_rest) keep their box and depth.
  std::optional<int> parent;
};

enum class SubdivisionScheme { all_axes, longest_axis };

/// Uniform bucket grid over the domain mapping buckets to the cells that
/// overlap them. Used for candidate search only; exact tests follow.
class CellIndex {
 public:
  CellIndex() = default;
  CellIndex(const Domain& domain, const std::vector<Cell>& cells);

  /// Sorted candidate ids for a (possibly lifted) box. Superset of the cells
  /// that intersect it.
  std::vector<int> candidates(const Box& box) const;

 private:
  bool axis_range(std::size_t a, double lo, double hi, std::vector<long>& out) const;

  const Domain* domain_ = nullptr;
  std::size_t n_cells_ = 0;
  std::vector<double> bucket_width_;
  std::vector<long> buckets_;
  std::vector<std::vector<int>> table_;  // empty when indexing is disabled
};

/// Closed box cells over a domain. Immutable; ids are 0..size()-1.
class Covering {
 public:
  Covering(Domain domain, std::vector<Cell> cells);
  Covering(const Covering&) = delete;
  Covering& operator=(const Covering&) = delete;

  const Domain& domain() const noexcept { return domain_; }
  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const Cell& cell(int id) const;
  std::size_t size() const noexcept { return cells_.size(); }
  /// Largest wrap-aware cell diameter.
  double diameter() const noexcept { return diameter_; }
  double volume() const;
  double cell_diameter(int id) const { return domain_.diameter(cell(id).box); }

  /// h(x): all cells whose closed box contains x, ascending.
  std::vector<int> members(const Point& x) const;
  /// Single owner of x under the half-open attribution rule (see README).
  int locate(const Point& x) const;
  /// Cells whose half-open box meets the (possibly lifted) closed box,
  /// ascending; the same attribution rule as locate().
  std::vector<int> intersecting(const Box& box) const;

 private:
  Domain domain_;
  std::vector<Cell> cells_;
  double diameter_ = 0.0;
  CellIndex index_;
};

using CoveringPtr = std::shared_ptr<const Covering>;

/// Uniform grid of ∏ splits boxes; ids in axis-lexicographic order (axis 0
/// most significant).
CoveringPtr initial_covering(const Domain& domain, const std::vector<int>& splits);

struct Subdivision {
  CoveringPtr covering;
  /// New cell id → id in the input covering (the graph map s).
  std::vector<int> parent_map;
};

/// Replaces each target cell by its children. Non-target cells are dropped
/// unless keep_rest is set. New ids are assigned in ascending order of the
/// originating cell, children in axis-lexicographic order.
Subdivision subdivide(const Covering& cov, std::vector<int> targets, SubdivisionScheme scheme,
                      bool keep_rest = false);

/// Half-open partition view of a covering (C*): every covered point has
/// exactly one owner.
class PartitionView {
 public:
  explicit PartitionView(CoveringPtr covering);
  int locate(const Point& x) const { return covering_->locate(x); }
  const Covering& covering() const noexcept { return *covering_; }
  const CoveringPtr& covering_ptr() const noexcept { return covering_; }

 private:
  CoveringPtr covering_;
};

}  // namespace symimg
