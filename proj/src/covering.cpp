#include "symimg/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "symimg/errors.hpp"

namespace symimg {

namespace {

constexpr long kMaxBuckets = 1L << 22;

}  // namespace

CellIndex::CellIndex(const Domain& domain, const std::vector<Cell>& cells)
    : domain_(&domain), n_cells_(cells.size()) {
  const std::size_t dim = domain.dim();
  if (cells.empty()) return;
  bucket_width_.assign(dim, std::numeric_limits<double>::infinity());
  for (const Cell& c : cells)
    for (std::size_t a = 0; a < dim; ++a)
      if (c.box.width(a) > 0.0) bucket_width_[a] = std::min(bucket_width_[a], c.box.width(a));
  long total = 1;
  buckets_.assign(dim, 1);
  for (std::size_t a = 0; a < dim; ++a) {
    if (!std::isfinite(bucket_width_[a])) bucket_width_[a] = domain.period(a);
    const double nb = std::ceil(domain.period(a) / bucket_width_[a] - 1e-9);
    if (nb > static_cast<double>(kMaxBuckets)) return;
    buckets_[a] = std::max(1L, static_cast<long>(nb));
    total *= buckets_[a];
    if (total > kMaxBuckets) return;
  }
  table_.assign(static_cast<std::size_t>(total), {});
  std::vector<std::vector<long>> ranges(dim);
  for (const Cell& c : cells) {
    for (std::size_t a = 0; a < dim; ++a) {
      ranges[a].clear();
      const double w = bucket_width_[a];
      long i0 = static_cast<long>(std::floor((c.box.lo[a] - domain.lower(a)) / w));
      long i1 = static_cast<long>(std::ceil((c.box.hi[a] - domain.lower(a)) / w)) - 1;
      i0 = std::clamp(i0, 0L, buckets_[a] - 1);
      i1 = std::clamp(std::max(i1, i0), 0L, buckets_[a] - 1);
      for (long i = i0; i <= i1; ++i) ranges[a].push_back(i);
    }
    // Cartesian product of per-axis ranges.
    std::vector<std::size_t> pos(dim, 0);
    while (true) {
      long lin = 0;
      for (std::size_t a = 0; a < dim; ++a) lin = lin * buckets_[a] + ranges[a][pos[a]];
      table_[static_cast<std::size_t>(lin)].push_back(c.id);
      std::size_t a = dim;
      while (a-- > 0) {
        if (++pos[a] < ranges[a].size()) break;
        pos[a] = 0;
      }
      if (a == static_cast<std::size_t>(-1)) break;
    }
  }
}

bool CellIndex::axis_range(std::size_t a, double lo, double hi, std::vector<long>& out) const {
  out.clear();
  const double w = bucket_width_[a];
  const long nb = buckets_[a];
  const double base = domain_->lower(a);
  if (domain_->wraps(a) && hi - lo >= domain_->period(a)) {
    for (long i = 0; i < nb; ++i) out.push_back(i);
    return true;
  }
  const double f0 = std::floor((lo - base) / w) - 1.0;
  const double f1 = std::floor((hi - base) / w) + 1.0;
  if (domain_->wraps(a)) {
    if (f1 - f0 + 1.0 >= static_cast<double>(nb)) {
      for (long i = 0; i < nb; ++i) out.push_back(i);
      return true;
    }
    for (long i = static_cast<long>(f0); i <= static_cast<long>(f1); ++i)
      out.push_back(((i % nb) + nb) % nb);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return true;
  }
  const long i0 = std::max(0L, static_cast<long>(std::max(f0, -1.0)));
  const long i1 = std::min(nb - 1, static_cast<long>(std::min(f1, static_cast<double>(nb))));
  for (long i = i0; i <= i1; ++i) out.push_back(i);
  return !out.empty();
}

std::vector<int> CellIndex::candidates(const Box& box) const {
  std::vector<int> out;
  if (n_cells_ == 0) return out;
  if (table_.empty()) {
    out.resize(n_cells_);
    for (std::size_t i = 0; i < n_cells_; ++i) out[i] = static_cast<int>(i);
    return out;
  }
  const std::size_t dim = buckets_.size();
  std::vector<std::vector<long>> ranges(dim);
  double combos = 1.0;
  for (std::size_t a = 0; a < dim; ++a) {
    if (!axis_range(a, box.lo[a], box.hi[a], ranges[a])) return out;
    combos *= static_cast<double>(ranges[a].size());
  }
  if (combos > static_cast<double>(n_cells_) * 4.0) {
    out.resize(n_cells_);
    for (std::size_t i = 0; i < n_cells_; ++i) out[i] = static_cast<int>(i);
    return out;
  }
  std::vector<std::size_t> pos(dim, 0);
  while (true) {
    long lin = 0;
    for (std::size_t a = 0; a < dim; ++a) lin = lin * buckets_[a] + ranges[a][pos[a]];
    const auto& bucket = table_[static_cast<std::size_t>(lin)];
    out.insert(out.end(), bucket.begin(), bucket.end());
    std::size_t a = dim;
    while (a-- > 0) {
      if (++pos[a] < ranges[a].size()) break;
      pos[a] = 0;
    }
    if (a == static_cast<std::size_t>(-1)) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Covering::Covering(Domain domain, std::vector<Cell> cells)
    : domain_(std::move(domain)), cells_(std::move(cells)) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const Cell& c = cells_[i];
    if (c.id != static_cast<int>(i)) throw PreconditionError("cell ids must be 0..n-1 in order");
    if (c.box.dim() != domain_.dim() || c.box.hi.size() != domain_.dim())
      throw PreconditionError("cell dimension does not match domain");
    for (std::size_t a = 0; a < domain_.dim(); ++a) {
      if (!(c.box.lo[a] <= c.box.hi[a]) || c.box.lo[a] < domain_.lower(a) ||
          c.box.hi[a] > domain_.upper(a))
        throw PreconditionError("cell " + std::to_string(i) + " is not inside the domain");
    }
    diameter_ = std::max(diameter_, domain_.diameter(c.box));
  }
  index_ = CellIndex(domain_, cells_);
}

const Cell& Covering::cell(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= cells_.size())
    throw PreconditionError("cell id " + std::to_string(id) + " out of range");
  return cells_[static_cast<std::size_t>(id)];
}

double Covering::volume() const {
  double v = 0.0;
  for (const Cell& c : cells_) v += c.box.volume();
  return v;
}

std::vector<int> Covering::members(const Point& x) const {
  Point y;
  try {
    y = domain_.normalize(x);
  } catch (const DomainEscapeError& e) {
    throw NotCoveredError(std::string("point is outside the domain: ") + e.what());
  }
  std::vector<int> out;
  for (int id : index_.candidates(Box{y, y}))
    if (domain_.cell_contains(cells_[static_cast<std::size_t>(id)].box, y)) out.push_back(id);
  if (out.empty()) throw NotCoveredError("point is not covered by any cell");
  return out;
}

int Covering::locate(const Point& x) const {
  const std::vector<int> ids = members(x);
  if (ids.size() == 1) return ids.front();
  const Point y = domain_.normalize(x);
  // Owner: x in [lo, hi) on as many axes as possible (all, for a complete
  // grid), earlier axes first, then lowest id.
  int best = -1;
  std::vector<bool> best_key;
  for (int id : ids) {
    const Box& b = cells_[static_cast<std::size_t>(id)].box;
    std::vector<bool> key(domain_.dim());
    for (std::size_t a = 0; a < domain_.dim(); ++a) key[a] = !(b.lo[a] <= y[a] && y[a] < b.hi[a]);
    if (best < 0 || key < best_key) {
      best = id;
      best_key = std::move(key);
    }
  }
  return best;
}

std::vector<int> Covering::intersecting(const Box& box) const {
  std::vector<int> out;
  for (int id : index_.candidates(box))
    if (domain_.meets_half_open(box, cells_[static_cast<std::size_t>(id)].box)) out.push_back(id);
  return out;
}

CoveringPtr initial_covering(const Domain& domain, const std::vector<int>& splits) {
  const std::size_t dim = domain.dim();
  if (splits.size() != dim)
    throw PreconditionError("need one split count per axis (" + std::to_string(dim) + ")");
  std::size_t total = 1;
  for (int s : splits) {
    if (s < 1) throw PreconditionError("split counts must be >= 1");
    total *= static_cast<std::size_t>(s);
  }
  std::vector<Cell> cells;
  cells.reserve(total);
  std::vector<int> idx(dim, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t r = t;
    for (std::size_t a = dim; a-- > 0;) {
      idx[a] = static_cast<int>(r % static_cast<std::size_t>(splits[a]));
      r /= static_cast<std::size_t>(splits[a]);
    }
    Box b{Point(dim), Point(dim)};
    for (std::size_t a = 0; a < dim; ++a) {
      const double w = domain.period(a) / splits[a];
      b.lo[a] = domain.lower(a) + idx[a] * w;
      b.hi[a] = idx[a] + 1 == splits[a] ? domain.upper(a) : domain.lower(a) + (idx[a] + 1) * w;
    }
    cells.push_back(Cell{static_cast<int>(t), std::move(b), 0, std::nullopt});
  }
  return std::make_shared<const Covering>(domain, std::move(cells));
}

namespace {

std::vector<Box> children_of(const Box& b, SubdivisionScheme scheme) {
  const std::size_t dim = b.dim();
  std::vector<Box> out;
  if (scheme == SubdivisionScheme::longest_axis) {
    std::size_t axis = 0;
    for (std::size_t a = 1; a < dim; ++a)
      if (b.width(a) > b.width(axis)) axis = a;
    const double mid = 0.5 * (b.lo[axis] + b.hi[axis]);
    Box lo = b;
    Box hi = b;
    lo.hi[axis] = mid;
    hi.lo[axis] = mid;
    out.push_back(std::move(lo));
    out.push_back(std::move(hi));
    return out;
  }
  const std::size_t n = std::size_t{1} << dim;
  for (std::size_t c = 0; c < n; ++c) {
    Box child = b;
    for (std::size_t a = 0; a < dim; ++a) {
      const double mid = 0.5 * (b.lo[a] + b.hi[a]);
      const bool upper = (c >> (dim - 1 - a)) & 1U;
      if (upper)
        child.lo[a] = mid;
      else
        child.hi[a] = mid;
    }
    out.push_back(std::move(child));
  }
  return out;
}

}  // namespace

Subdivision subdivide(const Covering& cov, std::vector<int> targets, SubdivisionScheme scheme,
                      bool keep_rest) {
  if (targets.empty()) throw PreconditionError("subdivide needs at least one target cell");
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  for (int id : targets)
    if (id < 0 || static_cast<std::size_t>(id) >= cov.size())
      throw PreconditionError("subdivide: invalid cell id " + std::to_string(id));
  std::vector<bool> is_target(cov.size(), false);
  for (int id : targets) is_target[static_cast<std::size_t>(id)] = true;

  std::vector<Cell> cells;
  std::vector<int> parent_map;
  for (const Cell& c : cov.cells()) {
    if (is_target[static_cast<std::size_t>(c.id)]) {
      for (Box& child : children_of(c.box, scheme)) {
        const int id = static_cast<int>(cells.size());
        cells.push_back(Cell{id, std::move(child), c.depth + 1, c.id});
        parent_map.push_back(c.id);
      }
    } else if (keep_rest) {
      const int id = static_cast<int>(cells.size());
      cells.push_back(Cell{id, c.box, c.depth, c.id});
      parent_map.push_back(c.id);
    }
  }
  return Subdivision{std::make_shared<const Covering>(cov.domain(), std::move(cells)),
                     std::move(parent_map)};
}

PartitionView::PartitionView(CoveringPtr covering) : covering_(std::move(covering)) {
  if (!covering_) throw PreconditionError("partition view needs a covering");
}

}  // namespace symimg
