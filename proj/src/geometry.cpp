#include "symimg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "symimg/errors.hpp"
#include "symimg/interval.hpp"

namespace symimg {

Point Box::center() const {
  Point c(lo.size());
  for (std::size_t a = 0; a < lo.size(); ++a) c[a] = 0.5 * (lo[a] + hi[a]);
  return c;
}

double Box::volume() const {
  double v = 1.0;
  for (std::size_t a = 0; a < lo.size(); ++a) v *= hi[a] - lo[a];
  return v;
}

Domain::Domain(Point lower, Point upper, std::vector<bool> wrap)
    : lower_(std::move(lower)), upper_(std::move(upper)), wrap_(std::move(wrap)) {
  if (lower_.empty()) throw PreconditionError("domain must have at least one axis");
  if (upper_.size() != lower_.size() || wrap_.size() != lower_.size())
    throw PreconditionError("domain bounds and wrap flags differ in length");
  for (std::size_t a = 0; a < lower_.size(); ++a) {
    if (!(lower_[a] < upper_[a]) || !std::isfinite(lower_[a]) || !std::isfinite(upper_[a]))
      throw PreconditionError("domain axis " + std::to_string(a) + " needs lower < upper");
  }
}

Domain Domain::interval(double lo, double hi, bool wrap) { return Domain({lo}, {hi}, {wrap}); }

Domain Domain::unit_torus(std::size_t dim) {
  return Domain(Point(dim, 0.0), Point(dim, 1.0), std::vector<bool>(dim, true));
}

double Domain::wrap_coordinate(std::size_t a, double v) const {
  if (!wrap_[a]) return v;
  const double lo = lower_[a];
  const double len = period(a);
  if (v >= lo && v < upper_[a]) return v;
  double r = std::fmod(v - lo, len);
  if (r < 0.0) r += len;
  double out = lo + r;
  if (out >= upper_[a]) out -= len;
  if (out < lo) out = lo;
  return out;
}

Point Domain::normalize(const Point& x) const {
  if (x.size() != dim()) throw PreconditionError("point dimension does not match domain");
  Point y(x);
  for (std::size_t a = 0; a < dim(); ++a) {
    if (!std::isfinite(y[a])) throw DomainEscapeError(static_cast<int>(a), y[a]);
    if (wrap_[a]) {
      y[a] = wrap_coordinate(a, y[a]);
    } else if (y[a] < lower_[a] || y[a] > upper_[a]) {
      throw DomainEscapeError(static_cast<int>(a), y[a]);
    }
  }
  return y;
}

bool Domain::contains(const Point& x) const {
  if (x.size() != dim()) return false;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (!std::isfinite(x[a])) return false;
    if (!wrap_[a] && (x[a] < lower_[a] || x[a] > upper_[a])) return false;
  }
  return true;
}

double Domain::axis_distance(std::size_t a, double u, double v) const {
  double d = std::abs(u - v);
  if (wrap_[a]) {
    const double len = period(a);
    d = std::fmod(d, len);
    d = std::min(d, len - d);
  }
  return d;
}

double Domain::distance(const Point& x, const Point& y) const {
  double s = 0.0;
  for (std::size_t a = 0; a < dim(); ++a) {
    const double d = axis_distance(a, x[a], y[a]);
    s += d * d;
  }
  return std::sqrt(s);
}

double Domain::diameter(const Box& b) const {
  double s = 0.0;
  for (std::size_t a = 0; a < dim(); ++a) {
    double w = b.hi[a] - b.lo[a];
    if (wrap_[a]) w = std::min(w, 0.5 * period(a));
    s += w * w;
  }
  return std::sqrt(s);
}

namespace {

// Shifted cell bounds for lattice offset k on a wrapped axis, rounded outward.
std::pair<double, double> shifted(double c0, double c1, double shift) {
  if (shift == 0.0) return {c0, c1};
  return {rnd::add_down(c0, shift), rnd::add_up(c1, shift)};
}

}  // namespace

bool Domain::intersects(const Box& image, const Box& cell) const {
  for (std::size_t a = 0; a < dim(); ++a) {
    const double l = image.lo[a];
    const double h = image.hi[a];
    if (!wrap_[a]) {
      if (std::max(l, cell.lo[a]) > std::min(h, cell.hi[a])) return false;
      continue;
    }
    const double len = period(a);
    if (h - l >= len) continue;
    // Image endpoints may be lifted by any number of periods; bring the
    // lower endpoint near the domain and test neighbouring lattice shifts.
    const double base = std::floor((l - lower_[a]) / len);
    bool hit = false;
    for (double k = base - 1.0; k <= base + 2.0 && !hit; k += 1.0) {
      const auto [c0, c1] = shifted(cell.lo[a], cell.hi[a], k * len);
      hit = std::max(l, c0) <= std::min(h, c1);
    }
    if (!hit) return false;
  }
  return true;
}

bool Domain::meets_half_open(const Box& image, const Box& cell) const {
  for (std::size_t a = 0; a < dim(); ++a) {
    const double l = image.lo[a];
    const double h = image.hi[a];
    if (!wrap_[a]) {
      const bool closed_top = cell.hi[a] == upper_[a];
      if (h < cell.lo[a] || (closed_top ? l > cell.hi[a] : l >= cell.hi[a])) return false;
      continue;
    }
    const double len = period(a);
    if (h - l >= len) continue;
    const double base = std::floor((l - lower_[a]) / len);
    bool hit = false;
    for (double k = base - 1.0; k <= base + 2.0 && !hit; k += 1.0) {
      const auto [c0, c1] = shifted(cell.lo[a], cell.hi[a], k * len);
      hit = c0 <= h && l < c1;
    }
    if (!hit) return false;
  }
  return true;
}

bool Domain::cell_contains(const Box& cell, const Point& x) const {
  for (std::size_t a = 0; a < dim(); ++a) {
    double v = x[a];
    if (v >= cell.lo[a] && v <= cell.hi[a]) continue;
    // x is normalized into [lower, upper); the top face is its other lift.
    if (wrap_[a] && v == lower_[a] && cell.hi[a] == upper_[a]) continue;
    return false;
  }
  return true;
}

double Domain::overlap_volume(const Box& a, const Box& cell) const {
  double v = 1.0;
  for (std::size_t ax = 0; ax < dim(); ++ax) {
    const double l = a.lo[ax];
    const double h = a.hi[ax];
    double len_sum = 0.0;
    if (!wrap_[ax]) {
      len_sum = std::max(0.0, std::min(h, cell.hi[ax]) - std::max(l, cell.lo[ax]));
    } else {
      const double len = period(ax);
      const double base = std::floor((l - lower_[ax]) / len);
      for (double k = base - 1.0; k <= base + 2.0; k += 1.0) {
        const double c0 = cell.lo[ax] + k * len;
        const double c1 = cell.hi[ax] + k * len;
        len_sum += std::max(0.0, std::min(h, c1) - std::max(l, c0));
      }
      len_sum = std::min(len_sum, cell.hi[ax] - cell.lo[ax]);
    }
    v *= len_sum;
    if (v == 0.0) return 0.0;
  }
  return v;
}

std::string Domain::to_string() const {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t a = 0; a < dim(); ++a) {
    if (a) os << ';';
    os << lower_[a] << ',' << upper_[a];
    if (wrap_[a]) os << ",wrap";
  }
  return os.str();
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw ParseError("expected a number, got '" + s + "'");
  return v;
}

}  // namespace

Domain parse_domain(const std::string& text) {
  Point lo;
  Point hi;
  std::vector<bool> wrap;
  for (const auto& axis : split(text, ';')) {
    const auto parts = split(axis, ',');
    if (parts.size() < 2 || parts.size() > 3)
      throw ParseError("domain axis must be 'lo,hi' or 'lo,hi,wrap': '" + axis + "'");
    lo.push_back(parse_number(parts[0]));
    hi.push_back(parse_number(parts[1]));
    if (parts.size() == 3) {
      if (parts[2] != "wrap") throw ParseError("unknown domain axis flag '" + parts[2] + "'");
      wrap.push_back(true);
    } else {
      wrap.push_back(false);
    }
  }
  try {
    return Domain(lo, hi, wrap);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

}  // namespace symimg
