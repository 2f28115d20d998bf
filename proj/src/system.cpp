#include "symimg/system.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "symimg/errors.hpp"

namespace symimg {

std::string EdgeMode::to_string() const {
  if (kind == Kind::outer) return "outer";
  return "sample:" + std::to_string(samples);
}

EdgeMode parse_edge_mode(const std::string& text) {
  if (text == "outer") return EdgeMode::outer();
  const std::string prefix = "sample:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string num = text.substr(prefix.size());
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty() || n < 1)
      throw ParseError("sample edge mode needs a positive count: '" + text + "'");
    return EdgeMode::sample(n);
  }
  throw ParseError("unknown edge mode '" + text + "' (expected outer or sample:<n>)");
}

SystemMap::SystemMap(std::string name, std::map<std::string, double> parameters, Domain domain,
                     Rules rules)
    : name_(std::move(name)),
      parameters_(std::move(parameters)),
      domain_(std::move(domain)),
      rules_(std::move(rules)) {
  if (!rules_.forward) throw PreconditionError("map '" + name_ + "' has no forward rule");
}

SystemMap SystemMap::rehomed(Domain domain) const {
  if (domain.dim() != domain_.dim())
    throw PreconditionError("map '" + name_ + "' cannot move to a domain of another dimension");
  return SystemMap(name_, parameters_, std::move(domain), rules_);
}

std::string SystemMap::spec() const {
  std::ostringstream os;
  os.precision(17);
  os << name_;
  bool first = true;
  for (const auto& [k, v] : parameters_) {
    os << (first ? ':' : ',') << k << '=' << v;
    first = false;
  }
  return os.str();
}

Point SystemMap::eval_lifted(const Point& x) const {
  const Point y = rules_.forward(domain_.normalize(x));
  if (y.size() != domain_.dim()) throw Error("map '" + name_ + "' returned wrong dimension");
  return y;
}

Point SystemMap::eval(const Point& x) const { return domain_.normalize(eval_lifted(x)); }

Point SystemMap::eval_inverse(const Point& x) const {
  if (!rules_.inverse) throw CapabilityError("map '" + name_ + "' has no inverse");
  return domain_.normalize(rules_.inverse(domain_.normalize(x)));
}

std::vector<Point> stratified_points(const Box& box, int n) {
  const std::size_t dim = box.dim();
  int k = std::max(1, static_cast<int>(std::lround(std::pow(std::max(n, 1), 1.0 / dim))));
  while (std::pow(k, dim) < n && std::pow(k + 1, dim) <= 4.0 * n) ++k;
  std::size_t total = 1;
  for (std::size_t a = 0; a < dim; ++a) total *= static_cast<std::size_t>(k);
  std::vector<Point> pts;
  pts.reserve(total);
  std::vector<int> idx(dim, 0);
  for (std::size_t t = 0; t < total; ++t) {
    std::size_t r = t;
    for (std::size_t a = dim; a-- > 0;) {
      idx[a] = static_cast<int>(r % k);
      r /= k;
    }
    Point p(dim);
    for (std::size_t a = 0; a < dim; ++a)
      p[a] = box.lo[a] + (idx[a] + 0.5) / k * (box.hi[a] - box.lo[a]);
    pts.push_back(std::move(p));
  }
  return pts;
}

Box SystemMap::canonical_lift(Box b) const {
  for (std::size_t a = 0; a < domain_.dim(); ++a) {
    if (!domain_.wraps(a)) continue;
    const double len = domain_.period(a);
    if (b.hi[a] - b.lo[a] >= len) {
      b.lo[a] = domain_.lower(a);
      b.hi[a] = domain_.lower(a) + len;
      continue;
    }
    const double k = std::floor((b.lo[a] - domain_.lower(a)) / len);
    if (k != 0.0) {
      const Interval shift = Interval(k) * Interval(len);
      b.lo[a] = rnd::sub_down(b.lo[a], shift.hi);
      b.hi[a] = rnd::sub_up(b.hi[a], shift.lo);
    }
  }
  return b;
}

Box SystemMap::outer_image(const Box& box) const {
  const std::size_t dim = domain_.dim();
  std::optional<Box> result;
  if (rules_.interval) {
    IntervalVector in(dim);
    for (std::size_t a = 0; a < dim; ++a) in[a] = Interval(box.lo[a], box.hi[a]);
    const IntervalVector out = rules_.interval(in);
    Box e{Point(dim), Point(dim)};
    for (std::size_t a = 0; a < dim; ++a) {
      e.lo[a] = out[a].lo;
      e.hi[a] = out[a].hi;
    }
    result = e;
  }
  if (has_lipschitz()) {
    const double lip = rules_.box_lipschitz ? rules_.box_lipschitz(box) : *rules_.lipschitz;
    // Euclidean half-diagonal, rounded up.
    double r2 = 0.0;
    for (std::size_t a = 0; a < dim; ++a) {
      const double h = rnd::mul_up(rnd::sub_up(box.hi[a], box.lo[a]), 0.5);
      r2 = rnd::add_up(r2, rnd::mul_up(h, h));
    }
    const double reach = rnd::mul_up(lip, sqrt(Interval(r2)).hi);
    // Image of the center: use the interval rule when present so the
    // center image is itself enclosed, else pad the point value.
    const Point c = box.center();
    Box e{Point(dim), Point(dim)};
    if (rules_.interval) {
      IntervalVector in(c.begin(), c.end());
      const IntervalVector out = rules_.interval(in);
      for (std::size_t a = 0; a < dim; ++a) {
        e.lo[a] = rnd::sub_down(out[a].lo, reach);
        e.hi[a] = rnd::add_up(out[a].hi, reach);
      }
    } else {
      const Point fc = rules_.forward(c);
      for (std::size_t a = 0; a < dim; ++a) {
        const double pad = 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(fc[a]));
        e.lo[a] = rnd::sub_down(fc[a], reach + pad);
        e.hi[a] = rnd::add_up(fc[a], reach + pad);
      }
    }
    if (result) {
      // Both are enclosures in the same lift; the intersection is one too.
      for (std::size_t a = 0; a < dim; ++a) {
        result->lo[a] = std::max(result->lo[a], e.lo[a]);
        result->hi[a] = std::min(result->hi[a], e.hi[a]);
      }
    } else {
      result = e;
    }
  }
  return canonical_lift(*result);
}

std::vector<Box> SystemMap::sampled_image(const Box& box, int n) const {
  std::vector<Box> out;
  for (const Point& p : stratified_points(box, n)) {
    const Point y = canonical_lift(Box{rules_.forward(p), rules_.forward(p)}).lo;
    out.push_back(Box{y, y});
  }
  return out;
}

BoxEnclosure SystemMap::box_image(const Box& box, EdgeMode mode) const {
  if (box.dim() != domain_.dim()) throw PreconditionError("box dimension does not match domain");
  if (mode.is_outer()) {
    if (!rules_.interval && !has_lipschitz())
      throw CapabilityError("map '" + name_ +
                            "' has neither an interval extension nor a Lipschitz bound");
    return BoxEnclosure{{outer_image(box)}, true};
  }
  if (mode.samples < 1) throw PreconditionError("sample mode needs at least one sample");
  return BoxEnclosure{sampled_image(box, mode.samples), false};
}

double SystemMap::modulus_bound(double delta) const {
  if (delta < 0.0) throw PreconditionError("modulus_bound needs delta >= 0");
  if (!rules_.lipschitz)
    throw CapabilityError("map '" + name_ + "' has no modulus of continuity configured");
  return *rules_.lipschitz * delta;
}

double SystemMap::pseudo_orbit_deviation_bound(double eps, int k) const {
  if (eps < 0.0) throw PreconditionError("deviation bound needs eps >= 0");
  if (k < 0) throw PreconditionError("deviation bound needs k >= 0");
  if (!rules_.lipschitz)
    throw CapabilityError("map '" + name_ + "' has no modulus of continuity configured");
  double term = eps;
  double sum = 0.0;
  for (int l = 0; l < k; ++l) {
    sum += term;
    term = modulus_bound(term);
  }
  return sum;
}

double SystemMap::inverse_defect(int samples_per_axis) const {
  if (!rules_.inverse) throw CapabilityError("map '" + name_ + "' has no inverse");
  int n = 1;
  for (std::size_t a = 0; a < domain_.dim(); ++a) n *= samples_per_axis;
  double worst = 0.0;
  for (const Point& p : stratified_points(domain_.box(), n)) {
    worst = std::max(worst, domain_.distance(eval_inverse(eval(p)), p));
    worst = std::max(worst, domain_.distance(eval(eval_inverse(p)), p));
  }
  return worst;
}

}  // namespace symimg
