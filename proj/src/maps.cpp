#include "symimg/maps.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "symimg/errors.hpp"

namespace symimg {

namespace {

double round_up(double v) { return std::nextafter(std::nextafter(v, 1e300), 1e300); }

// Largest singular value of [[a, b], [c, d]], rounded up.
double spectral_norm_2x2(double a, double b, double c, double d) {
  const double s = a * a + b * b + c * c + d * d;
  const double det = a * d - b * c;
  const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * det * det));
  return round_up(std::sqrt(0.5 * (s + disc)) * (1.0 + 1e-14));
}

// 1/(2π) padded by two ulps each side.
Interval inv_two_pi() {
  const double c = 1.0 / (2.0 * std::numbers::pi);
  return Interval(std::nextafter(std::nextafter(c, 0.0), 0.0), round_up(c));
}

Interval two_pi() { return Interval(2.0) * Interval::pi(); }

void require_dim(const Domain& d, std::size_t dim, const std::string& name) {
  if (d.dim() != dim)
    throw PreconditionError("map '" + name + "' needs a " + std::to_string(dim) +
                            "-dimensional domain");
}

}  // namespace

SystemMap rotation_map(double alpha) {
  SystemMap::Rules r;
  r.forward = [alpha](const Point& x) { return Point{x[0] + alpha}; };
  r.inverse = [alpha](const Point& x) { return Point{x[0] - alpha}; };
  r.interval = [alpha](const IntervalVector& x) { return IntervalVector{x[0] + Interval(alpha)}; };
  r.lipschitz = 1.0;
  return SystemMap("rotation", {{"alpha", alpha}}, Domain::circle(), std::move(r));
}

SystemMap identity_map() {
  SystemMap::Rules r;
  r.forward = [](const Point& x) { return x; };
  r.inverse = [](const Point& x) { return x; };
  r.interval = [](const IntervalVector& x) { return x; };
  r.lipschitz = 1.0;
  return SystemMap("identity", {}, Domain::circle(), std::move(r));
}

SystemMap square_map() {
  SystemMap::Rules r;
  r.forward = [](const Point& x) { return Point{x[0] * x[0]}; };
  r.inverse = [](const Point& x) { return Point{std::sqrt(std::max(0.0, x[0]))}; };
  r.interval = [](const IntervalVector& x) { return IntervalVector{sqr(x[0])}; };
  r.box_lipschitz = [](const Box& b) {
    return 2.0 * std::max(std::abs(b.lo[0]), std::abs(b.hi[0]));
  };
  r.lipschitz = 2.0;
  return SystemMap("square", {}, Domain::interval(0.0, 1.0), std::move(r));
}

SystemMap cat_map() {
  SystemMap::Rules r;
  r.forward = [](const Point& x) { return Point{2.0 * x[0] + x[1], x[0] + x[1]}; };
  r.inverse = [](const Point& x) { return Point{x[0] - x[1], -x[0] + 2.0 * x[1]}; };
  r.interval = [](const IntervalVector& x) {
    return IntervalVector{Interval(2.0) * x[0] + x[1], x[0] + x[1]};
  };
  r.lipschitz = spectral_norm_2x2(2.0, 1.0, 1.0, 1.0);
  return SystemMap("cat", {}, Domain::unit_torus(2), std::move(r));
}

SystemMap standard_map(double k) {
  SystemMap::Rules r;
  const double c = k / (2.0 * std::numbers::pi);
  r.forward = [c](const Point& x) {
    const double y = x[1] + c * std::sin(2.0 * std::numbers::pi * x[0]);
    return Point{x[0] + y, y};
  };
  r.inverse = [c](const Point& x) {
    const double px = x[0] - x[1];
    return Point{px, x[1] - c * std::sin(2.0 * std::numbers::pi * px)};
  };
  r.interval = [k](const IntervalVector& x) {
    const Interval kick = Interval(k) * inv_two_pi() * sin(two_pi() * x[0]);
    const Interval y = x[1] + kick;
    return IntervalVector{x[0] + y, y};
  };
  r.lipschitz = std::max(spectral_norm_2x2(1.0 + k, 1.0, k, 1.0),
                         spectral_norm_2x2(1.0 - k, 1.0, -k, 1.0));
  return SystemMap("standard", {{"k", k}}, Domain::unit_torus(2), std::move(r));
}

SystemMap affine_map(double a, double b, const Domain& domain) {
  require_dim(domain, 1, "affine");
  SystemMap::Rules r;
  r.forward = [a, b](const Point& x) { return Point{a * x[0] + b}; };
  if (a != 0.0) r.inverse = [a, b](const Point& x) { return Point{(x[0] - b) / a}; };
  r.interval = [a, b](const IntervalVector& x) {
    return IntervalVector{Interval(a) * x[0] + Interval(b)};
  };
  r.lipschitz = std::abs(a);
  return SystemMap("affine", {{"a", a}, {"b", b}}, domain, std::move(r));
}

std::vector<std::string> builtin_map_names() {
  return {"identity", "rotation", "square", "cat", "standard", "affine"};
}

namespace {

struct SpecParts {
  std::string name;
  std::map<std::string, double> params;
};

SpecParts split_spec(const std::string& spec) {
  SpecParts out;
  const auto colon = spec.find(':');
  out.name = spec.substr(0, colon);
  if (out.name.empty()) throw ParseError("empty map name in '" + spec + "'");
  if (colon == std::string::npos) return out;
  std::string rest = spec.substr(colon + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    const auto comma = rest.find(',', pos);
    const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                                         : comma - pos);
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ParseError("map parameter must be key=value: '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string val = item.substr(eq + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != val.size() || !std::isfinite(v))
      throw ParseError("map parameter '" + key + "' needs a finite number, got '" + val + "'");
    if (out.params.count(key)) throw ParseError("duplicate map parameter '" + key + "'");
    out.params[key] = v;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  const double v = it->second;
  params.erase(it);
  return v;
}

}  // namespace

ParsedMap parse_map(const std::string& spec, const std::optional<Domain>& domain) {
  SpecParts parts = split_spec(spec);
  std::vector<std::string> warnings;
  auto finish = [&](SystemMap m) {
    if (!parts.params.empty())
      throw ParseError("unknown parameter '" + parts.params.begin()->first + "' for map '" +
                       parts.name + "'");
    if (!m.has_inverse())
      warnings.push_back("map '" + m.spec() +
                         "' is not invertible; results assume a homeomorphism");
    return ParsedMap{std::move(m), std::move(warnings)};
  };
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const std::string& n = parts.name;

  auto rehome = [&](SystemMap m) -> SystemMap {
    if (!domain) return m;
    require_dim(*domain, m.domain().dim(), m.name());
    return m.rehomed(*domain);
  };

  if (n == "rotation") return finish(rehome(rotation_map(take(parts.params, "alpha", golden))));
  if (n == "identity") return finish(rehome(identity_map()));
  if (n == "square" || n == "squaring") return finish(rehome(square_map()));
  if (n == "cat") return finish(rehome(cat_map()));
  if (n == "standard") return finish(rehome(standard_map(take(parts.params, "k", 0.5))));
  if (n == "affine") {
    const double a = take(parts.params, "a", 1.0);
    const double b = take(parts.params, "b", 0.0);
    return finish(affine_map(a, b, domain ? *domain : Domain::interval(0.0, 1.0)));
  }
  throw ParseError("unknown map '" + n + "'");
}

}  // namespace symimg
