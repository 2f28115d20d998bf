#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symimg/system.hpp"

namespace symimg {

// Built-in maps. Each ships an interval extension and a Lipschitz bound so
// outer enclosures and modulus bounds are available.

/// x ↦ x + alpha on the circle [0,1).
SystemMap rotation_map(double alpha);
/// Identity on the circle [0,1).
SystemMap identity_map();
/// x ↦ x² on [0,1].
SystemMap square_map();
/// Arnold cat map (x, y) ↦ (2x + y, x + y) mod 1.
SystemMap cat_map();
/// Chirikov standard map on the unit torus:
/// y' = y + k/(2π)·sin(2πx), x' = x + y'.
SystemMap standard_map(double k);
/// x ↦ a·x + b on the interval [lo, hi] (non-wrapped by default).
SystemMap affine_map(double a, double b, const Domain& domain = Domain::interval(0.0, 1.0));

struct ParsedMap {
  SystemMap map;
  std::vector<std::string> warnings;
};

/// Parses "name:key=value,..." (e.g. "rotation:alpha=0.618033988749895").
/// Known names: identity, rotation, square, cat, standard, affine. A domain
/// override must have the map's dimension.
ParsedMap parse_map(const std::string& spec, const std::optional<Domain>& domain = std::nullopt);

/// Names accepted by parse_map.
std::vector<std::string> builtin_map_names();

}  // namespace symimg
