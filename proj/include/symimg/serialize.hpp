#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "symimg/covering.hpp"
#include "symimg/encoding.hpp"
#include "symimg/flow.hpp"
#include "symimg/spectrum.hpp"
#include "symimg/symbolic_image.hpp"

namespace symimg {

using Json = nlohmann::ordered_json;

Json domain_json(const Domain& d);
Json covering_json(const Covering& cov);
Json graph_json(const SymbolicImage& g, const RecurrentClasses& rc);
Json neighborhood_json(const Neighborhood& p);
Json path_json(const PathWindow& p);
PathWindow path_from_json(const Json& j);
Json flow_json(const Flow& f, const std::string& graph_ref);
Json exact_flow_json(const ExactFlow& f, const std::string& graph_ref);
Json measure_json(const CellMeasure& mu, const std::string& covering_ref);
Json spectrum_json(const std::vector<SpectrumInterval>& spec);

/// Stable text form: two-space indent, trailing newline.
std::string dump(const Json& j);

/// Orbit CSV with header "k,x_0,...,x_{dim-1}"; k runs from the offset.
void write_orbit_csv(std::ostream& os, const OrbitWindow& orbit);
/// Reads the format above; rows must have consecutive k. Throws ParseError.
OrbitWindow read_orbit_csv(std::istream& is);

/// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace symimg
