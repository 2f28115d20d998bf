#include "symimg/serialize.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "symimg/errors.hpp"

namespace symimg {

namespace {

Json cycle_json(const SimpleCycle& c) {
  Json a = Json::array();
  for (int v : c.vertices) a.push_back(v);
  return a;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json domain_json(const Domain& d) {
  Json j;
  j["lower"] = d.lower();
  j["upper"] = d.upper();
  Json w = Json::array();
  for (bool b : d.wrap()) w.push_back(b);
  j["wrap"] = w;
  return j;
}

Json covering_json(const Covering& cov) {
  Json j;
  j["dim"] = cov.domain().dim();
  j["domain"] = domain_json(cov.domain());
  Json cells = Json::array();
  for (const Cell& c : cov.cells()) {
    Json cj;
    cj["id"] = c.id;
    cj["lo"] = c.box.lo;
    cj["hi"] = c.box.hi;
    cj["depth"] = c.depth;
    cj["parent"] = c.parent ? Json(*c.parent) : Json(nullptr);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  j["diameter"] = cov.diameter();
  return j;
}

Json graph_json(const SymbolicImage& g, const RecurrentClasses& rc) {
  Json j;
  j["edge_mode"] = g.edge_mode.to_string();
  j["q"] = g.q;
  Json verts = Json::array();
  for (std::size_t v = 0; v < g.size(); ++v) verts.push_back(v);
  j["vertices"] = std::move(verts);
  Json arcs = Json::array();
  for (const auto& [u, v] : g.graph.arcs()) arcs.push_back(Json::array({u, v}));
  j["arcs"] = std::move(arcs);
  j["classes"] = rc.classes;
  return j;
}

Json neighborhood_json(const Neighborhood& p) {
  Json j;
  j["cells"] = p.cells;
  j["volume"] = p.volume;
  return j;
}

Json path_json(const PathWindow& p) {
  Json j;
  j["offset"] = p.offset;
  j["vertices"] = p.vertices;
  return j;
}

PathWindow path_from_json(const Json& j) {
  try {
    PathWindow p;
    p.offset = j.value("offset", 0L);
    p.vertices = j.at("vertices").get<std::vector<int>>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad path JSON: ") + e.what());
  }
}

Json flow_json(const Flow& f, const std::string& graph_ref) {
  Json j;
  j["graph_ref"] = graph_ref;
  Json arcs = Json::array();
  for (const auto& [arc, w] : f.weights) arcs.push_back(Json::array({arc.first, arc.second, w}));
  j["arcs"] = std::move(arcs);
  return j;
}

Json exact_flow_json(const ExactFlow& f, const std::string& graph_ref) {
  Json j = flow_json(to_double(f), graph_ref);
  Json exact = Json::array();
  for (const auto& [arc, w] : f.weights) exact.push_back(Json::array({arc.first, arc.second, w.to_string()}));
  j["exact"] = std::move(exact);
  return j;
}

Json measure_json(const CellMeasure& mu, const std::string& covering_ref) {
  Json j;
  j["covering_ref"] = covering_ref;
  Json masses = Json::array();
  for (std::size_t i = 0; i < mu.masses.size(); ++i)
    if (mu.masses[i] != 0.0) masses.push_back(Json::array({i, mu.masses[i]}));
  j["masses"] = std::move(masses);
  return j;
}

Json spectrum_json(const std::vector<SpectrumInterval>& spec) {
  Json classes = Json::array();
  for (const auto& iv : spec) {
    Json c;
    c["id"] = iv.class_id;
    c["alpha"] = iv.alpha;
    c["beta"] = iv.beta;
    c["min_cycle"] = cycle_json(iv.min_cycle);
    c["max_cycle"] = cycle_json(iv.max_cycle);
    c["size"] = iv.vertices.size();
    classes.push_back(std::move(c));
  }
  Json j;
  j["classes"] = std::move(classes);
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_orbit_csv(std::ostream& os, const OrbitWindow& orbit) {
  const std::size_t dim = orbit.points.empty() ? 0 : orbit.points.front().size();
  os << "k";
  for (std::size_t a = 0; a < dim; ++a) os << ",x_" << a;
  os << "\n";
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    os << orbit.offset + static_cast<long>(k);
    for (double v : orbit.points[k]) os << "," << format_double(v);
    os << "\n";
  }
}

OrbitWindow read_orbit_csv(std::istream& is) {
  OrbitWindow out;
  std::string line;
  if (!std::getline(is, line) || line.rfind("k", 0) != 0) throw ParseError("orbit CSV needs a 'k,x_0,...' header");
  std::size_t dim = 0;
  for (char c : line) dim += c == ',';
  if (dim == 0) throw ParseError("orbit CSV header has no coordinate columns");
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> fields;
    while (std::getline(ss, cell, ',')) fields.push_back(cell);
    if (fields.size() != dim + 1)
      throw ParseError("orbit CSV row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(dim + 1));
    long k = 0;
    Point p(dim);
    try {
      std::size_t used = 0;
      k = std::stol(fields[0], &used);
      for (std::size_t a = 0; a < dim; ++a) p[a] = std::stod(fields[a + 1]);
    } catch (const std::exception&) {
      throw ParseError("orbit CSV row " + std::to_string(row) + " is not numeric");
    }
    if (out.points.empty())
      out.offset = k;
    else if (k != out.offset + static_cast<long>(out.points.size()))
      throw ParseError("orbit CSV row " + std::to_string(row) + " breaks the consecutive k sequence");
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace symimg
