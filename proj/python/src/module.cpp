#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "symimg/checks.hpp"
#include "symimg/encoding.hpp"
#include "symimg/errors.hpp"
#include "symimg/expr.hpp"
#include "symimg/flow.hpp"
#include "symimg/maps.hpp"
#include "symimg/serialize.hpp"
#include "symimg/spectrum.hpp"

namespace py = pybind11;
using namespace symimg;

namespace {

SystemMap make_map(const std::string& spec, const std::optional<std::string>& domain) {
  std::optional<Domain> d;
  if (domain) d = parse_domain(*domain);
  return parse_map(spec, d).map;
}

SubdivisionScheme parse_scheme(const std::string& s) {
  if (s == "all_axes") return SubdivisionScheme::all_axes;
  if (s == "longest_axis") return SubdivisionScheme::longest_axis;
  throw ParseError("unknown subdivision scheme '" + s + "'");
}

py::object fraction(const Rational& r) {
  static py::object cls = py::module_::import("fractions").attr("Fraction");
  return cls(r.num(), r.den());
}

py::dict exact_flow_dict(const ExactFlow& f) {
  py::dict out;
  for (const auto& [arc, w] : f.weights) out[py::make_tuple(arc.first, arc.second)] = fraction(w);
  return out;
}

Flow flow_from(const std::map<Arc, double>& w) {
  Flow f;
  for (const auto& [arc, v] : w)
    if (v != 0.0) f.weights[arc] = v;
  return f;
}

py::list cells_list(const Covering& cov) {
  py::list out;
  for (const Cell& c : cov.cells()) {
    py::dict d;
    d["id"] = c.id;
    d["lo"] = c.box.lo;
    d["hi"] = c.box.hi;
    d["depth"] = c.depth;
    d["parent"] = c.parent ? py::object(py::int_(*c.parent)) : py::object(py::none());
    out.append(std::move(d));
  }
  return out;
}

py::dict chain_dict(const ErgodicChain& chain) {
  py::list levels;
  for (const ErgodicLevel& lv : chain.levels) {
    py::dict d;
    d["image"] = lv.image;
    d["cycle"] = lv.cycle.vertices;
    d["flow"] = exact_flow_dict(lv.flow);
    d["masses"] = lv.measure.masses;
    levels.append(std::move(d));
  }
  py::dict out;
  out["levels"] = levels;
  out["consistent"] = chain.consistent;
  out["search_nodes"] = chain.search_nodes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_symimg, m) {
  m.doc() = "Symbolic images of dynamical systems: graphs, encodings, flows and averaging spectra";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<DomainEscapeError>(m, "DomainEscapeError", base.ptr());
  py::register_exception<NotCoveredError>(m, "NotCoveredError", base.ptr());
  py::register_exception<ExhaustionError>(m, "ExhaustionError", base.ptr());
  py::register_exception<LineageError>(m, "LineageError", base.ptr());
  py::register_exception<ConsistencyError>(m, "ConsistencyError", base.ptr());
  py::register_exception<CapError>(m, "CapError", base.ptr());
  py::register_exception<StructuralError>(m, "StructuralError", base.ptr());

  py::class_<SystemMap>(m, "Map")
      .def(py::init(&make_map), py::arg("spec"), py::arg("domain") = std::nullopt)
      .def_property_readonly("name", &SystemMap::name)
      .def_property_readonly("spec", &SystemMap::spec)
      .def_property_readonly("parameters", &SystemMap::parameters)
      .def_property_readonly("dim", [](const SystemMap& s) { return s.domain().dim(); })
      .def_property_readonly("has_inverse", &SystemMap::has_inverse)
      .def("__call__", &SystemMap::eval, py::arg("x"))
      .def("inverse", &SystemMap::eval_inverse, py::arg("x"))
      .def(
          "box_image",
          [](const SystemMap& s, const Point& lo, const Point& hi, const std::string& mode) {
            const BoxEnclosure e = s.box_image(Box{lo, hi}, parse_edge_mode(mode));
            std::vector<std::pair<Point, Point>> out;
            for (const Box& b : e.boxes) out.emplace_back(b.lo, b.hi);
            return py::make_tuple(out, e.guaranteed_outer);
          },
          py::arg("lo"), py::arg("hi"), py::arg("mode") = "outer")
      .def("modulus_bound", &SystemMap::modulus_bound, py::arg("delta"))
      .def("__repr__", [](const SystemMap& s) { return "<Map " + s.spec() + ">"; });

  py::class_<SymbolicImage, std::shared_ptr<SymbolicImage>>(m, "SymbolicImage")
      .def_property_readonly("size", &SymbolicImage::size)
      .def_property_readonly("diameter", &SymbolicImage::diameter)
      .def_property_readonly("q", [](const SymbolicImage& g) { return g.q; })
      .def_property_readonly("edge_mode", [](const SymbolicImage& g) { return g.edge_mode.to_string(); })
      .def_property_readonly("arcs", [](const SymbolicImage& g) { return g.graph.arcs(); })
      .def_property_readonly("cells", [](const SymbolicImage& g) { return cells_list(*g.covering); })
      .def("recurrent_classes", [](const SymbolicImage& g) { return recurrent_vertices(g).classes; })
      .def("neighborhood",
           [](const SymbolicImage& g) {
             const Neighborhood p = chain_recurrent_neighborhood(g);
             return py::make_tuple(p.cells, p.volume);
           })
      .def("locate", [](const SymbolicImage& g, const Point& x) { return g.covering->locate(x); })
      .def("graph_json",
           [](const SymbolicImage& g) { return dump(graph_json(g, recurrent_vertices(g))); })
      .def("covering_json", [](const SymbolicImage& g) { return dump(covering_json(*g.covering)); });

  m.def(
      "build",
      [](const SystemMap& map, const std::vector<int>& splits, const std::string& edge_mode, unsigned threads) {
        return std::const_pointer_cast<SymbolicImage>(
            build_symbolic_image(map, initial_covering(map.domain(), splits), parse_edge_mode(edge_mode), threads));
      },
      py::arg("map"), py::arg("splits"), py::arg("edge_mode") = "outer", py::arg("threads") = 1,
      "Symbolic image of `map` on a uniform grid.");

  py::class_<Localization>(m, "Localization")
      .def_readonly("empty_terminal", &Localization::empty_terminal)
      .def("__len__", [](const Localization& l) { return l.levels.size(); })
      .def("image",
           [](const Localization& l, std::size_t t) {
             if (t >= l.levels.size()) throw py::index_error("level out of range");
             return std::const_pointer_cast<SymbolicImage>(l.levels[t].image);
           })
      .def("neighborhood",
           [](const Localization& l, std::size_t t) {
             if (t >= l.levels.size()) throw py::index_error("level out of range");
             return py::make_tuple(l.levels[t].neighborhood.cells, l.levels[t].neighborhood.volume);
           })
      .def("parent_map", [](const Localization& l, std::size_t t) {
        if (t >= l.levels.size()) throw py::index_error("level out of range");
        return l.levels[t].parent_map;
      });

  m.def(
      "localize",
      [](const SystemMap& map, const std::vector<int>& splits, int depth, const std::string& edge_mode,
         const std::string& scheme, unsigned threads) {
        return localize(map, map.domain(), splits, depth, parse_edge_mode(edge_mode), parse_scheme(scheme), threads);
      },
      py::arg("map"), py::arg("splits"), py::arg("depth"), py::arg("edge_mode") = "outer",
      py::arg("scheme") = "all_axes", py::arg("threads") = 1,
      "Subdivide the recurrent cells `depth` levels deep.");

  m.def(
      "orbit",
      [](const SystemMap& map, const Point& x0, std::size_t length) { return orbit_segment(map, x0, length).points; },
      py::arg("map"), py::arg("x0"), py::arg("length"));

  m.def(
      "encode",
      [](const SymbolicImage& g, const std::vector<Point>& points) {
        return encode(OrbitWindow{0, points}, *g.covering).vertices;
      },
      py::arg("image"), py::arg("points"), "Cell path visited by an orbit window.");

  m.def(
      "is_admissible",
      [](const SymbolicImage& g, const std::vector<int>& path) {
        const Admissibility a = is_admissible(PathWindow{0, path}, g.graph);
        return py::make_tuple(a.admissible, a.first_violation);
      },
      py::arg("image"), py::arg("path"));

  m.def(
      "shadow",
      [](const Localization& loc, const std::vector<Point>& points) {
        const ShadowResult r = shadow(family_from_orbit(loc, OrbitWindow{0, points}));
        py::dict d;
        d["points"] = r.orbit.points;
        d["error_bound"] = r.max_error_bound;
        d["recurrent"] = r.recurrent;
        return d;
      },
      py::arg("localization"), py::arg("points"), "Encode an orbit at every level and shadow the family.");

  m.def(
      "is_flow",
      [](const std::map<Arc, double>& w, std::size_t n, const std::vector<Arc>& arcs, double tol) {
        const FlowCheck c = is_flow(flow_from(w), Digraph(n, arcs), tol);
        return py::make_tuple(c.valid, c.normalization_residual, c.balance_residual);
      },
      py::arg("weights"), py::arg("n"), py::arg("arcs"), py::arg("tol") = 1e-12);

  m.def(
      "decompose",
      [](const std::map<Arc, double>& w, std::size_t n, const std::vector<Arc>& arcs) {
        std::vector<std::pair<std::vector<int>, double>> out;
        for (const CycleTerm& t : decompose(flow_from(w), Digraph(n, arcs)))
          out.emplace_back(t.cycle.vertices, t.coefficient);
        return out;
      },
      py::arg("weights"), py::arg("n"), py::arg("arcs"), "Simple cycles and coefficients summing to the flow.");

  m.def(
      "project_flow",
      [](const std::map<Arc, double>& w, const std::vector<int>& s) { return project_flow(flow_from(w), s).weights; },
      py::arg("weights"), py::arg("s"));

  m.def(
      "mean_cycles",
      [](std::size_t n, const std::vector<Arc>& arcs, const std::vector<double>& b) {
        const Digraph g(n, arcs);
        const auto lo = min_mean_cycle(g, b);
        const auto hi = max_mean_cycle(g, b);
        return py::make_tuple(lo.value, lo.cycle.vertices, hi.value, hi.cycle.vertices);
      },
      py::arg("n"), py::arg("arcs"), py::arg("values"), "Karp minimum and maximum cycle means of a strong graph.");

  m.def(
      "refine_to_ergodic",
      [](const SystemMap& map, const std::vector<int>& splits, int depth, std::optional<Point> point) {
        const SeedRule seed = point ? SeedRule::containing_point(*point) : SeedRule::shortest_in_largest_class();
        return chain_dict(refine_to_ergodic(map, map.domain(), splits, depth, seed));
      },
      py::arg("map"), py::arg("splits"), py::arg("depth"), py::arg("point") = std::nullopt,
      "Consistent chain of simple flows; raises ExhaustionError when no chain reaches `depth`.");

  m.def(
      "spectrum",
      [](const SymbolicImage& g, const std::string& phi) {
        const auto spec = spectrum(g, frame(g, parse_expression(phi, g.covering->domain().dim()), phi));
        const auto ext = extremal_measures(g, spec);
        py::list out;
        for (std::size_t k = 0; k < spec.size(); ++k) {
          py::dict d;
          d["vertices"] = spec[k].vertices;
          d["alpha"] = spec[k].alpha;
          d["beta"] = spec[k].beta;
          d["min_cycle"] = spec[k].min_cycle.vertices;
          d["max_cycle"] = spec[k].max_cycle.vertices;
          d["mu_alpha"] = ext[k].mu_alpha.masses;
          d["mu_beta"] = ext[k].mu_beta.masses;
          out.append(std::move(d));
        }
        return out;
      },
      py::arg("image"), py::arg("phi"), "Averaging spectrum [alpha, beta] of `phi` per recurrent class.");

  m.def(
      "check",
      [](std::uint64_t seed) {
        std::vector<std::tuple<std::string, bool, std::size_t, std::string>> out;
        for (const CheckResult& r : run_property_corpus(seed)) out.emplace_back(r.name, r.passed, r.cases, r.detail);
        return out;
      },
      py::arg("seed") = 1, "Run the seeded property corpus.");
}
