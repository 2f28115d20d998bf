#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "symimg/checks.hpp"
#include "symimg/encoding.hpp"
#include "symimg/expr.hpp"
#include "symimg/flow.hpp"
#include "symimg/maps.hpp"
#include "symimg/serialize.hpp"
#include "symimg/spectrum.hpp"
#include "symimg/symbolic_image.hpp"

namespace fs = std::filesystem;
using namespace symimg;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitExhausted = 3;
constexpr int kExitCapability = 4;

struct RunConfig {
  std::string map = "rotation";
  std::string domain;
  std::string splits;
  int depth = 1;
  std::string edge_mode = "outer";
  std::string scheme = "all_axes";
  std::uint64_t seed = 1;
  std::string out = "symimg_out";
  std::string phi = "x0";
  std::string x0;
  int length = 20;
  int samples = 16;
  std::string seed_rule = "largest";
  unsigned threads = 1;
  bool all = false;

  Json to_json(const std::string& command) const {
    Json j;
    j["command"] = command;
    j["map"] = map;
    j["domain"] = domain;
    j["splits"] = splits;
    j["depth"] = depth;
    j["edge_mode"] = edge_mode;
    j["scheme"] = scheme;
    j["seed"] = seed;
    j["phi"] = phi;
    j["x0"] = x0;
    j["length"] = length;
    j["samples"] = samples;
    j["seed_rule"] = seed_rule;
    return j;
  }
};

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw ParseError(what + ": '" + item + "' is not a number");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError(what + " is empty");
  return out;
}

struct Setup {
  SystemMap map;
  Domain domain;
  std::vector<int> splits;
  EdgeMode mode;
  SubdivisionScheme scheme;
};

Setup make_setup(const RunConfig& cfg) {
  std::optional<Domain> dom;
  if (!cfg.domain.empty()) dom = parse_domain(cfg.domain);
  ParsedMap pm = parse_map(cfg.map, dom);
  for (const auto& w : pm.warnings) std::cerr << "warning: " << w << "\n";
  const Domain d = pm.map.domain();
  std::vector<int> splits;
  if (cfg.splits.empty()) {
    splits.assign(d.dim(), d.dim() == 1 ? 8 : 4);
  } else {
    for (double v : parse_numbers(cfg.splits, "--splits")) {
      if (v < 1 || v != std::floor(v)) throw PreconditionError("--splits entries must be positive integers");
      splits.push_back(static_cast<int>(v));
    }
    if (splits.size() == 1 && d.dim() > 1) splits.assign(d.dim(), splits[0]);
  }
  if (cfg.depth < 1) throw PreconditionError("--depth must be >= 1");
  SubdivisionScheme scheme;
  if (cfg.scheme == "all_axes")
    scheme = SubdivisionScheme::all_axes;
  else if (cfg.scheme == "longest_axis")
    scheme = SubdivisionScheme::longest_axis;
  else
    throw ParseError("unknown --scheme '" + cfg.scheme + "' (all_axes | longest_axis)");
  return Setup{pm.map, d, splits, parse_edge_mode(cfg.edge_mode), scheme};
}

class Output {
 public:
  explicit Output(const std::string& dir) : dir_(dir) { fs::create_directories(dir_); }

  void json(const std::string& name, const Json& j) const { text(name, dump(j)); }
  void text(const std::string& name, const std::string& body) const {
    std::ofstream f(dir_ / name, std::ios::binary);
    if (!f) throw Error("cannot write " + (dir_ / name).string());
    f << body;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
};

std::string level_name(std::size_t t, const std::string& what) {
  return "level_" + std::to_string(t + 1) + "_" + what + ".json";
}

Point initial_point(const RunConfig& cfg, const Domain& d) {
  if (cfg.x0.empty()) {
    Point x(d.dim());
    // A generic point away from dyadic cell boundaries.
    for (std::size_t a = 0; a < d.dim(); ++a) x[a] = d.lower(a) + d.period(a) * (0.1234567 + 0.2 * static_cast<double>(a));
    return x;
  }
  const auto v = parse_numbers(cfg.x0, "--x0");
  if (v.size() != d.dim()) throw PreconditionError("--x0 needs " + std::to_string(d.dim()) + " coordinates");
  return v;
}

Json level_summary(const LocalizationLevel& lv, std::size_t t) {
  Json j;
  j["level"] = t + 1;
  j["cells"] = lv.image->size();
  j["diameter"] = lv.image->diameter();
  j["q"] = lv.image->q;
  j["arcs"] = lv.image->graph.arc_count();
  j["recurrent"] = lv.recurrent.vertices.size();
  j["classes"] = lv.recurrent.classes.size();
  j["pd_volume"] = lv.neighborhood.volume;
  return j;
}

int run_build(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  const auto g = build_symbolic_image(s.map, initial_covering(s.domain, s.splits), s.mode, cfg.threads);
  const auto rc = recurrent_vertices(*g);
  out.json("covering.json", covering_json(*g->covering));
  out.json("graph.json", graph_json(*g, rc));
  out.json("pd.json", neighborhood_json(chain_recurrent_neighborhood(*g, rc)));
  Json summary;
  summary["config"] = cfg.to_json("build");
  summary["levels"] = Json::array({level_summary(LocalizationLevel{g, rc, chain_recurrent_neighborhood(*g, rc), {}}, 0)});
  out.json("summary.json", summary);
  std::cout << "cells " << g->size() << ", arcs " << g->graph.arc_count() << ", recurrent "
            << rc.vertices.size() << ", classes " << rc.classes.size() << "\n";
  return 0;
}

int run_localize(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  const Localization loc = localize(s.map, s.domain, s.splits, cfg.depth, s.mode, s.scheme, cfg.threads);
  Json summary;
  summary["config"] = cfg.to_json("localize");
  Json levels = Json::array();
  for (std::size_t t = 0; t < loc.levels.size(); ++t) {
    const auto& lv = loc.levels[t];
    out.json(level_name(t, "covering"), covering_json(*lv.image->covering));
    out.json(level_name(t, "graph"), graph_json(*lv.image, lv.recurrent));
    out.json(level_name(t, "pd"), neighborhood_json(lv.neighborhood));
    levels.push_back(level_summary(lv, t));
    std::cout << "level " << t + 1 << ": cells " << lv.image->size() << ", diameter "
              << format_double(lv.image->diameter()) << ", recurrent " << lv.recurrent.vertices.size()
              << ", P(d) volume " << format_double(lv.neighborhood.volume) << "\n";
  }
  summary["levels"] = std::move(levels);
  summary["empty_terminal"] = loc.empty_terminal;
  out.json("summary.json", summary);
  if (loc.empty_terminal) std::cout << "no recurrent vertices remain\n";
  return 0;
}

std::string orbit_csv(const OrbitWindow& o) {
  std::ostringstream os;
  write_orbit_csv(os, o);
  return os.str();
}

int run_encode(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  if (cfg.length < 1) throw PreconditionError("--length must be >= 1");
  const Localization loc = localize(s.map, s.domain, s.splits, cfg.depth, s.mode, s.scheme, cfg.threads);
  const auto& g = *loc.levels.back().image;
  const OrbitWindow orbit = orbit_segment(s.map, initial_point(cfg, s.domain), static_cast<std::size_t>(cfg.length));
  out.text("orbit.csv", orbit_csv(orbit));
  Json j;
  j["config"] = cfg.to_json("encode");
  j["level"] = loc.levels.size();
  if (cfg.all) {
    Json paths = Json::array();
    for (const auto& p : encode_all(orbit, *g.covering)) {
      Json pj = path_json(p);
      pj["admissible"] = is_admissible(p, g.graph).admissible;
      paths.push_back(std::move(pj));
    }
    j["paths"] = std::move(paths);
  } else {
    const PathWindow p = encode(orbit, *g.covering);
    j["path"] = path_json(p);
    j["admissible"] = is_admissible(p, g.graph).admissible;
  }
  out.json("encoding.json", j);
  std::cout << "encoded " << orbit.size() << " points at level " << loc.levels.size() << "\n";
  return 0;
}

int run_shadow(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  if (cfg.length < 1) throw PreconditionError("--length must be >= 1");
  const Localization loc = localize(s.map, s.domain, s.splits, cfg.depth, s.mode, s.scheme, cfg.threads);
  const OrbitWindow orbit = orbit_segment(s.map, initial_point(cfg, s.domain), static_cast<std::size_t>(cfg.length));
  const ConsistentPathFamily fam = family_from_orbit(loc, orbit);
  const ShadowResult sh = shadow(fam);
  double sup = 0.0;
  for (std::size_t k = 0; k < orbit.size(); ++k)
    sup = std::max(sup, s.domain.distance(orbit.points[k], sh.orbit.points[k]));
  Json j;
  j["config"] = cfg.to_json("shadow");
  Json paths = Json::array();
  for (const auto& p : fam.paths) paths.push_back(path_json(p));
  j["paths"] = std::move(paths);
  j["points"] = sh.orbit.points;
  j["error_bound"] = sh.error_bound;
  j["max_error_bound"] = sh.max_error_bound;
  j["recurrent"] = sh.recurrent;
  j["sup_distance_to_orbit"] = sup;
  j["orbit_metric"] = orbit_metric(orbit, sh.orbit, s.domain);
  out.json("shadow.json", j);
  out.text("orbit.csv", orbit_csv(orbit));
  out.text("shadow.csv", orbit_csv(sh.orbit));
  std::cout << "sup distance " << format_double(sup) << " (bound " << format_double(sh.max_error_bound) << ")\n";
  return 0;
}

int run_flows(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  const Localization loc = localize(s.map, s.domain, s.splits, cfg.depth, s.mode, s.scheme, cfg.threads);
  const auto& g = *loc.levels.back().image;
  const FlowEstimate est =
      flow_of_measure(lebesgue_sampler(), PartitionView(g.covering), s.map, g.graph, cfg.samples);
  for (const auto& w : est.warnings) std::cerr << "warning: " << w << "\n";
  const std::string ref = level_name(loc.levels.size() - 1, "graph");
  Json fj = flow_json(est.flow, ref);
  fj["dropped_mass"] = est.dropped_mass;
  fj["repair_change"] = est.repair_change;
  fj["warnings"] = est.warnings;
  out.json("flow.json", fj);
  Json dj = Json::array();
  for (const auto& t : decompose(est.flow, g.graph)) {
    Json tj;
    tj["cycle"] = t.cycle.vertices;
    tj["coefficient"] = t.coefficient;
    dj.push_back(std::move(tj));
  }
  Json dec;
  dec["graph_ref"] = ref;
  dec["terms"] = std::move(dj);
  out.json("decomposition.json", dec);
  out.json("measure.json", measure_json(measure_of_flow(est.flow, g.covering),
                                         level_name(loc.levels.size() - 1, "covering")));
  out.json(level_name(loc.levels.size() - 1, "covering"), covering_json(*g.covering));
  out.json(level_name(loc.levels.size() - 1, "graph"), graph_json(g, loc.levels.back().recurrent));
  std::cout << "flow on " << est.flow.weights.size() << " arcs, " << dec["terms"].size() << " cycles\n";
  return 0;
}

SeedRule parse_seed_rule(const RunConfig& cfg) {
  if (cfg.seed_rule == "largest") return SeedRule::shortest_in_largest_class();
  if (cfg.seed_rule.rfind("point:", 0) == 0)
    return SeedRule::containing_point(parse_numbers(cfg.seed_rule.substr(6), "--seed-rule point"));
  if (cfg.seed_rule.rfind("cycle:", 0) == 0) {
    SimpleCycle c;
    for (double v : parse_numbers(cfg.seed_rule.substr(6), "--seed-rule cycle")) c.vertices.push_back(static_cast<int>(v));
    return SeedRule::explicit_cycle(c);
  }
  throw ParseError("unknown --seed-rule '" + cfg.seed_rule + "' (largest | point:x,.. | cycle:i,j,..)");
}

void write_chain(const Output& out, const ErgodicChain& chain, const ScalarFunction& phi, const RunConfig& cfg,
                 bool complete) {
  std::ostringstream csv;
  csv << "level,diameter,phi,integral\n";
  Json levels = Json::array();
  for (std::size_t t = 0; t < chain.levels.size(); ++t) {
    const auto& lv = chain.levels[t];
    out.json(level_name(t, "flow"), exact_flow_json(lv.flow, level_name(t, "graph")));
    out.json(level_name(t, "measure"), measure_json(lv.measure, level_name(t, "covering")));
    const double integral = integrate(lv.measure, phi);
    csv << t + 1 << "," << format_double(lv.image->diameter()) << "," << cfg.phi << "," << format_double(integral) << "\n";
    Json lj;
    lj["level"] = t + 1;
    lj["cycle_length"] = lv.cycle.size();
    lj["diameter"] = lv.image->diameter();
    lj["integral"] = integral;
    levels.push_back(std::move(lj));
  }
  out.text("integrals.csv", csv.str());
  Json summary;
  summary["config"] = cfg.to_json("measure");
  summary["complete"] = complete;
  summary["consistent"] = chain.consistent;
  summary["search_nodes"] = chain.search_nodes;
  summary["levels"] = std::move(levels);
  out.json("summary.json", summary);
}

int run_measure(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  const ScalarFunction phi = parse_expression(cfg.phi, s.domain.dim());
  RefineOptions opt;
  opt.edge_mode = s.mode;
  opt.scheme = s.scheme;
  opt.threads = cfg.threads;
  try {
    const ErgodicChain chain = refine_to_ergodic(s.map, s.domain, s.splits, cfg.depth, parse_seed_rule(cfg), opt);
    write_chain(out, chain, phi, cfg, true);
    std::cout << "consistent chain over " << chain.levels.size() << " levels; final integral "
              << format_double(integrate(chain.levels.back().measure, phi)) << "\n";
  } catch (const RefinementExhaustedError& e) {
    write_chain(out, e.partial(), phi, cfg, false);
    throw;
  }
  return 0;
}

int run_spectrum(const RunConfig& cfg) {
  const Setup s = make_setup(cfg);
  const Output out(cfg.out);
  const ScalarFunction phi = parse_expression(cfg.phi, s.domain.dim());
  const Localization loc = localize(s.map, s.domain, s.splits, cfg.depth, s.mode, s.scheme, cfg.threads);
  std::ostringstream plot;
  plot << "level,diameter,class,alpha,beta\n";
  Json levels = Json::array();
  for (std::size_t t = 0; t < loc.levels.size(); ++t) {
    const auto& g = *loc.levels[t].image;
    const auto spec = spectrum(g, frame(g, phi, cfg.phi));
    out.json(level_name(t, "spectrum"), spectrum_json(spec));
    Json lj;
    lj["level"] = t + 1;
    lj["diameter"] = g.diameter();
    if (!spec.empty()) {
      double lo = spec.front().alpha, hi = spec.front().beta;
      for (const auto& iv : spec) {
        lo = std::min(lo, iv.alpha);
        hi = std::max(hi, iv.beta);
        plot << t + 1 << "," << format_double(g.diameter()) << "," << iv.class_id << "," << format_double(iv.alpha)
             << "," << format_double(iv.beta) << "\n";
      }
      lj["alpha"] = lo;
      lj["beta"] = hi;
    }
    lj["classes"] = spec.size();
    levels.push_back(std::move(lj));
    if (t + 1 == loc.levels.size()) {
      const auto ext = extremal_measures(g, spec);
      for (const auto& em : ext) {
        const std::string tag = "class_" + std::to_string(em.class_id);
        out.json("extremal_" + tag + "_alpha.json", measure_json(em.mu_alpha, level_name(t, "covering")));
        out.json("extremal_" + tag + "_beta.json", measure_json(em.mu_beta, level_name(t, "covering")));
      }
      out.json(level_name(t, "covering"), covering_json(*g.covering));
    }
    std::cout << "level " << t + 1 << ": " << spec.size() << " classes\n";
  }
  out.text("plot.csv", plot.str());
  Json summary;
  summary["config"] = cfg.to_json("spectrum");
  summary["levels"] = std::move(levels);
  out.json("summary.json", summary);
  return 0;
}

int run_check(const RunConfig& cfg, bool write) {
  const auto results = run_property_corpus(cfg.seed);
  bool ok = true;
  Json arr = Json::array();
  for (const auto& r : results) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " (" << r.cases << " cases)"
              << (r.detail.empty() ? "" : ": " + r.detail) << "\n";
    ok = ok && r.passed;
    Json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["cases"] = r.cases;
    j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  if (write) {
    const Output out(cfg.out);
    Json j;
    j["seed"] = cfg.seed;
    j["results"] = std::move(arr);
    out.json("check.json", j);
  }
  return ok ? 0 : 1;
}

void load_config(const std::string& path, RunConfig& cfg) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
  try {
    cfg.map = j.value("map", cfg.map);
    cfg.domain = j.value("domain", cfg.domain);
    if (j.contains("splits")) {
      const auto& sp = j["splits"];
      if (sp.is_array()) {
        std::string s;
        for (const auto& v : sp) s += (s.empty() ? "" : ",") + std::to_string(v.get<int>());
        cfg.splits = s;
      } else {
        cfg.splits = sp.is_string() ? sp.get<std::string>() : std::to_string(sp.get<int>());
      }
    }
    cfg.depth = j.value("depth", cfg.depth);
    cfg.edge_mode = j.value("edge_mode", cfg.edge_mode);
    cfg.scheme = j.value("scheme", cfg.scheme);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.out = j.value("out", cfg.out);
    cfg.phi = j.value("phi", cfg.phi);
    cfg.x0 = j.value("x0", cfg.x0);
    cfg.length = j.value("length", cfg.length);
    cfg.samples = j.value("samples", cfg.samples);
    cfg.seed_rule = j.value("seed_rule", cfg.seed_rule);
    cfg.threads = j.value("threads", cfg.threads);
    cfg.all = j.value("all", cfg.all);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("config '" + path + "': " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic-image analysis of discrete dynamical systems"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string config_path;

  auto common = [&](CLI::App* sub, bool analysis) {
    sub->add_option("--config", config_path, "JSON run configuration (flags override it)");
    sub->add_option("--seed", cfg.seed, "Seed for randomized steps");
    sub->add_option("--out", cfg.out, "Output directory");
    if (!analysis) return;
    sub->add_option("--map", cfg.map, "Map spec name:key=value,...");
    sub->add_option("--domain", cfg.domain, "Domain override lo,hi[,wrap];...");
    sub->add_option("--splits", cfg.splits, "Initial splits per axis, e.g. 8 or 4,4");
    sub->add_option("--depth", cfg.depth, "Number of subdivision levels");
    sub->add_option("--edge-mode", cfg.edge_mode, "outer | sample:<n>");
    sub->add_option("--scheme", cfg.scheme, "all_axes | longest_axis");
    sub->add_option("--threads", cfg.threads, "Worker threads for graph construction (0 = all cores)");
  };

  auto* build = app.add_subcommand("build", "Build one symbolic image");
  common(build, true);
  auto* loc = app.add_subcommand("localize", "Localize the chain recurrent set by subdivision");
  common(loc, true);
  auto* enc = app.add_subcommand("encode", "Encode an orbit as a path on the finest graph");
  common(enc, true);
  enc->add_option("--x0", cfg.x0, "Initial point, comma separated");
  enc->add_option("--length", cfg.length, "Orbit window length");
  enc->add_flag("--all", cfg.all, "Emit every closed-cell encoding");
  auto* sh = app.add_subcommand("shadow", "Shadow an orbit through a consistent path family");
  common(sh, true);
  sh->add_option("--x0", cfg.x0, "Initial point, comma separated");
  sh->add_option("--length", cfg.length, "Orbit window length");
  auto* fl = app.add_subcommand("flows", "Trace Lebesgue measure to a flow and decompose it");
  common(fl, true);
  fl->add_option("--samples", cfg.samples, "Samples per cell");
  auto* me = app.add_subcommand("measure", "Consistent simple-flow chain and measure integrals");
  common(me, true);
  me->add_option("--phi", cfg.phi, "Test function expression");
  me->add_option("--seed-rule", cfg.seed_rule, "largest | point:x,.. | cycle:i,j,..");
  auto* sp = app.add_subcommand("spectrum", "Averaging spectrum of a function per recurrent class");
  common(sp, true);
  sp->add_option("--phi", cfg.phi, "Function expression");
  auto* ch = app.add_subcommand("check", "Run the seeded property corpus");
  common(ch, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (!config_path.empty()) {
      RunConfig from_file;
      load_config(config_path, from_file);
      // Explicit flags win over the file.
      CLI::App* sub = app.get_subcommands().front();
      auto given = [&](const std::string& flag) {
        const CLI::Option* opt = sub->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
      };
      if (!given("--map")) cfg.map = from_file.map;
      if (!given("--domain")) cfg.domain = from_file.domain;
      if (!given("--splits")) cfg.splits = from_file.splits;
      if (!given("--depth")) cfg.depth = from_file.depth;
      if (!given("--edge-mode")) cfg.edge_mode = from_file.edge_mode;
      if (!given("--scheme")) cfg.scheme = from_file.scheme;
      if (!given("--seed")) cfg.seed = from_file.seed;
      if (!given("--out")) cfg.out = from_file.out;
      if (!given("--phi")) cfg.phi = from_file.phi;
      if (!given("--x0")) cfg.x0 = from_file.x0;
      if (!given("--length")) cfg.length = from_file.length;
      if (!given("--samples")) cfg.samples = from_file.samples;
      if (!given("--seed-rule")) cfg.seed_rule = from_file.seed_rule;
      if (!given("--threads")) cfg.threads = from_file.threads;
      if (!given("--all")) cfg.all = from_file.all;
    }
    if (build->parsed()) return run_build(cfg);
    if (loc->parsed()) return run_localize(cfg);
    if (enc->parsed()) return run_encode(cfg);
    if (sh->parsed()) return run_shadow(cfg);
    if (fl->parsed()) return run_flows(cfg);
    if (me->parsed()) return run_measure(cfg);
    if (sp->parsed()) return run_spectrum(cfg);
    if (ch->parsed()) return run_check(cfg, ch->count("--out") > 0);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ExhaustionError& e) {
    std::cerr << "exhausted: " << e.what() << "\n";
    return kExitExhausted;
  } catch (const CapabilityError& e) {
    std::cerr << "capability: " << e.what() << "\n";
    return kExitCapability;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
