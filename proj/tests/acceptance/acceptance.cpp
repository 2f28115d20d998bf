// Runs the thirteen acceptance criteria and prints one PASS/FAIL line each.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "symimg/encoding.hpp"
#include "symimg/errors.hpp"
#include "symimg/flow.hpp"
#include "symimg/maps.hpp"
#include "symimg/oracles.hpp"
#include "symimg/serialize.hpp"
#include "symimg/spectrum.hpp"

namespace fs = std::filesystem;
using namespace symimg;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double cos2pi(const Point& x) { return std::cos(2.0 * std::numbers::pi * x[0]); }

struct GraphCase {
  SystemMap map;
  SymbolicImagePtr image;
};

// Rotation, squaring and cat map graphs at three grid depths each.
std::vector<GraphCase> three_depth_graphs() {
  std::vector<GraphCase> out;
  const SystemMap rot = rotation_map(kGolden);
  const SystemMap sq = square_map();
  const SystemMap cat = cat_map();
  for (int t : {0, 2, 4}) {
    const int n1 = 8 << t;
    const int n2 = 4 << (t / 2);
    out.push_back({rot, build_symbolic_image(rot, initial_covering(rot.domain(), {n1}), EdgeMode::outer())});
    out.push_back({sq, build_symbolic_image(sq, initial_covering(sq.domain(), {n1}), EdgeMode::outer())});
    out.push_back({cat, build_symbolic_image(cat, initial_covering(cat.domain(), {n2, n2}), EdgeMode::outer())});
  }
  return out;
}

PathWindow random_walk(const Digraph& g, std::size_t length, std::mt19937_64& rng) {
  PathWindow p;
  int v = static_cast<int>(rng() % g.size());
  p.vertices.push_back(v);
  while (p.vertices.size() < length) {
    const auto& succ = g.successors(v);
    if (succ.empty()) return {};
    v = succ[rng() % succ.size()];
    p.vertices.push_back(v);
  }
  return p;
}

Point random_point(const Domain& d, std::mt19937_64& rng) {
  Point x(d.dim());
  for (std::size_t a = 0; a < d.dim(); ++a)
    x[a] = d.lower()[a] + oracle::uniform(rng) * (d.upper()[a] - d.lower()[a]);
  return x;
}

double max_arc_error(const Flow& a, const Flow& b, const Digraph& g) {
  double e = 0.0;
  for (const Arc& arc : g.arcs()) e = std::max(e, std::abs(a.weight(arc) - b.weight(arc)));
  return e;
}

// ---- criteria ----

Outcome c1_rotation_arcs() {
  const auto g = build_symbolic_image(rotation_map(0.25), initial_covering(Domain::circle(), {4}), EdgeMode::outer());
  std::vector<Arc> expected;
  for (int i = 0; i < 4; ++i) {
    expected.emplace_back(i, (i + 1) % 4);
    expected.emplace_back(i, (i + 2) % 4);
  }
  std::sort(expected.begin(), expected.end());
  std::ostringstream os;
  os << "arcs:";
  for (const auto& [u, v] : g->graph.arcs()) os << " " << u << "->" << v;
  return {g->graph.arcs() == expected, os.str()};
}

Outcome c2_center_traces(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto cases = three_depth_graphs();
  std::size_t done = 0;
  std::size_t bad = 0;
  double worst_slack = -1e9;
  for (int n = 0; n < 500; ++n) {
    const GraphCase& c = cases[static_cast<std::size_t>(n) % cases.size()];
    const PathWindow p = random_walk(c.image->graph, 20, rng);
    if (p.vertices.empty()) continue;
    const Trace tr = trace_path(p, *c.image, TraceStrategy::center());
    const double defect = verify_eps_trajectory(tr.orbit, c.map);
    const double bound = c.image->q + c.image->diameter() + 1e-12;
    worst_slack = std::max(worst_slack, defect - bound);
    bad += defect > bound;
    ++done;
  }
  return {done == 500 && bad == 0, std::to_string(done) + " paths, " + std::to_string(bad) +
                                        " over bound, max(defect - bound) = " + fmt(worst_slack)};
}

Outcome c3_orbit_encodings(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  const auto cases = three_depth_graphs();
  std::size_t ok = 0;
  for (int n = 0; n < 1000; ++n) {
    const GraphCase& c = cases[static_cast<std::size_t>(n) % cases.size()];
    const OrbitWindow o = orbit_segment(c.map, random_point(c.map.domain(), rng), 20);
    ok += is_admissible(encode(o, *c.image->covering), c.image->graph).admissible;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 encodings admissible"};
}

Outcome c4_shadowing(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 2);
  std::ostringstream os;
  bool pass = true;
  const std::vector<std::pair<SystemMap, std::vector<int>>> runs = {{rotation_map(kGolden), {8}},
                                                                     {cat_map(), {4, 4}}};
  for (const auto& [map, splits] : runs) {
    const Localization loc = localize(map, map.domain(), splits, 5, EdgeMode::outer());
    const double d5 = loc.levels.back().image->diameter();
    double worst = 0.0;
    for (int n = 0; n < 20; ++n) {
      const OrbitWindow o = orbit_segment(map, random_point(map.domain(), rng), 20);
      const ShadowResult sh = shadow(family_from_orbit(loc, o));
      for (std::size_t k = 0; k < o.size(); ++k)
        worst = std::max(worst, map.domain().distance(sh.orbit.points[k], o.points[k]));
    }
    pass = pass && worst <= d5;
    os << map.name() << " sup rho = " << fmt(worst) << " (d_5 = " << fmt(d5) << "); ";
  }
  const Localization sq = localize(square_map(), Domain::interval(0.0, 1.0), {2}, 5, EdgeMode::outer());
  const OrbitWindow fixed = orbit_segment(square_map(), {0.0}, 20);
  const ShadowResult sh = shadow(family_from_orbit(sq, fixed));
  double largest = 0.0;
  for (const Point& p : sh.orbit.points) largest = std::max(largest, std::abs(p[0]));
  pass = pass && largest <= std::ldexp(1.0, -5);
  os << "fixed-point family max |x_k| = " << fmt(largest);
  return {pass, os.str()};
}

Outcome c5_localization() {
  const Localization loc = localize(square_map(), Domain::interval(0.0, 1.0), {2}, 6, EdgeMode::outer());
  if (loc.levels.size() != 6) return {false, "expected 6 levels, got " + std::to_string(loc.levels.size())};
  const auto& last = loc.levels.back();
  bool has0 = false;
  bool has1 = false;
  for (int id : last.neighborhood.cells) {
    const Box& b = last.image->covering->cell(id).box;
    has0 = has0 || (b.lo[0] <= 0.0 && 0.0 <= b.hi[0]);
    has1 = has1 || (b.lo[0] <= 1.0 && 1.0 <= b.hi[0]);
  }
  bool monotone = true;
  std::ostringstream os;
  os << "volumes:";
  for (std::size_t t = 0; t < loc.levels.size(); ++t) {
    os << " " << fmt(loc.levels[t].neighborhood.volume);
    if (t > 0) monotone = monotone && loc.levels[t].neighborhood.volume <= loc.levels[t - 1].neighborhood.volume;
  }
  const double bound = 4.0 * std::ldexp(1.0, -6);
  os << "; final cells " << last.neighborhood.cells.size() << ", bound " << fmt(bound);
  return {last.neighborhood.volume <= bound && has0 && has1 && monotone, os.str()};
}

Outcome c6_flow_axioms(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 3);
  std::size_t done = 0;
  double worst_res = 0.0;
  double worst_round = 0.0;
  bool count_ok = true;
  while (done < 200) {
    const Digraph g = oracle::random_graph(2 + rng() % 9, 0.15 + 0.35 * oracle::uniform(rng), rng);
    const Flow m = oracle::random_cycle_mixture(g, 5, rng);
    if (m.weights.empty()) continue;
    const FlowCheck fc = is_flow(m, g);
    worst_res = std::max({worst_res, fc.balance_residual, fc.normalization_residual});
    const auto terms = decompose(m, g);
    count_ok = count_ok && terms.size() <= g.arc_count();
    std::vector<Flow> flows;
    std::vector<double> coef;
    for (const CycleTerm& t : terms) {
      flows.push_back(simple_flow(t.cycle, g));
      coef.push_back(t.coefficient);
    }
    worst_round = std::max(worst_round, max_arc_error(mix(flows, coef, 1e-9), m, g));
    ++done;
  }
  return {worst_res <= 1e-12 && worst_round <= 1e-9 && count_ok,
          "max residual " + fmt(worst_res) + ", max round-trip error " + fmt(worst_round) +
              (count_ok ? "" : ", too many cycles")};
}

Outcome c7_projection(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 4);
  double worst_res = 0.0;
  double worst_lin = 0.0;
  std::size_t flows = 0;
  for (const auto& gp : oracle::small_graph_corpus(seed, 100)) {
    std::vector<Flow> corpus;
    for (const SimpleCycle& c : oracle::all_simple_cycles(gp.child)) corpus.push_back(simple_flow(c, gp.child));
    for (int k = 0; k < 4; ++k) {
      const Flow m = oracle::random_cycle_mixture(gp.child, 4, rng);
      if (!m.weights.empty()) corpus.push_back(m);
    }
    for (const Flow& f : corpus) {
      const FlowCheck fc = is_flow(project_flow(f, gp.s, &gp.parent), gp.parent);
      worst_res = std::max({worst_res, fc.balance_residual, fc.normalization_residual});
      ++flows;
    }
    for (std::size_t k = 0; k + 1 < corpus.size(); ++k) {
      const double c = oracle::uniform(rng);
      const Flow lhs = project_flow(mix({corpus[k], corpus[k + 1]}, {c, 1.0 - c}), gp.s, &gp.parent);
      const Flow rhs = mix({project_flow(corpus[k], gp.s, &gp.parent), project_flow(corpus[k + 1], gp.s, &gp.parent)},
                           {c, 1.0 - c});
      worst_lin = std::max(worst_lin, max_arc_error(lhs, rhs, gp.parent));
    }
  }
  return {worst_res <= 1e-12 && worst_lin <= 1e-12, std::to_string(flows) + " flows, max residual " +
                                                        fmt(worst_res) + ", max linearity error " + fmt(worst_lin)};
}

Outcome c8_extreme_points(std::uint64_t seed) {
  const auto corpus = oracle::small_graph_corpus(seed, 100);
  std::size_t ok = 0;
  std::string first_failure;
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const ExtremeCheckReport r = extreme_projection_check(corpus[k].child, corpus[k].parent, corpus[k].s);
    if (r.ok())
      ++ok;
    else if (first_failure.empty())
      first_failure = ", first failure at corpus entry " + std::to_string(k);
  }
  return {ok == corpus.size(), std::to_string(ok) + "/" + std::to_string(corpus.size()) + " corpus entries" +
                                   first_failure};
}

Outcome c9_unique_ergodicity() {
  auto report = [](const ErgodicChain& chain, std::ostringstream& os) {
    double prev = 1e9;
    bool monotone = true;
    os << "|int cos| by level:";
    for (std::size_t t = 0; t < chain.levels.size(); ++t) {
      const double v = std::abs(integrate(chain.levels[t].measure, cos2pi));
      os << " " << fmt(v);
      if (t >= 1) {
        monotone = monotone && v <= prev;
        prev = v;
      }
    }
    return monotone;
  };
  std::ostringstream os;
  try {
    const ErgodicChain chain =
        refine_to_ergodic(rotation_map(kGolden), Domain::circle(), {8}, 6, SeedRule::shortest_in_largest_class());
    const bool monotone = report(chain, os);
    const double last = std::abs(integrate(chain.levels.back().measure, cos2pi));
    os << "; consistent " << chain.consistent;
    return {chain.consistent && monotone && last <= 0.1, os.str()};
  } catch (const RefinementExhaustedError& e) {
    os << "no consistent simple-flow chain reaches depth 6; partial chain has " << e.partial().levels.size()
       << " levels (consistent " << e.partial().consistent << "); ";
    report(e.partial(), os);
    return {false, os.str()};
  }
}

Outcome c10_karp(std::uint64_t seed) {
  std::mt19937_64 rng(seed + 5);
  std::size_t graphs = 0;
  std::size_t classes = 0;
  bool pass = true;
  while (graphs < 50) {
    const Digraph g = oracle::random_graph(1 + rng() % 8, 0.1 + 0.35 * oracle::uniform(rng), rng);
    const RecurrentClasses rc = recurrent_classes(g);
    if (rc.classes.empty()) continue;
    ++graphs;
    std::vector<Rational> b;
    for (std::size_t v = 0; v < g.size(); ++v)
      b.emplace_back(static_cast<std::int64_t>(rng() % 41) - 20, 1 + static_cast<std::int64_t>(rng() % 7));
    for (const auto& cls : rc.classes) {
      const Digraph h = g.induced(cls);
      std::vector<Rational> bh;
      for (int v : cls) bh.push_back(b[static_cast<std::size_t>(v)]);
      pass = pass && min_mean_cycle(h, bh).value == oracle::brute_min_mean(h, bh);
      pass = pass && max_mean_cycle(h, bh).value == oracle::brute_max_mean(h, bh);
      ++classes;
    }
  }
  return {pass, std::to_string(graphs) + " graphs, " + std::to_string(classes) + " classes, exact rational comparison"};
}

Outcome c11_squaring_spectrum() {
  const Localization loc = localize(square_map(), Domain::interval(0.0, 1.0), {2}, 5, EdgeMode::outer());
  const ScalarFunction phi = [](const Point& x) { return x[0]; };
  bool pass = loc.levels.size() == 5;
  std::ostringstream os;
  for (std::size_t t = 0; t < loc.levels.size(); ++t) {
    const SymbolicImage& g = *loc.levels[t].image;
    const double d = g.diameter();
    const auto spec = spectrum(g, frame(g, phi));
    double lo = 1e9;
    double hi = -1e9;
    // Classes near the repelling point may sit farther than d_t from it at
    // finite depth; the hull of all class intervals is what approaches [0, 1].
    for (const auto& iv : spec) {
      lo = std::min(lo, iv.alpha);
      hi = std::max(hi, iv.beta);
    }
    pass = pass && lo <= d && hi >= 1.0 - d;
    const auto ext = extremal_measures(g, spec);
    for (std::size_t k = 0; k < spec.size(); ++k)
      pass = pass && std::abs(integrate(ext[k].mu_beta, phi) - spec[k].beta) <= d;
    os << "t=" << t + 1 << " [" << fmt(lo) << ", " << fmt(hi) << "] d=" << fmt(d) << "; ";
  }
  return {pass, os.str()};
}

Outcome c12_rotation_shrinkage() {
  const Localization loc = localize(rotation_map(kGolden), Domain::circle(), {8}, 6, EdgeMode::outer());
  bool pass = loc.levels.size() == 6;
  double prev = 1e9;
  double width = 0.0;
  std::ostringstream os;
  os << "widths:";
  for (const auto& lv : loc.levels) {
    const auto spec = spectrum(*lv.image, frame(*lv.image, cos2pi));
    double lo = 1e9;
    double hi = -1e9;
    for (const auto& iv : spec) {
      lo = std::min(lo, iv.alpha);
      hi = std::max(hi, iv.beta);
    }
    width = hi - lo;
    pass = pass && width <= prev;
    prev = width;
    os << " " << fmt(width);
  }
  return {pass && width <= 0.2, os.str()};
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome c13_reproducibility(const std::string& cli, const fs::path& work) {
  if (cli.empty()) return {false, "no --cli given"};
  const std::vector<std::string> configs = {
      "build --map rotation:alpha=0.25 --splits 4",
      "localize --map square --splits 2 --depth 4",
      "encode --map cat --splits 4,4 --depth 2 --x0 0.1,0.3 --length 12 --all",
      "shadow --map rotation --splits 8 --depth 4 --x0 0.2 --length 10",
      "flows --map standard:k=0.7 --splits 6,6 --depth 2 --edge-mode sample:4 --samples 8 --seed 7",
      "measure --map rotation --splits 8 --depth 4 --phi 'cos(2*pi*x0)'",
      "spectrum --map square --splits 2 --depth 4 --phi x0",
  };
  std::size_t files = 0;
  std::vector<std::string> diffs;
  for (std::size_t k = 0; k < configs.size(); ++k) {
    fs::path dirs[2];
    for (int r = 0; r < 2; ++r) {
      dirs[r] = work / ("c13_" + std::to_string(k) + "_" + std::to_string(r));
      fs::remove_all(dirs[r]);
      const std::string cmd = "\"" + cli + "\" " + configs[k] + " --out \"" + dirs[r].string() + "\" > \"" +
                              (work / ("c13_" + std::to_string(k) + ".log")).string() + "\" 2>&1";
      if (std::system(cmd.c_str()) != 0) return {false, "command failed: " + configs[k]};
    }
    for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
      if (!entry.is_regular_file()) continue;
      const fs::path rel = fs::relative(entry.path(), dirs[0]);
      ++files;
      if (!fs::exists(dirs[1] / rel) || read_file(entry.path()) != read_file(dirs[1] / rel))
        diffs.push_back(configs[k] + ": " + rel.string());
    }
  }
  std::string detail = std::to_string(configs.size()) + " configs, " + std::to_string(files) + " artifacts compared";
  if (!diffs.empty()) detail += ", first difference " + diffs.front();
  return {diffs.empty() && files > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::uint64_t seed = 20240601;
  std::string work = "acceptance_runs";
  std::string cli;
  std::vector<int> only;
  app.add_option("--seed", seed, "Seed for the random corpora");
  app.add_option("--work", work, "Scratch directory for artifacts");
  app.add_option("--cli", cli, "Path to the symimg executable (reproducibility runs)");
  app.add_option("--only", only, "Run only these criterion numbers");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  const std::vector<Criterion> criteria = {
      {1, "rotation 1/4 on 4 cells has arcs i->i+1, i->i+2", 1, c1_rotation_arcs},
      {2, "center traces of 500 admissible paths within q + d", 10, [&] { return c2_center_traces(seed); }},
      {3, "1000 true orbits encode to admissible paths", 10, [&] { return c3_orbit_encodings(seed); }},
      {4, "encode-then-shadow within d_5; fixed point within 2^-5", 10, [&] { return c4_shadowing(seed); }},
      {5, "squaring localization to depth 6", 5, c5_localization},
      {6, "flow axioms and cycle decomposition", 5, [&] { return c6_flow_axioms(seed); }},
      {7, "projection preserves flows and is linear", 0, [&] { return c7_projection(seed); }},
      {8, "projected extreme points on the small-graph corpus", 30, [&] { return c8_extreme_points(seed); }},
      {9, "golden rotation consistent chain to depth 6, |int cos| <= 0.1", 60, c9_unique_ergodicity},
      {10, "Karp mean cycles equal brute force (rational)", 5, [&] { return c10_karp(seed); }},
      {11, "squaring spectrum hull endpoints within d_t of 0 and 1", 5, c11_squaring_spectrum},
      {12, "rotation spectrum width nonincreasing, <= 0.2 at depth 6", 60, c12_rotation_shrinkage},
      {13, "repeated runs give byte-identical artifacts", 0, [&] { return c13_reproducibility(cli, work); }},
  };

  Json summary = Json::array();
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      out.passed = false;
      out.detail += "; over the " + fmt(c.budget_s) + " s budget";
    }
    failures += !out.passed;
    std::cout << (out.passed ? "PASS" : "FAIL") << " criterion " << std::setw(2) << c.id << ": " << c.title << " ("
              << std::fixed << std::setprecision(2) << secs << " s) -- " << out.detail << std::endl;
    std::cout.unsetf(std::ios::fixed);
    Json j;
    j["criterion"] = c.id;
    j["title"] = c.title;
    j["passed"] = out.passed;
    j["seconds"] = secs;
    j["detail"] = out.detail;
    summary.push_back(std::move(j));
  }
  std::ofstream(fs::path(work) / "acceptance.json") << dump(summary);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
