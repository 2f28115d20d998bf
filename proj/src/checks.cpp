#include "symimg/checks.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symimg/encoding.hpp"
#include "symimg/flow.hpp"
#include "symimg/maps.hpp"
#include "symimg/oracles.hpp"
#include "symimg/spectrum.hpp"

namespace symimg {

namespace {

using oracle::uniform;

CheckResult scc_oracle(std::mt19937_64& rng) {
  CheckResult r{"scc_matches_closure_oracle", true, 0, ""};
  for (int t = 0; t < 200; ++t) {
    const Digraph g = oracle::random_graph(1 + rng() % 8, 0.1 + 0.3 * uniform(rng), rng);
    ++r.cases;
    const auto a = recurrent_classes(g);
    const auto b = oracle::closure_recurrent_classes(g);
    if (a.vertices != b.vertices || a.classes != b.classes) {
      r.passed = false;
      r.detail = "mismatch on case " + std::to_string(t);
      break;
    }
  }
  return r;
}

CheckResult karp_oracle(std::mt19937_64& rng) {
  CheckResult r{"mean_cycle_matches_enumeration", true, 0, ""};
  for (int t = 0; t < 50; ++t) {
    const Digraph g = oracle::random_strong_graph(1 + rng() % 8, 0.1 + 0.3 * uniform(rng), rng);
    std::vector<Rational> b;
    for (std::size_t v = 0; v < g.size(); ++v)
      b.emplace_back(static_cast<std::int64_t>(rng() % 41) - 20, 1 + static_cast<std::int64_t>(rng() % 6));
    ++r.cases;
    const auto lo = min_mean_cycle(g, b);
    const auto hi = max_mean_cycle(g, b);
    if (!(lo.value == oracle::brute_min_mean(g, b)) || !(hi.value == oracle::brute_max_mean(g, b))) {
      r.passed = false;
      r.detail = "value mismatch on case " + std::to_string(t);
      break;
    }
  }
  return r;
}

CheckResult decomposition(std::mt19937_64& rng) {
  CheckResult r{"decomposition_round_trip", true, 0, ""};
  for (int t = 0; t < 200; ++t) {
    const Digraph g = oracle::random_strong_graph(1 + rng() % 10, 0.1 + 0.2 * uniform(rng), rng);
    const Flow m = oracle::random_cycle_mixture(g, 5, rng);
    ++r.cases;
    const FlowCheck fc = is_flow(m, g);
    const auto terms = decompose(m, g);
    std::vector<Flow> flows;
    std::vector<double> coef;
    for (const auto& term : terms) {
      flows.push_back(simple_flow(term.cycle, g));
      coef.push_back(term.coefficient);
    }
    const Flow back = mix(flows, coef, 1e-9);
    double err = 0.0;
    for (const Arc& a : g.arcs()) err = std::max(err, std::abs(back.weight(a) - m.weight(a)));
    if (!fc.valid || err > 1e-9 || terms.size() > g.arc_count()) {
      r.passed = false;
      r.detail = "case " + std::to_string(t) + ": error " + std::to_string(err);
      break;
    }
  }
  return r;
}

CheckResult projection(std::mt19937_64& rng) {
  CheckResult r{"projection_is_linear_flow_map", true, 0, ""};
  for (int t = 0; t < 100; ++t) {
    const auto gp = oracle::random_graph_pair(2 + rng() % 7, 1 + rng() % 2, 0.3, false, rng);
    const Flow a = oracle::random_cycle_mixture(gp.child, 4, rng);
    const Flow b = oracle::random_cycle_mixture(gp.child, 4, rng);
    if (a.weights.empty() || b.weights.empty()) continue;
    ++r.cases;
    const double c = uniform(rng);
    const Flow lhs = project_flow(mix({a, b}, {c, 1.0 - c}), gp.s, &gp.parent);
    const Flow rhs = mix({project_flow(a, gp.s, &gp.parent), project_flow(b, gp.s, &gp.parent)}, {c, 1.0 - c});
    double err = 0.0;
    for (const Arc& arc : gp.parent.arcs()) err = std::max(err, std::abs(lhs.weight(arc) - rhs.weight(arc)));
    if (!is_flow(lhs, gp.parent).valid || err > 1e-12) {
      r.passed = false;
      r.detail = "case " + std::to_string(t) + ": linearity error " + std::to_string(err);
      break;
    }
  }
  return r;
}

CheckResult extreme_points(std::uint64_t seed) {
  CheckResult r{"projected_extreme_points", true, 0, ""};
  for (const auto& gp : oracle::small_graph_corpus(seed, 40)) {
    ++r.cases;
    const auto rep = extreme_projection_check(gp.child, gp.parent, gp.s);
    if (!rep.ok()) {
      r.passed = false;
      r.detail = rep.failures.empty() ? "failed" : rep.failures.front();
      break;
    }
  }
  return r;
}

std::vector<SystemMap> corpus_maps() {
  return {rotation_map(0.25), rotation_map((std::sqrt(5.0) - 1.0) / 2.0), square_map(), cat_map(),
          standard_map(0.5), affine_map(0.5, 0.25)};
}

CheckResult outer_soundness(std::mt19937_64& rng) {
  CheckResult r{"outer_enclosure_soundness", true, 0, ""};
  for (const SystemMap& m : corpus_maps()) {
    const Domain& d = m.domain();
    for (int t = 0; t < 10; ++t) {
      Box b{Point(d.dim()), Point(d.dim())};
      for (std::size_t a = 0; a < d.dim(); ++a) {
        const double u = uniform(rng), v = uniform(rng);
        b.lo[a] = d.lower(a) + std::min(u, v) * d.period(a);
        b.hi[a] = d.lower(a) + std::max(u, v) * d.period(a);
      }
      const Box e = m.box_image(b, EdgeMode::outer()).boxes.front();
      ++r.cases;
      for (const Point& p : stratified_points(b, 1000)) {
        const Point y = m.eval(p);
        if (!d.intersects(e, Box{y, y})) {
          r.passed = false;
          r.detail = m.spec() + ": image point outside the enclosure";
          return r;
        }
      }
    }
  }
  return r;
}

CheckResult modulus_soundness(std::mt19937_64& rng) {
  CheckResult r{"modulus_soundness", true, 0, ""};
  for (const SystemMap& m : corpus_maps()) {
    const Domain& d = m.domain();
    for (int t = 0; t < 1000; ++t) {
      Point x(d.dim()), y(d.dim());
      for (std::size_t a = 0; a < d.dim(); ++a) {
        x[a] = d.lower(a) + uniform(rng) * d.period(a);
        y[a] = x[a] + (uniform(rng) - 0.5) * 0.1 * d.period(a);
        y[a] = d.wraps(a) ? d.wrap_coordinate(a, y[a]) : std::clamp(y[a], d.lower(a), d.upper(a));
      }
      ++r.cases;
      const double delta = d.distance(x, y);
      if (d.distance(m.eval(x), m.eval(y)) > m.modulus_bound(delta) + 1e-12) {
        r.passed = false;
        r.detail = m.spec() + ": modulus bound violated";
        return r;
      }
    }
  }
  return r;
}

CheckResult orbit_encodings(std::mt19937_64& rng) {
  CheckResult r{"orbit_encodings_admissible", true, 0, ""};
  for (const SystemMap& m : corpus_maps()) {
    const Domain& d = m.domain();
    std::vector<int> splits(d.dim(), d.dim() == 1 ? 16 : 8);
    const auto g = build_symbolic_image(m, initial_covering(d, splits), EdgeMode::outer());
    for (int t = 0; t < 100; ++t) {
      Point x(d.dim());
      for (std::size_t a = 0; a < d.dim(); ++a) x[a] = d.lower(a) + uniform(rng) * d.period(a);
      ++r.cases;
      const PathWindow p = encode(orbit_segment(m, x, 20), *g->covering);
      if (!is_admissible(p, g->graph).admissible) {
        r.passed = false;
        r.detail = m.spec() + ": encoding is not admissible";
        return r;
      }
    }
  }
  return r;
}

}  // namespace

std::vector<CheckResult> run_property_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<CheckResult> out;
  out.push_back(scc_oracle(rng));
  out.push_back(karp_oracle(rng));
  out.push_back(decomposition(rng));
  out.push_back(projection(rng));
  out.push_back(extreme_points(seed));
  out.push_back(outer_soundness(rng));
  out.push_back(modulus_soundness(rng));
  out.push_back(orbit_encodings(rng));
  return out;
}

}  // namespace symimg
