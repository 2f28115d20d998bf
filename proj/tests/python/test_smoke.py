"""Smoke tests: the compiled module's main operations and the CLI artifact schemas."""

import json
import math
import os
import subprocess
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

SCHEMAS = Path(os.environ.get("SYMIMG_SCHEMAS", Path(__file__).resolve().parents[2] / "docs" / "schemas"))
CLI = os.environ.get("SYMIMG_CLI")

try:
    import symimg
except ImportError:  # module not built
    symimg = None

needs_module = pytest.mark.skipif(symimg is None, reason="symimg extension not built")
needs_cli = pytest.mark.skipif(not CLI, reason="SYMIMG_CLI not set")


def load_schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def validate(path, schema_name):
    doc = json.loads(Path(path).read_text())
    jsonschema.validate(doc, load_schema(schema_name))
    if isinstance(doc, dict) and "config" in doc:
        jsonschema.validate(doc["config"], load_schema("run_config"))
    return doc


def test_schemas_are_valid():
    files = sorted(SCHEMAS.glob("*.schema.json"))
    assert len(files) >= 10
    for f in files:
        jsonschema.Draft202012Validator.check_schema(json.loads(f.read_text()))


# ---- module ----


@needs_module
def test_rotation_graph():
    g = symimg.build(symimg.Map("rotation:alpha=0.25"), [4])
    assert g.arcs == sorted((i, (i + k) % 4) for i in range(4) for k in (1, 2))
    assert g.q == pytest.approx(0.25)
    assert g.recurrent_classes() == [[0, 1, 2, 3]]
    assert g.locate([0.3]) == 1
    assert json.loads(g.graph_json())["edge_mode"] == "outer"


@needs_module
def test_map_errors():
    with pytest.raises(symimg.ParseError):
        symimg.Map("nope")
    with pytest.raises(ValueError):
        symimg.Map("rotation:beta=1")
    with pytest.raises(symimg.DomainEscapeError):
        symimg.Map("affine:a=1,b=0.6")([0.9])
    assert symimg.Map("square").box_image([0.5], [1.0]) == ([([0.25], [1.0])], True)


@needs_module
def test_localize_squaring():
    loc = symimg.localize(symimg.Map("square"), [2], 6)
    assert len(loc) == 6
    assert not loc.empty_terminal
    cells, volume = loc.neighborhood(5)
    assert volume <= 4 * 2.0**-6
    volumes = [loc.neighborhood(t)[1] for t in range(6)]
    assert all(b <= a for a, b in zip(volumes, volumes[1:]))


@needs_module
def test_encode_and_shadow():
    m = symimg.Map("rotation")
    loc = symimg.localize(m, [8], 4)
    pts = symimg.orbit(m, [0.2], 15)
    g = loc.image(len(loc) - 1)
    path = symimg.encode(g, pts)
    assert symimg.is_admissible(g, path) == (True, None)
    sh = symimg.shadow(loc, pts)
    assert sh["error_bound"] == g.diameter
    for p, q in zip(sh["points"], pts):
        d = abs(p[0] - q[0])
        assert min(d, 1 - d) <= g.diameter


@needs_module
def test_flows():
    arcs = [(0, 1), (1, 0), (1, 1)]
    w = {(0, 1): 0.25, (1, 0): 0.25, (1, 1): 0.5}
    assert symimg.is_flow(w, 2, arcs)[0]
    terms = symimg.decompose(w, 2, arcs)
    assert sorted(terms) == [([0, 1], 0.5), ([1], 0.5)]
    assert symimg.project_flow(w, [0, 0]) == {(0, 0): 1.0}
    with pytest.raises(symimg.StructuralError):
        symimg.is_flow({(0, 0): 1.0}, 2, arcs)


@needs_module
def test_ergodic_chain():
    chain = symimg.refine_to_ergodic(symimg.Map("square"), [2], 4, point=[0.0])
    assert chain["consistent"]
    assert chain["levels"][-1]["flow"] == {(0, 0): Fraction(1)}
    with pytest.raises(symimg.ExhaustionError):
        symimg.refine_to_ergodic(symimg.Map("rotation"), [8], 6)


@needs_module
def test_spectrum_and_mean_cycles():
    g = symimg.build(symimg.Map("rotation:alpha=0.25"), [4])
    (cls,) = symimg.spectrum(g, "cos(2*pi*x0)")
    assert cls["alpha"] == pytest.approx(-math.sqrt(0.5) / 3)
    assert cls["beta"] == pytest.approx(math.sqrt(0.5) / 3)
    assert sum(cls["mu_beta"]) == pytest.approx(1.0)
    lo, lo_cycle, hi, hi_cycle = symimg.mean_cycles(3, [(0, 1), (1, 2), (2, 0), (0, 0)], [3.0, 1.0, 2.0])
    assert (lo, hi) == (2.0, 3.0)
    assert hi_cycle == [0]


@needs_module
def test_property_corpus():
    results = symimg.check(5)
    assert results and all(passed for _, passed, _, _ in results)


# ---- CLI artifacts ----


def run_cli(tmp_path, name, *args):
    out = tmp_path / name
    subprocess.run([CLI, *args, "--out", str(out)], check=True, capture_output=True)
    return out


@needs_cli
def test_build_and_localize_artifacts(tmp_path):
    out = run_cli(tmp_path, "loc", "localize", "--map", "square", "--splits", "2", "--depth", "3")
    validate(out / "summary.json", "summary_localize")
    for t in (1, 2, 3):
        validate(out / f"level_{t}_covering.json", "covering")
        validate(out / f"level_{t}_graph.json", "graph")
        validate(out / f"level_{t}_pd.json", "neighborhood")
    out = run_cli(tmp_path, "build", "build", "--map", "cat", "--splits", "4,4")
    validate(out / "summary.json", "summary_localize")
    validate(out / "graph.json", "graph")


@needs_cli
def test_encode_and_shadow_artifacts(tmp_path):
    out = run_cli(tmp_path, "enc", "encode", "--map", "rotation", "--splits", "8", "--x0", "0.25", "--length", "6")
    assert validate(out / "encoding.json", "encoding")["admissible"]
    out = run_cli(tmp_path, "all", "encode", "--map", "rotation", "--splits", "8", "--x0", "0.25", "--all")
    assert len(validate(out / "encoding.json", "encoding")["paths"]) >= 2
    out = run_cli(tmp_path, "sh", "shadow", "--map", "cat", "--splits", "4,4", "--depth", "3", "--x0", "0.1,0.2")
    doc = validate(out / "shadow.json", "shadow")
    assert doc["sup_distance_to_orbit"] <= doc["max_error_bound"]


@needs_cli
def test_flow_artifacts(tmp_path):
    out = run_cli(tmp_path, "fl", "flows", "--map", "rotation", "--splits", "8", "--depth", "2")
    validate(out / "flow.json", "flow")
    validate(out / "decomposition.json", "decomposition")
    validate(out / "measure.json", "measure")
    out = run_cli(tmp_path, "me", "measure", "--map", "rotation", "--splits", "8", "--depth", "3")
    summary = validate(out / "summary.json", "summary_measure")
    assert summary["complete"] and summary["consistent"]
    validate(out / "level_3_flow.json", "flow")
    validate(out / "level_3_measure.json", "measure")


@needs_cli
def test_spectrum_and_check_artifacts(tmp_path):
    out = run_cli(tmp_path, "sp", "spectrum", "--map", "square", "--splits", "2", "--depth", "3")
    validate(out / "summary.json", "summary_spectrum")
    validate(out / "level_3_spectrum.json", "spectrum")
    validate(out / "extremal_class_0_beta.json", "measure")
    out = run_cli(tmp_path, "ck", "check", "--seed", "2")
    assert all(r["passed"] for r in validate(out / "check.json", "check")["results"])


@needs_cli
def test_exhaustion_keeps_partial_chain(tmp_path):
    out = tmp_path / "exh"
    proc = subprocess.run([CLI, "measure", "--map", "rotation", "--splits", "8", "--depth", "6", "--out", str(out)],
                          capture_output=True)
    assert proc.returncode == 3
    summary = validate(out / "summary.json", "summary_measure")
    assert not summary["complete"]
    assert len(summary["levels"]) == 5
