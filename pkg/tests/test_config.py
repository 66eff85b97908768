"""Config schema validation diagnostics and scenario construction."""

import json

import numpy as np
import pytest

from geodyn.config import (
    SCHEMA_VERSION,
    Diagnostic,
    build_scenario,
    load_config,
    validate_config,
)
from geodyn.scenarios import BUILTIN_SCENARIOS, builtin_config
from geodyn.tensors import Point


def _minimal(**overrides):
    obj = {
        "schema": SCHEMA_VERSION,
        "chart": {"dimension": 2, "box": {"lo": [0.0, 0.0], "hi": [1.0, 1.0]}},
        "frame": {"builtin": "flat", "parameters": {"dim": 2}},
        "tasks": [{"type": "curvature-at-points"}],
    }
    obj.update(overrides)
    return obj


def _paths(diags):
    return {d.path for d in diags}


def test_minimal_config_is_valid_and_builds():
    obj = _minimal()
    assert validate_config(obj) == []
    scn = build_scenario(obj)
    assert scn.dim == 2
    assert scn.grid.shape == (5, 5)
    assert scn.region.hi == (1.0, 1.0)
    assert scn.connection is None and scn.triple is None


def test_builtin_scenarios_all_validate():
    assert len(BUILTIN_SCENARIOS) == 6
    for name in BUILTIN_SCENARIOS:
        obj = builtin_config(name)
        diags = validate_config(obj)
        assert diags == [], f"{name}: {[str(d) for d in diags]}"
        build_scenario(obj)
    with pytest.raises(KeyError):
        builtin_config("no-such-scenario")


def test_schema_and_unknown_sections():
    diags = validate_config(_minimal(schema="v0", extra={}))
    assert {"schema", "extra"} <= _paths(diags)
    assert validate_config([1, 2]) [0].path == "<root>"
    assert str(Diagnostic("a.b", "msg")) == "a.b: msg"


def test_chart_diagnostics():
    obj = _minimal()
    obj["chart"] = {"dimension": 0, "box": {"lo": [0.0], "hi": [0.0]}}
    assert "chart.dimension" in _paths(validate_config(obj))

    obj = _minimal()
    obj["chart"]["coordinates"] = ["x", "x"]
    assert "chart.coordinates" in _paths(validate_config(obj))

    obj = _minimal()
    obj["chart"]["box"] = {"lo": [0.0, 0.0], "hi": [1.0, 0.0]}
    assert "chart.box" in _paths(validate_config(obj))

    obj = _minimal()
    obj["chart"]["grid"] = [9, 1]
    obj["chart"]["periodic"] = [True]
    got = _paths(validate_config(obj))
    assert {"chart.grid", "chart.periodic"} <= got


def test_frame_diagnostics():
    obj = _minimal()
    obj["frame"] = {"diagonal": ["1", "1"], "matrix": [["1", "0"], ["0", "1"]]}
    assert "frame" in _paths(validate_config(obj))

    obj = _minimal()
    obj["frame"] = {"builtin": "torus7"}
    assert "frame.builtin" in _paths(validate_config(obj))

    # builtin whose dimension disagrees with the chart
    obj = _minimal()
    obj["frame"] = {"builtin": "sphere2"}
    obj["chart"]["dimension"] = 4
    obj["chart"]["box"] = {"lo": [0.0] * 4, "hi": [1.0] * 4}
    assert "frame.builtin" in _paths(validate_config(obj))

    obj = _minimal()
    obj["frame"] = {"builtin": "flat", "parameters": {"dim": 2, "twist": 1}}
    assert "frame.parameters.twist" in _paths(validate_config(obj))

    obj = _minimal()
    obj["frame"] = {"diagonal": ["1", "x0 +"]}
    got = validate_config(obj)
    assert any(d.path.startswith("frame.diagonal") for d in got)


def test_gauge_diagnostics():
    obj = _minimal(gauge={"w": [["0", "0"]] * 3})
    got = _paths(validate_config(obj))
    assert "gauge.couplings.g2" in got

    obj = _minimal(gauge={"couplings": {"g1": -1.0}, "b": ["0", "0"]})
    assert "gauge.couplings.g1" in _paths(validate_config(obj))

    obj = _minimal(gauge={"couplings": {"g3": 1.0}, "g": [["0", "0"]] * 7})
    assert "gauge.g" in _paths(validate_config(obj))

    obj = _minimal(gauge={"couplings": {}})
    assert "gauge" in _paths(validate_config(obj))


def test_higgs_and_constants_diagnostics():
    obj = _minimal(higgs={"y": "x0", "alpha": 0})
    got = _paths(validate_config(obj))
    assert {"higgs.x", "higgs.alpha"} <= got

    obj = _minimal(constants={"n_r": 0, "weird": 1.0, "f0": "a"})
    got = _paths(validate_config(obj))
    assert {"constants.n_r", "constants.weird", "constants.f0"} <= got


def test_triple_diagnostics():
    obj = _minimal(finite_triple={"builtin": "three-point"})
    assert "finite_triple.builtin" in _paths(validate_config(obj))

    obj = _minimal(finite_triple={"dim": 2})
    got = _paths(validate_config(obj))
    assert {"finite_triple.dirac", "finite_triple.generators"} <= got

    obj = _minimal(finite_triple={
        "dim": 2,
        "dirac": [["0", "1"], ["1", "0"]],
        "generators": [[["1", "0"], ["0", "1"]]],
        "epsilon_signs": [1, 2, 1],
    })
    assert "finite_triple.epsilon_signs" in _paths(validate_config(obj))

    obj = _minimal(finite_triple={
        "builtin": "lepton-sector",
        "parameters": {"k_e": [["1"]]},
    })
    assert "finite_triple.parameters.k_e" in _paths(validate_config(obj))


def test_cutoff_diagnostics():
    obj = _minimal(cutoff={})
    assert "cutoff" in _paths(validate_config(obj))

    obj = _minimal(cutoff={"builtin": "window"})
    assert "cutoff.builtin" in _paths(validate_config(obj))

    obj = _minimal(cutoff={"table": {"u": [1.0, 0.5], "f": [1.0, 0.0]}})
    assert "cutoff.table.u" in _paths(validate_config(obj))

    obj = _minimal(cutoff={"builtin": "gaussian", "scale_sq": -2.0})
    assert "cutoff.scale_sq" in _paths(validate_config(obj))


def test_task_diagnostics():
    obj = _minimal(tasks=[])
    assert "tasks" in _paths(validate_config(obj))

    obj = _minimal(tasks=[{"type": "resonance"}])
    assert "tasks[0].type" in _paths(validate_config(obj))

    obj = _minimal(tasks=[{"type": "geodesic", "velocity": [1.0, 0.0],
                           "steps": 0}])
    got = _paths(validate_config(obj))
    assert {"tasks[0].start", "tasks[0].steps"} <= got

    obj = _minimal(tasks=[{"type": "curvature-at-points", "points": [[0.1]]}])
    assert "tasks[0].points[0]" in _paths(validate_config(obj))

    obj = _minimal(tasks=[{"type": "action"}])
    assert "tasks[0]" in _paths(validate_config(obj))

    obj = _minimal(tasks=[{"type": "axioms"}])
    assert "tasks[0]" in _paths(validate_config(obj))

    obj = _minimal(tasks=[{"type": "trace-oracle"}])
    assert "tasks[0]" in _paths(validate_config(obj))

    ok = _minimal(cutoff={"builtin": "exponential"},
                  tasks=[{"type": "action", "aa_mode": "metric"}])
    assert validate_config(ok) == []


def test_load_config_round_trip(tmp_path):
    path = tmp_path / "scn.json"
    path.write_text(json.dumps(_minimal()), encoding="utf-8")
    obj, diags = load_config(str(path))
    assert diags == [] and obj["schema"] == SCHEMA_VERSION

    missing, diags = load_config(str(tmp_path / "nope.json"))
    assert missing is None and diags and diags[0].path == "<file>"

    bad = tmp_path / "bad.json"
    bad.write_text("{", encoding="utf-8")
    obj, diags = load_config(str(bad))
    assert obj is None and "line 1" in diags[0].message


def test_build_scenario_with_expressions():
    obj = {
        "schema": SCHEMA_VERSION,
        "chart": {"dimension": 2, "coordinates": ["th", "ph"],
                  "box": {"lo": [0.2, 0.0], "hi": [2.9, 6.2]}},
        "frame": {"diagonal": ["1", "sin(th)"]},
        "gauge": {"couplings": {"g1": 0.5}, "b": ["th", "0"]},
        "higgs": {"x": "th/10", "y": "0", "c": 0.8},
        "finite_triple": {"builtin": "two-point", "parameters": {"m": 1.5}},
        "constants": {"f0": 4.0},
        "tasks": [{"type": "curvature-at-points"}],
    }
    assert validate_config(obj) == []
    scn = build_scenario(obj)
    gamma = scn.frame.metric().value(Point((0.7, 0.3)))
    assert abs(gamma[1, 1] - np.sin(0.7) ** 2) < 1e-14
    assert abs(gamma[0, 0] - 1.0) < 1e-15
    assert scn.connection is not None
    assert scn.triple is not None and scn.triple.dim == 2
    assert scn.constants["f0"] == 4.0
