import copy
import json
from pathlib import Path

import numpy as np
import pytest

from zerodyn.errors import ScenarioError
from zerodyn.modes import quartic_modes
from zerodyn.scenarios import PAPER_MODES, Scenario, builtin_names, get_builtin, load_scenario

DOCS = Path(__file__).resolve().parents[1] / "docs"


def schema():
    return json.loads((DOCS / "scenario.schema.json").read_text())


def test_builtin_names():
    assert builtin_names() == ["example1_n2", "example2_n2", "example3_n2",
                               "example4_n2_scattering", "example1_n3"]


@pytest.mark.parametrize("name", builtin_names())
def test_builtins_match_schema(name):
    jsonschema = pytest.importorskip("jsonschema")
    jsonschema.validate(get_builtin(name).to_dict(), schema())


def test_shipped_scenarios_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    files = sorted((DOCS / "scenarios").glob("*.json"))
    assert files
    for f in files:
        jsonschema.validate(json.loads(f.read_text()), schema())
        load_scenario(str(f))


@pytest.mark.parametrize("name", builtin_names())
def test_builtin_parameters_give_stated_roots(name):
    p = get_builtin(name).params
    for m, want in enumerate(PAPER_MODES[name]):
        got = quartic_modes(p.alpha[m], p.beta[m], p.gamma[m], p.delta[m])
        d = np.abs(got[:, None] - np.array(want)[None, :])
        assert d.min(axis=0).max() <= 1e-9 and d.min(axis=1).max() <= 1e-9


@pytest.mark.parametrize("name", builtin_names())
def test_roundtrip(name):
    sc = get_builtin(name)
    back = Scenario.from_dict(json.loads(json.dumps(sc.to_dict())))
    assert back.name == sc.name and back.t1 == sc.t1 and back.dt == sc.dt
    for f in ("alpha", "beta", "gamma", "delta"):
        np.testing.assert_array_equal(getattr(back.params, f), getattr(sc.params, f))
    for f in ("z", "zdot", "w", "wdot"):
        np.testing.assert_array_equal(getattr(back.initial, f), getattr(sc.initial, f))


def test_three_parameter_forms_agree():
    lam = np.array([[-1j, 1j, -1, -2]] * 2)
    base = get_builtin("example2_n2").to_dict()
    by_lam = copy.deepcopy(base)
    by_lam["parameters"] = {"lambda": [[[x.real, x.imag] for x in row] for row in lam]}
    by_df = copy.deepcopy(base)
    by_df["parameters"] = {"decay_freq": {"a": (-lam.real).tolist(), "omega": lam.imag.tolist()}}
    ref = Scenario.from_dict(base).params
    for doc in (by_lam, by_df):
        p = Scenario.from_dict(doc).params
        for f in ("alpha", "beta", "gamma", "delta"):
            assert np.abs(getattr(p, f) - getattr(ref, f)).max() <= 1e-12


def test_sample_grid_ends_at_horizon():
    sc = get_builtin("example1_n2")
    g = sc.sample_grid()
    assert g[0] == 0 and g[-1] == sc.t1 and g.size == 513
    assert np.allclose(np.diff(g), sc.dt, rtol=1e-12)


def bad(mutate):
    doc = get_builtin("example1_n2").to_dict()
    mutate(doc)
    with pytest.raises(ScenarioError):
        Scenario.from_dict(doc)


def test_validation_errors():
    bad(lambda d: d["initial"].__setitem__("z", [[1, 1], [1, 1]]))
    bad(lambda d: d.__setitem__("N", 3))
    bad(lambda d: d.pop("t1"))
    bad(lambda d: d.__setitem__("t1", -1))
    bad(lambda d: d.__setitem__("dt", 0))
    bad(lambda d: d["parameters"].__setitem__("lambda", [[0, 1, 2, 3]] * 2))
    bad(lambda d: d.__setitem__("parameters", {}))
    bad(lambda d: d["parameters"].__setitem__("alpha_beta_gamma_delta", [[1, 2, 3]] * 2))
    bad(lambda d: d["initial"].__setitem__("w", [[1, 2, 3], 0]))
    bad(lambda d: d["initial"].pop("wdot"))
    with pytest.raises(ScenarioError):
        Scenario.from_dict([1, 2])


def test_load_errors(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario("no_such_scenario")
    f = tmp_path / "broken.json"
    f.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenario(str(f))


def test_with_horizon_validates():
    sc = get_builtin("example1_n2")
    assert sc.with_horizon(t1=1.0, dt=0.1).sample_grid().size == 11
    with pytest.raises(ScenarioError):
        sc.with_horizon(dt=100.0)
