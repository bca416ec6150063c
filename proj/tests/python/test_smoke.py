"""End-to-end smoke tests for the python bindings."""

import json
import math

import numpy as np
import pytest

import spacenorm as sn


FULL_1D = json.dumps(
    {"kind": "full_space", "window": {"lo": [-8.0], "hi": [8.0]}, "parameters": {}}
)
GAUSSIAN = json.dumps({"family": "gaussian", "center": [0.0], "width": 1.0, "name": "gaussian"})
BM_PARAMS = json.dumps(
    {
        "d": 1,
        "s": 0.7,
        "p": 1.5,
        "u": 3.0,
        "q": 2.0,
        "v": 2.0,
        "family": "besov_morrey",
        "N": 2,
        "T": 1.0,
        "R": 1.0,
        "flavor": "osc",
    }
)


def test_domain_round_trip():
    dom = sn.DomainSpec.from_json(FULL_1D)
    assert dom.contains([4.2])
    back = json.loads(dom.to_json())
    assert back["kind"] == "full_space"


def test_sample_and_norms():
    sn.set_threads(2)
    dom = sn.DomainSpec.from_json(FULL_1D)
    fn = sn.TestFunctionSpec.from_json(GAUSSIAN)
    f = sn.sample(fn, dom, 1024)
    assert f.dim == 1
    assert f.values.shape == (1024,)
    assert f.values.max() == pytest.approx(1.0, abs=1e-4)

    params = sn.SpaceParams.from_json(BM_PARAMS)
    osc = sn.full_norm(f, params, dom)
    assert osc["total"] > 0
    assert osc["total"] == pytest.approx(osc["main_term"] + osc["seminorm"])
    assert len(osc["levels"]) > 0

    diff_params = sn.SpaceParams.from_json(BM_PARAMS.replace('"osc"', '"diff"'))
    diff = sn.full_norm(f, diff_params, dom)
    lp = sn.lp_norm(f, params, dom)
    for ratio in (osc["total"] / diff["total"], osc["total"] / lp, diff["total"] / lp):
        assert 0.1 <= ratio <= 10.0


def test_pointwise_operations():
    dom = sn.DomainSpec.from_json(FULL_1D)
    fn = sn.TestFunctionSpec.from_json(GAUSSIAN)
    f = sn.sample(fn, dom, 512)

    # linear functions have zero second difference
    lin = sn.GridFunction(np.linspace(0.0, 1.0, 64), [0.0], 1.0 / 64.0)
    assert sn.delta(lin, [10], [2], 2) == pytest.approx(0.0, abs=1e-12)
    assert sn.diff_ball_mean(lin, [32], 0.1, 2.0, 2, sn.DomainSpec.from_json(
        json.dumps({"kind": "full_space", "window": {"lo": [0.0], "hi": [1.0]},
                    "parameters": {}}))) == pytest.approx(0.0, abs=1e-12)

    val = sn.oscillation(f, [0.0], 0.5, 2.0, 2, dom, "exact2")
    assert val >= 0.0
    assert sn.morrey_ball_norm(f, 1.5, 3.0, dom) > 0


def test_grid_function_io(tmp_path):
    values = np.exp(-np.linspace(-4, 4, 256) ** 2)
    f = sn.GridFunction(values, [-4.0], 8.0 / 255.0)
    path = str(tmp_path / "f.bin")
    f.save(path)
    back = sn.GridFunction.load(path)
    assert np.array_equal(back.values, values)
    f.export_csv(str(tmp_path / "f.csv"))
    assert (tmp_path / "f.csv").exists()


def test_run_experiment_report():
    cfg = {
        "corpus": [json.loads(GAUSSIAN)],
        "domains": [json.loads(FULL_1D)],
        "parameter_grid": [json.loads(BM_PARAMS)],
        "grid_sizes": [256],
        "flavors": ["osc", "diff"],
    }
    rep = json.loads(sn.run_experiment(json.dumps(cfg)))
    assert rep["schema"] == 1
    assert len(rep["cells"]) == 2
    assert rep["all_passed"]
    assert all(r["within_bounds"] for r in rep["ratios"])


def test_regularity_scan():
    dom = sn.DomainSpec.from_json(FULL_1D)
    step = sn.TestFunctionSpec.from_json(
        json.dumps({"family": "step_indicator", "box": {"lo": [0.0], "hi": [1.0]},
                    "name": "step"})
    )
    params = sn.SpaceParams.from_json(
        json.dumps({"d": 1, "s": 0.5, "p": 2.0, "u": 2.0, "q": 1.0, "v": 1.0,
                    "family": "besov_morrey", "N": 1, "T": 1.0, "R": 1.0, "flavor": "osc"})
    )
    res = sn.regularity_scan(step, params, dom, [512, 1024, 2048])
    assert math.isfinite(res["threshold"])
    assert abs(res["threshold"] - 0.5) <= 0.15
