import math

import numpy as np
import pytest

import msrkit


def test_msr_anchor():
    r = msrkit.msr([-1.0, 2.0], [0.5, 0.5], p=2)
    assert r["case"] == "interior"
    assert r["msr"] == pytest.approx(1.0 / 3.0, abs=1e-9)
    assert r["c_star"] == pytest.approx(0.2, abs=1e-7)


def test_infinite_and_zero_cases():
    assert math.isinf(msrkit.msr([0.0, 1.0], p=2)["msr"])
    assert msrkit.msr([-1.0, 1.0], p=2)["case"] == "zero"


def test_deviation_and_sharpe():
    sigma, center = msrkit.lp_deviation([-1.0, 2.0], [0.5, 0.5], p=2)
    assert sigma == pytest.approx(1.5)
    assert center == pytest.approx(0.5)
    assert msrkit.lp_sharpe([-1.0, 2.0], [0.5, 0.5], p=2) == pytest.approx(1.0 / 3.0)


def test_bpoe_cvar_inverse():
    value, case = msrkit.bpoe([-2.0, 1.0], [0.5, 0.5], p=1, x=0.0)
    assert case == "main"
    assert value == pytest.approx(0.75)
    assert msrkit.cvar([-2.0, 1.0], [0.5, 0.5], p=1, level=1 - value) == pytest.approx(0.0, abs=1e-9)


def test_bad_input_raises():
    with pytest.raises(msrkit.MsrkitError):
        msrkit.msr([], p=2)
    with pytest.raises(ValueError):
        msrkit.lp_deviation([1.0, 2.0], p=0.5)


def test_stopping_threshold():
    s = msrkit.stopping_threshold(0.05, 0.4, 1.0, p=2)
    assert s["case"] == "threshold"
    assert s["gamma"] == pytest.approx(0.625, rel=1e-15)
    assert s["b_star"] == pytest.approx(3.8524, abs=1e-3)


def test_portfolio_weights_sum_to_one():
    rng = np.random.default_rng(3)
    returns = 0.01 + 0.05 * rng.standard_normal((200, 3))
    s = msrkit.solve_bpoe_portfolio(returns, riskfree=0.0, p=2, delta=0.01)
    assert s["case"] == "solved"
    assert s["weights"].sum() == pytest.approx(1.0, abs=1e-10)


def test_gbm_paths_shape_and_determinism():
    a = msrkit.gbm_paths(0.05, 0.2, paths=16, steps=10, seed=5)
    b = msrkit.gbm_paths(0.05, 0.2, paths=16, steps=10, seed=5, threads=4)
    assert a.shape == (16, 11)
    assert np.array_equal(a, b)
    assert np.all(a[:, 0] == 1.0)
