import math

import numpy as np
import pytest

import orthodec


def test_decompose_round_trip():
    f = orthodec.element(2, {(0, 0): 0.75, (1, 0): -0.5, (2, 3): 1.125})
    dec = orthodec.decompose(f)
    assert dec["m"]["entries"] == [{"index": [0, 0], "coeff": 1.375}]
    assert orthodec.omd_verify(dec)["pass"]
    assert orthodec.reconstruct(dec) == f


def test_rejects_future_indices():
    with pytest.raises(ValueError):
        orthodec.decompose(orthodec.element(1, {(-1,): 1.0}))


def test_geometric_series():
    f = orthodec.element(1, {(k,): 2.0 ** -k for k in range(61)})
    rep = orthodec.series_condition(f)
    assert rep["converged"]
    assert abs(rep["total"] - 4 / math.sqrt(3)) < 1e-9


def test_simulate_is_deterministic_and_normalized():
    a = orthodec.simulate("iid", 2, 16, 2000, seed=3, law="gaussian")
    b = orthodec.simulate("iid", 2, 16, 2000, seed=3, law="gaussian", workers=2)
    assert a.shape == (2000, 1)
    assert np.array_equal(a, b)
    assert abs(a.var(ddof=1) - 1.0) < 0.1
    ks = orthodec.ks_gaussian(a[:, 0], 1.0)
    assert ks["pass"]


def test_inequality_and_vc_helpers():
    assert orthodec.holder_threshold(1) == pytest.approx(2.0)
    assert orthodec.moment_ratio_exact([2], 4.0) == pytest.approx(2 ** 0.25)
    assert orthodec.vc_index("Q2") == (3, True)
    assert orthodec.rho([0, 0], [0.5, 0.5], [0, 0], [0.5, 1]) == pytest.approx(0.5)
    lower, upper = orthodec.covering_number("Q1", 10, 1.0)
    assert upper == 1 and lower <= upper
