import json
import math

import numpy as np
import pytest

import renorm_lab as rl


def test_qt_eval_examples():
    assert rl.qt_eval(1.0, 2.0, 0.0) == pytest.approx(1.0)
    assert rl.qt_eval(0.9, 2.0, 4 / 9) == pytest.approx(4 / 9, abs=1e-15)
    with pytest.raises(rl.DomainError):
        rl.qt_eval(1.5, 2.0, 0.0)


def test_eval_pair_is_even():
    xs = np.linspace(-1, 1, 101)
    ys = np.array(rl.eval_pair([], 0.87, 2.0, xs))
    np.testing.assert_allclose(ys, ys[::-1], atol=1e-13)
    assert ys[0] == pytest.approx(-1.0)


def test_find_cycle():
    c = rl.find_cycle(0.9)
    assert abs(c["p"]) == pytest.approx(4 / 9, rel=1e-12)
    assert c["combinatorics"] == [2, 1]
    assert c["intervals"][0][1] == pytest.approx(2 * math.sqrt(14) / 9, rel=1e-12)
    assert rl.find_cycle(0.5) is None


def test_superstable():
    assert rl.find_superstable_t(2.0, 2, 0.7, 0.9) == pytest.approx((1 + math.sqrt(5)) / 4, rel=1e-14)


@pytest.fixture(scope="module")
def record():
    return rl.fixed_point(2.0)


def test_fixed_point(record):
    assert record["residual"] < 1e-10
    assert record["t_star"] == pytest.approx(0.886656229893792, abs=1e-12)
    assert len(record["coeffs"]) == 61


def test_linearization_dominant_eigenvalue():
    eig = np.linalg.eigvals(rl.linearization(2.0))
    eig = eig[np.argsort(-np.abs(eig))]
    assert eig[0].real == pytest.approx(4.6692016091, rel=1e-9)
    assert np.sum(np.abs(eig) > 1) == 1


def test_record_json_round_trip():
    text = rl.fixed_point_json(2.0)
    doc = json.loads(text)
    assert doc["expanding_count"] == 1
    assert rl.check_record_json(text) < 1e-12
    del doc["t_star"]
    with pytest.raises(rl.SchemaError, match="t_star"):
        rl.check_record_json(json.dumps(doc))


def test_cascade_oracle():
    c = rl.cascade_delta(2.0, 10)
    assert c["complete"]
    assert c["delta"] == pytest.approx(4.6692, abs=1e-3)
    assert rl.cascade_delta(2.0, 10) == c


def test_real_bounds():
    b = rl.real_bounds(2.0, 6)
    assert 0.05 < b["min_ratio"] <= b["max_ratio"] < 0.95


def test_verify_selected():
    rows = rl.verify(["conjugacy", "1"])
    assert [r[0] for r in rows] == [1, 5]
    assert all(r[2] for r in rows)
    with pytest.raises(rl.DomainError):
        rl.verify(["no-such-criterion"])
