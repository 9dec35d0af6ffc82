import json
from fractions import Fraction
from pathlib import Path

import pytest

import hyperreg

FIXTURES = Path(__file__).resolve().parents[2] / "fixtures"


def load(name):
    return json.loads((FIXTURES / name).read_text())


def constant_graph(n, value):
    layer = [str(value)] * (n * n)
    return {
        "parts": {"0": n, "1": n},
        "arity_cap": 2,
        "empty_weight": "1",
        "layers": [{"indices": [0, 1], "weights": layer}],
    }


def test_complete_graph_counts_one():
    assert hyperreg.count(load("complete_k2.json"), load("triangle.json")) == 1
    assert hyperreg.count(load("complete_k2.json"), load("triangle.json"), exact=False) == pytest.approx(1.0)


def test_constant_density_edge():
    edge = {"parts": {"0": [0], "1": [1]}, "edges": [[0, 1]]}
    assert hyperreg.count(constant_graph(3, Fraction(1, 3)), edge) == Fraction(1, 3)


def test_regcheck_constant_layer_is_exactly_regular():
    gamma = constant_graph(3, 1)
    g = constant_graph(3, Fraction(1, 3))
    r = hyperreg.regcheck(g, gamma, "0", d="1/3")
    assert r["precondition_ok"] and r["passes"]
    assert Fraction(r["oct_ratio"]) == Fraction(1, 81)


def test_regcheck_reports_precondition():
    r = hyperreg.regcheck(constant_graph(3, 1), constant_graph(3, Fraction(1, 2)), "0")
    assert r["precondition_ok"] is False


def test_minimality_of_complete_graph():
    assert Fraction(hyperreg.minimality(constant_graph(2, 1))["defect"]) == 0


def test_ensemble_round_trip_and_bad_input():
    e = hyperreg.make_ensemble(2, 2, 9, 20, ["1/2", "1/2"], "1/10")
    report = hyperreg.check_ensemble(e)
    assert report["valid"]
    with pytest.raises(ValueError):
        hyperreg.make_ensemble(2, 2, 9, 20, ["0", "1/2"], "1/10")


def test_random_partite_is_deterministic():
    a = hyperreg.random_partite(2, 12, 0.5, 7, [0, 1, 2])
    b = hyperreg.random_partite(2, 12, 0.5, 7, [0, 1, 2])
    assert a == b
    assert sorted(a["parts"]) == ["0", "1", "2"]


def test_thc_random_at_p_one():
    rep = hyperreg.thc_random(2, 30, 1.0, load("triangle.json"), 0.1, 3, trials=1, seed=4)
    assert rep["pass_frequency"] == 1.0
