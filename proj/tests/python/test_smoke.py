"""Smoke tests for the _vrp2l extension module."""

import json

import pytest

import _vrp2l


@pytest.fixture(scope="module")
def instance():
    return _vrp2l.generate_instance(
        seed=9, suppliers=4, warehouses=2, shipments=10, trucks=6, cities=2
    )


def test_generate_is_deterministic():
    a = _vrp2l.generate_instance(seed=3, suppliers=3, warehouses=1, shipments=5, trucks=3)
    b = _vrp2l.generate_instance(seed=3, suppliers=3, warehouses=1, shipments=5, trucks=3)
    assert a == b
    doc = json.loads(a)
    assert len(doc["shipments"]) == 5


def test_solve_and_validate(instance):
    result = _vrp2l.solve(instance, iterations=20)
    assert result["final_mileage"] <= result["tabu_mileage"] <= result["initial_mileage"] + 1e-9
    assert _vrp2l.validate(instance, result["solution"]) == []
    recomputed = _vrp2l.recompute_mileage(instance, result["solution"])
    assert abs(recomputed - result["final_mileage"]) < 1e-9
    header = result["convergence_csv"].splitlines()[0]
    assert header == "iteration,elapsed_ms,current_mileage,best_mileage"


def test_validate_reports_violations(instance):
    result = _vrp2l.solve(instance, iterations=3)
    doc = json.loads(result["solution"])
    doc["total_mileage"] = 0.5
    violations = _vrp2l.validate(instance, json.dumps(doc))
    assert any(v["family"] == "model" for v in violations)


def test_oracle_on_tiny_instance():
    tiny = _vrp2l.generate_instance(
        seed=4, suppliers=2, warehouses=1, shipments=3, trucks=2, cities=1
    )
    result = _vrp2l.oracle_solve(tiny)
    assert result["feasible"]
    assert _vrp2l.validate(tiny, result["solution"]) == []
    pipeline = _vrp2l.solve(tiny, iterations=40)
    assert pipeline["final_mileage"] >= result["mileage"] - 1e-6


def test_psi():
    assert _vrp2l.psi(2, [5, 9, 7]) == 7
    assert _vrp2l.psi(1, [3, 8]) == 8
    assert _vrp2l.psi(3, [4, 4, 4]) == 4


def test_parse_error():
    with pytest.raises(_vrp2l.ParseError):
        _vrp2l.validate("{ not json", "{}")
