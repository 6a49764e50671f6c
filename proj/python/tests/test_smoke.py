import json
import os
import pathlib
from fractions import Fraction

import pytest

import qosheft

FIXTURES = pathlib.Path(os.environ.get("QOSHEFT_FIXTURES", pathlib.Path(__file__).parents[2] / "tests" / "fixtures"))


def load(name):
    return json.loads((FIXTURES / name).read_text())


def test_hyperperiod():
    assert qosheft.hyperperiod([4, 6, 8]) == 24
    with pytest.raises(qosheft.QosheftError):
        qosheft.hyperperiod([])


def test_schedule_and_verify():
    dag = load("diamond.json")
    platform = load("platform_2vm_30.json")
    hs = qosheft.schedule([dag], platform)
    assert hs["hyperperiod"] == 24
    assert not hs["failures"]
    assert qosheft.verify(hs, [dag], platform) == []
    nr = qosheft.normalized_reward(hs, [dag])
    assert 50 <= nr["nr_percent"] <= 100

    hs["entries"][0]["finish"] += 7
    kinds = {kind for kind, _, _ in qosheft.verify(hs, [dag], platform)}
    assert "version" in kinds


def test_generated_instance_schedules_clean():
    platform = qosheft.generate_platform(3, "3/10", seed=5)
    dag = qosheft.generate_dag(12, seed=5, n_vms=3, period_quantum=10)
    dag = qosheft.apply_ccr(dag, "1/2", platform)
    hs = qosheft.schedule([dag], platform)
    assert qosheft.verify(hs, [dag], platform) == []
    assert qosheft.generate_dag(12, seed=5, n_vms=3, period_quantum=10) == qosheft.generate_dag(
        12, seed=5, n_vms=3, period_quantum=10
    )


def test_optimum_bounds_heuristic():
    dag = load("diamond.json")
    platform = load("platform_2vm_idle.json")
    dag["period"] = 8
    best = qosheft.brute_force_optimal(dag, platform, 0, 8)
    assert best["feasible"]
    hs = qosheft.schedule([dag], platform)
    got = qosheft.normalized_reward(hs, [dag])
    assert got["nullified_instances"] == 0
    # One instance per 8-tick hyperperiod, so the per-instance optimum bounds the total.
    assert Fraction(best["reward"]) >= Fraction(got["r_act"])


def test_errors_are_value_errors():
    assert issubclass(qosheft.QosheftError, ValueError)
    with pytest.raises(ValueError):
        qosheft.schedule(["{not json"], load("platform_2vm_idle.json"))
