"""Periodic DAG scheduling with quality versions on pre-occupied VMs.

DAGs, platforms and schedules are plain dicts in the layout described in
SCHEMA.md. Rationals appear as ints or "p/q" strings.
"""

import json

from . import _core
from ._core import QosheftError, hyperperiod

__all__ = [
    "QosheftError",
    "apply_ccr",
    "brute_force_optimal",
    "generate_dag",
    "generate_platform",
    "hyperperiod",
    "normalized_reward",
    "schedule",
    "verify",
]


def _dump(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def schedule(dags, platform, repetition_factor=1, enhance=True):
    text = _core.schedule([_dump(d) for d in dags], _dump(platform), repetition_factor, enhance)
    return json.loads(text)


def verify(schedule, dags, platform):
    return _core.verify(_dump(schedule), [_dump(d) for d in dags], _dump(platform))


def normalized_reward(schedule, dags):
    return _core.normalized_reward(_dump(schedule), [_dump(d) for d in dags])


def generate_dag(n_tasks, seed, edge_density=0.3, n_levels=2, n_vms=4, period_slack="3/2", period_quantum=1):
    text = _core.generate_dag(n_tasks, seed, edge_density, n_levels, n_vms, str(period_slack), period_quantum)
    return json.loads(text)


def generate_platform(n_vms, occupancy, seed, background_period=20, min_slot=2):
    text = _core.generate_platform(n_vms, str(occupancy), seed, background_period, min_slot)
    return json.loads(text)


def apply_ccr(dag, ccr, platform):
    return json.loads(_core.apply_ccr(_dump(dag), str(ccr), _dump(platform)))


def brute_force_optimal(dag, platform, start, end):
    return _core.brute_force_optimal(_dump(dag), _dump(platform), start, end)
