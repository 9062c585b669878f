from __future__ import annotations

import functools

import pytest

from crockin.config import DEFAULT_FAULTS
from crockin.gait import GaitParams
from crockin.model import RobotModel
from crockin.sim import SimParams, run_scenario

MODEL = RobotModel()
GAIT = GaitParams()
DURATION = 8.0


@functools.lru_cache(maxsize=None)
def default_run(kind: str, fault=None):
    """Cached default-config runs shared by several test modules."""
    gait = {
        "on": GAIT,
        "off": GAIT.trunk_off(),
        "no_tail_drag": GaitParams(tail_drag=False),
    }[kind]
    faults = [fault] if fault is not None else []
    return run_scenario(MODEL, gait, faults, DURATION, SimParams(), name=kind)


@pytest.fixture(scope="session")
def model():
    return MODEL


@pytest.fixture(scope="session")
def fault_cases():
    return DEFAULT_FAULTS
