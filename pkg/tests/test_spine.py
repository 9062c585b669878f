from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crockin.errors import LimitError, PreconditionError
from crockin.expansions import printed_spine_position, validation_report
from crockin.spine import SpineCommand, SpineGeometry, command_to_angles, spine_fk, spine_ik

GEOM = SpineGeometry()
q_in_limits = st.tuples(*[st.floats(lo, hi, allow_nan=False) for lo, hi in GEOM.limits])


def test_straight_length():
    assert np.allclose(spine_fk(GEOM, [0.0] * 5)[:3, 3], (292.5, 0.0, 0.0))
    assert GEOM.total_length == pytest.approx(292.5)


@given(q_in_limits, st.floats(-0.5, 0.5))
def test_last_joint_only_orients(q, extra):
    q2 = list(q)
    q2[4] = extra
    a = spine_fk(GEOM, q)[:3, 3]
    b = spine_fk(GEOM, q2)[:3, 3]
    assert np.allclose(a, b, atol=1e-9)


def test_bend_directions():
    yaw = spine_fk(GEOM, [0.3, 0, 0, 0, 0])[:3, 3]
    assert yaw[1] > 0 and abs(yaw[2]) < 1e-9  # chain y points to the robot's right
    pitch = spine_fk(GEOM, [0, 0.3, 0, 0, 0])[:3, 3]
    assert abs(pitch[1]) < 1e-9 and pitch[2] < 0  # chain z points down: head lifts


@given(q_in_limits)
@settings(max_examples=40, deadline=None)
def test_ik_reaches_fk_targets(q):
    target = spine_fk(GEOM, q)[:3, 3]
    res = spine_ik(GEOM, target)
    assert res.converged, res
    assert np.linalg.norm(spine_fk(GEOM, res.angles)[:3, 3] - target) < 1e-3
    lo = np.array([l for l, _ in GEOM.limits])
    hi = np.array([h for _, h in GEOM.limits])
    assert np.all(np.asarray(res.angles) >= lo) and np.all(np.asarray(res.angles) <= hi)


def test_ik_straight_target_is_immediate():
    res = spine_ik(GEOM, (292.5, 0.0, 0.0))
    assert res.converged and res.iterations == 0


def test_ik_reports_nonconvergence_without_raising():
    # inside the sphere but far outside the joint-limited workspace
    res = spine_ik(GEOM, (0.0, 200.0, 0.0))
    assert not res.converged
    assert res.error > 1.0


def test_ik_preconditions():
    with pytest.raises(PreconditionError):
        spine_ik(GEOM, (400.0, 0.0, 0.0))
    with pytest.raises(PreconditionError):
        spine_ik(GEOM, (math.inf, 0.0, 0.0))
    with pytest.raises(PreconditionError):
        spine_ik(GEOM, (100.0, 0.0, 0.0), seed=[0.0] * 4)


def test_command_split_and_limits():
    q = command_to_angles(GEOM, SpineCommand(0.3, 0.2))
    assert q.yaw_1 == q.yaw_2 == q.yaw_3 == pytest.approx(0.1)
    assert q.pitch_1 == q.pitch_2 == pytest.approx(0.1)
    with pytest.raises(LimitError) as err:
        command_to_angles(GEOM, SpineCommand(0.0, 1.0))
    assert err.value.joint == "pitch_1"


def test_printed_expansion_deviation_is_reported():
    rep = validation_report(samples=300, seed=1)
    leg = {d["term"]: d["max_abs"] for d in rep["leg"]}
    spine = {d["term"]: d["max_abs"] for d in rep["spine"]}
    assert max(leg.values()) < 1e-9
    # the printed torso expansion is not the chain product in x and y
    assert spine["P_x"] > 1.0 and spine["P_y"] > 1.0
    assert spine["P_z"] < 1e-9
    # even straight, the printed form keeps three 60.5 mm links plus a stray 0.5 mm term
    assert np.allclose(printed_spine_position([0.0] * 5), (50.5 + 3 * 60.5 + 0.5, 0.0, 0.0))
