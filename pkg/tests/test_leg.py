from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crockin.dh import chain_fk, jacobian_numeric
from crockin.errors import DomainError, LimitError, ReachabilityError
from crockin.expansions import printed_leg_terms
from crockin.leg import (
    LegGeometry, leg_fk, leg_ik, leg_transform, mirror_angles, mirror_target, reach_distance,
    workspace_contains,
)

GEOM = LegGeometry()


def in_limit_q():
    lims = GEOM.limits
    return st.tuples(*[st.floats(lo, hi, allow_nan=False) for lo, hi in lims])


@given(in_limit_q())
def test_closed_form_matches_chain_product(q):
    assert np.allclose(leg_transform(GEOM, q), chain_fk(GEOM.chain(), q), atol=1e-9)
    assert np.allclose(leg_fk(GEOM, q), chain_fk(GEOM.chain(), q)[:3, 3], atol=1e-9)


def test_known_configurations():
    assert np.allclose(leg_fk(GEOM, (0, 0, 0, 0)), (245.0, 0.0, 0.0))
    # hip yaw of 90 deg swings the femur+tibia about the yaw axis at x = 70
    assert np.allclose(leg_fk(GEOM, (math.pi / 2, 0, 0, 0)), (70.0, 175.0, 0.0), atol=1e-9)
    assert np.allclose(leg_fk(GEOM, (0, math.pi / 2, 0, 0)), (70.0, 0.0, 175.0), atol=1e-9)


def test_ankle_does_not_move_foot():
    a = leg_fk(GEOM, (0.2, 0.3, 0.4, 0.0))
    b = leg_fk(GEOM, (0.2, 0.3, 0.4, 1.0))
    assert np.allclose(a, b)


def test_printed_expansion_agrees():
    rng = np.random.default_rng(3)
    for _ in range(200):
        q = [rng.uniform(lo, hi) for lo, hi in GEOM.limits]
        T = chain_fk(GEOM.chain(), q)
        terms = printed_leg_terms(GEOM, q)
        assert terms["p_x"] == pytest.approx(T[0, 3], abs=1e-9)
        assert terms["n_z"] == pytest.approx(T[2, 0], abs=1e-12)
        assert terms["o_x"] == pytest.approx(T[0, 1], abs=1e-12)


def analytic_jacobian(q):
    t1, t2, t3 = q[:3]
    a2, a3 = GEOM.femur, GEOM.tibia
    rho = a2 * math.cos(t2) + a3 * math.cos(t2 + t3)
    drho2 = -a2 * math.sin(t2) - a3 * math.sin(t2 + t3)
    drho3 = -a3 * math.sin(t2 + t3)
    c1, s1 = math.cos(t1), math.sin(t1)
    return np.array([
        [-s1 * rho, c1 * drho2, c1 * drho3, 0.0],
        [c1 * rho, s1 * drho2, s1 * drho3, 0.0],
        [0.0, a2 * math.cos(t2) + a3 * math.cos(t2 + t3), a3 * math.cos(t2 + t3), 0.0],
    ])


@given(in_limit_q())
@settings(max_examples=50)
def test_numeric_jacobian_matches_analytic(q):
    assert np.allclose(jacobian_numeric(GEOM.chain(), q), analytic_jacobian(q), atol=1e-4)


# outward half-space keeps the hip-yaw solution unique (rho > 0)
outward_q = st.tuples(
    st.floats(-1.4, 1.4), st.floats(-1.4, 1.4), st.floats(0.05, 2.5),
).filter(lambda q: 86.0 * math.cos(q[1]) + 89.0 * math.cos(q[1] + q[2]) > 1.0)


@given(outward_q)
def test_ik_round_trip_recovers_angles(q):
    p = leg_fk(GEOM, (*q, 0.0))
    sol = leg_ik(GEOM, p)
    assert np.allclose(sol[0][:3], q, atol=1e-6)
    for s in sol:
        assert np.allclose(leg_fk(GEOM, s), p, atol=1e-6)


def test_ik_lists_both_branches():
    p = leg_fk(GEOM, (0.1, 0.2, 0.8, 0.0))
    sol = leg_ik(GEOM, p)
    assert len(sol) == 2
    assert sol[0].knee > 0 > sol[1].knee
    assert np.allclose(leg_fk(GEOM, sol[1]), p, atol=1e-9)


def test_ik_straight_leg_and_singularity():
    sol = leg_ik(GEOM, (245.0, 0.0, 0.0))
    assert len(sol) == 1
    assert np.allclose(sol[0], (0, 0, 0, 0), atol=1e-6)
    up = leg_ik(GEOM, (70.0, 0.0, 120.0))
    assert up.singular and up[0].hip_yaw == 0.0


def test_ik_unreachable_and_domain():
    with pytest.raises(ReachabilityError) as err:
        leg_ik(GEOM, (500.0, 0.0, 0.0))
    assert err.value.distance == pytest.approx(430.0)
    with pytest.raises(DomainError):
        leg_ik(GEOM, (math.nan, 0.0, 0.0))


def test_ik_limit_violation_reported():
    # behind the hip: needs a hip yaw near pi
    with pytest.raises(LimitError):
        leg_ik(GEOM, (-50.0, 10.0, 30.0))
    assert len(leg_ik(GEOM, (-50.0, 10.0, 30.0), enforce_limits=False)) >= 1


def test_flat_ankle_policy():
    s = leg_ik(GEOM, (180.0, 10.0, 110.0), ankle="flat")[0]
    assert s.hip_pitch + s.knee + s.ankle == pytest.approx(0.0, abs=1e-12)


def test_workspace_and_mirror():
    assert workspace_contains(GEOM, (245.0, 0, 0))
    assert not workspace_contains(GEOM, (245.0 + 1e-3, 0, 0))
    assert reach_distance(GEOM, (70.0, 3.0, 4.0)) == pytest.approx(5.0)
    p = (180.0, 25.0, 100.0)
    q = leg_ik(GEOM, p)[0]
    assert np.allclose(leg_fk(GEOM, mirror_angles(q)), mirror_target(p), atol=1e-9)


def test_scaling_is_homogeneous():
    big = GEOM.scaled(2.0)
    q = (0.2, -0.3, 0.9, 0.0)
    assert np.allclose(leg_fk(big, q), 2.0 * np.asarray(leg_fk(GEOM, q)))
    with pytest.raises(DomainError):
        LegGeometry(femur=0.0)
