from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crockin.dh import (
    JointRow, KinematicChain, chain_fk, chain_frames, is_transform, jacobian_numeric, link_transform,
)
from crockin.errors import ArityError, InvalidParameterError

angles = st.floats(-math.pi, math.pi, allow_nan=False)
lengths = st.floats(-300.0, 300.0, allow_nan=False)


def _rx(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[1, 0, 0, 0], [0, c, -s, 0], [0, s, c, 0], [0, 0, 0, 1.0]])


def _rz(a):
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, -s, 0, 0], [s, c, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1.0]])


def _tx(v):
    T = np.eye(4)
    T[0, 3] = v
    return T


def _tz(v):
    T = np.eye(4)
    T[2, 3] = v
    return T


def reference_link(theta, d, a, alpha):
    # modified convention: twist and offset of the previous link come first
    return _rx(alpha) @ _tx(a) @ _rz(theta) @ _tz(d)


@given(angles, lengths, lengths, angles)
def test_link_matches_elementary_product(theta, d, a, alpha):
    T = link_transform(JointRow(theta, d, a, alpha))
    assert np.allclose(T, reference_link(theta, d, a, alpha), atol=1e-9)


@given(st.lists(st.tuples(lengths, lengths, angles), min_size=1, max_size=6), st.data())
@settings(max_examples=60)
def test_chain_product_is_rigid_transform(rows, data):
    chain = KinematicChain(tuple(JointRow(0.0, d, a, al) for d, a, al in rows))
    q = [data.draw(angles) for _ in rows]
    T = chain_fk(chain, q)
    assert is_transform(T)
    frames = chain_frames(chain, q)
    assert len(frames) == len(rows)
    assert np.array_equal(frames[-1], T)


def test_zero_angles_straight_chain():
    chain = KinematicChain((JointRow(0, 0, 10.0, 0), JointRow(0, 0, 20.0, 0), JointRow(0, 0, 30.0, 0)))
    assert np.allclose(chain_fk(chain, [0, 0, 0])[:3, 3], [60.0, 0, 0])


def test_arity_mismatch_raises():
    chain = KinematicChain((JointRow(0, 0, 10.0, 0),))
    with pytest.raises(ArityError):
        chain_fk(chain, [0.0, 0.0])
    with pytest.raises(ArityError):
        KinematicChain((JointRow(),), ((0, 1), (0, 1)))


def test_invalid_parameters_rejected():
    with pytest.raises(InvalidParameterError):
        JointRow(math.nan, 0, 0, 0)
    with pytest.raises(InvalidParameterError):
        KinematicChain(())
    with pytest.raises(InvalidParameterError):
        KinematicChain((JointRow(),), ((1.0, -1.0),))


def test_out_of_limits_reports_indices():
    chain = KinematicChain((JointRow(), JointRow()), ((-1, 1), (-1, 1)))
    assert chain.out_of_limits([0.5, 2.0]) == (1,)
    assert chain.out_of_limits([0.0, 0.0]) == ()


def test_planar_jacobian_matches_closed_form():
    l1, l2 = 100.0, 60.0
    chain = KinematicChain((JointRow(0, 0, 0.0, 0), JointRow(0, 0, l1, 0), JointRow(0, 0, l2, 0)))
    q = [0.3, -0.7, 0.0]
    J = jacobian_numeric(chain, q)
    s1, c1 = math.sin(q[0]), math.cos(q[0])
    s12, c12 = math.sin(q[0] + q[1]), math.cos(q[0] + q[1])
    expected = np.array([[-l1 * s1 - l2 * s12, -l2 * s12, 0.0], [l1 * c1 + l2 * c12, l2 * c12, 0.0], [0, 0, 0]])
    assert np.allclose(J, expected, atol=1e-5)


def test_is_transform_rejects_bad_matrices():
    assert not is_transform(np.diag([1.0, 1.0, -1.0, 1.0]))
    T = np.eye(4)
    T[3, 0] = 1.0
    assert not is_transform(T)
    assert not is_transform(np.eye(3))


def test_compose_identity_and_rotation_addition():
    from crockin.dh import compose, rot_z
    T = link_transform(JointRow(0.4, 12.0, 30.0, -0.9))
    assert np.array_equal(compose(T, np.eye(4)), T)
    assert np.array_equal(compose(np.eye(4), T), T)
    assert np.allclose(compose(rot_z(0.3), rot_z(1.1)), rot_z(1.4), atol=1e-12)


@given(angles, lengths, lengths, angles)
def test_link_is_two_pi_periodic(theta, d, a, alpha):
    A = link_transform(JointRow(theta, d, a, alpha))
    B = link_transform(JointRow(theta + 2 * math.pi, d, a, alpha))
    assert np.allclose(A, B, atol=1e-9)


@given(st.lists(st.tuples(lengths, angles, angles), min_size=2, max_size=6), st.data())
@settings(max_examples=50)
def test_split_chain_composes(rows, data):
    full = KinematicChain(tuple(JointRow(0.0, 0.0, a, al) for a, al, _ in rows))
    q = [th for _, _, th in rows]
    k = data.draw(st.integers(1, len(rows) - 1))
    head = KinematicChain(full.rows[:k])
    tail = KinematicChain(full.rows[k:])
    assert np.allclose(chain_fk(head, q[:k]) @ chain_fk(tail, q[k:]), chain_fk(full, q), atol=1e-9)


def test_base_yaw_column_of_straight_chain():
    # the base joint sits at the origin, so its lever arm is the whole chain
    chain = KinematicChain((JointRow(0, 0, 0.0, 0), JointRow(0, 0, 120.0, 0), JointRow(0, 0, 80.0, 0)))
    J = jacobian_numeric(chain, [0.0, 0.0, 0.0])
    assert np.allclose(J[:, 0], (0.0, 200.0, 0.0), atol=1e-5)
    single = KinematicChain((JointRow(0, 0, 0.0, 0),))
    assert np.allclose(jacobian_numeric(single, [0.3]), 0.0)
