"""Torso chain: FK, damped-least-squares position IK, and bend commands.

Joints 1, 3, 5 bend laterally (yaw) and joints 2, 4 bend sagittally (pitch);
the alternating +-90 deg twists between rows make the axes interleave. In the
chain base frame x points to the head, y to the robot's right and z down, so a
positive yaw angle bends the head end to the right and a positive pitch angle
lifts it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .dh import JointRow, KinematicChain, chain_fk, chain_frames, jacobian_numeric
from .errors import DomainError, LimitError, PreconditionError

YAW_JOINTS = (0, 2, 4)
PITCH_JOINTS = (1, 3)
JOINT_NAMES = ("yaw_1", "pitch_1", "yaw_2", "pitch_2", "yaw_3")

_YAW_LIM = (-math.pi / 6, math.pi / 6)
_PITCH_LIM = (-math.pi / 8, math.pi / 8)


class SpineAngles(NamedTuple):
    yaw_1: float = 0.0
    pitch_1: float = 0.0
    yaw_2: float = 0.0
    pitch_2: float = 0.0
    yaw_3: float = 0.0


class SpineCommand(NamedTuple):
    yaw_total: float = 0.0
    pitch_total: float = 0.0


@dataclass(frozen=True)
class SpineGeometry:
    lengths: tuple[float, ...] = (50.5, 60.5, 60.5, 60.5, 60.5)
    twists: tuple[float, ...] = (0.0, -math.pi / 2, math.pi / 2, -math.pi / 2, math.pi / 2)
    limits: tuple[tuple[float, float], ...] = field(
        default=(_YAW_LIM, _PITCH_LIM, _YAW_LIM, _PITCH_LIM, _YAW_LIM)
    )

    def __post_init__(self):
        if len(self.lengths) != 5 or len(self.twists) != 5 or len(self.limits) != 5:
            raise DomainError("the torso chain has exactly 5 joints")
        if min(self.lengths) <= 0:
            raise DomainError("spine link lengths must be positive")
        object.__setattr__(self, "lengths", tuple(map(float, self.lengths)))
        object.__setattr__(self, "twists", tuple(map(float, self.twists)))
        object.__setattr__(self, "limits", tuple(tuple(map(float, l)) for l in self.limits))

    @property
    def total_length(self) -> float:
        return sum(self.lengths)

    def chain(self) -> KinematicChain:
        rows = tuple(JointRow(0.0, 0.0, a, al) for a, al in zip(self.lengths, self.twists))
        return KinematicChain(rows, self.limits)

    def scaled(self, factor: float) -> "SpineGeometry":
        return SpineGeometry(tuple(l * factor for l in self.lengths), self.twists, self.limits)


def spine_fk(geom: SpineGeometry, q) -> np.ndarray:
    return chain_fk(geom.chain(), q)


def spine_frames(geom: SpineGeometry, q) -> list[np.ndarray]:
    return chain_frames(geom.chain(), q)


def command_to_angles(geom: SpineGeometry, cmd: SpineCommand) -> SpineAngles:
    yaw = cmd.yaw_total / len(YAW_JOINTS)
    pitch = cmd.pitch_total / len(PITCH_JOINTS)
    q = [0.0] * 5
    for i in YAW_JOINTS:
        q[i] = yaw
    for i in PITCH_JOINTS:
        q[i] = pitch
    for i, v in enumerate(q):
        lo, hi = geom.limits[i]
        if not lo - 1e-12 <= v <= hi + 1e-12:
            raise LimitError(JOINT_NAMES[i], v, lo, hi)
    return SpineAngles(*q)


@dataclass(frozen=True)
class SpineIKResult:
    angles: SpineAngles
    converged: bool
    error: float
    iterations: int


def spine_ik(
    geom: SpineGeometry,
    target,
    seed=None,
    tol: float = 1e-3,
    max_iter: int = 200,
    damping: float = 1.0,
) -> SpineIKResult:
    """Position-only damped least squares with an adaptive damping factor (mm).

    The damping is halved after an accepted step and doubled after a rejected
    one, kept within [1e-3, 1e6] so J J^T + lam^2 I stays invertible at the
    straight (rank-deficient) posture. Non-convergence is reported through
    ``converged``, never raised.
    """
    target = np.asarray(target, dtype=float)
    if target.shape != (3,) or not np.all(np.isfinite(target)):
        raise PreconditionError("target must be a finite 3-vector")
    if np.linalg.norm(target) > geom.total_length + 1e-9:
        raise PreconditionError(
            f"target {np.linalg.norm(target):.6g} mm from base exceeds chain length {geom.total_length:.6g} mm"
        )
    chain = geom.chain()
    lo = np.array([l for l, _ in geom.limits])
    hi = np.array([h for _, h in geom.limits])
    q = np.zeros(5) if seed is None else np.asarray(seed, dtype=float).copy()
    if q.shape != (5,) or not np.all(np.isfinite(q)):
        raise PreconditionError("seed must be 5 finite angles")
    q = np.clip(q, lo, hi)

    lam = damping
    err = target - chain_fk(chain, q)[:3, 3]
    enorm = float(np.linalg.norm(err))
    it = 0
    while enorm >= tol and it < max_iter:
        it += 1
        J = jacobian_numeric(chain, q)
        dq = J.T @ np.linalg.solve(J @ J.T + lam * lam * np.eye(3), err)
        # joints pinned at a limit and pushed outward are frozen, the rest re-solved
        pinned = ((q <= lo) & (dq < 0)) | ((q >= hi) & (dq > 0))
        if pinned.any():
            J = J.copy()
            J[:, pinned] = 0.0
            dq = J.T @ np.linalg.solve(J @ J.T + lam * lam * np.eye(3), err)
        q_new = np.clip(q + dq, lo, hi)
        err_new = target - chain_fk(chain, q_new)[:3, 3]
        n_new = float(np.linalg.norm(err_new))
        if n_new < enorm:
            q, err, enorm = q_new, err_new, n_new
            lam = max(lam * 0.5, 1e-3)
        else:
            lam = min(lam * 2.0, 1e6)
    return SpineIKResult(SpineAngles(*map(float, q)), enorm < tol, enorm, it)
