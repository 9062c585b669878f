"""Modified (proximal) Denavit-Hartenberg transforms for serial chains.

Each row carries the previous link's length and twist, so the link matrix is

    [ cθ      -sθ      0     a   ]
    [ sθ·cα   cθ·cα   -sα   -d·sα ]
    [ sθ·sα   cθ·sα    cα    d·cα ]
    [ 0       0        0     1   ]

Lengths are millimetres and angles radians throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ArityError, InvalidParameterError

ORTHONORMAL_TOL = 1e-9


@dataclass(frozen=True)
class JointRow:
    theta: float = 0.0
    d: float = 0.0
    a_prev: float = 0.0
    alpha_prev: float = 0.0

    def __post_init__(self):
        for name in ("theta", "d", "a_prev", "alpha_prev"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParameterError(f"JointRow.{name} is not finite")

    def at(self, theta: float) -> "JointRow":
        return JointRow(theta, self.d, self.a_prev, self.alpha_prev)


@dataclass(frozen=True)
class KinematicChain:
    rows: tuple[JointRow, ...]
    joint_limits: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        rows = tuple(self.rows)
        if not rows:
            raise InvalidParameterError("a chain needs at least one row")
        limits = tuple(tuple(map(float, lim)) for lim in self.joint_limits)
        if not limits:
            limits = tuple((-math.pi, math.pi) for _ in rows)
        if len(limits) != len(rows):
            raise ArityError(f"{len(limits)} joint limits for {len(rows)} rows")
        for lo, hi in limits:
            if not lo <= hi:
                raise InvalidParameterError(f"joint limit [{lo}, {hi}] has min > max")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "joint_limits", limits)

    def __len__(self) -> int:
        return len(self.rows)

    def out_of_limits(self, q: Sequence[float], tol: float = 1e-12) -> tuple[int, ...]:
        """Indices of joints outside their limits. Not an error: locked joints may sit on a bound."""
        _check_arity(self, q)
        return tuple(
            i for i, (qi, (lo, hi)) in enumerate(zip(q, self.joint_limits))
            if qi < lo - tol or qi > hi + tol
        )

    def scaled(self, factor: float) -> "KinematicChain":
        rows = tuple(JointRow(r.theta, r.d * factor, r.a_prev * factor, r.alpha_prev) for r in self.rows)
        return KinematicChain(rows, self.joint_limits)


def link_transform(row: JointRow) -> np.ndarray:
    ct, st = math.cos(row.theta), math.sin(row.theta)
    ca, sa = math.cos(row.alpha_prev), math.sin(row.alpha_prev)
    d, a = row.d, row.a_prev
    return np.array([
        [ct, -st, 0.0, a],
        [st * ca, ct * ca, -sa, -d * sa],
        [st * sa, ct * sa, ca, d * ca],
        [0.0, 0.0, 0.0, 1.0],
    ])


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b


def _check_arity(chain: KinematicChain, q: Sequence[float]) -> None:
    if len(q) != len(chain.rows):
        raise ArityError(f"expected {len(chain.rows)} joint values, got {len(q)}")


def chain_frames(chain: KinematicChain, q: Sequence[float]) -> list[np.ndarray]:
    """Cumulative transforms base->frame i for i = 1..n."""
    _check_arity(chain, q)
    frames = []
    T = np.eye(4)
    for row, qi in zip(chain.rows, q):
        T = compose(T, link_transform(row.at(float(qi))))
        frames.append(T)
    return frames


def chain_fk(chain: KinematicChain, q: Sequence[float]) -> np.ndarray:
    return chain_frames(chain, q)[-1]


def jacobian_numeric(chain: KinematicChain, q: Sequence[float], h: float = 1e-6) -> np.ndarray:
    """3 x n position Jacobian by central differences."""
    q = np.asarray(q, dtype=float)
    _check_arity(chain, q)
    J = np.zeros((3, len(q)))
    for i in range(len(q)):
        qp, qm = q.copy(), q.copy()
        qp[i] += h
        qm[i] -= h
        J[:, i] = (chain_fk(chain, qp)[:3, 3] - chain_fk(chain, qm)[:3, 3]) / (2.0 * h)
    return J


def is_transform(T: np.ndarray, tol: float = ORTHONORMAL_TOL) -> bool:
    T = np.asarray(T)
    if T.shape != (4, 4) or not np.all(np.isfinite(T)):
        return False
    if not np.array_equal(T[3], [0.0, 0.0, 0.0, 1.0]):
        return False
    R = T[:3, :3]
    return bool(
        np.max(np.abs(R.T @ R - np.eye(3))) < tol and abs(np.linalg.det(R) - 1.0) < tol
    )


def rot_z(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    T = np.eye(4)
    T[:2, :2] = [[c, -s], [s, c]]
    return T


def rot_y(angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    T = np.eye(4)
    T[0, 0], T[0, 2], T[2, 0], T[2, 2] = c, s, -s, c
    return T


def translation(x: float, y: float, z: float) -> np.ndarray:
    T = np.eye(4)
    T[:3, 3] = (x, y, z)
    return T
