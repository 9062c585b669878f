"""Leg kinematics: closed-form FK and the geometric (triangle) IK.

Joint order is hip yaw, hip pitch, knee, ankle. The hip offset is applied
before the yaw rotation, so the yaw axis sits ``hip_offset`` mm out along x
from the leg base. Only the first three joints move the foot point; the ankle
is posture trim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

from .dh import JointRow, KinematicChain
from .errors import DomainError, LimitError, ReachabilityError

ACOS_SLACK = 1e-9
REACH_SLACK = 1e-9
SINGULAR_TOL = 1e-12

JOINT_NAMES = ("hip_yaw", "hip_pitch", "knee", "ankle")


class FootPosition(NamedTuple):
    x: float
    y: float
    z: float


class LegAngles(NamedTuple):
    hip_yaw: float
    hip_pitch: float
    knee: float
    ankle: float = 0.0


@dataclass(frozen=True)
class LegGeometry:
    hip_offset: float = 70.0
    femur: float = 86.0
    tibia: float = 89.0
    limits: tuple[tuple[float, float], ...] = field(default=(
        (-math.pi / 2, math.pi / 2),
        (-math.pi / 2, math.pi / 2),
        (-5 * math.pi / 6, 5 * math.pi / 6),
        (-math.pi, math.pi),
    ))

    def __post_init__(self):
        if min(self.hip_offset, self.femur, self.tibia) <= 0:
            raise DomainError("leg link lengths must be positive")
        object.__setattr__(self, "limits", tuple(tuple(map(float, l)) for l in self.limits))

    @property
    def reach_min(self) -> float:
        return abs(self.femur - self.tibia)

    @property
    def reach_max(self) -> float:
        return self.femur + self.tibia

    def chain(self) -> KinematicChain:
        # the tabulated a column is the previous-link length of each row
        rows = (
            JointRow(0.0, 0.0, self.hip_offset, 0.0),
            JointRow(0.0, 0.0, 0.0, math.pi / 2),
            JointRow(0.0, 0.0, self.femur, 0.0),
            JointRow(0.0, 0.0, self.tibia, 0.0),
        )
        return KinematicChain(rows, self.limits)

    def scaled(self, factor: float) -> "LegGeometry":
        return LegGeometry(self.hip_offset * factor, self.femur * factor, self.tibia * factor, self.limits)

    def within_limits(self, q, tol: float = 1e-12) -> bool:
        return all(lo - tol <= v <= hi + tol for v, (lo, hi) in zip(q, self.limits))


def leg_transform(geom: LegGeometry, q) -> np.ndarray:
    """Closed-form base->foot transform; agrees with the chain product."""
    t1, t2, t3, t4 = (float(v) for v in q)
    c1, s1 = math.cos(t1), math.sin(t1)
    c234, s234 = math.cos(t2 + t3 + t4), math.sin(t2 + t3 + t4)
    rho = geom.femur * math.cos(t2) + geom.tibia * math.cos(t2 + t3)
    T = np.eye(4)
    T[:3, 0] = (c1 * c234, s1 * c234, s234)
    T[:3, 1] = (-c1 * s234, -s1 * s234, c234)
    T[:3, 2] = (s1, -c1, 0.0)
    T[:3, 3] = (
        geom.hip_offset + c1 * rho,
        s1 * rho,
        geom.femur * math.sin(t2) + geom.tibia * math.sin(t2 + t3),
    )
    return T


def leg_fk(geom: LegGeometry, q) -> FootPosition:
    t1, t2, t3 = float(q[0]), float(q[1]), float(q[2])
    rho = geom.femur * math.cos(t2) + geom.tibia * math.cos(t2 + t3)
    return FootPosition(
        geom.hip_offset + math.cos(t1) * rho,
        math.sin(t1) * rho,
        geom.femur * math.sin(t2) + geom.tibia * math.sin(t2 + t3),
    )


def reach_distance(geom: LegGeometry, p) -> float:
    """|AC|: distance from the hip-pitch axis origin to the foot."""
    return math.sqrt((p[0] - geom.hip_offset) ** 2 + p[1] ** 2 + p[2] ** 2)


def workspace_contains(geom: LegGeometry, p) -> bool:
    ac = reach_distance(geom, p)
    return geom.reach_min - REACH_SLACK <= ac <= geom.reach_max + REACH_SLACK


def _acos(x: float) -> float:
    if x > 1.0 + ACOS_SLACK or x < -1.0 - ACOS_SLACK:
        raise DomainError(f"arccos argument {x!r} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, x)))


@dataclass(frozen=True)
class LegIK:
    solutions: tuple[LegAngles, ...]
    singular: bool = False

    def __iter__(self):
        return iter(self.solutions)

    def __len__(self):
        return len(self.solutions)

    def __getitem__(self, i):
        return self.solutions[i]

    def closest(self, reference) -> LegAngles:
        ref = np.asarray(reference[:3], dtype=float)
        return min(self.solutions, key=lambda s: float(np.sum((np.asarray(s[:3]) - ref) ** 2)))


Ankle = Union[float, str]


def leg_ik(geom: LegGeometry, p, ankle: Ankle = "flat", enforce_limits: bool = True) -> LegIK:
    """Geometric IK. The knee-positive branch comes first, then its mirror.

    ``ankle`` is either a fixed angle or ``"flat"`` (ankle = -(hip_pitch + knee)).
    """
    px, py, pz = (float(v) for v in p)
    if not all(map(math.isfinite, (px, py, pz))):
        raise DomainError("foot target must be finite")
    a2, a3 = geom.femur, geom.tibia
    ac = reach_distance(geom, (px, py, pz))
    if not workspace_contains(geom, (px, py, pz)):
        raise ReachabilityError(ac, geom.reach_min, geom.reach_max)

    dx = px - geom.hip_offset
    singular = abs(dx) < SINGULAR_TOL and abs(py) < SINGULAR_TOL
    hip_yaw = 0.0 if singular else math.atan2(py, dx)
    rho = math.hypot(dx, py)

    knee = _acos((ac * ac - a2 * a2 - a3 * a3) / (2.0 * a2 * a3))
    if ac > 0.0:
        cab = _acos((a2 * a2 - a3 * a3 + ac * ac) / (2.0 * a2 * ac))
    else:
        cab = 0.0
    elevation = math.atan2(pz, rho)

    candidates = [(elevation - cab, knee)]
    if knee > 0.0:
        candidates.append((elevation + cab, -knee))

    sols = []
    for hip_pitch, kn in candidates:
        if ankle == "flat":
            an = -(hip_pitch + kn)
        elif isinstance(ankle, str):
            raise DomainError(f"unknown ankle policy {ankle!r}")
        else:
            an = float(ankle)
        sols.append(LegAngles(hip_yaw, hip_pitch, kn, an))

    if enforce_limits:
        kept = [s for s in sols if geom.within_limits(s)]
        if not kept:
            s = sols[0]
            bad = next(i for i, (v, (lo, hi)) in enumerate(zip(s, geom.limits)) if not lo <= v <= hi)
            lo, hi = geom.limits[bad]
            raise LimitError(JOINT_NAMES[bad], s[bad], lo, hi)
        sols = kept
    return LegIK(tuple(sols), singular)


def mirror_target(p) -> FootPosition:
    """Map a right-side target into the canonical (left) leg frame, or back."""
    return FootPosition(float(p[0]), -float(p[1]), float(p[2]))


def mirror_angles(q) -> LegAngles:
    return LegAngles(-q[0], q[1], q[2], q[3] if len(q) > 3 else 0.0)
