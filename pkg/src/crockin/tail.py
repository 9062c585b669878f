"""Cable-driven tail: cord length changes, drive-servo angle and joint layout.

The driven section is ``n_joints`` equal links, each turning by theta/N when
the antagonistic cord pair is pulled. ``segment`` (H) is the rigid link body
and ``gap`` (h) the hinge gap between links; the joint pitch is H + h.
``anchor_offset`` (d) is the lateral distance of each cord from the neutral
axis. Those symbol readings are our interpretation of the cord geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class TailGeometry:
    n_joints: int = 6
    anchor_offset: float = 20.0
    gap: float = 4.0
    segment: float = 40.0
    pulley_radius: float = 10.0
    cord_length: float = 300.0
    underdrive_len: float = 120.0
    max_bend: float = math.pi / 2

    def __post_init__(self):
        if self.n_joints < 1:
            raise DomainError("tail needs at least one driven joint")
        if min(self.anchor_offset, self.gap, self.segment, self.pulley_radius) <= 0:
            raise DomainError("tail lengths d, h, H, r must be positive")
        if self.cord_length <= self.n_joints * self.pitch:
            raise DomainError("cord length must exceed N (H + h)")
        if self.underdrive_len < 0 or self.max_bend <= 0:
            raise DomainError("invalid tip length or bend limit")

    @property
    def pitch(self) -> float:
        return self.segment + self.gap

    @property
    def driven_length(self) -> float:
        return self.n_joints * self.pitch

    def scaled(self, factor: float) -> "TailGeometry":
        return TailGeometry(
            self.n_joints, self.anchor_offset * factor, self.gap * factor, self.segment * factor,
            self.pulley_radius * factor, self.cord_length * factor, self.underdrive_len * factor,
            self.max_bend,
        )


def _check(geom: TailGeometry, theta: float) -> None:
    if not math.isfinite(theta) or abs(theta) > geom.max_bend + 1e-12:
        raise DomainError(f"tail bend {theta!r} outside +-{geom.max_bend:.6g} rad")


def cable_deltas_exact(geom: TailGeometry, theta: float) -> tuple[float, float]:
    """(shortened, lengthened) cord deltas in mm, including the hinge-gap term."""
    _check(geom, theta)
    n = geom.n_joints
    lateral = geom.anchor_offset * math.sin(theta / (2 * n))
    gap_term = 2.0 * geom.gap * math.sin(theta / (4 * n)) ** 2
    return -(lateral + gap_term), lateral - gap_term


def cable_deltas_approx(geom: TailGeometry, theta: float) -> tuple[float, float]:
    """Small per-joint angle form: the second-order gap term is dropped."""
    _check(geom, theta)
    lateral = geom.anchor_offset * math.sin(theta / (2 * geom.n_joints))
    return -lateral, lateral


def servo_angle(geom: TailGeometry, theta: float) -> float:
    """Drive pulley rotation in degrees for a total bend ``theta`` (rad)."""
    _check(geom, theta)
    n = geom.n_joints
    return 180.0 / (math.pi * geom.pulley_radius) * n * geom.anchor_offset * math.sin(theta / (2 * n))


def tail_joint_positions(geom: TailGeometry, theta: float) -> np.ndarray:
    """(N, 2) joint centres in the tail plane, x along the unbent tail.

    Joint 1 sits half a pitch out on the x axis; each following link is
    rotated by a further theta/N, so the joints are vertices of a regular
    polygon inscribed in one circle (constant curvature).
    """
    _check(geom, theta)
    n, s = geom.n_joints, geom.pitch
    step = theta / n
    pts = np.zeros((n, 2))
    pts[0] = (s / 2.0, 0.0)
    for i in range(1, n):
        heading = i * step
        pts[i] = pts[i - 1] + s * np.array([math.cos(heading), math.sin(heading)])
    return pts


def tail_outline(geom: TailGeometry, theta: float) -> np.ndarray:
    """Base, joints, driven-section end and rigid tip end, as (N + 3, 2).

    The last half link carries the full bend; the underactuated tip continues
    tangentially from the driven end.
    """
    joints = tail_joint_positions(geom, theta)
    end_dir = np.array([math.cos(theta), math.sin(theta)])
    driven_end = joints[-1] + 0.5 * geom.pitch * end_dir
    tip_end = driven_end + geom.underdrive_len * end_dir
    return np.vstack([[0.0, 0.0], joints, driven_end, tip_end])
