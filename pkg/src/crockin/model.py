"""Whole-robot layout and segment posing.

Body frame: origin at the pelvis (spine chain base), x forward, y left, z up.
The spine chain's own base frame is x forward, y right, z down, so it is
related to the body frame by a half turn about x.

Each leg base frame has x pointing laterally outward, y forward and z down.
Right legs use the mirror image of the left-leg frame (a reflection across
the sagittal plane), so all four legs share one joint convention: positive
hip yaw swings the foot forward, positive hip pitch pushes it down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .dh import chain_frames, rot_y, rot_z, translation
from .errors import InfeasibleError
from .leg import FootPosition, LegAngles, LegGeometry, leg_ik
from .spine import SpineAngles, SpineGeometry, spine_frames
from .tail import TailGeometry, tail_outline

LEG_IDS = ("LQ", "RQ", "LH", "RH")
FRONT = ("LQ", "RQ")
HIND = ("LH", "RH")

FLIP = np.diag([1.0, -1.0, -1.0, 1.0])

_M_LEFT = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])
_M_RIGHT = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
])


def is_left(leg_id: str) -> bool:
    return leg_id[0] == "L"


def is_front(leg_id: str) -> bool:
    return leg_id[1] == "Q"


@dataclass(frozen=True)
class BodyLayout:
    """Mount points and neutral posture (mm, rad)."""

    hip_half_width: float = 50.0
    tail_mount: float = 60.0
    head_length: float = 120.0
    head_top: float = 35.0
    stance_reach: float = 110.0
    stance_depth: float = 110.0
    stance_forward: float = 10.0
    tail_pitch_limits: tuple[float, float] = (-math.pi / 2, math.pi / 2)

    def scaled(self, factor: float) -> "BodyLayout":
        return replace(
            self,
            hip_half_width=self.hip_half_width * factor,
            tail_mount=self.tail_mount * factor,
            head_length=self.head_length * factor,
            head_top=self.head_top * factor,
            stance_reach=self.stance_reach * factor,
            stance_depth=self.stance_depth * factor,
            stance_forward=self.stance_forward * factor,
        )


@dataclass(frozen=True)
class Masses:
    """Segment masses in kg."""

    head: float = 0.4
    torso: tuple[float, ...] = (0.3, 0.3, 0.3, 0.3, 0.3)
    leg: float = 0.15
    tail_driven: float = 0.35
    tail_tip: float = 0.1

    def __post_init__(self):
        object.__setattr__(self, "torso", tuple(map(float, self.torso)))
        if len(self.torso) != 5:
            raise ValueError("five torso masses expected")
        if min(self.head, self.leg, self.tail_driven, self.tail_tip, *self.torso) <= 0:
            raise ValueError("all segment masses must be positive")

    @property
    def total(self) -> float:
        return self.head + sum(self.torso) + 4 * self.leg + self.tail_driven + self.tail_tip

    def scaled(self, factor: float) -> "Masses":
        return Masses(self.head * factor, tuple(m * factor for m in self.torso),
                      self.leg * factor, self.tail_driven * factor, self.tail_tip * factor)


@dataclass(frozen=True)
class RobotModel:
    leg: LegGeometry = field(default_factory=LegGeometry)
    spine: SpineGeometry = field(default_factory=SpineGeometry)
    tail: TailGeometry = field(default_factory=TailGeometry)
    body: BodyLayout = field(default_factory=BodyLayout)
    masses: Masses = field(default_factory=Masses)

    def scaled(self, factor: float) -> "RobotModel":
        """Every length multiplied by ``factor``; angles and masses kept."""
        return RobotModel(self.leg.scaled(factor), self.spine.scaled(factor),
                          self.tail.scaled(factor), self.body.scaled(factor), self.masses)

    def neutral_foot(self) -> FootPosition:
        b = self.body
        return FootPosition(self.leg.hip_offset + b.stance_reach, b.stance_forward, b.stance_depth)

    def neutral_leg_angles(self) -> LegAngles:
        return leg_ik(self.leg, self.neutral_foot())[0]

    @property
    def body_length(self) -> float:
        return (self.body.head_length + self.spine.total_length + self.body.tail_mount
                + self.tail.driven_length + self.tail.underdrive_len)


def body_pose(x: float = 0.0, y: float = 0.0, z: float = 0.0, heading: float = 0.0,
              pitch: float = 0.0) -> np.ndarray:
    """World <- body. ``pitch`` is nose-up positive."""
    return translation(x, y, z) @ rot_z(heading) @ rot_y(-pitch)


def spine_in_body(model: RobotModel, spine_q) -> list[np.ndarray]:
    """Body-frame transforms of spine frames 1..5 (chain axes)."""
    return [FLIP @ T for T in spine_frames(model.spine, spine_q)]


def girdle_in_body(model: RobotModel, leg_id: str, spine_q) -> np.ndarray:
    """Body-frame transform of the girdle carrying ``leg_id`` (body-style axes)."""
    if not is_front(leg_id):
        return np.eye(4)
    return spine_in_body(model, spine_q)[-1] @ FLIP


def leg_base_in_body(model: RobotModel, leg_id: str, spine_q) -> np.ndarray:
    """Body <- leg base. Right legs include a reflection."""
    side = 1.0 if is_left(leg_id) else -1.0
    mount = translation(0.0, side * model.body.hip_half_width, 0.0)
    return girdle_in_body(model, leg_id, spine_q) @ mount @ (_M_LEFT if side > 0 else _M_RIGHT)


def to_leg_frame(base: np.ndarray, point) -> FootPosition:
    """Map a point given in the same frame as ``base`` into the leg base frame."""
    R, t = base[:3, :3], base[:3, 3]
    p = R.T @ (np.asarray(point, dtype=float) - t)
    return FootPosition(*map(float, p))


def from_leg_frame(base: np.ndarray, p) -> np.ndarray:
    return base[:3, :3] @ np.asarray(p, dtype=float) + base[:3, 3]


def tail_axes(pitch: float) -> tuple[np.ndarray, np.ndarray]:
    """Body-frame unit vectors of the tail plane: along-tail and bend side.

    Positive pitch tips the tail down; positive bend is toward the robot's right.
    """
    along = np.array([-math.cos(pitch), 0.0, -math.sin(pitch)])
    side = np.array([0.0, -1.0, 0.0])
    return along, side


def tail_points_in_body(model: RobotModel, bend: float, pitch: float) -> np.ndarray:
    """Tail outline (base, joints, driven end, tip end) in the body frame."""
    along, side = tail_axes(pitch)
    base = np.array([-model.body.tail_mount, 0.0, 0.0])
    outline = tail_outline(model.tail, bend)
    return base + outline[:, :1] * along + outline[:, 1:2] * side


def tail_ground_pitch(model: RobotModel, body_height: float, bend: float,
                      body_pitch: float = 0.0) -> float:
    """Tail pitch that puts the driven-section end on the ground (z = 0)."""
    outline = tail_outline(model.tail, bend)
    reach = float(outline[-2, 0])
    base_h = body_height - model.body.tail_mount * math.sin(body_pitch)
    ratio = base_h / reach
    if not -1.0 <= ratio <= 1.0:
        raise InfeasibleError(f"tail reach {reach:.6g} mm cannot touch ground from {base_h:.6g} mm")
    return math.asin(ratio) - body_pitch


def _segment_centroid(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Length-weighted centroid of a polyline; returns (centroid, length)."""
    seg = np.diff(points, axis=0)
    lengths = np.linalg.norm(seg, axis=1)
    total = float(lengths.sum())
    mids = 0.5 * (points[1:] + points[:-1])
    if total == 0.0:
        return points[0].copy(), 0.0
    return (mids * lengths[:, None]).sum(axis=0) / total, total


@dataclass(frozen=True)
class Posture:
    """Joint-space configuration of the whole robot."""

    spine: SpineAngles = SpineAngles()
    legs: dict = field(default_factory=dict)
    tail_bend: float = 0.0
    tail_pitch: float = 0.0


def posed_segments(model: RobotModel, world_T_body: np.ndarray, posture: Posture) -> list[tuple[str, float, np.ndarray]]:
    """(name, mass, world centroid) for each massive segment."""
    m = model.masses
    out = []
    W = world_T_body

    def to_world(p):
        return W[:3, :3] @ p + W[:3, 3]

    spine_T = spine_in_body(model, posture.spine)
    origins = [np.zeros(3)] + [T[:3, 3] for T in spine_T]
    for i in range(5):
        out.append((f"torso_{i + 1}", m.torso[i], to_world(0.5 * (origins[i] + origins[i + 1]))))

    head_frame = spine_T[-1] @ FLIP
    head_mid = from_leg_frame(head_frame, (0.5 * model.body.head_length, 0.0, 0.0))
    out.append(("head", m.head, to_world(head_mid)))

    chain = model.leg.chain()
    for leg_id in LEG_IDS:
        q = posture.legs.get(leg_id, model.neutral_leg_angles())
        base = leg_base_in_body(model, leg_id, posture.spine)
        frames = chain_frames(chain, q)
        pts = np.array([[0.0, 0.0, 0.0], frames[0][:3, 3], frames[2][:3, 3], frames[3][:3, 3]])
        c, _ = _segment_centroid(pts)
        out.append((f"leg_{leg_id}", m.leg, to_world(from_leg_frame(base, c))))

    tail = tail_points_in_body(model, posture.tail_bend, posture.tail_pitch)
    driven, _ = _segment_centroid(tail[:-1])
    out.append(("tail_driven", m.tail_driven, to_world(driven)))
    tip = to_world(0.5 * (tail[-2] + tail[-1]))
    # the flexible tip lies on the ground rather than passing through it
    tip[2] = max(tip[2], 0.0)
    out.append(("tail_tip", m.tail_tip, tip))
    return out


def head_top_height(model: RobotModel, world_T_body: np.ndarray, spine_q) -> float:
    """Highest point of the head box (axis ends raised by ``head_top``)."""
    head_frame = world_T_body @ spine_in_body(model, spine_q)[-1] @ FLIP
    b = model.body
    pts = [(0.0, 0.0, b.head_top), (b.head_length, 0.0, b.head_top), (b.head_length, 0.0, 0.0)]
    return max(float(from_leg_frame(head_frame, p)[2]) for p in pts)
