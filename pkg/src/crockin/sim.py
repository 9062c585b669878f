"""Quasi-static whole-robot simulation.

No inertia: each step poses the body so the anchored stance feet keep their
ground positions (weighted 2-D rigid fit), then evaluates the centre of
gravity against the support hull. When the ground projection of the centre
of gravity leaves the hull the body tips toward it and the step loses a
fraction of its forward advance, proportional to the (negative) margin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple

import numpy as np

from .errors import ConfigError, DomainError, KinematicsError, NoSupportError
from .gait import CoordinationFrame, GaitParams, StandParams, coordination_frame, stand_sequence
from .leg import LegAngles, leg_fk, leg_ik
from .model import (
    LEG_IDS, Posture, RobotModel, body_pose, from_leg_frame, head_top_height, is_front,
    leg_base_in_body, posed_segments, tail_points_in_body, to_leg_frame,
)
from .spine import SpineAngles

GROUND_TOL = 1e-6


@dataclass(frozen=True)
class SimParams:
    dt: float = 0.02
    tilt_coeff: float = 0.02
    max_tilt: float = 0.2
    drag_weight: float = 1.0

    def __post_init__(self):
        if not self.dt > 0:
            raise DomainError("dt must be positive")
        if self.tilt_coeff < 0 or self.max_tilt < 0 or self.drag_weight < 0:
            raise DomainError("tilt and drag parameters must be non-negative")


# --- support geometry --------------------------------------------------------

def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable) -> list[tuple[float, float]]:
    """Counter-clockwise hull without collinear vertices (monotone chain)."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 1e-12:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 1e-12:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        # all collinear: keep the extreme points only
        return [pts[0], pts[-1]]
    return hull


def polygon_area(poly) -> float:
    if len(poly) < 3:
        return 0.0
    s = 0.0
    for (x1, y1), (x2, y2) in zip(poly, poly[1:] + poly[:1]):
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def _point_segment_distance(p, a, b) -> float:
    p, a, b = (np.asarray(v, dtype=float) for v in (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    u = 0.0 if denom == 0.0 else min(max(float((p - a) @ ab) / denom, 0.0), 1.0)
    return float(np.linalg.norm(p - (a + u * ab)))


def _nearest_on_segment(p, a, b) -> np.ndarray:
    p, a, b = (np.asarray(v, dtype=float) for v in (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    u = 0.0 if denom == 0.0 else min(max(float((p - a) @ ab) / denom, 0.0), 1.0)
    return a + u * ab


def support_polygon(contact_points: Iterable) -> list[tuple[float, float]]:
    pts = [p for p in contact_points]
    if not pts:
        raise NoSupportError("no ground contacts")
    return convex_hull(pts)


def _edges(poly):
    if len(poly) == 1:
        return [(poly[0], poly[0])]
    if len(poly) == 2:
        return [(poly[0], poly[1])]
    return list(zip(poly, poly[1:] + poly[:1]))


def stability_margin(cog, polygon) -> float:
    """Signed distance of the ground projection to the hull boundary (inside > 0)."""
    p = (float(cog[0]), float(cog[1]))
    d = min(_point_segment_distance(p, a, b) for a, b in _edges(polygon))
    if len(polygon) < 3:
        return -d
    inside = all(_cross(a, b, p) >= 0.0 for a, b in _edges(polygon))
    return d if inside else -d


def _nearest_boundary_point(cog, polygon) -> np.ndarray:
    p = np.asarray(cog[:2], dtype=float)
    best = min(_edges(polygon), key=lambda e: _point_segment_distance(p, *e))
    return _nearest_on_segment(p, *best)


class StabilityReport(NamedTuple):
    cog: np.ndarray
    polygon: list
    margin: float


# --- state -------------------------------------------------------------------

@dataclass
class WorldState:
    time: float
    x: float
    y: float
    heading: float
    height: float
    posture: Posture
    contacts: dict
    tail_contact: bool
    feet: dict
    tail_point: np.ndarray
    anchors: dict = field(default_factory=dict)
    slipping: dict = field(default_factory=dict)
    tilt: float = 0.0
    stability: StabilityReport | None = None
    cog_height: float = 0.0

    def world_T_body(self) -> np.ndarray:
        return body_pose(self.x, self.y, self.height, self.heading)

    def contact_points(self) -> list:
        pts = [self.feet[leg][:2] for leg in LEG_IDS if self.contacts.get(leg)]
        if self.tail_contact:
            pts.append(self.tail_point[:2])
        return pts


def center_of_gravity(model: RobotModel, state: WorldState) -> np.ndarray:
    segs = posed_segments(model, state.world_T_body(), state.posture)
    total = sum(m for _, m, _ in segs)
    return sum(m * c for _, m, c in segs) / total


# --- faults --------------------------------------------------------------------

FAULT_JOINTS = {"rotational": 0, "pitching": 1}


@dataclass(frozen=True)
class FaultSpec:
    leg: str
    joint: str

    def __post_init__(self):
        if self.leg not in LEG_IDS:
            raise ConfigError(f"unknown leg {self.leg!r}; expected one of {LEG_IDS}")
        if self.joint not in FAULT_JOINTS:
            raise ConfigError(f"unknown joint role {self.joint!r}; expected one of {tuple(FAULT_JOINTS)}")

    @property
    def index(self) -> int:
        return FAULT_JOINTS[self.joint]


def apply_fault(frame: CoordinationFrame, faults: Iterable[FaultSpec], model: RobotModel) -> CoordinationFrame:
    """Replace each faulted joint command with its neutral-stance value."""
    faults = list(faults)
    if not faults:
        return frame
    neutral = model.neutral_leg_angles()
    angles = dict(frame.leg_angles)
    for f in faults:
        if not isinstance(f, FaultSpec):
            raise ConfigError(f"not a fault spec: {f!r}")
        q = list(angles[f.leg])
        q[f.index] = neutral[f.index]
        angles[f.leg] = LegAngles(*q)
    return replace(frame, leg_angles=angles)


# --- stepping ----------------------------------------------------------------

def _rigid_fit(body_pts, world_pts, weights, heading0: float):
    """Weighted least-squares planar pose (x, y, heading) mapping body -> world."""
    P = np.asarray(body_pts, dtype=float)
    Q = np.asarray(world_pts, dtype=float)
    w = np.asarray(weights, dtype=float)
    wsum = float(w.sum())
    pc = (w[:, None] * P).sum(axis=0) / wsum
    qc = (w[:, None] * Q).sum(axis=0) / wsum
    Pd, Qd = P - pc, Q - qc
    cross = float((w * (Pd[:, 0] * Qd[:, 1] - Pd[:, 1] * Qd[:, 0])).sum())
    dot = float((w * (Pd * Qd).sum(axis=1)).sum())
    if abs(cross) + abs(dot) < 1e-9:
        heading = heading0
    else:
        heading = math.atan2(cross, dot)
        # stay on the branch nearest the previous heading
        heading = heading0 + math.remainder(heading - heading0, 2 * math.pi)
    c, s = math.cos(heading), math.sin(heading)
    t = qc - np.array([c * pc[0] - s * pc[1], s * pc[0] + c * pc[1]])
    return float(t[0]), float(t[1]), heading


def _body_feet(model: RobotModel, frame: CoordinationFrame) -> tuple[dict, dict]:
    bases = {leg: leg_base_in_body(model, leg, frame.spine_angles) for leg in LEG_IDS}
    feet = {leg: from_leg_frame(bases[leg], leg_fk(model.leg, frame.leg_angles[leg])) for leg in LEG_IDS}
    return bases, feet


def _to_world(W: np.ndarray, p) -> np.ndarray:
    return W[:3, :3] @ np.asarray(p, dtype=float) + W[:3, 3]


def _evaluate(model: RobotModel, state: WorldState, sim: SimParams) -> None:
    """Fill in stability report, tilt and tilted centre-of-gravity height."""
    cog = center_of_gravity(model, state)
    poly = support_polygon(state.contact_points())
    margin = stability_margin(cog, poly)
    state.stability = StabilityReport(cog, poly, margin)
    height = float(cog[2])
    state.tilt = 0.0
    if margin < 0.0 and sim.tilt_coeff > 0.0:
        state.tilt = sim.max_tilt * min(1.0, sim.tilt_coeff * -margin)
        # rotate the cog about the nearest support edge, toward the outside
        height = height * math.cos(state.tilt) - (-margin) * math.sin(state.tilt)
    state.cog_height = height


def _ground_contact(stance: bool, z_world: float, faulted: bool) -> tuple[bool, bool]:
    """(touching, load-bearing) for one foot.

    A healthy leg follows its phase. A faulted leg cannot place its foot on
    command, so it touches and bears load exactly when its foot is at or below
    the ground.
    """
    if faulted:
        down = z_world <= GROUND_TOL
        return down, down
    return stance or z_world <= GROUND_TOL, stance


def initial_state(model: RobotModel, frame: CoordinationFrame, sim: SimParams = SimParams(),
                  faulted: Iterable[str] = ()) -> WorldState:
    faulted = set(faulted)
    height = model.body.stance_depth
    W = body_pose(0.0, 0.0, height, 0.0)
    bases, pb = _body_feet(model, frame)
    feet, contacts, anchors = {}, {}, {}
    for leg in LEG_IDS:
        p = _to_world(W, pb[leg])
        touching, contact = _ground_contact(frame.phases[leg].stance, p[2], leg in faulted)
        if touching:
            p[2] = 0.0
            if frame.phases[leg].stance and leg not in faulted:
                anchors[leg] = p.copy()
        feet[leg] = p
        contacts[leg] = bool(contact)
    tail_point, tail_contact = _tail_contact(model, W, frame)
    posture = Posture(frame.spine_angles, dict(frame.leg_angles), frame.tail_bend, frame.tail_pitch)
    state = WorldState(frame.time, 0.0, 0.0, 0.0, height, posture, contacts, tail_contact,
                       feet, tail_point, anchors, {leg: False for leg in LEG_IDS})
    _evaluate(model, state, sim)
    return state


def _tail_contact(model: RobotModel, W: np.ndarray, frame: CoordinationFrame):
    end = _to_world(W, tail_points_in_body(model, frame.tail_bend, frame.tail_pitch)[-2])
    contact = end[2] <= GROUND_TOL
    if contact:
        end[2] = 0.0
    return end, bool(contact)


def step_quasi_static(model: RobotModel, state: WorldState, frame: CoordinationFrame,
                      sim: SimParams = SimParams(), faulted: Iterable[str] = ()) -> WorldState:
    """Advance one step to ``frame``.

    Healthy stance feet are anchors (fit weight 1) and never move in the world
    unless the step is tilt-penalised or their leg cannot reach the anchor, in
    which case the foot slips. Feet that touch the ground without being able
    to hold an anchor (faulted legs, or a swing foot pressed into the ground)
    drag: they enter the fit with ``sim.drag_weight`` at their previous world
    position, resisting the motion.
    """
    faulted = set(faulted)
    bases, pb = _body_feet(model, frame)
    W0 = state.world_T_body()

    contact, anchored, dragging, touchdown = {}, [], [], []
    for leg in LEG_IDS:
        stance = frame.phases[leg].stance
        z_w = state.height + pb[leg][2]
        touching, contact[leg] = _ground_contact(stance, z_w, leg in faulted)
        if not touching:
            continue
        if leg in faulted or not stance:
            dragging.append(leg)
        elif leg in state.anchors:
            anchored.append(leg)
        else:
            touchdown.append(leg)

    body_pts, world_pts, weights = [], [], []
    for leg in anchored:
        body_pts.append(pb[leg][:2])
        world_pts.append(state.anchors[leg][:2])
        weights.append(1.0)
    if sim.drag_weight > 0.0:
        for leg in dragging:
            body_pts.append(pb[leg][:2])
            world_pts.append(state.feet[leg][:2])
            weights.append(sim.drag_weight)
    if weights:
        x, y, heading = _rigid_fit(body_pts, world_pts, weights, state.heading)
    else:
        x, y, heading = state.x, state.y, state.heading

    def make_state(x, y, heading, anchors_keep):
        W = body_pose(x, y, state.height, heading)
        feet, anchors, slipping = {}, {}, {}
        legs_q = dict(frame.leg_angles)
        for leg in LEG_IDS:
            # a penalised step drags every anchored foot along with the body
            slipping[leg] = leg in anchored and not anchors_keep
            if leg in anchored and anchors_keep:
                A = state.anchors[leg]
                target = to_leg_frame(W @ bases[leg], A)
                try:
                    q = leg_ik(model.leg, target).closest(frame.leg_angles[leg])
                except KinematicsError:
                    q = None
                if q is not None:
                    feet[leg] = A.copy()
                    anchors[leg] = A.copy()
                    legs_q[leg] = LegAngles(q[0], q[1], q[2], frame.leg_angles[leg][3])
                    continue
                slipping[leg] = True
            p = _to_world(W, pb[leg])
            if p[2] <= GROUND_TOL or contact[leg]:
                p[2] = 0.0
                if leg in anchored or leg in touchdown:
                    anchors[leg] = p.copy()
            feet[leg] = p
        tail_point, tail_contact = _tail_contact(model, W, frame)
        posture = Posture(frame.spine_angles, legs_q, frame.tail_bend, frame.tail_pitch)
        return WorldState(frame.time, x, y, heading, state.height, posture, dict(contact),
                          tail_contact, feet, tail_point, anchors, slipping)

    new = make_state(x, y, heading, True)
    _evaluate(model, new, sim)
    margin = new.stability.margin
    if margin < 0.0 and sim.tilt_coeff > 0.0:
        f = max(0.0, 1.0 - sim.tilt_coeff * -margin)
        if f < 1.0:
            nx = state.x + f * (x - state.x)
            ny = state.y + f * (y - state.y)
            nh = state.heading + f * (heading - state.heading)
            new = make_state(nx, ny, nh, False)
            _evaluate(model, new, sim)
    return new


# --- runs ----------------------------------------------------------------------

@dataclass
class RunResult:
    name: str
    t: np.ndarray
    displacement_mm: np.ndarray
    cog_height_mm: np.ndarray
    margin_mm: np.ndarray
    fallen: bool = False
    fell_at: float | None = None

    @property
    def total_displacement_m(self) -> float:
        return float(self.displacement_mm[-1] - self.displacement_mm[0]) / 1000.0

    @property
    def cog_height_amplitude_mm(self) -> float:
        return float(self.cog_height_mm.max() - self.cog_height_mm.min()) / 2.0

    @property
    def min_margin_mm(self) -> float:
        return float(self.margin_mm.min())

    def summary(self) -> dict:
        return {
            "total_displacement_m": self.total_displacement_m,
            "cog_height_amplitude_mm": self.cog_height_amplitude_mm,
            "min_margin_mm": self.min_margin_mm,
            "fallen": self.fallen,
            "fell_at": self.fell_at,
        }


def run_scenario(model: RobotModel, gait: GaitParams, faults: Iterable[FaultSpec] = (),
                 duration: float = 8.0, sim: SimParams = SimParams(), name: str = "run") -> RunResult:
    if not duration > 0:
        raise DomainError("duration must be positive")
    faults = list(faults)
    faulted = {f.leg for f in faults}
    n = int(round(duration / sim.dt))

    def frame_at(t):
        return apply_fault(coordination_frame(gait, model, t), faults, model)

    state = initial_state(model, frame_at(0.0), sim, faulted)
    ts, disp, cogh, margin = [0.0], [state.x], [state.cog_height], [state.stability.margin]
    fallen, fell_at = False, None
    for i in range(1, n + 1):
        t = i * sim.dt
        try:
            state = step_quasi_static(model, state, frame_at(t), sim, faulted)
        except NoSupportError:
            fallen, fell_at = True, t
            break
        ts.append(t)
        disp.append(state.x)
        cogh.append(state.cog_height)
        margin.append(state.stability.margin)
    return RunResult(name, np.array(ts), np.array(disp), np.array(cogh), np.array(margin), fallen, fell_at)


def reach_height(model: RobotModel, posture: str = "crawl", stand: StandParams = StandParams()) -> float:
    """Head-top height (mm) in the neutral crawl posture or the final stand keyframe."""
    if posture == "crawl":
        W = body_pose(z=model.body.stance_depth)
        return head_top_height(model, W, SpineAngles())
    if posture == "stand":
        final = stand_sequence(model, 1.0, stand)[-1]
        return head_top_height(model, final.world_T_body(), final.frame.spine_angles)
    raise DomainError(f"unknown posture {posture!r}")
