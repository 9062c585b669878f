"""Whole-body coordination: limb phase, foot paths, spine/tail signals.

Also holds the bipedal-stand keyframe generator and the swimming midline
wave, which share the same geometry and timing conventions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InfeasibleError, KinematicsError
from .leg import FootPosition, LegAngles, leg_ik, workspace_contains
from .model import (
    HIND, LEG_IDS, RobotModel, body_pose, is_left, leg_base_in_body, tail_ground_pitch,
    tail_points_in_body, to_leg_frame,
)
from .spine import SpineAngles, SpineCommand, command_to_angles
from .tail import servo_angle

DIAGONAL_OFFSETS = {"LQ": 0.0, "RH": 0.0, "RQ": 0.5, "LH": 0.5}


@dataclass(frozen=True)
class GaitParams:
    period: float = 4.0
    duty: float = 0.6
    offsets: dict = field(default_factory=lambda: dict(DIAGONAL_OFFSETS))
    step_length: float = 60.0
    step_height: float = 25.0
    spine_yaw_amp: float = 0.26
    spine_pitch_amp: float = 0.0
    tail_yaw_amp: float = 0.35
    spine_phase: float = math.pi / 2
    tail_drag: bool = True

    def __post_init__(self):
        if not self.period > 0:
            raise DomainError("gait period must be positive")
        if not 0.0 < self.duty < 1.0:
            raise DomainError("duty factor must lie in (0, 1)")
        if set(self.offsets) != set(LEG_IDS):
            raise DomainError(f"offsets needed for exactly {LEG_IDS}")
        for leg, off in self.offsets.items():
            if not 0.0 <= off < 1.0:
                raise DomainError(f"phase offset for {leg} must be in [0, 1)")
        if self.step_length < 0 or self.step_height < 0:
            raise DomainError("step length and height must be non-negative")

    def trunk_off(self) -> "GaitParams":
        """Limbs only: spine and tail held straight, tail lifted."""
        return replace(self, spine_yaw_amp=0.0, spine_pitch_amp=0.0, tail_yaw_amp=0.0, tail_drag=False)


class LegPhase(NamedTuple):
    stance: bool
    phase: float


def cycle_fraction(params: GaitParams, t: float, offset: float = 0.0) -> float:
    # fmod first keeps t and t + T on the same fraction to rounding
    return (math.fmod(t, params.period) / params.period - offset) % 1.0


def limb_phase(params: GaitParams, t: float) -> dict[str, LegPhase]:
    """Stance iff the leg's cycle fraction is below the duty factor."""
    if t < 0:
        raise DomainError("time must be non-negative")
    out = {}
    for leg in LEG_IDS:
        f = cycle_fraction(params, t, params.offsets[leg])
        if f < params.duty:
            out[leg] = LegPhase(True, f / params.duty)
        else:
            out[leg] = LegPhase(False, (f - params.duty) / (1.0 - params.duty))
    return out


class FootTarget(NamedTuple):
    position: FootPosition
    clipped: bool


def clip_to_workspace(model: RobotModel, p) -> FootTarget:
    """Pull a target radially (about the hip-pitch origin) into the reach shell."""
    geom = model.leg
    if workspace_contains(geom, p):
        return FootTarget(FootPosition(*map(float, p)), False)
    origin = np.array([geom.hip_offset, 0.0, 0.0])
    v = np.asarray(p, dtype=float) - origin
    dist = float(np.linalg.norm(v))
    if dist == 0.0:
        v, dist = np.array([1.0, 0.0, 0.0]), 1.0
    r = min(max(dist, geom.reach_min), geom.reach_max)
    return FootTarget(FootPosition(*map(float, origin + v * (r / dist))), True)


def foot_trajectory(params: GaitParams, model: RobotModel, phase: LegPhase) -> FootTarget:
    """Leg-frame foot target: straight stance sweep, semi-elliptic swing.

    Stance runs from +L/2 to -L/2 (forward axis) at the neutral depth; swing
    returns along the upper half of an ellipse with apex ``step_height``.
    """
    x0, y0, z0 = model.neutral_foot()
    L = params.step_length
    s = min(max(phase.phase, 0.0), 1.0)
    if phase.stance:
        p = (x0, y0 + L / 2 - L * s, z0)
    else:
        # leg frame z points down, so lifting reduces z
        p = (x0, y0 - L / 2 + L * s, z0 - params.step_height * math.sin(math.pi * s))
    return clip_to_workspace(model, p)


class Signals(NamedTuple):
    spine_yaw: float
    spine_pitch: float
    tail_yaw: float
    tail_pitch: float


def spine_tail_signals(params: GaitParams, t: float) -> Signals:
    """Spine and tail lateral bends in antiphase; pitch channels idle while crawling."""
    if t < 0:
        raise DomainError("time must be non-negative")
    w = 2.0 * math.pi * cycle_fraction(params, t) + params.spine_phase
    return Signals(
        params.spine_yaw_amp * math.sin(w),
        0.0,
        params.tail_yaw_amp * math.sin(w + math.pi),
        0.0,
    )


@dataclass(frozen=True)
class CoordinationFrame:
    time: float
    phases: dict
    foot_targets: dict
    leg_angles: dict
    clipped: dict
    spine_command: SpineCommand
    spine_angles: SpineAngles
    tail_bend: float
    tail_servo_deg: float
    tail_pitch: float

    @property
    def stance(self) -> dict:
        return {leg: ph.stance for leg, ph in self.phases.items()}


def solve_leg(model: RobotModel, target, reference=None) -> LegAngles:
    ik = leg_ik(model.leg, target)
    return ik.closest(reference if reference is not None else model.neutral_leg_angles())


def coordination_frame(params: GaitParams, model: RobotModel, t: float) -> CoordinationFrame:
    phases = limb_phase(params, t)
    targets, angles, clipped = {}, {}, {}
    for leg in LEG_IDS:
        ft = foot_trajectory(params, model, phases[leg])
        targets[leg] = ft.position
        clipped[leg] = ft.clipped
        angles[leg] = solve_leg(model, ft.position)
    sig = spine_tail_signals(params, t)
    cmd = SpineCommand(sig.spine_yaw, sig.spine_pitch)
    bend = sig.tail_yaw
    if params.tail_drag:
        pitch = tail_ground_pitch(model, model.body.stance_depth, bend)
    else:
        pitch = sig.tail_pitch
    return CoordinationFrame(
        time=t,
        phases=phases,
        foot_targets=targets,
        leg_angles=angles,
        clipped=clipped,
        spine_command=cmd,
        spine_angles=command_to_angles(model.spine, cmd),
        tail_bend=bend,
        tail_servo_deg=servo_angle(model.tail, bend),
        tail_pitch=pitch,
    )


# --- swimming ---------------------------------------------------------------

@dataclass(frozen=True)
class SwimWaveParams:
    """Travelling body wave with a quadratic amplitude envelope.

    The envelope and wave-number coefficients were fitted with x in metres,
    so positions in mm are divided by ``length_scale`` before evaluation and
    the result is scaled back. ``length_scale=1`` evaluates the raw formula.
    """

    c1: float = 0.027
    c2: float = 0.30
    k: float = 0.023
    omega: float = 2.0 * math.pi
    body_length: float = 856.5
    length_scale: float = 1000.0

    def __post_init__(self):
        if not self.body_length > 0 or not self.omega > 0 or not self.length_scale > 0:
            raise DomainError("body_length, omega and length_scale must be positive")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


def swim_envelope(params: SwimWaveParams, x: float) -> float:
    u = x / params.length_scale
    return params.length_scale * (params.c1 * u + params.c2 * u * u)


def swim_midline(params: SwimWaveParams, x: float, t: float) -> float:
    """Lateral midline displacement (mm) at body station ``x`` mm from the head."""
    if not 0.0 <= x <= params.body_length:
        raise DomainError(f"x = {x!r} outside the body [0, {params.body_length}]")
    u = x / params.length_scale
    # reduce omega*t modulo 2*pi through the period so t and t + 2*pi/omega agree
    phase = params.omega * math.fmod(t, params.period)
    return params.length_scale * (params.c1 * u + params.c2 * u * u) * math.sin(params.k * u + phase)


# --- bipedal stand -----------------------------------------------------------

@dataclass(frozen=True)
class StandParams:
    """Final tripod posture (mm, rad)."""

    body_pitch: float = 1.0
    hip_height: float = 150.0
    foot_forward: float = 60.0
    foot_reach: float = 40.0
    keyframes: int = 11

    def scaled(self, factor: float) -> "StandParams":
        return StandParams(self.body_pitch, self.hip_height * factor, self.foot_forward * factor,
                           self.foot_reach * factor, self.keyframes)


@dataclass(frozen=True)
class StandKeyframe:
    time: float
    progress: float
    frame: CoordinationFrame
    body_pitch: float
    body_height: float
    contacts: dict

    def world_T_body(self) -> np.ndarray:
        return body_pose(z=self.body_height, pitch=self.body_pitch)


def smoothstep(s: float) -> float:
    s = min(max(s, 0.0), 1.0)
    return s * s * (3.0 - 2.0 * s)


def _stand_keyframe(model: RobotModel, stand: StandParams, s: float, t: float) -> StandKeyframe:
    b = model.body
    beta = s * stand.body_pitch
    height = b.stance_depth + s * (stand.hip_height - b.stance_depth)
    spine_pitch = s * sum(model.spine.limits[i][1] for i in (1, 3))
    cmd = SpineCommand(0.0, spine_pitch)
    spine_q = command_to_angles(model.spine, cmd)
    W = body_pose(z=height, pitch=beta)

    reach = b.stance_reach + s * (stand.foot_reach - b.stance_reach)
    forward = b.stance_forward + s * (stand.foot_forward - b.stance_forward)
    targets, angles, clipped, phases, contacts = {}, {}, {}, {}, {}
    neutral = model.neutral_foot()
    for leg in LEG_IDS:
        base = W @ leg_base_in_body(model, leg, spine_q)
        if leg in HIND:
            side = 1.0 if is_left(leg) else -1.0
            hip = base[:3, 3]
            lateral = model.leg.hip_offset + reach
            foot_world = np.array([hip[0] + forward, side * (b.hip_half_width + lateral), 0.0])
            target = to_leg_frame(base, foot_world)
            contacts[leg] = foot_world
        else:
            target = neutral
            if s == 0.0:
                contacts[leg] = base[:3, :3] @ np.asarray(neutral) + base[:3, 3]
        try:
            angles[leg] = solve_leg(model, target)
        except KinematicsError as exc:
            raise InfeasibleError(f"stand keyframe s={s:.3f}: leg {leg}: {exc}") from exc
        targets[leg] = target
        clipped[leg] = False
        phases[leg] = LegPhase(leg in contacts, 0.0)

    try:
        pitch = tail_ground_pitch(model, height, 0.0, beta)
    except InfeasibleError as exc:
        raise InfeasibleError(f"stand keyframe s={s:.3f}: {exc}") from exc
    lo, hi = b.tail_pitch_limits
    if not lo <= pitch <= hi:
        raise InfeasibleError(f"stand keyframe s={s:.3f}: tail pitch {pitch:.4g} outside [{lo}, {hi}]")
    tail_end = W[:3, :3] @ tail_points_in_body(model, 0.0, pitch)[-2] + W[:3, 3]
    contacts["tail"] = tail_end

    frame = CoordinationFrame(
        time=t, phases=phases, foot_targets=targets, leg_angles=angles, clipped=clipped,
        spine_command=cmd, spine_angles=spine_q, tail_bend=0.0,
        tail_servo_deg=servo_angle(model.tail, 0.0), tail_pitch=pitch,
    )
    return StandKeyframe(t, s, frame, beta, height, contacts)


def stand_sequence(model: RobotModel, duration: float, stand: StandParams = StandParams()) -> list[StandKeyframe]:
    """Keyframes from the crawl posture to the hind-feet-plus-tail tripod.

    Progress follows a smoothstep in time; the front feet leave the ground
    after the first keyframe while the body pitches up and the hind legs
    extend. Raises InfeasibleError if any keyframe violates a limit.
    """
    if not duration > 0:
        raise DomainError("stand duration must be positive")
    n = max(stand.keyframes, 2)
    frames = []
    for i in range(n):
        t = duration * i / (n - 1)
        frames.append(_stand_keyframe(model, stand, smoothstep(i / (n - 1)), t))
    final = frames[-1].contacts
    a, b_, c = (np.asarray(final[k])[:2] for k in ("LH", "RH", "tail"))
    area = 0.5 * abs((b_[0] - a[0]) * (c[1] - a[1]) - (b_[1] - a[1]) * (c[0] - a[0]))
    if area <= 0.0:
        raise InfeasibleError("final stand contacts are collinear")
    return frames
