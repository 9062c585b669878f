"""Kinematics and quasi-static locomotion for a crocodile-like robot.

Leg and torso chains use the modified (proximal) D-H convention; the tail is a
cable-driven constant-curvature section. ``sim`` ties them together with a
limb/spine/tail coordination schedule into a support-polygon simulator.
"""

from .dh import JointRow, KinematicChain, chain_fk, chain_frames, jacobian_numeric, link_transform
from .errors import (
    ArityError, ConfigError, DomainError, InfeasibleError, InvalidParameterError, KinematicsError,
    LimitError, NoSupportError, PreconditionError, ReachabilityError,
)
from .gait import GaitParams, StandParams, SwimWaveParams, coordination_frame, stand_sequence, swim_midline
from .leg import FootPosition, LegAngles, LegGeometry, leg_fk, leg_ik, leg_transform
from .model import RobotModel
from .sim import FaultSpec, RunResult, SimParams, apply_fault, reach_height, run_scenario
from .spine import SpineAngles, SpineCommand, SpineGeometry, command_to_angles, spine_fk, spine_ik
from .tail import TailGeometry, cable_deltas_approx, cable_deltas_exact, servo_angle, tail_joint_positions

__version__ = "0.1.0"
