"""Exception hierarchy shared by the kinematics, gait and simulation modules."""

from __future__ import annotations


class KinematicsError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(KinematicsError, ValueError):
    pass


class ArityError(KinematicsError, ValueError):
    pass


class ReachabilityError(KinematicsError):
    """Foot target outside the leg's triangle-inequality workspace."""

    def __init__(self, distance: float, lower: float, upper: float):
        self.distance = distance
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"target unreachable: |AC| = {distance:.6g} mm not in [{lower:.6g}, {upper:.6g}] mm"
        )


class LimitError(KinematicsError, ValueError):
    def __init__(self, joint: str, value: float, lower: float, upper: float):
        self.joint = joint
        self.value = value
        super().__init__(f"{joint}: {value:.6g} rad outside [{lower:.6g}, {upper:.6g}]")


class DomainError(KinematicsError, ValueError):
    pass


class PreconditionError(KinematicsError, ValueError):
    pass


class InfeasibleError(KinematicsError):
    pass


class NoSupportError(KinematicsError):
    pass


class ConfigError(KinematicsError, ValueError):
    pass
