"""Hand-expanded closed forms of the leg and torso transforms.

They are kept verbatim, symbol for symbol, so they can be checked against
the chain product rather than trusted. ``validation_report`` samples random
in-limit configurations and records the worst deviation per output term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dh import chain_fk
from .leg import LegGeometry
from .spine import SpineGeometry


def printed_leg_terms(geom: LegGeometry, q) -> dict[str, float]:
    """n, o columns and position of the base->foot transform, hand-expanded."""
    t1, t2, t3, t4 = (float(v) for v in q)
    C1, S1 = math.cos(t1), math.sin(t1)
    C2, S2 = math.cos(t2), math.sin(t2)
    C3, S3 = math.cos(t3), math.sin(t3)
    C234, S234 = math.cos(t2 + t3 + t4), math.sin(t2 + t3 + t4)
    a0, a2, a3 = geom.hip_offset, geom.femur, geom.tibia
    return {
        "n_x": C1 * C234,
        "n_y": S1 * C234,
        "n_z": S234,
        "o_x": -C1 * S234,
        "o_y": -S1 * S234,
        "o_z": C234,
        "p_x": a0 - a3 * (C1 * S2 * S3 - C1 * C2 * C3) + a2 * C1 * C2,
        "p_y": S1 * (a3 * math.cos(t2 + t3) + a2 * C2),
        "p_z": a3 * math.sin(t2 + t3) + a2 * S2,
    }


def printed_spine_position(q) -> np.ndarray:
    """Head-end position of the torso chain, hand-expanded with numbers inlined."""
    t1, t2, t3, t4 = (float(v) for v in q[:4])
    C1, S1 = math.cos(t1), math.sin(t1)
    C2, S2 = math.cos(t2), math.sin(t2)
    C3, S3 = math.cos(t3), math.sin(t3)
    C4, S4 = math.cos(t4), math.sin(t4)
    px = 60.5 * (C1 + C1 * C2 - S1 * S3 - C1 * S2 * S3 - C1 * S2 * S4 + C1 * C2 * C3) + 0.5 * C1 * C2 * C3 + 50.5
    py = 60.5 * (S1 + S1 * C2 + C1 * S3 + C1 * C4 * S3 - S1 * S2 * S4 + C2 * C3 * S1) + 0.5 * C1 * C3 * S1
    pz = 60.5 * (-S2 - S2 * C3 - C2 * S4 - C3 * C4 * S2)
    return np.array([px, py, pz])


def _chain_leg_terms(geom: LegGeometry, q) -> dict[str, float]:
    T = chain_fk(geom.chain(), q)
    out = {}
    for col, name in ((0, "n"), (1, "o"), (3, "p")):
        for row, axis in enumerate("xyz"):
            out[f"{name}_{axis}"] = float(T[row, col])
    return out


@dataclass
class TermDeviation:
    term: str
    max_abs: float
    worst_q: tuple

    def as_dict(self) -> dict:
        return {"term": self.term, "max_abs": self.max_abs, "worst_q": list(self.worst_q)}


def _random_q(limits, rng: np.random.Generator) -> np.ndarray:
    lo = np.array([l for l, _ in limits])
    hi = np.array([h for _, h in limits])
    return rng.uniform(lo, hi)


def validation_report(samples: int = 1000, seed: int = 0,
                      leg: LegGeometry | None = None,
                      spine: SpineGeometry | None = None) -> dict:
    """Worst-case deviation of each expanded term from the chain product."""
    leg = leg or LegGeometry()
    spine = spine or SpineGeometry()
    rng = np.random.default_rng(seed)

    leg_dev: dict[str, TermDeviation] = {}
    for _ in range(samples):
        q = _random_q(leg.limits, rng)
        ref = _chain_leg_terms(leg, q)
        got = printed_leg_terms(leg, q)
        for k, v in got.items():
            d = abs(v - ref[k])
            if k not in leg_dev or d > leg_dev[k].max_abs:
                leg_dev[k] = TermDeviation(k, d, tuple(map(float, q)))

    spine_dev: dict[str, TermDeviation] = {}
    for _ in range(samples):
        q = _random_q(spine.limits, rng)
        ref = chain_fk(spine.chain(), q)[:3, 3]
        got = printed_spine_position(q)
        for i, axis in enumerate("xyz"):
            k = f"P_{axis}"
            d = abs(float(got[i] - ref[i]))
            if k not in spine_dev or d > spine_dev[k].max_abs:
                spine_dev[k] = TermDeviation(k, d, tuple(map(float, q)))

    return {
        "samples": samples,
        "seed": seed,
        "leg": [d.as_dict() for d in leg_dev.values()],
        "spine": [d.as_dict() for d in spine_dev.values()],
    }
