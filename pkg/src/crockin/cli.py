"""Command-line front end.

    crockin fk leg T1 T2 T3 [T4]        crockin fk spine Q1 .. Q5
    crockin ik leg X Y Z                crockin ik spine X Y Z
    crockin scenario {stability,displacement,fault,stand,swim} --out DIR

Exit codes: 0 ok, 2 config or usage error, 3 infeasible or unreachable,
4 a simulated run fell over.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .config import load_config
from .errors import ConfigError, InfeasibleError, KinematicsError, LimitError, PreconditionError, ReachabilityError
from .leg import leg_fk, leg_ik, leg_transform
from .scenarios import SCENARIOS, run_named, write_report
from .spine import spine_fk, spine_ik

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_FELL = 4


def _angles_in(values, degrees: bool) -> list[float]:
    return [math.radians(v) if degrees else v for v in values]


def _angles_out(values, degrees: bool) -> list[float]:
    return [math.degrees(v) if degrees else float(v) for v in values]


def _print(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_fk(args, doc) -> int:
    q = _angles_in(args.values, args.degrees)
    if args.chain == "leg":
        if len(q) not in (3, 4):
            raise ConfigError("fk leg takes 3 or 4 joint angles")
        q = q + [0.0] * (4 - len(q))
        T = leg_transform(doc.robot.leg, q)
        p = leg_fk(doc.robot.leg, q)
        _print({"chain": "leg", "position_mm": list(p), "transform": T.tolist()})
    else:
        if len(q) != 5:
            raise ConfigError("fk spine takes 5 joint angles")
        T = spine_fk(doc.robot.spine, q)
        _print({"chain": "spine", "position_mm": T[:3, 3].tolist(), "transform": T.tolist()})
    return EXIT_OK


def cmd_ik(args, doc) -> int:
    if len(args.values) != 3:
        raise ConfigError("ik takes a 3-D target X Y Z (mm)")
    target = [float(v) for v in args.values]
    if args.chain == "leg":
        sol = leg_ik(doc.robot.leg, target)
        _print({
            "chain": "leg",
            "target_mm": target,
            "singular": sol.singular,
            "units": "deg" if args.degrees else "rad",
            "branches": [_angles_out(s, args.degrees) for s in sol],
        })
        return EXIT_OK
    res = spine_ik(doc.robot.spine, target)
    _print({
        "chain": "spine",
        "target_mm": target,
        "converged": res.converged,
        "error_mm": res.error,
        "iterations": res.iterations,
        "units": "deg" if args.degrees else "rad",
        "angles": _angles_out(res.angles, args.degrees),
    })
    return EXIT_OK if res.converged else EXIT_INFEASIBLE


def cmd_scenario(args, doc) -> int:
    report = run_named(args.name, doc)
    try:
        path = write_report(report, args.out)
    except OSError as exc:
        raise ConfigError(f"cannot write to {args.out}: {exc}") from exc
    _print({"scenario": args.name, "report": str(path), "summary": report.summary})
    return EXIT_FELL if report.fell else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config (default: $CROC_KIN_CONFIG, then built-in defaults)")
    common.add_argument("--seed", type=int, default=0, help="reserved; every run is deterministic")
    common.add_argument("--degrees", action="store_true", help="angles in degrees instead of radians")

    parser = argparse.ArgumentParser(prog="crockin", description="Crocodile robot kinematics and quasi-static gait simulation.")
    sub = parser.add_subparsers(dest="command", required=True)

    fk = sub.add_parser("fk", parents=[common], help="forward kinematics")
    fk.add_argument("chain", choices=("leg", "spine"))
    fk.add_argument("values", nargs="+", type=float, metavar="ANGLE")
    fk.set_defaults(func=cmd_fk)

    ik = sub.add_parser("ik", parents=[common], help="inverse kinematics")
    ik.add_argument("chain", choices=("leg", "spine"))
    ik.add_argument("values", nargs="+", type=float, metavar="COORD")
    ik.set_defaults(func=cmd_ik)

    sc = sub.add_parser("scenario", parents=[common], help="run a simulation scenario")
    sc.add_argument("name", choices=SCENARIOS)
    sc.add_argument("--out", default="out", help="output directory (default: ./out)")
    sc.set_defaults(func=cmd_scenario)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        doc = load_config(args.config)
        return args.func(args, doc)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ReachabilityError, LimitError, InfeasibleError, PreconditionError) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except KinematicsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
