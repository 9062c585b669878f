"""Scenario families: run matrices, comparison summaries and file output.

Each scenario returns a ``ScenarioReport``; ``write_report`` lays it out as
one directory per run (``series.csv``) plus a top-level ``report.json`` that
embeds the series, the summary and the config echo.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .config import ConfigDocument, echo
from .gait import stand_sequence, swim_midline
from .model import Posture, head_top_height, posed_segments
from .sim import RunResult, reach_height, run_scenario, stability_margin, support_polygon

SERIES_HEADER = ("t", "displacement_mm", "cog_height_mm", "margin_mm")
SCENARIOS = ("stability", "displacement", "fault", "stand", "swim")

# figures quoted alongside the achieved values; never asserted
REFERENCE = {
    "displacement_ratio": 0.73 / 0.16,
    "stand_reach_ratio": 4.25,
    "fault_reduction_pct": {
        "LQ_rotational": {"on": 22.0, "off": 80.0},
        "RH_rotational": {"on": 17.0, "off": 75.0},
        "LQ_pitching": {"on": None, "off": 100.0},
        "RH_pitching": {"on": 0.0, "off": 55.0},
    },
}


@dataclass
class ScenarioReport:
    name: str
    runs: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    config: dict = field(default_factory=dict)
    extra_files: dict = field(default_factory=dict)

    @property
    def fell(self) -> bool:
        return any(r.fallen for r in self.runs.values())

    def to_json(self) -> dict:
        return {
            "scenario": self.name,
            "summary": self.summary,
            "runs": {
                name: {
                    "summary": r.summary(),
                    "series": {
                        "t": r.t.tolist(),
                        "displacement_mm": r.displacement_mm.tolist(),
                        "cog_height_mm": r.cog_height_mm.tolist(),
                        "margin_mm": r.margin_mm.tolist(),
                    },
                }
                for name, r in self.runs.items()
            },
            "config": self.config,
        }


def reduction_pct(baseline: RunResult, run: RunResult) -> float:
    base = baseline.total_displacement_m
    if base == 0.0:
        return math.nan
    return 100.0 * (1.0 - run.total_displacement_m / base)


def _run(doc: ConfigDocument, gait, faults=(), name="run") -> RunResult:
    return run_scenario(doc.robot, gait, faults, doc.scenario.duration, doc.sim, name=name)


def stability(doc: ConfigDocument) -> ScenarioReport:
    with_tail = _run(doc, replace(doc.gait, tail_drag=True), name="tail_drag_on")
    without = _run(doc, replace(doc.gait, tail_drag=False), name="tail_drag_off")
    summary = {
        "min_margin_mm": {"tail_drag_on": with_tail.min_margin_mm, "tail_drag_off": without.min_margin_mm},
        "cog_height_amplitude_mm": {
            "tail_drag_on": with_tail.cog_height_amplitude_mm,
            "tail_drag_off": without.cog_height_amplitude_mm,
        },
        "margin_not_worse_with_tail": with_tail.min_margin_mm >= without.min_margin_mm,
        "amplitude_smaller_with_tail": with_tail.cog_height_amplitude_mm < without.cog_height_amplitude_mm,
    }
    return ScenarioReport("stability", {r.name: r for r in (with_tail, without)}, summary, echo(doc))


def displacement(doc: ConfigDocument) -> ScenarioReport:
    on = _run(doc, doc.gait, name="trunk_on")
    off = _run(doc, doc.gait.trunk_off(), name="trunk_off")
    d_off = off.total_displacement_m
    summary = {
        "displacement_m": {"trunk_on": on.total_displacement_m, "trunk_off": d_off},
        "ratio": on.total_displacement_m / d_off if d_off != 0.0 else math.inf,
        "reference_ratio": REFERENCE["displacement_ratio"],
    }
    return ScenarioReport("displacement", {r.name: r for r in (on, off)}, summary, echo(doc))


def fault(doc: ConfigDocument) -> ScenarioReport:
    baseline = _run(doc, doc.gait, name="baseline")
    runs = {"baseline": baseline}
    cases = {}
    for spec in doc.scenario.faults:
        key = f"{spec.leg}_{spec.joint}"
        on = _run(doc, doc.gait, [spec], name=f"{key}_trunk_on")
        off = _run(doc, doc.gait.trunk_off(), [spec], name=f"{key}_trunk_off")
        runs[on.name] = on
        runs[off.name] = off
        r_on, r_off = reduction_pct(baseline, on), reduction_pct(baseline, off)
        cases[key] = {
            "reduction_pct_trunk_on": r_on,
            "reduction_pct_trunk_off": r_off,
            "coordination_helps": r_on < r_off,
            "trunk_off_fraction_of_baseline": off.total_displacement_m / baseline.total_displacement_m
            if baseline.total_displacement_m else math.nan,
            "reference_pct": REFERENCE["fault_reduction_pct"].get(key),
        }
    summary = {"baseline_displacement_m": baseline.total_displacement_m, "cases": cases}
    return ScenarioReport("fault", runs, summary, echo(doc))


def stand(doc: ConfigDocument, duration: float = 4.0) -> ScenarioReport:
    model = doc.robot
    frames = stand_sequence(model, duration, doc.stand)
    t, head, cog_h, margin = [], [], [], []
    for kf in frames:
        W = kf.world_T_body()
        q = kf.frame
        posture = Posture(q.spine_angles, dict(q.leg_angles), q.tail_bend, q.tail_pitch)
        segs = posed_segments(model, W, posture)
        cog = sum(m * c for _, m, c in segs) / sum(m for _, m, _ in segs)
        poly = support_polygon([np.asarray(p)[:2] for p in kf.contacts.values()])
        t.append(kf.time)
        head.append(head_top_height(model, W, q.spine_angles))
        cog_h.append(float(cog[2]))
        margin.append(stability_margin(cog, poly))
    run = RunResult("stand", np.array(t), np.zeros(len(t)), np.array(cog_h), np.array(margin))
    crawl = reach_height(model, "crawl")
    standing = reach_height(model, "stand", doc.stand)
    summary = {
        "crawl_reach_mm": crawl,
        "stand_reach_mm": standing,
        "ratio": standing / crawl,
        "reference_ratio": REFERENCE["stand_reach_ratio"],
        "head_top_mm": head,
    }
    return ScenarioReport("stand", {"stand": run}, summary, echo(doc))


def swim(doc: ConfigDocument) -> ScenarioReport:
    p = doc.swim
    n_x, n_t = doc.scenario.swim_stations, doc.scenario.swim_times
    rows = []
    worst = -math.inf
    for j in range(n_t):
        tt = p.period * j / n_t
        for i in range(n_x):
            x = p.body_length * i / (n_x - 1)
            y = swim_midline(p, x, tt)
            u = x / p.length_scale
            env = p.length_scale * (p.c1 * u + p.c2 * u * u)
            worst = max(worst, abs(y) - env)
            rows.append((tt, x, y))
    summary = {
        "samples": len(rows),
        "period_s": p.period,
        "max_envelope_excess_mm": worst,
        "within_envelope": worst <= 1e-12,
    }
    rep = ScenarioReport("swim", {}, summary, echo(doc))
    rep.extra_files["midline.csv"] = (("t", "x_mm", "y_mm"), rows)
    return rep


RUNNERS = {
    "stability": stability,
    "displacement": displacement,
    "fault": fault,
    "stand": stand,
    "swim": swim,
}


def run_named(name: str, doc: ConfigDocument) -> ScenarioReport:
    return RUNNERS[name](doc)


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def series_rows(run: RunResult):
    return zip(run.t, run.displacement_mm, run.cog_height_mm, run.margin_mm)


def write_report(report: ScenarioReport, out: str | Path) -> Path:
    """Write per-run series, extra tables and report.json under ``out``."""
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    for name, run in report.runs.items():
        d = out / name
        d.mkdir(exist_ok=True)
        write_csv(d / "series.csv", SERIES_HEADER, series_rows(run))
    if len(report.runs) == 1:
        (run,) = report.runs.values()
        write_csv(out / "series.csv", SERIES_HEADER, series_rows(run))
    for fname, (header, rows) in report.extra_files.items():
        write_csv(out / fname, header, rows)
    path = out / "report.json"
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True, allow_nan=True) + "\n")
    return path
