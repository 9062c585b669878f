"""Acceptance criteria 1-9, each printing a single PASS/FAIL line."""

from __future__ import annotations

import json
import math
import time

import numpy as np
import pytest

from conftest import MODEL, default_run
from crockin.config import DEFAULT_FAULTS, ConfigDocument, dumps, parse_config
from crockin.dh import chain_fk
from crockin.expansions import validation_report
from crockin.gait import SwimWaveParams, swim_envelope, swim_midline
from crockin.leg import LegGeometry, leg_fk, leg_ik
from crockin.scenarios import REFERENCE, reduction_pct, run_named, write_report
from crockin.sim import reach_height
from crockin.tail import (
    TailGeometry, cable_deltas_approx, cable_deltas_exact, servo_angle, tail_joint_positions,
)

LEG = LegGeometry()


@pytest.fixture
def say(capsys):
    def emit(cid: int, ok: bool, text: str):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {cid}: {text}")
    return emit


def test_criterion_1_fk_equivalence(say):
    rng = np.random.default_rng(2024)
    lo = np.array([l for l, _ in LEG.limits])
    hi = np.array([h for _, h in LEG.limits])
    chain = LEG.chain()
    start = time.perf_counter()
    worst = 0.0
    for _ in range(1000):
        q = rng.uniform(lo, hi)
        worst = max(worst, float(np.max(np.abs(np.asarray(leg_fk(LEG, q)) - chain_fk(chain, q)[:3, 3]))))
    elapsed = time.perf_counter() - start
    rep = validation_report(samples=1000, seed=7)
    printed_leg = max(d["max_abs"] for d in rep["leg"])
    printed_spine = {d["term"]: round(d["max_abs"], 3) for d in rep["spine"]}
    ok = worst < 1e-9 and elapsed < 1.0
    say(1, ok, f"max |closed form - chain| = {worst:.3g} mm in {elapsed:.3f} s; "
               f"printed leg expansion max dev {printed_leg:.3g}; printed torso expansion max dev {printed_spine} mm")
    assert ok


def test_criterion_2_ik_round_trip(say):
    rng = np.random.default_rng(99)
    qs = []
    while len(qs) < 1000:
        q = (rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), rng.uniform(0.02, 2.6))
        # outward half-space: hip yaw is then single-valued
        if LEG.femur * math.cos(q[1]) + LEG.tibia * math.cos(q[1] + q[2]) > 1.0:
            qs.append(q)
    start = time.perf_counter()
    pos_err = ang_err = 0.0
    for q in qs:
        p = leg_fk(LEG, (*q, 0.0))
        s = leg_ik(LEG, p)[0]
        pos_err = max(pos_err, float(np.max(np.abs(np.asarray(leg_fk(LEG, s)) - p))))
        ang_err = max(ang_err, float(np.max(np.abs(np.asarray(s[:3]) - q))))
    elapsed = time.perf_counter() - start
    ok = pos_err < 1e-6 and ang_err < 1e-6 and elapsed < 1.0
    say(2, ok, f"position error {pos_err:.3g} mm, joint error {ang_err:.3g} rad, {elapsed:.3f} s")
    assert ok


def test_criterion_3_tail_algebra(say):
    geom = TailGeometry()
    n, h = geom.n_joints, geom.gap
    gap_err = 0.0
    for theta in np.linspace(-math.pi / 2, math.pi / 2, 2001):
        expected = 2 * h * math.sin(theta / (4 * n)) ** 2
        for e, a in zip(cable_deltas_exact(geom, theta), cable_deltas_approx(geom, theta)):
            gap_err = max(gap_err, abs(abs(e - a) - expected))
    phi = [servo_angle(geom, t) for t in np.linspace(0.0, math.pi / 2, 2001)]
    monotone = bool(np.all(np.diff(phi) > 0))
    seg_err = 0.0
    for theta in np.linspace(-math.pi / 2, math.pi / 2, 101):
        pts = tail_joint_positions(geom, theta)
        seg_err = max(seg_err, float(np.max(np.abs(np.linalg.norm(np.diff(pts, axis=0), axis=1) - geom.pitch))))
    ok = gap_err <= 1e-12 and phi[0] == 0.0 and monotone and seg_err <= 1e-9
    say(3, ok, f"gap-term error {gap_err:.3g} mm, servo(0) = {phi[0]}, monotone = {monotone}, "
               f"segment length error {seg_err:.3g} mm")
    assert ok


def test_criterion_4_swim_wave(say):
    p = SwimWaveParams(c1=0.027, c2=0.30, k=0.023)
    xs = np.linspace(0.0, p.body_length, 200)
    ts = np.linspace(0.0, 5.0 * p.period, 200)
    excess = -math.inf
    per_err = 0.0
    for x in xs:
        env = swim_envelope(p, x)
        for t in ts:
            y = swim_midline(p, x, t)
            excess = max(excess, abs(y) - env)
            per_err = max(per_err, abs(swim_midline(p, x, t + 2 * math.pi / p.omega) - y))
    ok = excess <= 0.0 and per_err <= 1e-12
    say(4, ok, f"max |y| - envelope = {excess:.3g} mm over 200x200 grid, periodicity error {per_err:.3g} mm")
    assert ok


def test_criterion_5_stability_direction(say):
    on = default_run("on")
    off = default_run("no_tail_drag")
    ok = on.min_margin_mm >= off.min_margin_mm and on.cog_height_amplitude_mm < off.cog_height_amplitude_mm
    say(5, ok, f"min margin {on.min_margin_mm:.2f} (tail drag) vs {off.min_margin_mm:.2f} mm; "
               f"cog amplitude {on.cog_height_amplitude_mm:.2f} vs {off.cog_height_amplitude_mm:.2f} mm")
    assert ok


def test_criterion_6_displacement_direction(say):
    on = default_run("on")
    off = default_run("off")
    ratio = on.total_displacement_m / off.total_displacement_m
    ok = ratio > 1.0
    say(6, ok, f"displacement {on.total_displacement_m:.3f} m vs {off.total_displacement_m:.3f} m, "
               f"ratio {ratio:.2f} (reference {REFERENCE['displacement_ratio']:.2f})")
    assert ok


def test_criterion_7_fault_ordering(say):
    base = default_run("on")
    ok = True
    parts = []
    for spec in DEFAULT_FAULTS:
        r_on = reduction_pct(base, default_run("on", spec))
        r_off = reduction_pct(base, default_run("off", spec))
        ok &= r_on < r_off
        parts.append(f"{spec.leg} {spec.joint}: {r_on:.0f}% < {r_off:.0f}%")
    front_pitch = default_run("off", DEFAULT_FAULTS[2])
    frac = front_pitch.total_displacement_m / base.total_displacement_m
    near_zero = frac < 0.10
    say(7, ok and near_zero, "; ".join(parts)
        + f"; front pitch fault without trunk keeps {100 * frac:.1f}% of baseline (needs < 10%)")
    assert ok, "ordering"
    assert near_zero, f"front pitch fault without trunk keeps {100 * frac:.1f}% of baseline"


def test_criterion_8_reach_height(say):
    crawl = reach_height(MODEL, "crawl")
    stand = reach_height(MODEL, "stand")
    ratio = stand / crawl
    ok = ratio > 3.0
    say(8, ok, f"crawl {crawl:.1f} mm, stand {stand:.1f} mm, ratio {ratio:.2f} "
               f"(reference {REFERENCE['stand_reach_ratio']})")
    assert ok


def test_criterion_9_determinism_and_round_trip(say, tmp_path):
    doc = parse_config({"scenario": {"duration": 2.0}})
    paths = []
    for d in ("a", "b"):
        write_report(run_named("displacement", doc), tmp_path / d)
        paths.append(tmp_path / d)
    files = ("report.json", "trunk_on/series.csv", "trunk_off/series.csv")
    same = all((paths[0] / f).read_bytes() == (paths[1] / f).read_bytes() for f in files)
    text = dumps(doc)
    again = parse_config(json.loads(text))
    round_trip = again == doc and dumps(again) == text and parse_config({}) == ConfigDocument()
    ok = same and round_trip
    say(9, ok, f"repeated runs byte-identical = {same}; config echo round trip = {round_trip}")
    assert ok
