"""Acceptance criteria, each run at its stated tolerance with the bundled defaults.

Every test prints one PASS/FAIL line; the lines are repeated in the terminal
summary by ``conftest.py``.
"""

import math
import time

import numpy as np
import pytest

from typmix.config import default_config
from typmix.experiments import execute, moment_suite, oracle_suite
from typmix.linalg import kron
from typmix.mixing import fit_linear, relaxation_curve, time_grid
from typmix.models import LogicalMicro, LogicalProduct
from typmix.states import logical_purity, sample_haar_pure_batch, substream

REPORT = []


def _run(name):
    start = time.perf_counter()
    res = execute(default_config(name))
    return res, time.perf_counter() - start


def _row(res, **match):
    (r,) = res.summary.where(**match)
    return r


def _within(x, lo, hi):
    return lo <= x <= hi


def _rel(x, target, tol):
    return abs(x - target) <= tol * abs(target)


def _report(number, title, checks):
    ok = all(c[1] for c in checks)
    detail = "; ".join(f"{label} {value} [{'ok' if good else 'FAIL'}]" for label, good, value in checks)
    line = f"criterion {number} {title}: {'PASS' if ok else 'FAIL'} :: {detail}"
    REPORT.append(line)
    print(line)
    assert ok, line


def test_davies_concentration():
    res, elapsed = _run("davies_concentration")
    r8, r64 = _row(res, d=8), _row(res, d=64)
    t_stars = res.summary.column("t_star")
    _report(1, "davies concentration", [
        ("std d=8", _within(r8["std"], 0.11, 0.18), f"{r8['std']:.4f}"),
        ("std d=64", _within(r64["std"], 0.03, 0.055), f"{r64['std']:.4f}"),
        ("q90-q10 d=8", _within(r8["q90"] - r8["q10"], 0.28, 0.43), f"{r8['q90'] - r8['q10']:.4f}"),
        ("q90-q10 d=64", _within(r64["q90"] - r64["q10"], 0.08, 0.14), f"{r64['q90'] - r64['q10']:.4f}"),
        ("t_star", all(_within(t, 0.90, 0.98) for t in t_stars), ", ".join(f"{t:.3f}" for t in t_stars)),
        ("samples", res.config.n_samples >= 48, res.config.n_samples),
        ("runtime < 120 s", elapsed < 120, f"{elapsed:.1f}"),
    ])


def test_boundary_fixed_threshold():
    res, elapsed = _run("boundary_fixed_eps")
    r8, r64 = _row(res, d=8), _row(res, d=64)
    w8, w64 = r8["q90"] - r8["q10"], r64["q90"] - r64["q10"]
    _report(2, "boundary fixed threshold", [
        ("std d=8 vs 0.181±40%", _rel(r8["std"], 0.181, 0.4), f"{r8['std']:.4f}"),
        ("std d=64 vs 0.0039±60%", _rel(r64["std"], 0.0039, 0.6), f"{r64['std']:.5f}"),
        ("q90-q10 d=8 vs 0.159±40%", _rel(w8, 0.159, 0.4), f"{w8:.4f}"),
        ("q90-q10 d=64 vs 0.0087±60%", _rel(w64, 0.0087, 0.6), f"{w64:.5f}"),
        ("runtime < 180 s", elapsed < 180, f"{elapsed:.1f}"),
    ])


def test_boundary_bottleneck_slope():
    res, elapsed = _run("boundary_scaled_eps")
    rows = res.summary.where()
    fit = fit_linear([r["size"] for r in rows], [r["gap"] for r in rows])
    rel = [abs(r["gap"] - r["prediction"]) / r["prediction"] for r in rows]
    _report(3, "boundary bottleneck slope", [
        ("slope in [1.30, 1.45]", _within(fit["slope"], 1.30, 1.45), f"{fit['slope']:.4f}"),
        ("gap vs Beta prediction <= 10%", max(rel) <= 0.10, ", ".join(f"{x:.3f}" for x in rel)),
        ("samples >= 300", res.config.n_samples >= 300, res.config.n_samples),
        ("runtime < 300 s", elapsed < 300, f"{elapsed:.1f}"),
    ])


def test_skin_logarithmic_gap():
    res, elapsed = _run("skin_gap_scaling")
    small = res.summary.where(epsilon=0.01)
    large = res.summary.where(epsilon=0.35)
    fit = fit_linear([math.log(r["size"]) for r in small], [r["gap"] for r in small])
    fit_large = fit_linear([math.log(r["size"]) for r in large], [r["gap"] for r in large])
    g16 = _row(res, size=16, epsilon=0.01)["gamma2"]
    g192 = _row(res, size=192, epsilon=0.01)["gamma2"]
    _report(4, "skin logarithmic gap", [
        ("r2 at eps=0.01 >= 0.95", fit["r2"] >= 0.95, f"{fit['r2']:.4f}"),
        ("fitted trend increasing at eps=0.35", fit_large["slope"] > 0, f"slope {fit_large['slope']:.3f}"),
        ("gap L=16 vs 0.43±10%", _rel(g16, 0.43, 0.1), f"{g16:.4f}"),
        ("gap L=192 vs 0.20±10%", _rel(g192, 0.20, 0.1), f"{g192:.4f}"),
        ("samples >= 500", res.config.n_samples >= 500, res.config.n_samples),
        ("runtime < 300 s", elapsed < 300, f"{elapsed:.1f}"),
    ])


def test_protected_separation():
    res, elapsed = _run("protected_separation")
    r = _row(res, d=256)
    _report(5, "protected separation", [
        ("q90 <= log 40", r["q90"] <= math.log(40), f"{r['q90']:.4f}"),
        ("worst vs exact within 1%", _rel(r["t_worst"], r["worst_exact"], 0.01), f"{r['t_worst']:.4f} / {r['worst_exact']:.4f}"),
        ("worst/typical > 20", r["t_worst"] / r["q90"] > 20, f"{r['t_worst'] / r['q90']:.1f}"),
        ("runtime < 120 s", elapsed < 120, f"{elapsed:.1f}"),
    ])


def _slow_benchmark_error(L, p):
    m = LogicalMicro(L, p["beta"], p["gamma"], p["c"])
    pi = kron(*([m.tau] * L))
    prod = LogicalProduct(2, 2**L, m.eta, pi)
    state = kron(np.diag([1.0, 0.0]).astype(complex), pi)
    times = time_grid(1e-2, 400.0, 40)
    g = relaxation_curve(prod, state, times).distances
    return float(np.max(np.abs(g - (1 - 1 / 2) * 2 * np.exp(-m.eta * times))))


def test_logical_sector():
    res, elapsed = _run("logical_scaling")
    p = res.config.params
    rows = res.summary.where()
    growth = [r["growth"] for r in rows[1:]]
    q90 = [r["q90"] for r in rows]
    bench = max(_slow_benchmark_error(r["size"], p) for r in rows)
    z = []
    for r in rows:
        L = r["size"]
        n = 2**L
        pur = logical_purity(sample_haar_pure_batch(2 * n, 4000, substream(res.config.seed, L)), (2, n))
        z.append(abs(pur.mean() - (2 + n) / (2 * n + 1)) / (pur.std(ddof=1) / math.sqrt(pur.size)))
    target = math.exp(p["c"])
    _report(6, "logical sector", [
        ("slow benchmark error <= 1e-8", bench <= 1e-8, f"{bench:.2e}"),
        ("worst growth vs e^c within 20%", all(_rel(x, target, 0.2) for x in growth), ", ".join(f"{x:.3f}" for x in growth)),
        ("q90 spread <= 1.5x", max(q90) / min(q90) <= 1.5, ", ".join(f"{x:.3f}" for x in q90)),
        ("purity z <= 4", max(z) <= 4, ", ".join(f"{x:.2f}" for x in z)),
        ("samples >= 36", res.config.n_samples >= 36, res.config.n_samples),
        ("runtime < 240 s", elapsed < 240, f"{elapsed:.1f}"),
    ])


def test_oracle_equivalence():
    start = time.perf_counter()
    table = oracle_suite(1e-8, 100)
    elapsed = time.perf_counter() - start
    worst = max(table.column("dense_residual"))
    _report(7, "oracle equivalence", [
        ("all families pass", all(table.column("passed")), ", ".join(table.column("family"))),
        ("max dense residual", worst <= 1e-8, f"{worst:.2e}"),
        ("runtime < 60 s", elapsed < 60, f"{elapsed:.1f}"),
    ])


def test_moment_suite():
    cfg = default_config("moment_checks")
    start = time.perf_counter()
    table = moment_suite(cfg.sizes, cfg.n_samples, cfg.params["d_b"], cfg.seed)
    elapsed = time.perf_counter() - start
    failed = [f"{r['check']}@{r['d']}" for r in table.where() if not r["passed"]]
    _report(8, "moment suite", [
        ("all checks pass", not failed, ", ".join(failed) or f"{len(table.rows)} checks"),
        ("runtime < 60 s", elapsed < 60, f"{elapsed:.1f}"),
    ])
