"""Experiment runners: each turns an ExperimentConfig into result tables."""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bottleneck import (
    alpha_logical,
    beta_a2_quantile,
    boundary_gap_prediction,
    protected_typ_bound,
    slow_overlaps,
)
from .config import ExperimentConfig, emit_config, validate
from .linalg import trace_norm
from .mixing import (
    MixingError,
    RelaxationCurve,
    barycenter_curve,
    crossing_report,
    ensemble_curves,
    fit_linear,
    hitting_time,
    relaxation_curve,
    sample_set,
    time_grid,
    worst_case_scan,
)
from .models import (
    DaviesChain,
    LogicalMicro,
    LogicalProduct,
    PauliBoundary,
    ProtectedSector,
    SkinPopulation,
    skin_evolve,
)
from .states import (
    EnsembleSpec,
    haar_moment_mean,
    haar_moment_var,
    induced_moment_var,
    ket_to_dm,
    logical_overlap,
    logical_purity,
    sample_haar_pure,
    sample_haar_pure_batch,
    sample_induced,
    substream,
)

SWEEP_COLUMNS = [
    "size", "d", "epsilon", "t_star", "slope_m", "mean", "std", "q10", "q50", "q90",
    "n_censored", "t_worst", "gap", "prediction",
]
NAN = float("nan")


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)

    def add(self, **values):
        missing = set(self.columns) - set(values)
        extra = set(values) - set(self.columns)
        if missing or extra:
            raise ValueError(f"row mismatch: missing {sorted(missing)}, unexpected {sorted(extra)}")
        self.rows.append(tuple(values[c] for c in self.columns))

    def column(self, name):
        k = self.columns.index(name)
        return [r[k] for r in self.rows]

    def where(self, **match):
        idx = [self.columns.index(k) for k in match]
        return [dict(zip(self.columns, r)) for r in self.rows if all(r[i] == v for i, v in zip(idx, match.values()))]


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    summary: Table
    curves: Table
    meta: dict


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def _write_rows(table: Table, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(table.columns)
    for row in table.rows:
        w.writerow([_fmt_cell(v) for v in row])


def emit_csv(table: Table, path) -> None:
    """Write ``table`` to a path or an open text stream."""
    if hasattr(path, "write"):
        _write_rows(table, path)
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        _write_rows(table, fh)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def emit_json(summary: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_jsonable(summary), fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- shared sweep machinery ----------------------------------------------------


def _grid(cfg: ExperimentConfig):
    return time_grid(cfg.t_min, cfg.t_max, cfg.n_points, cfg.log_grid)


def _ensemble(cfg: ExperimentConfig, d: int, size) -> EnsembleSpec:
    # distinct sizes draw from distinct streams
    return EnsembleSpec("haar_pure", d, seed=cfg.seed * 1_000_003 + int(size))


def _add_curves(curves: Table, cfg, size, times, sample_curves, extra: dict):
    for i in range(min(cfg.curve_samples, len(sample_curves))):
        for t, g in zip(times, sample_curves[i]):
            curves.add(size=size, sample_id=i, t=t, g=g)
    for label, g_curve in extra.items():
        for t, g in zip(times, g_curve):
            curves.add(size=size, sample_id=label, t=t, g=g)


def _sweep_row(size, d, eps, times, curves_arr, worst):
    ss = sample_set(curves_arr, times, eps).summary
    mean = curves_arr.mean(axis=0)
    try:
        rep = crossing_report(RelaxationCurve(times, mean), eps)
        t_star, slope = rep.t_star, rep.local_slope_m
    except MixingError:
        t_star, slope = math.inf, NAN
    return {
        "size": size, "d": d, "epsilon": eps, "t_star": t_star, "slope_m": slope,
        "mean": ss["mean"], "std": ss["std"], "q10": ss["q10"], "q50": ss["q50"], "q90": ss["q90"],
        "n_censored": ss["n_censored"], "t_worst": worst, "gap": worst - ss["q90"],
    }


# -- experiments -------------------------------------------------------------


def run_davies(cfg: ExperimentConfig):
    p = cfg.params
    times = _grid(cfg)
    summary = Table(SWEEP_COLUMNS + ["vertical_std", "barycenter_cross"])
    curves = Table(["size", "sample_id", "t", "g"])
    for n in cfg.sizes:
        m = DaviesChain(n, p["beta"], p["omega"])
        c = ensemble_curves(m, _ensemble(cfg, m.dim, n), cfg.n_samples, times, cfg.workers)
        h = barycenter_curve(m, times)
        for eps in cfg.epsilons(n):
            row = _sweep_row(n, m.dim, eps, times, c, worst_case_scan(m, eps, times, "basis").time)
            k = int(np.argmin(np.abs(times - row["t_star"]))) if math.isfinite(row["t_star"]) else -1
            summary.add(**row, prediction=NAN, vertical_std=float(c[:, k].std(ddof=1)), barycenter_cross=hitting_time(h, eps))
        _add_curves(curves, cfg, n, times, c, {"mean": c.mean(axis=0), "barycenter": h.distances})
    return summary, curves, {}


def run_boundary(cfg: ExperimentConfig):
    p = cfg.params
    times = _grid(cfg)
    summary = Table(SWEEP_COLUMNS + ["beta_q90_a2", "empirical_q90_a2"])
    curves = Table(["size", "sample_id", "t", "g"])
    for L in cfg.sizes:
        m = PauliBoundary(L, p["delta"], p["gamma"])
        ens = _ensemble(cfg, m.dim, L)
        c = ensemble_curves(m, ens, cfg.n_samples, times, cfg.workers)
        a2 = slow_overlaps(np.array([ens.sample(i) for i in range(cfg.n_samples)]), m.slow_mode())
        for eps in cfg.epsilons(L):
            row = _sweep_row(L, m.dim, eps, times, c, worst_case_scan(m, eps, times, "auto").time)
            pred = boundary_gap_prediction(L, p["delta"]) if cfg.epsilon_rule == "scaled" else NAN
            summary.add(**row, prediction=pred, beta_q90_a2=beta_a2_quantile(L, 0.9),
                        empirical_q90_a2=float(np.quantile(np.abs(a2), 0.9)))
        _add_curves(curves, cfg, L, times, c, {"mean": c.mean(axis=0)})
    meta = {}
    if cfg.epsilon_rule == "scaled" and len(cfg.sizes) > 1:
        meta["fits"] = {
            "gap_vs_L": fit_linear(summary.column("size"), summary.column("gap")),
            "prediction_vs_L": fit_linear(summary.column("size"), summary.column("prediction")),
            "asymptotic_slope": math.log(2) / (2 * p["delta"]),
        }
    return summary, curves, meta


def nonsymmetric_gap(q: np.ndarray) -> float:
    """Slow gap read off a general (non-normal) eigensolver; a conditioning diagnostic."""
    ev = np.sort(np.real(np.linalg.eigvals(q)))[::-1]
    return float(-ev[1])


def run_skin(cfg: ExperimentConfig):
    p = cfg.params
    times = _grid(cfg)
    summary = Table(SWEEP_COLUMNS + ["gamma2", "gamma2_nonsymmetric", "barycenter_cross"])
    curves = Table(["size", "sample_id", "t", "g"])
    for L in cfg.sizes:
        m = SkinPopulation(L, p["gamma_r"], p["gamma_l"], p["lam"])
        c = ensemble_curves(m, _ensemble(cfg, L, L), cfg.n_samples, times, cfg.workers)
        h = barycenter_curve(m, times)
        gap2 = float(m.spectrum()[1])
        gap_ns = nonsymmetric_gap(m.generator)
        for eps in cfg.epsilons(L):
            row = _sweep_row(L, L, eps, times, c, worst_case_scan(m, eps, times, "basis").time)
            summary.add(**row, prediction=NAN, gamma2=gap2, gamma2_nonsymmetric=gap_ns, barycenter_cross=hitting_time(h, eps))
        _add_curves(curves, cfg, L, times, c, {"mean": c.mean(axis=0), "barycenter": h.distances})
    fits = {}
    for eps in cfg.epsilon:
        rows = summary.where(epsilon=eps)
        if len(rows) > 1:
            x = np.log([r["size"] for r in rows])
            y = [r["gap"] for r in rows]
            f = fit_linear(x, y)
            fitted = f["intercept"] + f["slope"] * x
            f["fitted_increasing"] = bool(np.all(np.diff(fitted) > 0))
            fits[f"gap_vs_logL_eps_{eps!r}"] = f
    return summary, curves, {"fits": fits} if fits else {}


def run_protected(cfg: ExperimentConfig):
    p = cfg.params
    times = _grid(cfg)
    wt = cfg.worst_t_max or cfg.t_max
    wn = cfg.worst_n_points or cfg.n_points
    worst_times = time_grid(cfg.t_min, wt, wn, cfg.log_grid)
    delta_q = p["delta_q"]
    summary = Table(SWEEP_COLUMNS + ["gamma_s", "worst_exact", "typ_bound", "bound_applicable", "worst_typ_ratio"])
    curves = Table(["size", "sample_id", "t", "g"])
    eta = math.exp(-p["leak_exponent"])
    for d in cfg.sizes:
        m = ProtectedSector(d, eta)
        c = ensemble_curves(m, _ensemble(cfg, d, d), cfg.n_samples, times, cfg.workers)
        for eps in cfg.epsilons(d):
            worst = worst_case_scan(m, eps, worst_times, "auto").time
            row = _sweep_row(d, d, eps, times, c, worst)
            row["q90"] = float(np.quantile(sample_set(c, times, eps).hit_times, 1 - delta_q))
            row["gap"] = worst - row["q90"]
            bound = protected_typ_bound(d, delta_q, eps)
            exact = math.log(2 * (1 - 1 / d) / eps) / m.gamma_s
            summary.add(**row, prediction=bound.value, gamma_s=m.gamma_s, worst_exact=exact, typ_bound=bound.value,
                        bound_applicable=bound.applicable, worst_typ_ratio=worst / row["q90"])
        _add_curves(curves, cfg, d, times, c, {"mean": c.mean(axis=0)})
    return summary, curves, {"eta": eta, "quantile_level": 1 - delta_q}


def run_logical(cfg: ExperimentConfig):
    p = cfg.params
    times = _grid(cfg)
    summary = Table(SWEEP_COLUMNS + ["eta", "t_slow", "t_fast", "t_reference", "alpha_logical", "overlap_q90", "growth"])
    curves = Table(["size", "sample_id", "t", "g"])
    prev = None
    for L in cfg.sizes:
        m = LogicalMicro(L, p["beta"], p["gamma"], p["c"])
        ens = _ensemble(cfg, m.dim, L)
        c = ensemble_curves(m, ens, cfg.n_samples, times, cfg.workers)
        slow = relaxation_curve(m, m.slow_state(), times)
        fast = relaxation_curve(m, m.fast_state(), times)
        ref = barycenter_curve(m, times)
        overlaps = [logical_overlap(ens.sample(i), (2, 2**L)) for i in range(cfg.n_samples)]
        for eps in cfg.epsilons(L):
            worst = worst_case_scan(m, eps, times, "basis").time
            row = _sweep_row(L, m.dim, eps, times, c, worst)
            summary.add(
                **row, prediction=NAN, eta=m.eta, t_slow=hitting_time(slow, eps), t_fast=hitting_time(fast, eps),
                t_reference=hitting_time(ref, eps), alpha_logical=alpha_logical(2, 2**L, 0.1),
                overlap_q90=float(np.quantile(overlaps, 0.9)),
                growth=worst / prev if prev else NAN,
            )
            prev = worst
        _add_curves(curves, cfg, L, times, c, {"mean": c.mean(axis=0), "slow": slow.distances, "fast": fast.distances, "reference": ref.distances})
    return summary, curves, {}


# -- Monte Carlo moment identities ---------------------------------------------


def _mc_row(table, check, d, estimate, expected, se, tol_se=4.0):
    z = abs(estimate - expected) / se if se > 0 else (0.0 if estimate == expected else math.inf)
    table.add(check=check, d=d, estimate=estimate, expected=expected, std_error=se, z=z, passed=bool(z <= tol_se))


def _mean_se(x):
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(len(x)))


def _var_se(x):
    x = np.asarray(x, dtype=float)
    dev = (x - x.mean()) ** 2
    return float(x.var(ddof=1)), float(dev.std(ddof=1) / math.sqrt(len(x)))


def random_observable(d: int, rng) -> np.ndarray:
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (a + a.conj().T) / 2


def moment_suite(sizes, n_samples: int, d_b: int, seed: int = 0) -> Table:
    """Haar and induced moment identities checked by Monte Carlo; rank-two
    trace-norm identity checked deterministically."""
    table = Table(["check", "d", "estimate", "expected", "std_error", "z", "passed"])
    for d in sizes:
        rng = substream(seed, 10 * d)
        o = random_observable(d, rng)
        psi = sample_haar_pure_batch(d, n_samples, rng)
        a = np.real(np.einsum("ni,ij,nj->n", psi.conj(), o, psi))
        est, se = _mean_se(a)
        _mc_row(table, "haar_mean", d, est, haar_moment_mean(o), se)
        est, se = _var_se(a)
        _mc_row(table, "haar_variance", d, est, haar_moment_var(o), se)

        n_ind = max(2, n_samples // 4)
        vals = np.array([np.real(np.trace(o @ sample_induced(d, d_b, rng))) for _ in range(n_ind)])
        est, se = _var_se(vals)
        _mc_row(table, "induced_variance", d, est, induced_moment_var(o, d_b), se)

        big = sample_haar_pure_batch(2 * d, n_samples, rng)
        est, se = _mean_se(logical_purity(big, (2, d)))
        _mc_row(table, "logical_purity", d, est, (2 + d) / (2 * d + 1), se)

        worst = 0.0
        for _ in range(50):
            u, v = sample_haar_pure(d, rng), sample_haar_pure(d, rng)
            lhs = trace_norm(ket_to_dm(u) - ket_to_dm(v))
            rhs = 2 * math.sqrt(max(0.0, 1 - abs(np.vdot(u, v)) ** 2))
            worst = max(worst, abs(lhs - rhs))
        table.add(check="rank_two_trace_norm", d=d, estimate=worst, expected=0.0, std_error=0.0, z=worst,
                  passed=bool(worst <= 1e-10))
    return table


def run_moments(cfg: ExperimentConfig):
    table = moment_suite(cfg.sizes, cfg.n_samples, int(cfg.params["d_b"]), cfg.seed)
    return table, Table(["size", "sample_id", "t", "g"]), {"all_passed": all(table.column("passed"))}


# -- oracle equivalence ---------------------------------------------------------


def oracle_models():
    """Smallest nontrivial instance of every family with a dense oracle."""
    return [
        ("davies_chain", DaviesChain(2)),
        ("pauli_boundary", PauliBoundary(2)),
        ("protected_sector", ProtectedSector(4, 0.3)),
        ("logical_product", LogicalProduct(2, 2, 0.3, np.diag([0.7, 0.3]))),
        ("logical_micro", LogicalMicro(1)),
        ("skin_population", SkinPopulation(3)),
    ]


def oracle_suite(tolerance: float = 1e-8, triples: int = 100, seed: int = 0) -> Table:
    table = Table(["family", "dense_residual", "semigroup_residual", "monotonicity_violation",
                   "trace_defect", "min_eigenvalue", "passed"])
    for k, (name, m) in enumerate(oracle_models()):
        rng = substream(seed, 1000 + k)
        dense = m.dense()
        dense_res = semi = mono = trace_def = 0.0
        min_eig = math.inf
        for _ in range(triples):
            rho = sample_induced(m.dim, m.dim, rng)
            s, t = rng.uniform(0, 2, size=2)
            if m.population:
                p0 = np.real(np.diag(rho))
                pt = m.evolve(p0, t)
                ref = np.real(np.diag(dense.evolve(np.diag(p0), t)))
                dense_res = max(dense_res, np.abs(pt - ref).sum(), np.abs(pt - skin_evolve(p0, t, m.generator)).sum())
                pst = m.evolve(pt, s)
                semi = max(semi, np.abs(pst - m.evolve(p0, s + t)).sum())
                pi = m.stationary_state()
                mono = max(mono, np.abs(pst - pi).sum() - np.abs(pt - pi).sum())
                trace_def = max(trace_def, abs(pt.sum() - 1))
                min_eig = min(min_eig, pt.min())
                continue
            out = m.evolve(rho, t)
            dense_res = max(dense_res, trace_norm(out - dense.evolve(rho, t)))
            both = m.evolve(out, s)
            semi = max(semi, trace_norm(both - m.evolve(rho, s + t)))
            sigma = m.stationary_state()
            mono = max(mono, trace_norm(both - sigma) - trace_norm(out - sigma))
            trace_def = max(trace_def, abs(np.trace(out).real - 1))
            min_eig = min(min_eig, float(np.linalg.eigvalsh(0.5 * (out + out.conj().T))[0]))
        ok = dense_res <= tolerance and semi <= 1e-9 and mono <= 1e-10 and trace_def <= 1e-10 and min_eig >= -1e-9
        table.add(family=name, dense_residual=dense_res, semigroup_residual=semi, monotonicity_violation=mono,
                  trace_defect=trace_def, min_eigenvalue=min_eig, passed=bool(ok))
    return table


def run_oracles(cfg: ExperimentConfig):
    table = oracle_suite(cfg.params["tolerance"], int(cfg.params["triples"]), cfg.seed)
    return table, Table(["size", "sample_id", "t", "g"]), {"all_passed": all(table.column("passed"))}


RUNNERS = {
    "davies_concentration": run_davies,
    "boundary_fixed_eps": run_boundary,
    "boundary_scaled_eps": run_boundary,
    "skin_bundles": run_skin,
    "skin_gap_scaling": run_skin,
    "protected_separation": run_protected,
    "logical_bundle": run_logical,
    "logical_scaling": run_logical,
    "moment_checks": run_moments,
    "oracle_checks": run_oracles,
}


def execute(cfg: ExperimentConfig) -> ExperimentResult:
    """Run an experiment in memory."""
    validate(cfg)
    start = time.perf_counter()
    summary, curves, extra = RUNNERS[cfg.experiment](cfg)
    meta = {
        "experiment": cfg.experiment,
        "seed": cfg.seed,
        "workers": cfg.workers,
        "code_version": __version__,
        "config": emit_config(cfg),
        "config_fields": asdict(cfg),
        "wall_time_s": time.perf_counter() - start,
        **extra,
    }
    if summary.columns[:1] == ["size"] and "n_censored" in summary.columns:
        rows = summary.where()
        meta["censored_rows"] = [r["size"] for r in rows if r["n_censored"] > 0]
        meta["warnings"] = [
            f"size {r['size']}, epsilon {r['epsilon']!r}: {r['n_censored']} of {cfg.n_samples} samples censored"
            for r in rows
            if 2 * r["n_censored"] > cfg.n_samples
        ]
    return ExperimentResult(cfg, summary, curves, meta)


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    """Run and, if ``out_dir`` is given, write curves.csv, summary.csv and meta.json there."""
    result = execute(cfg)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        emit_csv(result.summary, out / "summary.csv")
        emit_csv(result.curves, out / "curves.csv")
        emit_json(result.meta, out / "meta.json")
    return result
