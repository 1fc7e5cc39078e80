"""Relaxation curves, threshold hitting times and ensemble statistics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .linalg import hermitian_eig
from .models import Channel, ModelError
from .states import EnsembleSpec

CENSORED = math.inf
LOG_FLOOR = 1e-14
FLAT_SLOPE = 1e-6
QUANTUM_BLOCK = 16
POPULATION_BLOCK = 1024


class MixingError(ValueError):
    pass


def time_grid(t_min: float, t_max: float, n_points: int, log: bool = True) -> np.ndarray:
    if n_points < 2:
        raise MixingError("time grid needs at least 2 points")
    if not t_max > t_min:
        raise MixingError(f"need t_max > t_min, got {t_min}, {t_max}")
    if log:
        if t_min <= 0:
            raise MixingError("log-spaced grid needs t_min > 0")
        return np.geomspace(t_min, t_max, n_points)
    return np.linspace(t_min, t_max, n_points)


def _check_grid(times) -> np.ndarray:
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or len(t) < 2:
        raise MixingError("grid must be 1-D with at least 2 points")
    if np.any(np.diff(t) <= 0):
        raise MixingError("grid must be strictly increasing")
    if t[0] < 0:
        raise MixingError("grid times must be nonnegative")
    return t


@dataclass(frozen=True)
class RelaxationCurve:
    times: np.ndarray
    distances: np.ndarray

    def __post_init__(self):
        if np.shape(self.times) != np.shape(self.distances):
            raise MixingError("times and distances differ in length")


def relaxation_curve(channel: Channel, initial, grid) -> RelaxationCurve:
    t = _check_grid(grid)
    try:
        g = channel.curve(initial, t)
    except (ValueError, IndexError) as exc:
        raise MixingError(f"state does not fit {type(channel).__name__}: {exc}") from exc
    return RelaxationCurve(t, np.asarray(g, dtype=float))


def relaxation_curves(channel: Channel, states, grid) -> np.ndarray:
    """Distance curves for several initial states, shape (n_states, n_times)."""
    t = _check_grid(grid)
    if channel.population:
        pops = np.stack([channel.prepare(s) for s in states], axis=1)
        return channel.distances(channel.evolve_grid(pops, t)).T
    return np.array([channel.curve(s, t) for s in states])


def hitting_time(curve, epsilon: float) -> float:
    """First crossing of ``epsilon``, interpolated log-linearly between the
    bracketing grid points. Returns ``CENSORED`` (inf) if the curve stays
    above ``epsilon`` on the grid and the first grid time if it starts below."""
    if isinstance(curve, RelaxationCurve):
        times, g = curve.times, curve.distances
    else:
        times, g = curve
    return float(hitting_times(np.asarray(g)[None, :], times, epsilon)[0])


def hitting_times(curves, times, epsilon: float) -> np.ndarray:
    """Vectorized ``hitting_time`` over the rows of ``curves``."""
    if not 0 < epsilon < 2:
        raise MixingError(f"threshold must lie in (0, 2), got {epsilon}")
    g = np.atleast_2d(np.asarray(curves, dtype=float))
    t = np.asarray(times, dtype=float)
    below = g <= epsilon
    crossed = below.any(axis=1)
    i = np.argmax(below, axis=1)
    out = np.full(g.shape[0], CENSORED)
    start = crossed & (i == 0)
    out[start] = t[0]
    mid = np.nonzero(crossed & (i > 0))[0]
    if mid.size:
        k = i[mid]
        g0, g1 = g[mid, k - 1], g[mid, k]
        t0, t1 = t[k - 1], t[k]
        use_log = (g0 > LOG_FLOOR) & (g1 > LOG_FLOOR)
        with np.errstate(divide="ignore", invalid="ignore"):
            frac_log = (np.log(g0) - math.log(epsilon)) / (np.log(g0) - np.log(np.maximum(g1, LOG_FLOOR)))
            frac_lin = (g0 - epsilon) / (g0 - g1)
        frac = np.where(use_log, frac_log, frac_lin)
        out[mid] = t0 + (t1 - t0) * np.clip(frac, 0.0, 1.0)
    return out


def summarize(values) -> dict:
    """Mean, sample std and type-7 quantiles over the uncensored values."""
    v = np.asarray(values, dtype=float)
    ok = v[np.isfinite(v)]
    stats = {"n": int(v.size), "n_censored": int(v.size - ok.size)}
    if ok.size == 0:
        nan = float("nan")
        stats.update(mean=nan, std=nan, q10=nan, q50=nan, q90=nan)
        return stats
    q10, q50, q90 = np.quantile(ok, [0.1, 0.5, 0.9])
    stats.update(
        mean=float(ok.mean()),
        std=float(ok.std(ddof=1)) if ok.size > 1 else 0.0,
        q10=float(q10),
        q50=float(q50),
        q90=float(q90),
    )
    return stats


@dataclass(frozen=True)
class MixingSampleSet:
    epsilon: float
    hit_times: np.ndarray
    summary: dict = field(default_factory=dict)

    @property
    def censored(self) -> bool:
        return self.summary.get("n_censored", 0) > 0


def sample_set(curves, times, epsilon: float) -> MixingSampleSet:
    h = hitting_times(curves, times, epsilon)
    return MixingSampleSet(float(epsilon), h, summarize(h))


@dataclass(frozen=True)
class SweepResult:
    times: np.ndarray
    curves: np.ndarray
    samples: MixingSampleSet

    @property
    def mean_curve(self) -> RelaxationCurve:
        return RelaxationCurve(self.times, self.curves.mean(axis=0))

    @property
    def std_curve(self) -> np.ndarray:
        return self.curves.std(axis=0, ddof=1)

    def at(self, epsilon: float) -> MixingSampleSet:
        return sample_set(self.curves, self.times, epsilon)


def _curve_block(channel: Channel, ensemble: EnsembleSpec, indices, times) -> np.ndarray:
    return relaxation_curves(channel, [ensemble.sample(i) for i in indices], times)


def ensemble_curves(channel: Channel, ensemble: EnsembleSpec, n_samples: int, grid, workers: int = 1) -> np.ndarray:
    """Curves for members 0..n_samples-1 of the ensemble.

    Members are processed in fixed blocks, so the result is bitwise identical
    for any worker count.
    """
    if n_samples < 1:
        raise MixingError("need at least one sample")
    if ensemble.d != channel.dim:
        raise MixingError(f"ensemble dimension {ensemble.d} != model dimension {channel.dim}")
    t = _check_grid(grid)
    size = POPULATION_BLOCK if channel.population else QUANTUM_BLOCK
    blocks = [range(s, min(s + size, n_samples)) for s in range(0, n_samples, size)]
    if workers > 1 and len(blocks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_curve_block, [channel] * len(blocks), [ensemble] * len(blocks), blocks, [t] * len(blocks)))
    else:
        parts = [_curve_block(channel, ensemble, b, t) for b in blocks]
    return np.concatenate(parts, axis=0)


def ensemble_sweep(channel: Channel, ensemble: EnsembleSpec, n_samples: int, grid, epsilon: float, workers: int = 1) -> SweepResult:
    if n_samples < 2:
        raise MixingError("ensemble sweep needs n_samples >= 2")
    t = _check_grid(grid)
    curves = ensemble_curves(channel, ensemble, n_samples, t, workers)
    return SweepResult(t, curves, sample_set(curves, t, epsilon))


def barycenter_curve(channel: Channel, grid) -> RelaxationCurve:
    """Curve started from the maximally mixed state (the Haar barycenter)."""
    if channel.population:
        ref = np.full(channel.dim, 1.0 / channel.dim)
    else:
        ref = np.eye(channel.dim, dtype=complex) / channel.dim
    return relaxation_curve(channel, ref, grid)


@dataclass(frozen=True)
class CrossingReport:
    t_star: float
    local_slope_m: float
    slope_window: float
    transverse: bool


def crossing_report(mean_curve: RelaxationCurve, epsilon: float) -> CrossingReport:
    """Crossing time of the mean curve and the local slope of −μ_t around it,
    from a symmetric difference over ±2 grid points."""
    t, mu = mean_curve.times, mean_curve.distances
    t_star = hitting_time(mean_curve, epsilon)
    below = np.nonzero(mu <= epsilon)[0]
    if not below.size:
        raise MixingError("mean curve does not cross the threshold on the grid")
    i = int(below[0])
    lo = max(i - 2, 0)
    hi = min(i + 1, len(t) - 1)
    if hi == lo:
        hi = min(lo + 1, len(t) - 1)
        lo = hi - 1
    m = -(mu[hi] - mu[lo]) / (t[hi] - t[lo])
    return CrossingReport(t_star, float(m), float(t[hi] - t[lo]), bool(m > FLAT_SLOPE))


@dataclass(frozen=True)
class WorstCase:
    state: np.ndarray
    time: float
    label: str


def _candidates(channel: Channel, candidates):
    d = channel.dim
    if isinstance(candidates, str):
        out = []
        if candidates in ("slow_eigvec", "auto") and not channel.population:
            try:
                l2 = channel.slow_mode().L2
            except ModelError:
                if candidates == "slow_eigvec":
                    raise
            else:
                eig = hermitian_eig(l2)
                k = int(np.argmax(np.abs(eig.eigenvalues)))
                out.append(("slow_eigvec", eig.eigenvectors[:, k]))
        if candidates in ("basis", "auto"):
            for x in range(d):
                e = np.zeros(d, dtype=complex)
                e[x] = 1
                out.append((f"basis_{x}", e))
        if not out:
            raise MixingError(f"unknown candidate family {candidates!r}")
        return out
    out = [(f"candidate_{k}", s) for k, s in enumerate(candidates)]
    if not out:
        raise MixingError("candidate list is empty")
    return out


def worst_case_scan(channel: Channel, epsilon: float, grid, candidates="auto") -> WorstCase:
    """Largest hitting time over a structured candidate family.

    ``candidates`` is ``basis``, ``slow_eigvec``, ``auto`` (both) or an
    explicit list of states. A censored maximum is returned as inf.
    """
    t = _check_grid(grid)
    cands = _candidates(channel, candidates)
    curves = relaxation_curves(channel, [s for _, s in cands], t)
    h = hitting_times(curves, t, epsilon)
    k = int(np.argmax(h))
    return WorstCase(np.asarray(cands[k][1]), float(h[k]), cands[k][0])


def fit_linear(x, y) -> dict:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise MixingError("fit_linear needs two 1-D arrays of equal length")
    if np.unique(x).size < 2:
        raise MixingError("fit_linear needs at least two distinct x values")
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - intercept - slope * x) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return {"slope": slope, "intercept": intercept, "r2": r2}
