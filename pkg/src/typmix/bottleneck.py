"""Closed-form quantile scales, one-mode gap bounds and transfer constants.

Formulas involving unknown absolute constants take them as explicit
arguments (``c2``, ``c``) defaulting to 1; results depending on them hold
only up to that constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaincinv

from .linalg import gell_mann_basis, hermitian_eig, operator_norm
from .models import Channel, SlowMode
from .states import as_density, haar_moment_mean, haar_moment_var

XI_MAX_DIM = 64


class BoundError(ValueError):
    pass


def _check_delta(delta):
    if not 0 < delta < 1:
        raise BoundError(f"δ must lie in (0, 1), got {delta}")


def _check_positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise BoundError(f"{name} must be positive, got {v}")


def slow_overlap(state, mode: SlowMode) -> float:
    """a₂ = Tr(L₂† ρ)."""
    rho = as_density(state)
    if rho.shape != mode.L2.shape:
        raise BoundError(f"state shape {rho.shape} does not match slow mode {mode.L2.shape}")
    return float(np.real(np.vdot(mode.L2, rho)))


def slow_overlaps(states, mode: SlowMode) -> np.ndarray:
    """a₂ for the rows of an (n, d) array of pure states; diagonal L₂ is fast-pathed."""
    psi = np.asarray(states)
    l2 = mode.L2
    diag = np.diag(l2)
    if np.array_equal(l2, np.diag(diag)):
        return np.real(np.abs(psi) ** 2 @ diag)
    return np.real(np.einsum("ni,ij,nj->n", psi.conj(), l2, psi))


@dataclass(frozen=True)
class OverlapStats:
    m2: float
    v2: float
    op_norm_L2: float
    hs_norm_L2: float
    empirical_quantile: float | None = None


def overlap_stats(mode: SlowMode, samples=None, delta: float = 0.1) -> OverlapStats:
    """Haar moments of a₂ and, if samples are given, the empirical (1−δ)-quantile of |a₂|."""
    l2 = mode.L2
    q = None
    if samples is not None:
        _check_delta(delta)
        q = float(np.quantile(np.abs(slow_overlaps(samples, mode)), 1 - delta))
    return OverlapStats(
        m2=haar_moment_mean(l2),
        v2=haar_moment_var(l2),
        op_norm_L2=operator_norm(l2),
        hs_norm_L2=float(np.linalg.norm(l2)),
        empirical_quantile=q,
    )


def alpha_moment(m2: float, v2: float, delta: float) -> float:
    _check_delta(delta)
    if v2 < 0:
        raise BoundError(f"variance must be nonnegative, got {v2}")
    return abs(m2) + math.sqrt(v2 / delta)


def alpha_levy(op_norm: float, m2: float, d: int, delta: float, c2: float = 1.0) -> float:
    _check_delta(delta)
    _check_positive(d=d, c2=c2)
    return abs(m2) + op_norm * math.sqrt(math.log(2 / delta) / (c2 * d))


def alpha_skin(xi: float, L: int, delta: float, op_norm: float) -> float:
    _check_delta(delta)
    _check_positive(xi=xi, L=L)
    c_xi = 1 / (1 - math.exp(-1 / (2 * xi)))
    return c_xi**2 * op_norm / (delta * L)


def alpha_boundary(opnorm_ab: float, q: float, L: int, delta: float, c2: float = 1.0) -> float:
    _check_delta(delta)
    _check_positive(q=q, L=L, c2=c2)
    return opnorm_ab * math.sqrt(math.log(2 / delta) / (c2 * q**L))


def alpha_induced(tr_l2: float, tr_l2sq: float, d: int, d_b: int, delta: float) -> float:
    _check_delta(delta)
    _check_positive(d=d, d_b=d_b)
    var = (tr_l2sq - tr_l2**2 / d) / (d * (d * d_b + 1))
    return abs(tr_l2 / d) + math.sqrt(max(var, 0.0) / delta)


def alpha_design_defect(m0: float, v0: float, op_norm: float, eps2: float, delta: float) -> float:
    _check_delta(delta)
    if eps2 < 0 or v0 < 0:
        raise BoundError("ε₂ and v₀ must be nonnegative")
    return abs(m0) + eps2 * op_norm + math.sqrt((v0 + 3 * eps2 * op_norm**2) / delta)


def alpha_logical(D: int, N: int, delta: float) -> float:
    _check_delta(delta)
    _check_positive(D=D, N=N)
    return math.sqrt((D * D - 1) / (delta * (D * N + 1)))


@dataclass(frozen=True)
class GapPrediction:
    gamma2: float
    kappa: float
    alpha: float
    t_worst_lb: float
    t_typ_ub: float
    gap_lb: float
    informative: bool


def one_mode_bounds(gamma2: float, kappa: float, op_norm: float, alpha: float, epsilon: float) -> GapPrediction:
    """Worst-case lower bound, typical upper bound and their difference.

    ``informative`` is False when α ≥ (1−κ)‖L₂‖∞/(1+κ), i.e. the gap bound is ≤ 0.
    """
    if not 0 <= kappa < 1:
        raise BoundError(f"κ must lie in [0, 1), got {kappa}")
    _check_positive(gamma2=gamma2, alpha=alpha, epsilon=epsilon, op_norm=op_norm)
    lb = math.log((1 - kappa) * op_norm / epsilon) / gamma2
    ub = math.log((1 + kappa) * alpha / epsilon) / gamma2
    gap = math.log((1 - kappa) * op_norm / ((1 + kappa) * alpha)) / gamma2
    return GapPrediction(gamma2, kappa, alpha, lb, ub, gap, gap > 0)


def beta_a2_quantile(L: int, level: float) -> float:
    """Quantile of |a₂| = |2B − 1| with B ~ Beta(2^{L−1}, 2^{L−1})."""
    if L < 1:
        raise BoundError("L must be >= 1")
    if not 0 < level < 1:
        raise BoundError(f"level must lie in (0, 1), got {level}")
    a = 2.0 ** (L - 1)
    qb = float(betaincinv(a, a, 0.5 * (1 + level)))
    if not math.isfinite(qb):
        raise BoundError(f"Beta quantile inversion failed at L={L}, level={level}")
    return 2 * (qb - 0.5)


def boundary_gap_prediction(L: int, delta_rate: float, level: float = 0.9) -> float:
    """(1/Δ)·log(1/q_level(|a₂|)) for the Pauli boundary chain."""
    return math.log(1 / beta_a2_quantile(L, level)) / delta_rate


def transfer_matrix(channel: Channel, t: float) -> np.ndarray:
    """Row-major matrix of Λ_t, built column by column from matrix units."""
    d = channel.dim
    if channel.population:
        raise BoundError("transfer functionals need a quantum channel")
    if d > XI_MAX_DIM:
        raise BoundError(f"transfer functionals limited to d <= {XI_MAX_DIM}, got {d}")
    cols = np.empty((d * d, d * d), dtype=complex)
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1
        cols[:, k] = channel.evolve(e.reshape(d, d), t).reshape(-1)
    return cols


def xi_sq(channel: Channel, t: float, basis=None) -> float:
    """Ξ_t² = Σ_a ‖Λ_t(F_a)‖₂² over a traceless orthonormal Hermitian basis."""
    d = channel.dim
    fs = gell_mann_basis(d) if basis is None else np.asarray(basis)
    m = transfer_matrix(channel, t)
    out = m @ fs.reshape(len(fs), -1).T
    return float(np.sum(np.abs(out) ** 2))


def psi_sq(channel: Channel, t: float, basis=None) -> float:
    """Ψ_t² = Σ_a ‖Λ_t†(F_a)‖∞²."""
    d = channel.dim
    fs = gell_mann_basis(d) if basis is None else np.asarray(basis)
    m = transfer_matrix(channel, t)
    adj = (m.conj().T @ fs.reshape(len(fs), -1).T).T.reshape(-1, d, d)
    return float(sum(operator_norm(a) ** 2 for a in adj))


@dataclass(frozen=True)
class TransferConstants:
    c_P: float
    xi_t: float
    psi_t: float
    eps2: float = 0.0


def c_p_design(d: int) -> float:
    return 1 / (d * (d + 1))


def c_p_induced(d: int, d_b: int) -> float:
    return 1 / (d * (d * d_b + 1))


def ensemble_tail_bound(c_p: float, xi_sq_value: float, d: int, eta: float) -> float:
    """Chebyshev bound d·c_P·Ξ_t²/η² on P(|g_t − E g_t| ≥ η)-type deviations."""
    _check_positive(c_p=c_p, d=d, eta=eta)
    return d * c_p * xi_sq_value / eta**2


def design_variance_defect(v0: float, op_norm: float, eps2: float) -> tuple[float, float]:
    """Interval [v₀ − 3ε₂‖L₂‖∞², v₀ + 3ε₂‖L₂‖∞²] (clipped at 0) containing Var(a₂)."""
    if eps2 < 0:
        raise BoundError("ε₂ must be nonnegative")
    b = 3 * eps2 * op_norm**2
    return max(0.0, v0 - b), v0 + b


def window_estimate(v_cross: float, epsilon: float, gamma2: float) -> float:
    """Estimated crossing-window width V/(εγ₂) (heuristic)."""
    _check_positive(epsilon=epsilon, gamma2=gamma2)
    return v_cross / (epsilon * gamma2)


def window_scaling(alpha_or_kappa: float, L: float, mode: str, epsilon: float = 1.0) -> float:
    """Heuristic window growth: L^{α−1/2}/ε (``poly``) or e^{κL}/(ε√L) (``exp``)."""
    _check_positive(L=L, epsilon=epsilon)
    if mode == "poly":
        return L ** (alpha_or_kappa - 0.5) / epsilon
    if mode == "exp":
        return math.exp(alpha_or_kappa * L) / (epsilon * math.sqrt(L))
    raise BoundError(f"unknown window mode {mode!r}")


@dataclass(frozen=True)
class ProtectedBound:
    value: float
    applicable: bool
    threshold: float


def protected_typ_bound(d: int, delta: float, epsilon: float) -> ProtectedBound:
    """log(8/ε) bound on the typical mixing time, valid for ε ≥ 4(1+log(1/δ))/(d−1)."""
    _check_delta(delta)
    _check_positive(epsilon=epsilon)
    if d < 3:
        raise BoundError("protected sector needs d >= 3")
    thr = 4 * (1 + math.log(1 / delta)) / (d - 1)
    return ProtectedBound(math.log(8 / epsilon), epsilon >= thr, thr)


def kappa_hat(times, distances, a2: float, gamma2: float, t_min: float = 0.0) -> float:
    """max over t ≥ t_min of |g_t/(|a₂|e^{−γ₂t}) − 1|."""
    t = np.asarray(times, dtype=float)
    g = np.asarray(distances, dtype=float)
    sel = t >= t_min
    if not sel.any() or a2 == 0:
        raise BoundError("empty tail window or vanishing overlap")
    env = abs(a2) * np.exp(-gamma2 * t[sel])
    return float(np.max(np.abs(g[sel] / env - 1)))


def in_one_mode_regime(times, distances, a2: float, gamma2: float, t_cross: float, kappa: float) -> bool:
    """Numeric regime guard: the envelope deviation after ``t_cross`` is below κ."""
    try:
        return kappa_hat(times, distances, a2, gamma2, t_cross) < kappa
    except BoundError:
        return False


def slow_mode_norms(mode: SlowMode) -> tuple[float, float]:
    eig = hermitian_eig(mode.L2).eigenvalues
    return float(np.max(np.abs(eig))), float(np.sqrt(np.sum(eig**2)))
