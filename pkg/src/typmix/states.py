"""Initial-state ensembles and their exact Haar moment formulas."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import is_hermitian, ket_to_dm, trace_norm

MAX_INDUCED_DIM = 4096
NORM_TOL = 1e-12
PSD_TOL = -1e-10


def substream(seed: int, index: int) -> np.random.Generator:
    """Independent generator for ensemble member ``index``.

    Counter-based (Philox) streams keyed by (seed, index) make every
    member reproducible regardless of which worker draws it or in what order.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(seed), int(index)])))


def check_pure_state(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim != 1:
        raise ValueError(f"pure state must be a vector, got shape {psi.shape}")
    if abs(np.linalg.norm(psi) - 1.0) > NORM_TOL:
        raise ValueError(f"pure state not normalized: norm = {np.linalg.norm(psi)!r}")
    return psi


def check_density_matrix(rho) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    tr = np.trace(rho).real
    if abs(tr - 1.0) > NORM_TOL:
        raise ValueError(f"density matrix trace {tr!r} != 1")
    lo = np.linalg.eigvalsh(rho)[0]
    if lo < PSD_TOL:
        raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
    return rho


def sample_haar_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    if d < 2:
        raise ValueError(f"Haar sampling needs d >= 2, got {d}")
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def sample_haar_pure_batch(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar vectors as rows of an (n, d) array."""
    if d < 2:
        raise ValueError(f"Haar sampling needs d >= 2, got {d}")
    z = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sample_induced(d: int, d_b: int, rng: np.random.Generator) -> np.ndarray:
    """Reduced state of a Haar vector on C^d ⊗ C^{d_b}."""
    if d < 2 or d_b < 1:
        raise ValueError(f"induced ensemble needs d >= 2 and d_B >= 1, got {d}, {d_b}")
    if d * d_b > MAX_INDUCED_DIM:
        raise ValueError(f"induced ensemble dimension {d * d_b} exceeds {MAX_INDUCED_DIM}")
    z = rng.standard_normal((d, d_b)) + 1j * rng.standard_normal((d, d_b))
    z /= np.linalg.norm(z)
    return z @ z.conj().T


def haar_moment_mean(o) -> float:
    o = np.asarray(o)
    return float(np.trace(o).real / o.shape[0])


def haar_moment_var(o) -> float:
    o = np.asarray(o)
    d = o.shape[0]
    tr = np.trace(o).real
    tr2 = np.trace(o @ o).real
    return float((tr2 - tr**2 / d) / (d * (d + 1)))


def induced_moment_var(o, d_b: int) -> float:
    o = np.asarray(o)
    d = o.shape[0]
    tr = np.trace(o).real
    tr2 = np.trace(o @ o).real
    return float((tr2 - tr**2 / d) / (d * (d * d_b + 1)))


def _logical_marginal(psi, dims) -> np.ndarray:
    D, N = (int(x) for x in dims)
    psi = np.asarray(psi)
    if psi.shape[-1] != D * N:
        raise ValueError(f"state length {psi.shape[-1]} does not match dims ({D}, {N})")
    m = psi.reshape(psi.shape[:-1] + (D, N))
    return m @ np.conj(np.swapaxes(m, -1, -2))


def logical_overlap(psi, dims) -> float:
    """‖Tr_syn |ψ⟩⟨ψ| − I/D‖₁ for ψ on C^D ⊗ C^N."""
    rho = _logical_marginal(psi, dims)
    D = rho.shape[-1]
    return trace_norm(rho - np.eye(D) / D)


def logical_purity(psi, dims):
    """Purity Tr(ρ_log²); vectorized over leading axes of ``psi``."""
    rho = _logical_marginal(psi, dims)
    return np.real(np.einsum("...ij,...ji->...", rho, rho))


@dataclass(frozen=True)
class EnsembleSpec:
    """Initial-state ensemble; member ``i`` is drawn from substream (seed, i).

    ``kind`` is one of ``haar_pure``, ``induced`` or ``basis``. Pure kinds
    return state vectors, ``induced`` returns density matrices.
    """

    kind: str
    d: int
    d_b: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("haar_pure", "induced", "basis"):
            raise ValueError(f"unknown ensemble kind {self.kind!r}")
        if self.d < 2:
            raise ValueError("ensemble needs d >= 2")
        if self.d_b < 1:
            raise ValueError("ensemble needs d_B >= 1")

    def sample(self, index: int) -> np.ndarray:
        if self.kind == "basis":
            e = np.zeros(self.d, dtype=complex)
            e[index % self.d] = 1.0
            return e
        rng = substream(self.seed, index)
        if self.kind == "haar_pure":
            return sample_haar_pure(self.d, rng)
        return sample_induced(self.d, self.d_b, rng)

    @property
    def barycenter(self) -> np.ndarray:
        return np.eye(self.d, dtype=complex) / self.d


def as_density(state) -> np.ndarray:
    state = np.asarray(state)
    if state.ndim == 1:
        return ket_to_dm(state)
    return state

