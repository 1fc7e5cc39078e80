"""Exact finite-time channels for the model families.

Every channel is an immutable dataclass exposing ``evolve_grid`` (the map
Λ_t applied at each time of a grid), its stationary state and, where the
dominant mode is simple and real, its slow mode. The factorized families
are evaluated site by site from closed-form one-site channels; the dense
Lindblad oracle exponentiates the full superoperator and is only meant for
small cross-checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .linalg import hermitian_eig, kron, matrix_exp, trace_norms
from .states import as_density, check_pure_state

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DENSE_MAX_DIM = 32


class ModelError(ValueError):
    pass


@dataclass(frozen=True)
class SlowMode:
    L2: np.ndarray
    R2: np.ndarray
    gamma2: float


def _grid(times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1:
        raise ModelError("times must be a scalar or a 1-D grid")
    if np.any(t < 0):
        raise ModelError("times must be nonnegative")
    return t


# -- one-site superoperators -------------------------------------------------
# S[..., a, b, c, e] maps the input entry rho[c, e] to the output entry rho'[a, b].


def apply_local(stack: np.ndarray, dims, site: int, sup: np.ndarray) -> np.ndarray:
    """Apply a one-site superoperator to a stack of operators of shape (nt, d, d).

    ``sup`` has shape (nt, k, k, k, k) with k = dims[site].
    """
    dims = list(dims)
    nt, d, _ = stack.shape
    k = dims[site]
    a = int(np.prod(dims[:site], dtype=int))
    b = int(np.prod(dims[site + 1 :], dtype=int))
    # bring the site's (row, column) pair to the front and contract as a batched matmul
    t = stack.reshape(nt, a, k, b, a, k, b).transpose(0, 2, 5, 1, 3, 4, 6).reshape(nt, k * k, -1)
    out = np.matmul(sup.reshape(nt, k * k, k * k), t)
    out = out.reshape(nt, k, k, a, b, a, b).transpose(0, 3, 1, 4, 5, 2, 6)
    return out.reshape(nt, d, d)


def thermal_qubit_superop(times, p1: float, rate: float = 1.0) -> np.ndarray:
    """One-qubit Davies channel: populations relax to (1-p1, p1) at ``rate``,
    coherences decay at rate/2."""
    e = np.exp(-rate * times)
    c = np.exp(-0.5 * rate * times)
    p0 = 1.0 - p1
    s = np.zeros((len(times), 2, 2, 2, 2), dtype=complex)
    s[:, 0, 0, 0, 0] = p0 + e * p1
    s[:, 0, 0, 1, 1] = p0 * (1 - e)
    s[:, 1, 1, 1, 1] = p1 + e * p0
    s[:, 1, 1, 0, 0] = p1 * (1 - e)
    s[:, 0, 1, 0, 1] = c
    s[:, 1, 0, 1, 0] = c
    return s


def reset_superop(times, target: np.ndarray, rate: float) -> np.ndarray:
    """e^{t·rate·R} with R(Y) = Tr(Y)·target − Y."""
    k = target.shape[0]
    e = np.exp(-rate * times)
    eye = np.eye(k)
    ident = np.einsum("ac,be->abce", eye, eye)
    repl = np.einsum("ab,ce->abce", target, eye)
    return e[:, None, None, None, None] * ident + (1 - e)[:, None, None, None, None] * repl


def apply_reset(stack: np.ndarray, dims, site: int, target: np.ndarray, times, rate: float) -> np.ndarray:
    """e^{t·rate·R} on one factor, R(Y) = Tr(Y)·target − Y, without forming the superoperator."""
    n = len(dims)
    shape = stack.shape
    x = stack.reshape((shape[0],) + tuple(dims) * 2)
    reduced = np.trace(x, axis1=1 + site, axis2=1 + n + site)
    refilled = np.moveaxis(np.multiply.outer(reduced, target), [-2, -1], [1 + site, 1 + n + site])
    e = np.exp(-rate * np.asarray(times))[:, None, None]
    return e * stack + (1 - e) * refilled.reshape(shape)


def pauli_superop(times, rates: dict) -> np.ndarray:
    """Pauli-diagonal qubit channel; coefficient of P decays as e^{-rates[P] t}."""
    s = np.zeros((len(times), 2, 2, 2, 2), dtype=complex)
    for name, p in PAULI.items():
        f = np.exp(-rates.get(name, 0.0) * times)
        # Λ(ρ) = Σ_P f_P Tr(Pρ) P / 2
        s += f[:, None, None, None, None] * np.einsum("ab,ec->abce", p, p)[None] / 2
    return s


def embed(op: np.ndarray, dims, site: int) -> np.ndarray:
    """Operator acting as ``op`` on one tensor factor and trivially elsewhere."""
    factors = [np.eye(k) for k in dims]
    factors[site] = op
    return kron(*factors)


# -- dense oracle -------------------------------------------------------------


def dense_superoperator(jumps, dim: int, hamiltonian=None) -> np.ndarray:
    """Row-major superoperator of Σ_k r_k D_{J_k} (plus −i[H, ·] if given)."""
    eye = np.eye(dim)
    sup = np.zeros((dim * dim, dim * dim), dtype=complex)
    if hamiltonian is not None:
        h = np.asarray(hamiltonian)
        sup += -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for rate, j in jumps:
        j = np.asarray(j, dtype=complex)
        jd = j.conj().T @ j
        sup += rate * (np.kron(j, j.conj()) - 0.5 * np.kron(jd, eye) - 0.5 * np.kron(eye, jd.T))
    return sup


class Channel:
    """Shared behaviour of the model families."""

    population = False

    @property
    def dim(self) -> int:  # pragma: no cover - overridden
        raise NotImplementedError

    def prepare(self, state) -> np.ndarray:
        rho = as_density(state)
        if rho.shape != (self.dim, self.dim):
            raise ModelError(f"state shape {rho.shape} does not match model dimension {self.dim}")
        return rho

    def evolve(self, state, t: float) -> np.ndarray:
        return self.evolve_grid(state, [t])[0]

    def evolve_grid(self, state, times) -> np.ndarray:  # pragma: no cover - overridden
        raise NotImplementedError

    def stationary_state(self) -> np.ndarray:  # pragma: no cover - overridden
        raise NotImplementedError

    def slow_mode(self) -> SlowMode:
        raise ModelError(f"{type(self).__name__} has no simple real dominant mode")

    def jump_operators(self):
        raise ModelError(f"{type(self).__name__} has no dense Lindblad form")

    def curve(self, state, times) -> np.ndarray:
        """Distances to the stationary state along a time grid."""
        return self.distances(self.evolve_grid(state, times))

    def distances(self, evolved: np.ndarray) -> np.ndarray:
        diff = evolved - self.stationary_state()
        idx = np.arange(self.dim)
        off = diff.copy()
        off[..., idx, idx] = 0
        if not np.any(off):
            # diagonal differences: the trace norm is the ℓ1 norm of the diagonal
            return np.sum(np.abs(np.real(diff[..., idx, idx])), axis=-1)
        return trace_norms(diff)

    def dense(self) -> "DenseLindblad":
        return DenseLindblad(self.dim, tuple(self.jump_operators()))


@dataclass(frozen=True)
class DaviesChain(Channel):
    n: int
    beta: float = 1.2
    omega: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("Davies chain needs n >= 1")

    @property
    def dim(self):
        return 2**self.n

    @property
    def rates(self):
        """(γ_down, γ_up) with γ_up/γ_down = e^{−βω} and γ_up + γ_down = 1."""
        boltz = math.exp(-self.beta * self.omega)
        return 1 / (1 + boltz), boltz / (1 + boltz)

    @property
    def p1(self):
        return self.rates[1]

    def evolve_grid(self, state, times):
        t = _grid(times)
        rho = self.prepare(state)
        stack = np.broadcast_to(rho, (len(t),) + rho.shape).astype(complex)
        sup = thermal_qubit_superop(t, self.p1)
        dims = [2] * self.n
        for j in range(self.n):
            stack = apply_local(stack, dims, j, sup)
        return stack

    def stationary_state(self):
        tau = np.diag([1 - self.p1, self.p1]).astype(complex)
        return kron(*([tau] * self.n))

    def jump_operators(self):
        down, up = self.rates
        lower = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
        dims = [2] * self.n
        ops = []
        for j in range(self.n):
            ops.append((down, embed(lower, dims, j)))
            ops.append((up, embed(lower.T.copy(), dims, j)))
        return ops


@dataclass(frozen=True)
class PauliBoundary(Channel):
    L: int
    delta: float = 0.25
    gamma: float = 4.0

    def __post_init__(self):
        if self.L < 1:
            raise ModelError("Pauli boundary chain needs L >= 1")
        if not 0 < self.delta < self.gamma:
            raise ModelError(f"need 0 < Δ < Γ, got Δ={self.delta}, Γ={self.gamma}")

    @property
    def dim(self):
        return 2**self.L

    def site_rates(self, site: int) -> dict:
        if site == 0:
            return {"X": self.gamma, "Y": self.gamma + self.delta, "Z": self.delta}
        return {"X": self.gamma, "Y": 2 * self.gamma, "Z": self.gamma}

    def evolve_grid(self, state, times):
        t = _grid(times)
        rho = self.prepare(state)
        stack = np.broadcast_to(rho, (len(t),) + rho.shape).astype(complex)
        dims = [2] * self.L
        boundary = pauli_superop(t, self.site_rates(0))
        bulk = pauli_superop(t, self.site_rates(1)) if self.L > 1 else None
        for j in range(self.L):
            stack = apply_local(stack, dims, j, boundary if j == 0 else bulk)
        return stack

    def stationary_state(self):
        return np.eye(self.dim, dtype=complex) / self.dim

    def slow_mode(self):
        l2 = embed(PAULI["Z"], [2] * self.L, 0)
        return SlowMode(l2, l2 / self.dim, self.delta)

    def jump_operators(self):
        dims = [2] * self.L
        ops = [
            (self.delta / 2, embed(PAULI["X"], dims, 0)),
            (self.gamma / 2, embed(PAULI["Z"], dims, 0)),
        ]
        for j in range(1, self.L):
            ops.append((self.gamma / 2, embed(PAULI["X"], dims, j)))
            ops.append((self.gamma / 2, embed(PAULI["Z"], dims, j)))
        return ops


def skin_generator(L: int, gamma_r: float = 1.6, gamma_l: float = 0.4, lam: float = 1.0) -> np.ndarray:
    """Open biased-hopping generator; column x holds the rates out of site x."""
    if L < 2:
        raise ModelError("skin chain needs L >= 2")
    if min(gamma_r, gamma_l, lam) <= 0:
        raise ModelError("skin rates must be positive")
    q = np.zeros((L, L))
    idx = np.arange(L - 1)
    q[idx + 1, idx] = lam * gamma_r
    q[idx, idx + 1] = lam * gamma_l
    q[np.arange(L), np.arange(L)] = -q.sum(axis=0)
    return q


def skin_evolve(p, t: float, q) -> np.ndarray:
    return matrix_exp(q, t) @ np.asarray(p, dtype=float)


@dataclass(frozen=True)
class SkinPopulation(Channel):
    """Population sector of the one-particle biased hopping chain (ℓ₁ distance)."""

    L: int
    gamma_r: float = 1.6
    gamma_l: float = 0.4
    lam: float = 1.0

    population = True

    def __post_init__(self):
        skin_generator(self.L, self.gamma_r, self.gamma_l, self.lam)

    @property
    def dim(self):
        return self.L

    @cached_property
    def generator(self) -> np.ndarray:
        return skin_generator(self.L, self.gamma_r, self.gamma_l, self.lam)

    def prepare(self, state) -> np.ndarray:
        s = np.asarray(state)
        if s.shape[0] != self.L:
            raise ModelError(f"population state length {s.shape[0]} != L = {self.L}")
        if np.iscomplexobj(s):
            return np.abs(s) ** 2
        return s.astype(float)

    def evolve_grid(self, state, times):
        """Populations at each grid time; ``state`` may carry extra trailing
        columns (one per ensemble member)."""
        t = _grid(times)
        p = self.prepare(state)
        order = np.argsort(t, kind="stable")
        out = np.empty((len(t),) + p.shape)
        cur, now = p, 0.0
        for i in order:
            step = t[i] - now
            if step > 0:
                cur = matrix_exp(self.generator, step) @ cur
                now = t[i]
            out[i] = cur
        return out

    def stationary_state(self):
        # π_x ∝ (γ_R/γ_L)^x, normalized from the right end to avoid overflow
        x = np.arange(self.L)
        w = np.exp((x - (self.L - 1)) * math.log(self.gamma_r / self.gamma_l))
        return w / w.sum()

    def distances(self, evolved):
        pi = self.stationary_state()
        diff = evolved - (pi if evolved.ndim == 2 else pi[:, None])
        return np.sum(np.abs(diff), axis=1)

    def _symmetrized(self):
        # detailed balance: D^{-1/2} Q D^{1/2} is symmetric tridiagonal
        a, b = self.lam * self.gamma_r, self.lam * self.gamma_l
        s = np.zeros((self.L, self.L))
        idx = np.arange(self.L - 1)
        s[idx + 1, idx] = s[idx, idx + 1] = math.sqrt(a * b)
        s[np.arange(self.L), np.arange(self.L)] = np.diag(self.generator)
        return s

    def spectrum(self) -> np.ndarray:
        """Relaxation rates −λ_k of Q_L, ascending (the first is 0)."""
        return np.sort(-hermitian_eig(self._symmetrized()).eigenvalues)

    def slow_mode(self):
        eig = hermitian_eig(self._symmetrized())
        order = np.argsort(-eig.eigenvalues)
        k = order[1]
        v = eig.eigenvectors[:, k]
        half = 0.5 * (np.arange(self.L) - (self.L - 1)) * math.log(self.gamma_r / self.gamma_l)
        r = v * np.exp(half)
        l = v * np.exp(-half)
        norm = np.sum(np.abs(r))
        r, l = r / norm, l * norm
        return SlowMode(np.diag(l).astype(complex), np.diag(r).astype(complex), float(-eig.eigenvalues[k]))

    def jump_operators(self):
        ops = []
        for x in range(self.L - 1):
            hop = np.zeros((self.L, self.L), dtype=complex)
            hop[x + 1, x] = 1
            ops.append((self.lam * self.gamma_r, hop))
            ops.append((self.lam * self.gamma_l, hop.T.copy()))
        return ops


@dataclass(frozen=True)
class ProtectedSector(Channel):
    """Unit-rate dephasing plus the symmetric jump process with one protected state."""

    d: int
    eta: float

    def __post_init__(self):
        if self.d < 3:
            raise ModelError("protected sector needs d >= 3")
        if not 0 < self.eta <= 1:
            raise ModelError(f"leakage rate must lie in (0, 1], got {self.eta}")

    @property
    def dim(self):
        return self.d

    @property
    def gamma_s(self):
        return self.eta * (1 + 1 / (self.d - 1))

    @property
    def gamma_b(self):
        return 1 + 1 / (self.d - 2) + self.eta / (self.d - 1)

    @property
    def escape_rates(self) -> np.ndarray:
        r = np.full(self.d, 1 + self.eta / (self.d - 1))
        r[0] = self.eta
        return r

    @property
    def protected_vector(self) -> np.ndarray:
        b = np.full(self.d, -1 / (self.d - 1))
        b[0] = 1.0
        return b

    def evolve_grid(self, state, times):
        t = _grid(times)
        rho = self.prepare(state)
        d = self.d
        pops = self._populations(np.real(np.diag(rho)), t)
        r = self.escape_rates
        pair = 1.0 + 0.5 * (r[:, None] + r[None, :])
        off = rho - np.diag(np.diag(rho))
        out = np.exp(-t[:, None, None] * pair[None]) * off[None]
        idx = np.arange(d)
        out[:, idx, idx] = pops
        return out

    def _populations(self, p, t):
        # linear in p: uniform part, protected mode b, and the bulk remainder
        u = np.full(self.d, np.sum(p) / self.d)
        b = self.protected_vector
        slow = p[0] - u[0]
        w = p - u - slow * b
        return (
            u[None, :]
            + np.exp(-self.gamma_s * t)[:, None] * slow * b[None, :]
            + np.exp(-self.gamma_b * t)[:, None] * w[None, :]
        )

    def curve(self, state, times):
        s = np.asarray(state)
        if s.ndim == 1 and np.count_nonzero(s) > 1:
            return self._pure_curve(check_pure_state(s), _grid(times))
        rho = self.prepare(state)
        if np.any(rho - np.diag(np.diag(rho))):
            return super().curve(rho, times)
        # diagonal inputs stay diagonal: ℓ1 distance of the populations
        pops = self._populations(np.real(np.diag(rho)), _grid(times))
        return np.sum(np.abs(pops - 1 / self.d), axis=1)

    def _pure_curve(self, psi, t):
        # Coherences of a pure state decay as e^{-t}·φφ† with φ = e^{-tR/2}|ψ|
        # after removing phases, so Λ_t(ψψ†) − σ is real diagonal plus rank one.
        a = np.abs(psi)
        pops = self._populations(a**2, t)
        decay = np.exp(-t)
        phi = a[None, :] * np.exp(-0.5 * t[:, None] * self.escape_rates[None, :])
        m = decay[:, None, None] * phi[:, :, None] * phi[:, None, :]
        idx = np.arange(self.d)
        m[:, idx, idx] = pops - 1 / self.d
        return np.sum(np.abs(np.linalg.eigvalsh(m)), axis=-1)

    def stationary_state(self):
        return np.eye(self.d, dtype=complex) / self.d

    def slow_mode(self):
        b = self.protected_vector
        r2 = np.diag(b / np.sum(np.abs(b))).astype(complex)
        l2 = np.diag(b * np.sum(np.abs(b)) / (b @ b)).astype(complex)
        if self.gamma_s >= 1:
            raise ModelError("protected mode is not dominant for η this large")
        return SlowMode(l2, r2, self.gamma_s)

    def jump_operators(self):
        d = self.d
        ops = []
        for x in range(d):
            proj = np.zeros((d, d), dtype=complex)
            proj[x, x] = 1
            ops.append((1.0, proj))
        for i in range(d):
            for j in range(d):
                if i == j:
                    continue
                rate = self.eta / (d - 1) if 0 in (i, j) else 1 / (d - 2)
                hop = np.zeros((d, d), dtype=complex)
                hop[j, i] = 1  # i -> j
                ops.append((rate, hop))
        return ops


def _reset_jumps(target: np.ndarray, rate: float, dims, site: int):
    """Jump operators realizing Y ↦ rate·(Tr(Y)·target − Y) on one factor."""
    k = target.shape[0]
    eig = hermitian_eig(target)
    ops = []
    for j in range(k):
        pj = eig.eigenvalues[j]
        if pj <= 0:
            continue
        for m in range(k):
            e = np.zeros(k, dtype=complex)
            e[m] = 1
            ops.append((rate * pj, embed(np.outer(eig.eigenvectors[:, j], e), dims, site)))
    return ops


@dataclass(frozen=True)
class LogicalProduct(Channel):
    """η·D_log ⊗ id + id ⊗ R on C^D ⊗ C^N with syndrome reset to ``pi``."""

    D: int
    N: int
    eta: float
    pi: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        if self.D < 2 or self.N < 1:
            raise ModelError("logical product needs D >= 2 and N >= 1")
        if not 0 < self.eta <= 1:
            raise ModelError(f"leakage rate must lie in (0, 1], got {self.eta}")
        pi = np.eye(self.N, dtype=complex) / self.N if self.pi is None else np.asarray(self.pi, dtype=complex)
        if pi.shape != (self.N, self.N):
            raise ModelError(f"π must be {self.N}x{self.N}")
        w = np.linalg.eigvalsh(0.5 * (pi + pi.conj().T))
        if abs(np.trace(pi).real - 1) > 1e-12 or w[0] < -1e-12 or np.max(np.abs(pi - pi.conj().T)) > 1e-12:
            raise ModelError("π is not a valid density matrix")
        object.__setattr__(self, "pi", pi)

    @property
    def dim(self):
        return self.D * self.N

    def evolve_grid(self, state, times):
        t = _grid(times)
        rho = self.prepare(state)
        stack = np.broadcast_to(rho, (len(t),) + rho.shape).astype(complex)
        dims = [self.D, self.N]
        stack = apply_reset(stack, dims, 0, np.eye(self.D) / self.D, t, self.eta)
        return apply_reset(stack, dims, 1, self.pi, t, 1.0)

    def stationary_state(self):
        return np.kron(np.eye(self.D) / self.D, self.pi)

    def jump_operators(self):
        dims = [self.D, self.N]
        return _reset_jumps(np.eye(self.D) / self.D, self.eta, dims, 0) + _reset_jumps(self.pi, 1.0, dims, 1)


def thermal_qubit(beta: float) -> np.ndarray:
    p = math.exp(-beta) / (1 + math.exp(-beta))
    return np.diag([1 - p, p]).astype(complex)


@dataclass(frozen=True)
class LogicalMicro(Channel):
    """Logical qubit depolarizing at η_L = e^{−cL} plus L syndrome qubits reset to τ_β at rate Γ."""

    L: int
    beta: float = 1.8
    gamma: float = 2.0
    c: float = 0.75

    def __post_init__(self):
        if self.L < 1:
            raise ModelError("logical micro model needs L >= 1")

    @property
    def dim(self):
        return 2 ** (self.L + 1)

    @property
    def eta(self):
        return math.exp(-self.c * self.L)

    @property
    def tau(self):
        return thermal_qubit(self.beta)

    def evolve_grid(self, state, times):
        t = _grid(times)
        rho = self.prepare(state)
        stack = np.broadcast_to(rho, (len(t),) + rho.shape).astype(complex)
        dims = [2] * (self.L + 1)
        stack = apply_local(stack, dims, 0, reset_superop(t, np.eye(2) / 2, self.eta))
        syn = reset_superop(t, self.tau, self.gamma)
        for j in range(1, self.L + 1):
            stack = apply_local(stack, dims, j, syn)
        return stack

    def stationary_state(self):
        return kron(np.eye(2) / 2, *([self.tau] * self.L))

    def slow_state(self) -> np.ndarray:
        e = np.zeros(self.dim, dtype=complex)
        e[0] = 1
        return e

    def fast_state(self) -> np.ndarray:
        """(|0,0,0,…⟩ + |1,1,0,…⟩)/√2 with the logical qubit first."""
        e = np.zeros(self.dim, dtype=complex)
        e[0] = 1 / math.sqrt(2)
        e[(1 << self.L) + (1 << (self.L - 1))] = 1 / math.sqrt(2)
        return e

    def jump_operators(self):
        dims = [2] * (self.L + 1)
        ops = _reset_jumps(np.eye(2) / 2, self.eta, dims, 0)
        for j in range(1, self.L + 1):
            ops += _reset_jumps(self.tau, self.gamma, dims, j)
        return ops


@dataclass(frozen=True)
class DenseLindblad(Channel):
    """Verification oracle: exponentiates the full d²×d² superoperator."""

    d: int
    jumps: tuple = ()

    def __post_init__(self):
        if self.d > DENSE_MAX_DIM:
            raise ModelError(f"dense oracle limited to d <= {DENSE_MAX_DIM}, got {self.d}")

    @property
    def dim(self):
        return self.d

    @cached_property
    def superoperator(self) -> np.ndarray:
        return dense_superoperator(self.jumps, self.d)

    def evolve_grid(self, state, times):
        t = _grid(times)
        rho = self.prepare(state)
        vec = rho.reshape(-1)
        return np.array([(matrix_exp(self.superoperator, s) @ vec).reshape(self.d, self.d) for s in t])

    def stationary_state(self):
        _, _, vh = np.linalg.svd(self.superoperator)
        rho = vh[-1].conj().reshape(self.d, self.d)
        rho = rho / np.trace(rho)
        return 0.5 * (rho + rho.conj().T)


def davies_evolve(state, t, n, beta=1.2, omega=1.0):
    return DaviesChain(n, beta, omega).evolve(state, t)


def pauli_boundary_evolve(state, t, L, delta=0.25, gamma=4.0):
    return PauliBoundary(L, delta, gamma).evolve(state, t)


def protected_evolve(state, t, d, eta):
    return ProtectedSector(d, eta).evolve(state, t)


def logical_product_evolve(state, t, D, N, eta, pi=None):
    return LogicalProduct(D, N, eta, pi).evolve(state, t)


def logical_micro_evolve(state, t, L, beta=1.8, gamma=2.0, c=0.75):
    return LogicalMicro(L, beta, gamma, c).evolve(state, t)


def dense_lindblad_evolve(state, t, jumps):
    rho = as_density(state)
    return DenseLindblad(rho.shape[0], tuple(jumps)).evolve(rho, t)


def stationary_state(channel: Channel):
    return channel.stationary_state()


def slow_mode(channel: Channel) -> SlowMode:
    return channel.slow_mode()


FAMILIES = {
    "davies_chain": DaviesChain,
    "pauli_boundary": PauliBoundary,
    "skin_population": SkinPopulation,
    "protected_sector": ProtectedSector,
    "logical_product": LogicalProduct,
    "logical_micro": LogicalMicro,
    "dense_generic": DenseLindblad,
}
