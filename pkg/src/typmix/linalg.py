"""Dense complex matrix kernel.

Hermitian spectra, trace norms, a scaling-and-squaring exponential,
tensor products and partial traces. Everything here is a pure function
of numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITIAN_RTOL = 1e-12
HERMITIAN_ATOL = 1e-13
EXPM_TOL = 1e-10


class LinalgError(ValueError):
    pass


@dataclass(frozen=True)
class HermitianEigResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _hermitian_defect(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - np.conj(np.swapaxes(a, -1, -2))), initial=0.0))


def is_hermitian(a, rtol: float = HERMITIAN_RTOL) -> bool:
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        return False
    scale = float(np.max(np.abs(a), initial=0.0))
    return _hermitian_defect(a) <= rtol * scale + HERMITIAN_ATOL


def _require_hermitian(a: np.ndarray, what: str = "matrix") -> None:
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise LinalgError(f"{what} must be square, got shape {a.shape}")
    if not is_hermitian(a):
        scale = float(np.max(np.abs(a), initial=0.0))
        raise LinalgError(
            f"{what} is not Hermitian: max|A - A^H| = {_hermitian_defect(a):.3e} "
            f"exceeds {HERMITIAN_RTOL:g} * max|A| + {HERMITIAN_ATOL:g} = {HERMITIAN_RTOL * scale + HERMITIAN_ATOL:.3e}"
        )


def hermitian_eig(a) -> HermitianEigResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    a = np.asarray(a)
    _require_hermitian(a)
    # symmetrize away the sub-tolerance noise before handing to LAPACK
    h = 0.5 * (a + a.conj().T)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise LinalgError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return HermitianEigResult(w, v)


def trace_norm(a) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    a = np.asarray(a)
    _require_hermitian(a)
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (a + a.conj().T)))))


def trace_norms(stack) -> np.ndarray:
    """Trace norms of a stack of Hermitian matrices with shape (..., d, d)."""
    stack = np.asarray(stack)
    _require_hermitian(stack, "stack")
    herm = 0.5 * (stack + np.conj(np.swapaxes(stack, -1, -2)))
    return np.sum(np.abs(np.linalg.eigvalsh(herm)), axis=-1)


def operator_norm(a) -> float:
    """Largest absolute eigenvalue of a Hermitian matrix."""
    return float(np.max(np.abs(hermitian_eig(a).eigenvalues)))


def matrix_exp(a, t: float = 1.0) -> np.ndarray:
    """e^{tA} by scaling and squaring a truncated Taylor series.

    The series order adapts to the scaled norm so that the truncation
    remainder stays below ``EXPM_TOL`` relative to the norm bound.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise LinalgError(f"matrix_exp needs a square matrix, got shape {a.shape}")
    if t < 0:
        raise LinalgError(f"matrix_exp needs t >= 0, got {t}")
    n = a.shape[0]
    dtype = np.result_type(a.dtype, np.float64)
    x = t * a.astype(dtype)
    norm = float(np.max(np.sum(np.abs(x), axis=0), initial=0.0))
    if not math.isfinite(norm):
        raise LinalgError(f"matrix_exp: non-finite input norm ||tA||_1 = {norm}")
    squarings = max(0, math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0
    x = x / (2.0**squarings)
    theta = norm / 2.0**squarings

    result = np.eye(n, dtype=dtype)
    term = np.eye(n, dtype=dtype)
    # Taylor remainder after order k is bounded by theta^(k+1)/(k+1)! * e^theta
    k = 0
    bound = 1.0
    while True:
        k += 1
        term = term @ x / k
        result = result + term
        bound *= theta / k
        if bound * theta / (k + 1) * math.e**theta <= EXPM_TOL * 1e-6 or k >= 40:
            break
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            result = result @ result
    if not np.all(np.isfinite(result)):
        raise LinalgError(
            f"matrix_exp overflow: ||tA||_1 = {norm:.3e} after {squarings} squarings"
        )
    return result


def kron(*mats) -> np.ndarray:
    if not mats:
        raise LinalgError("kron needs at least one factor")
    return reduce(np.kron, (np.asarray(m) for m in mats))


def partial_trace(a, dims, keep) -> np.ndarray:
    """Reduced operator on the subsystems listed in ``keep``.

    ``dims`` are the tensor factor dimensions; ``keep`` is an index or a
    sequence of indices into ``dims``.
    """
    a = np.asarray(a)
    dims = [int(x) for x in dims]
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise LinalgError(f"partial_trace: matrix shape {a.shape} does not match dims {dims}")
    keep = [keep] if np.isscalar(keep) else sorted(int(k) for k in keep)
    if any(k < 0 or k >= len(dims) for k in keep):
        raise LinalgError(f"partial_trace: keep={keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = a.reshape(dims + dims)
    traced = [i for i in range(n) if i not in keep]
    # contract each traced row index with its column index
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise LinalgError("partial_trace: too many tensor factors")
    rows = list(letters[:n])
    cols = list(letters[n : 2 * n])
    for i in traced:
        cols[i] = rows[i]
    out = "".join(rows[i] for i in keep) + "".join(cols[i] for i in keep)
    red = np.einsum("".join(rows) + "".join(cols) + "->" + out, t)
    dk = int(np.prod([dims[i] for i in keep]))
    return red.reshape(dk, dk)


def ket_to_dm(psi) -> np.ndarray:
    psi = np.asarray(psi)
    return np.outer(psi, psi.conj())


def gell_mann_basis(d: int) -> np.ndarray:
    """Traceless Hermitian basis, orthonormal in the Hilbert-Schmidt product.

    Returns an array of shape (d*d - 1, d, d): symmetric and antisymmetric
    off-diagonal families followed by the diagonal family.
    """
    if d < 2:
        raise LinalgError("gell_mann_basis needs d >= 2")
    out = []
    s = 1 / math.sqrt(2)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = s
            out.append(m)
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j * s
            m[k, j] = 1j * s
            out.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(np.diag(diag / math.sqrt(l * (l + 1))).astype(complex))
    return np.array(out)
