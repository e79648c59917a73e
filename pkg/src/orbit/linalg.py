"""Hermitian linear algebra: spectral decomposition, functional calculus,
Löwner order, polar decomposition, and the matrix JSON format.

Matrices are plain complex ``numpy`` arrays. Functions that need a Hermitian
operand run it through :func:`hermitian`, which symmetrizes inputs that are
Hermitian up to rounding and rejects anything else.
"""
from __future__ import annotations

import contextlib
import contextvars
import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator

import numpy as np

if TYPE_CHECKING:
    from orbit.functions import ScalarFunction

HERMITIAN_ATOL = 1e-12
TAU_UNITARY = 1e-10
TAU_ORDER = 1e-8
DOMAIN_TOL = 1e-9


class LinalgError(ValueError):
    pass


class NotHermitianError(LinalgError):
    pass


class DimensionError(LinalgError):
    pass


class EigensolverError(LinalgError):
    def __init__(self, norm: float, dim: int):
        super().__init__(f"eigensolver failed to converge (dim={dim}, norm={norm:.6g})")
        self.norm = norm
        self.dim = dim


class DomainError(LinalgError):
    """An eigenvalue fell outside the domain of the function being applied."""

    def __init__(self, eigenvalue: float, domain):
        super().__init__(f"eigenvalue {eigenvalue!r} outside domain {domain}")
        self.eigenvalue = eigenvalue
        self.domain = domain


def as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {M.shape}")
    return M


def hermitian(M, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Return ``(M + M*)/2`` after checking that ``M`` is Hermitian to ``atol``."""
    M = as_matrix(M)
    if M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise LinalgError("matrix has non-finite entries")
    dev = np.max(np.abs(M - M.conj().T))
    if dev > atol * max(1.0, np.max(np.abs(M))):
        raise NotHermitianError(f"matrix is not Hermitian (max |M - M*| = {dev:.3g})")
    return (M + M.conj().T) / 2


def _check_same_shape(X: np.ndarray, Y: np.ndarray) -> None:
    if X.shape != Y.shape:
        raise DimensionError(f"dimension mismatch: {X.shape} vs {Y.shape}")


# --- eigensolver ----------------------------------------------------------

_PRECISE = contextvars.ContextVar("orbit_precise_eigensolver", default=False)


@contextlib.contextmanager
def precise_eigensolver(dps: int = 40) -> Iterator[None]:
    """Route :func:`spectral_decompose` through mpmath at ``dps`` digits.

    Used to re-verify apparent violations: a failure that disappears under
    the high-precision solver was eigensolver noise.
    """
    token = _PRECISE.set(dps)
    try:
        yield
    finally:
        _PRECISE.reset(token)


def _eigh_mpmath(A: np.ndarray, dps: int) -> tuple[np.ndarray, np.ndarray]:
    import mpmath

    with mpmath.workdps(dps):
        M = mpmath.matrix(A.tolist())
        w, Q = mpmath.eigh(M)
        n = A.shape[0]
        vals = np.array([float(mpmath.re(w[i])) for i in range(n)])
        vecs = np.array([[complex(Q[i, j]) for j in range(n)] for i in range(n)])
    return vals, vecs


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in non-increasing order with matching orthonormal eigenvectors
    as the columns of ``frame``."""

    eigenvalues: np.ndarray
    frame: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def reconstruct(self) -> np.ndarray:
        return (self.frame * self.eigenvalues) @ self.frame.conj().T

    def map(self, values) -> np.ndarray:
        """``frame · diag(values) · frame*``."""
        return hermitian((self.frame * np.asarray(values)) @ self.frame.conj().T, atol=np.inf)


def spectral_decompose(A) -> SpectralDecomposition:
    A = hermitian(A)
    dps = _PRECISE.get()
    try:
        if dps:
            w, Q = _eigh_mpmath(A, dps)
        else:
            w, Q = np.linalg.eigh(A)
    except (np.linalg.LinAlgError, ZeroDivisionError) as exc:
        raise EigensolverError(float(np.linalg.norm(A, 2)), A.shape[0]) from exc
    order = np.argsort(-w, kind="stable")
    return SpectralDecomposition(np.ascontiguousarray(w[order]), np.ascontiguousarray(Q[:, order]))


def eigenvalues(A) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, non-increasing."""
    if _PRECISE.get():
        return spectral_decompose(A).eigenvalues
    return np.linalg.eigvalsh(hermitian(A))[::-1].copy()


def spectral_radius(A) -> float:
    w = eigenvalues(A)
    return float(max(abs(w[0]), abs(w[-1])))


# --- functional calculus ------------------------------------------------------


def apply_function(f: "ScalarFunction", A) -> np.ndarray:
    """``f(A)`` through the spectral decomposition.

    Eigenvalues within ``DOMAIN_TOL`` of a closed domain endpoint are clamped
    onto it; anything further out raises :class:`DomainError`.
    """
    dec = spectral_decompose(A)
    lam = f.domain.clamp(dec.eigenvalues, DOMAIN_TOL * max(1.0, float(np.max(np.abs(dec.eigenvalues)))))
    return dec.map(f(lam))


def apply_scalar_map(func, A) -> np.ndarray:
    """Functional calculus for a bare vectorized callable (no domain checks)."""
    dec = spectral_decompose(A)
    return dec.map(func(dec.eigenvalues))


def psd_sqrt(A) -> np.ndarray:
    return apply_scalar_map(lambda t: np.sqrt(np.clip(t, 0, None)), A)


def positive_part(A) -> np.ndarray:
    """``A₊ = (A + |A|)/2``, computed spectrally."""
    return apply_scalar_map(lambda t: np.clip(t, 0, None), A)


def abs_hermitian(A) -> np.ndarray:
    return apply_scalar_map(np.abs, A)


def modulus(X) -> np.ndarray:
    """``|X| = (X*X)^{1/2}`` for a general square matrix."""
    X = as_matrix(X)
    return psd_sqrt(hermitian(X.conj().T @ X, atol=np.inf))


def direct_sum(*blocks) -> np.ndarray:
    blocks = [as_matrix(b) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=complex)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def conjugate(U, X) -> np.ndarray:
    """``U X U*``, re-symmetrized."""
    U = as_matrix(U)
    return hermitian(U @ as_matrix(X) @ U.conj().T, atol=np.inf)


# --- Löwner order -------------------------------------------------------------


@dataclass(frozen=True)
class OrderVerdict:
    holds: bool
    min_eigenvalue: float
    threshold: float

    def __bool__(self) -> bool:
        return self.holds


def loewner_leq(X, Y, tol: float = TAU_ORDER) -> OrderVerdict:
    """Decide ``X ≤ Y`` in the Löwner order.

    The verdict is true iff ``λ_min(Y - X) ≥ -tol · max(1, ρ(Y - X))``.
    """
    X, Y = hermitian(X, atol=np.inf), hermitian(Y, atol=np.inf)
    _check_same_shape(X, Y)
    w = eigenvalues(Y - X)
    threshold = -tol * max(1.0, abs(w[0]), abs(w[-1]))
    return OrderVerdict(bool(w[-1] >= threshold), float(w[-1]), threshold)


def is_psd(A, tol: float = TAU_ORDER) -> bool:
    A = hermitian(A, atol=np.inf)
    return bool(loewner_leq(np.zeros_like(A), A, tol))


def is_unitary(U, tol: float = TAU_UNITARY) -> bool:
    U = as_matrix(U)
    if U.shape[0] != U.shape[1]:
        return False
    return bool(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))) <= tol * max(1, U.shape[0]))


# --- polar decomposition -----------------------------------------------------


def polar_unitary(X) -> tuple[np.ndarray, np.ndarray]:
    """Polar decomposition ``X = W |X|`` with ``W`` unitary.

    Built from the SVD ``X = P Σ Q*``: ``W = P Q*``, ``|X| = Q Σ Q*``. For
    singular ``X`` the SVD frames already complete ``W`` on the kernel, and
    LAPACK's output is deterministic for a fixed input.
    """
    X = as_matrix(X)
    if X.shape[0] != X.shape[1]:
        raise DimensionError(f"polar decomposition needs a square matrix, got {X.shape}")
    P, s, Qh = np.linalg.svd(X)
    W = P @ Qh
    absX = hermitian((Qh.conj().T * s) @ Qh, atol=np.inf)
    return W, absX


def orthonormal_completion(rows: np.ndarray, skip_tol: float = 1e-6) -> np.ndarray:
    """Complete orthonormal rows to a square unitary by Gram–Schmidt against
    the standard basis, in order, skipping candidates whose residual norm
    falls below ``skip_tol``."""
    rows = as_matrix(rows)
    k, N = rows.shape
    basis = [r for r in rows]
    for i in range(N):
        if len(basis) == N:
            break
        v = np.zeros(N, dtype=complex)
        v[i] = 1.0
        for _ in range(2):  # second pass restores orthogonality lost to rounding
            for b in basis:
                v = v - np.vdot(b, v) * b
        nv = np.linalg.norm(v)
        if nv < skip_tol:
            continue
        basis.append(v / nv)
    if len(basis) != N:
        raise LinalgError("orthonormal completion failed; input rows are not orthonormal")
    return np.array(basis)


# --- matrix file format ---------------------------------------------------------


def matrix_to_json(M) -> dict:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        return {"rows": M.shape[0], "cols": M.shape[1],
                "entries": [[[z.real, z.imag] for z in row] for row in M]}
    return {"dim": M.shape[0], "entries": [[[z.real, z.imag] for z in row] for row in M]}


def matrix_from_json(obj: dict) -> np.ndarray:
    try:
        entries = obj["entries"]
        rows = obj.get("dim", obj.get("rows"))
        cols = obj.get("dim", obj.get("cols"))
        M = np.array([[complex(float(re), float(im)) for re, im in row] for row in entries])
    except (KeyError, TypeError, ValueError) as exc:
        raise LinalgError(f"malformed matrix object: {exc}") from exc
    if M.ndim != 2 or M.shape != (rows, cols):
        raise DimensionError(f"declared shape ({rows}, {cols}) does not match entries {M.shape}")
    if not np.all(np.isfinite(M)):
        raise LinalgError("matrix entries must be finite (NaN/Inf rejected)")
    return M


def vector_to_json(h) -> list:
    return [[z.real, z.imag] for z in np.asarray(h, dtype=complex).ravel()]


def vector_from_json(obj) -> np.ndarray:
    h = np.array([complex(float(re), float(im)) for re, im in obj])
    if not np.all(np.isfinite(h)):
        raise LinalgError("vector entries must be finite (NaN/Inf rejected)")
    return h


def dumps_matrix(M) -> str:
    return json.dumps(matrix_to_json(M))


def loads_matrix(text: str) -> np.ndarray:
    # json accepts the NaN/Infinity literals; matrix_from_json rejects them afterwards
    return matrix_from_json(json.loads(text))


def operator_norm(X) -> float:
    X = as_matrix(X)
    return float(np.linalg.norm(X, 2)) if X.size else 0.0


def relative_residual(X, Y) -> float:
    """``‖X - Y‖ / max(1, ‖Y‖)`` in the operator norm."""
    return operator_norm(as_matrix(X) - as_matrix(Y)) / max(1.0, operator_norm(Y))
