"""Random operands for the inequality suites.

Every sampler draws from an explicit ``numpy.random.Generator``; the harness
builds one Philox stream per ``(master seed, suite id, trial)`` so that
trials are reproducible independently of execution order.
"""
from __future__ import annotations

import math
import zlib
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from orbit.linalg import hermitian


class GeneratorError(ValueError):
    pass


def trial_rng(seed: int, suite_id: str, trial: int) -> np.random.Generator:
    """Counter-based stream keyed by the master seed, suite id and trial index."""
    key = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, zlib.crc32(suite_id.encode()), int(trial)])
    return np.random.Generator(np.random.Philox(key))


def complex_gaussian(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / math.sqrt(2)


def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    # QR of a Ginibre matrix, with the phases of R's diagonal folded back in
    Q, R = np.linalg.qr(complex_gaussian(rng, n, n))
    d = np.diag(R)
    phases = np.where(np.abs(d) > 0, d / np.abs(d), 1.0)
    return Q * phases[None, :]


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None,
               scale: float = 1.0) -> np.ndarray:
    """``G*G / n`` with ``G`` a ``rank × n`` complex Gaussian matrix."""
    r = n if rank is None else rank
    G = complex_gaussian(rng, r, n)
    return hermitian(scale * (G.conj().T @ G) / n, atol=np.inf)


def random_hermitian_in(rng: np.random.Generator, n: int, lo: float, hi: float) -> np.ndarray:
    """Random frame with eigenvalues uniform in ``[lo, hi]``."""
    if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
        raise GeneratorError(f"need a bounded interval, got [{lo}, {hi}]")
    U = haar_unitary(rng, n)
    lam = rng.uniform(lo, hi, n)
    return hermitian((U * lam[None, :]) @ U.conj().T, atol=np.inf)


def random_singular(rng: np.random.Generator, n: int, s: np.ndarray) -> np.ndarray:
    return (haar_unitary(rng, n) * s[None, :]) @ haar_unitary(rng, n)


def random_contraction(rng: np.random.Generator, n: int) -> np.ndarray:
    return random_singular(rng, n, rng.uniform(0.0, 1.0, n))


def random_expansive(rng: np.random.Generator, n: int, top: float = 3.0) -> np.ndarray:
    return random_singular(rng, n, rng.uniform(1.0, top, n))


def isometric_column(rng: np.random.Generator, n: int, m: int) -> list[np.ndarray]:
    """``m`` blocks ``Zᵢ`` (``n × n``) with ``Σ Zᵢ* Zᵢ = I``, sliced from a Haar
    unitary of size ``m n``."""
    if m < 1:
        raise GeneratorError("isometric column needs at least one block")
    V = haar_unitary(rng, m * n)[:, :n]
    return [V[i * n:(i + 1) * n] for i in range(m)]


def schur_subunital(rng: np.random.Generator, n: int, unital: bool = False) -> np.ndarray:
    """PSD ``Z`` with diagonal in ``(0, 1]`` (all ones when ``unital``)."""
    G = random_psd(rng, n) + 1e-3 * np.eye(n)
    d = np.sqrt(np.real(np.diag(G)))
    C = G / np.outer(d, d)
    if unital:
        return hermitian(C, atol=np.inf)
    w = np.sqrt(rng.uniform(0.2, 1.0, n))
    return hermitian(C * np.outer(w, w), atol=np.inf)


def random_normal(rng: np.random.Generator, n: int) -> np.ndarray:
    U = haar_unitary(rng, n)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (U * z[None, :]) @ U.conj().T


def conditioned_invertible(rng: np.random.Generator, n: int, omega: float,
                           base: float | None = None) -> np.ndarray:
    """Invertible matrix with singular values log-uniform in ``[s, ω s]``."""
    if omega < 1:
        raise GeneratorError("condition bound must be >= 1")
    s0 = math.exp(rng.uniform(math.log(0.2), math.log(5.0))) if base is None else base
    s = s0 * np.exp(rng.uniform(0.0, math.log(omega), n)) if omega > 1 else np.full(n, s0)
    return random_singular(rng, n, s)


KINDS = ("psd", "hermitian-in-interval", "unitary", "contraction", "expansive",
         "isometric-column", "schur-multiplier-subunital", "normal", "conditioned-invertible")


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    dim: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeneratorError(f"unknown generator kind {self.kind!r}")
        if not isinstance(self.dim, (int, np.integer)) or self.dim < 1:
            raise GeneratorError(f"dimension must be a positive integer, got {self.dim!r}")


def sample(kind: str, rng: np.random.Generator, dim: int, **params: Any):
    """Draw one operand of the given kind from ``rng``."""
    if kind == "psd":
        return random_psd(rng, dim, params.get("rank"), params.get("scale", 1.0))
    if kind == "hermitian-in-interval":
        lo, hi = params.get("interval", (-1.0, 1.0))
        return random_hermitian_in(rng, dim, lo, hi)
    if kind == "unitary":
        return haar_unitary(rng, dim)
    if kind == "contraction":
        return random_contraction(rng, dim)
    if kind == "expansive":
        return random_expansive(rng, dim, params.get("top", 3.0))
    if kind == "isometric-column":
        return isometric_column(rng, dim, int(params.get("m", 2)))
    if kind == "schur-multiplier-subunital":
        return schur_subunital(rng, dim, bool(params.get("unital", False)))
    if kind == "normal":
        return random_normal(rng, dim)
    if kind == "conditioned-invertible":
        return conditioned_invertible(rng, dim, float(params.get("omega", 2.0)))
    raise GeneratorError(f"unknown generator kind {kind!r}")


def generate(spec: GeneratorSpec):
    """Deterministic sample for ``spec``."""
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(spec.seed))))
    return sample(spec.kind, rng, int(spec.dim), **spec.params)
