"""Positive linear maps between matrix algebras, and their dilation to
compressions of a spectral representation.

Four concrete families are provided: compressions ``A ↦ J*AJ``, Schur
multipliers ``A ↦ Z∘A``, C*-convex combinations ``A ↦ Σ Zᵢ*AZᵢ`` and vector
expectations ``A ↦ ⟨h, Ah⟩``. A sub-unital map can be extended to a unital one
on a space of one more dimension.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from orbit import linalg
from orbit.linalg import (TAU_ORDER, TAU_UNITARY, DimensionError, LinalgError, as_matrix,
                          hermitian)

SCHUR_DIAG_TOL = 1e-10
PARTITION_TOL = 1e-9


class MapError(LinalgError):
    pass


class Unitality(str, enum.Enum):
    UNITAL = "unital"
    SUB_UNITAL = "sub-unital"
    NEITHER = "neither"


class PositiveLinearMap:
    """Common surface; subclasses implement :meth:`_apply`."""

    source_dim: int
    target_dim: int
    kind: str

    def __call__(self, A) -> np.ndarray:
        A = hermitian(A)
        if A.shape[0] != self.source_dim:
            raise DimensionError(
                f"{self.kind} map expects dimension {self.source_dim}, got {A.shape[0]}")
        return hermitian(self._apply(A), atol=np.inf)

    def _apply(self, A: np.ndarray) -> np.ndarray:  # pragma: no cover - abstract
        raise NotImplementedError

    def image_of_identity(self) -> np.ndarray:
        return self(np.eye(self.source_dim))

    def to_json(self) -> dict:  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Compression(PositiveLinearMap):
    J: np.ndarray
    kind: str = field(default="compression", init=False)

    def __post_init__(self):
        J = as_matrix(self.J)
        object.__setattr__(self, "J", J)
        d = J.shape[1]
        if np.max(np.abs(J.conj().T @ J - np.eye(d))) > TAU_UNITARY * max(1, d):
            raise MapError("compression needs J*J = I")

    @property
    def source_dim(self) -> int:
        return self.J.shape[0]

    @property
    def target_dim(self) -> int:
        return self.J.shape[1]

    def _apply(self, A):
        return self.J.conj().T @ A @ self.J

    def to_json(self):
        return {"kind": "compression", "J": linalg.matrix_to_json(self.J)}


@dataclass(frozen=True, eq=False)
class SchurMultiplier(PositiveLinearMap):
    Z: np.ndarray
    kind: str = field(default="schur", init=False)

    def __post_init__(self):
        Z = hermitian(self.Z)
        if not linalg.is_psd(Z):
            raise MapError("Schur multiplier must be positive semi-definite")
        object.__setattr__(self, "Z", Z)

    @property
    def source_dim(self) -> int:
        return self.Z.shape[0]

    target_dim = source_dim

    def _apply(self, A):
        return self.Z * A

    def to_json(self):
        return {"kind": "schur", "Z": linalg.matrix_to_json(self.Z)}


@dataclass(frozen=True, eq=False)
class CStarCombination(PositiveLinearMap):
    """``A ↦ Σ Zᵢ* A Zᵢ`` with each ``Zᵢ`` of shape ``n × d``."""

    Zs: tuple
    kind: str = field(default="cstar", init=False)

    def __post_init__(self):
        Zs = tuple(as_matrix(Z) for Z in self.Zs)
        if not Zs:
            raise MapError("need at least one operator")
        if len({Z.shape for Z in Zs}) != 1:
            raise DimensionError("all operators of a C*-combination must share a shape")
        object.__setattr__(self, "Zs", Zs)

    @property
    def source_dim(self) -> int:
        return self.Zs[0].shape[0]

    @property
    def target_dim(self) -> int:
        return self.Zs[0].shape[1]

    def _apply(self, A):
        return sum(Z.conj().T @ A @ Z for Z in self.Zs)

    def to_json(self):
        return {"kind": "cstar", "Zs": [linalg.matrix_to_json(Z) for Z in self.Zs]}


@dataclass(frozen=True, eq=False)
class Expectation(PositiveLinearMap):
    h: np.ndarray
    kind: str = field(default="expectation", init=False)
    target_dim: int = field(default=1, init=False)

    def __post_init__(self):
        h = np.asarray(self.h, dtype=complex).ravel()
        if abs(np.linalg.norm(h) - 1) > TAU_UNITARY:
            raise MapError("expectation needs a unit vector")
        object.__setattr__(self, "h", h)

    @property
    def source_dim(self) -> int:
        return len(self.h)

    def _apply(self, A):
        return np.array([[np.vdot(self.h, A @ self.h)]])

    def to_json(self):
        return {"kind": "expectation", "h": linalg.vector_to_json(self.h)}


@dataclass(frozen=True, eq=False)
class SubUnitalExtension(PositiveLinearMap):
    """Unital map on dimension ``n+1`` built from a sub-unital ``Ψ``:
    ``[[A, ·], [·, b]] ↦ Ψ(A) + b(I - Ψ(I))``."""

    base: PositiveLinearMap
    kind: str = field(default="extension", init=False)

    def __post_init__(self):
        verdict, C = classify_unitality(self.base)
        if verdict == Unitality.NEITHER:
            raise MapError("base map is not sub-unital")
        object.__setattr__(self, "_defect", hermitian(np.eye(self.base.target_dim) - C,
                                                      atol=np.inf))

    @property
    def source_dim(self) -> int:
        return self.base.source_dim + 1

    @property
    def target_dim(self) -> int:
        return self.base.target_dim

    def _apply(self, M):
        n = self.base.source_dim
        return self.base(M[:n, :n]) + M[n, n].real * self._defect

    def to_json(self):
        return {"kind": "extension", "base": self.base.to_json()}


def classify_unitality(phi: PositiveLinearMap) -> tuple[Unitality, np.ndarray]:
    """Unital / sub-unital / neither, together with ``Φ(I)``."""
    C = phi.image_of_identity()
    d = C.shape[0]
    if isinstance(phi, SchurMultiplier):
        diag = np.real(np.diag(phi.Z))
        if np.all(np.abs(diag - 1) <= SCHUR_DIAG_TOL):
            return Unitality.UNITAL, C
        if np.all(diag <= 1 + SCHUR_DIAG_TOL):
            return Unitality.SUB_UNITAL, C
        return Unitality.NEITHER, C
    if np.max(np.abs(C - np.eye(d))) <= TAU_UNITARY * max(1, d):
        return Unitality.UNITAL, C
    if linalg.loewner_leq(C, np.eye(d), TAU_ORDER):
        return Unitality.SUB_UNITAL, C
    return Unitality.NEITHER, C


def sub_unital_extend(psi: PositiveLinearMap) -> SubUnitalExtension:
    return SubUnitalExtension(psi)


def embed_corner(A, b: float = 0.0) -> np.ndarray:
    """``A ⊕ b``, the input shape expected by :class:`SubUnitalExtension`."""
    return linalg.direct_sum(A, np.array([[b]]))


def cstar_block_map(Zs: Sequence) -> CStarCombination:
    """Map ``diag(A₁, …, A_m) ↦ Σ Zᵢ* Aᵢ Zᵢ`` as a C*-combination on the
    block-diagonal space."""
    Zs = [as_matrix(Z) for Z in Zs]
    n, d = Zs[0].shape
    m = len(Zs)
    blocks = []
    for i, Z in enumerate(Zs):
        B = np.zeros((m * n, d), dtype=complex)
        B[i * n:(i + 1) * n] = Z
        blocks.append(B)
    return CStarCombination(tuple(blocks))


def mean_map(n: int) -> CStarCombination:
    """``[[A, X], [Y, B]] ↦ (A + B)/2`` from dimension ``2n`` to ``n``."""
    s = np.eye(n) / np.sqrt(2)
    return cstar_block_map([s, s])


def map_from_json(obj: dict) -> PositiveLinearMap:
    try:
        kind = obj["kind"]
        if kind == "compression":
            return Compression(linalg.matrix_from_json(obj["J"]))
        if kind == "schur":
            return SchurMultiplier(linalg.matrix_from_json(obj["Z"]))
        if kind == "cstar":
            return CStarCombination(tuple(linalg.matrix_from_json(z) for z in obj["Zs"]))
        if kind == "expectation":
            return Expectation(linalg.vector_from_json(obj["h"]))
        if kind == "extension":
            return SubUnitalExtension(map_from_json(obj["base"]))
    except KeyError as exc:
        raise MapError(f"map descriptor missing field {exc}") from exc
    raise MapError(f"unknown map kind {obj.get('kind')!r}")


# --- dilation -------------------------------------------------------------------


@dataclass(frozen=True)
class DilationResult:
    """Mutually orthogonal projections ``Pᵢ`` on dimension ``big_dim`` that
    compress onto the given positive operators through ``embedding``."""

    big_dim: int
    projections: tuple
    embedding: np.ndarray

    @property
    def representation_table(self) -> dict:
        return dict(enumerate(self.projections))

    def compress(self, X) -> np.ndarray:
        J = self.embedding
        return hermitian(J.conj().T @ as_matrix(X) @ J, atol=np.inf)

    def represent(self, values: Sequence[float]) -> np.ndarray:
        """``Σ vᵢ Pᵢ``."""
        return sum(v * P for v, P in zip(values, self.projections))


def naimark_dilate(As: Sequence) -> DilationResult:
    """Dilate a positive partition of unity ``A₁ + … + A_n = I_d`` to
    orthogonal projections on dimension ``n·d``.

    The block row ``(A₁^{1/2} … A_n^{1/2})`` has orthonormal rows; it is
    completed to a unitary ``V`` and ``Pᵢ`` is the projection onto the i-th
    block column of ``V``.
    """
    As = [hermitian(A) for A in As]
    if not As:
        raise MapError("empty partition")
    d = As[0].shape[0]
    if any(A.shape != (d, d) for A in As):
        raise DimensionError("partition operators must share a dimension")
    for A in As:
        if not linalg.is_psd(A):
            raise MapError("partition operators must be positive semi-definite")
    deviation = linalg.operator_norm(sum(As) - np.eye(d))
    if deviation > PARTITION_TOL:
        raise MapError(f"operators do not sum to the identity (deviation {deviation:.3g})")
    n = len(As)
    top = np.hstack([linalg.psd_sqrt(A) for A in As])
    V = linalg.orthonormal_completion(top)
    projections = []
    for i in range(n):
        col = V[:, i * d:(i + 1) * d]
        projections.append(hermitian(col @ col.conj().T, atol=np.inf))
    embedding = np.zeros((n * d, d), dtype=complex)
    embedding[:d] = np.eye(d)
    return DilationResult(n * d, tuple(projections), embedding)


@dataclass(frozen=True)
class StinespringReduction:
    """Φ restricted to the algebra generated by ``A`` as a compression of a
    representation ``π``: ``Φ(g(A)) = (π(g(A)))_S`` for every function ``g``."""

    values: np.ndarray  # distinct eigenvalues of A (merged clusters)
    spectral_projections: tuple
    dilation: DilationResult

    @property
    def embedding(self) -> np.ndarray:
        return self.dilation.embedding

    @property
    def pi_A(self) -> np.ndarray:
        return self.dilation.represent(self.values)

    def pi_of(self, func) -> np.ndarray:
        """``π(g(A)) = g(π(A))`` for a vectorized ``g``."""
        return self.dilation.represent(func(self.values))

    def compress(self, X) -> np.ndarray:
        return self.dilation.compress(X)


def spectral_projections(A, gap: float = 1e-10) -> tuple[np.ndarray, list]:
    """Distinct eigenvalues of ``A`` (clusters closer than ``gap`` relative
    merged) with their spectral projections."""
    dec = linalg.spectral_decompose(A)
    lam = dec.eigenvalues
    scale = max(1.0, float(np.max(np.abs(lam))))
    groups = [[0]]
    for k in range(1, len(lam)):
        if lam[groups[-1][-1]] - lam[k] < gap * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    values = np.array([lam[g].mean() for g in groups])
    projs = []
    for g in groups:
        Q = dec.frame[:, g]
        projs.append(hermitian(Q @ Q.conj().T, atol=np.inf))
    return values, projs


def stinespring_reduce(phi: PositiveLinearMap, A) -> StinespringReduction:
    verdict, _ = classify_unitality(phi)
    if verdict != Unitality.UNITAL:
        raise MapError("dilation requires a unital map")
    values, projs = spectral_projections(A)
    images = [phi(E) for E in projs]
    # Φ(I) = I only to rounding; absorb the defect into the last image
    images[-1] = images[-1] + (np.eye(phi.target_dim) - sum(images))
    return StinespringReduction(values, tuple(projs), naimark_dilate(images))
