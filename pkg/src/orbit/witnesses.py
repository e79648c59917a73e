"""Explicit unitaries for unitary-orbit inequalities.

Each ``*_witness`` function builds the unitaries whose existence an
inequality asserts, then re-checks the claimed Löwner inequality from scratch
and returns a :class:`WitnessCertificate`. The certificate stores the residual
(right side minus left side) and its minimum eigenvalue; it never stores the
construction, so consumers can re-verify without trusting it.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from orbit import linalg
from orbit.functions import ScalarFunction, monotone_split
from orbit.linalg import (TAU_ORDER, apply_function, as_matrix, conjugate, direct_sum,
                          hermitian, spectral_decompose)
from orbit.maps import (PositiveLinearMap, SubUnitalExtension, Unitality, classify_unitality,
                        embed_corner, mean_map)

SPLIT_TOL = 1e-12
KERNEL_TOL = 1e-10
RANGE_TOL = 1e-12
REGULARIZATION_SWEEP = (1e-8, 1e-10, 1e-12)
PINCH_SHIFTS = (1e-9, 1e-8, 1e-7, 1e-6, 1e-5)


class WitnessError(ValueError):
    """A hypothesis of the inequality does not hold for the given input."""


class DominanceError(WitnessError):
    def __init__(self, index: int, lower: float, upper: float):
        super().__init__(f"eigenvalue dominance fails at index {index}: {lower!r} > {upper!r}")
        self.index = index


class CertificateError(RuntimeError):
    """The construction finished but its certificate does not verify."""

    def __init__(self, certificate: "WitnessCertificate"):
        super().__init__(
            f"{certificate.statement_id}: residual min eigenvalue "
            f"{certificate.min_residual_eigenvalue:.3e} below -{certificate.tolerance_used:.1e}")
        self.certificate = certificate


def _digest(M) -> str:
    M = np.ascontiguousarray(as_matrix(M), dtype=np.complex128)
    return hashlib.sha256(repr(M.shape).encode() + M.tobytes()).hexdigest()[:16]


@dataclass(frozen=True)
class WitnessCertificate:
    statement_id: str
    unitaries: tuple
    residual: np.ndarray = field(repr=False)
    min_residual_eigenvalue: float
    tolerance_used: float
    input_hashes: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return (self.min_residual_eigenvalue >= -self.tolerance_used
                and all(linalg.is_unitary(U) for U in self.unitaries))

    def to_json(self) -> dict:
        return {
            "statement_id": self.statement_id,
            "unitaries": [linalg.matrix_to_json(U) for U in self.unitaries],
            "min_residual_eigenvalue": self.min_residual_eigenvalue,
            "tolerance": self.tolerance_used,
            "valid": self.valid,
            "input_hashes": dict(self.input_hashes),
        }


def certify(statement_id: str, unitaries: Sequence, lhs, rhs, inputs: Optional[dict] = None,
            strict: bool = True, tol: float = TAU_ORDER) -> WitnessCertificate:
    """Certificate for ``lhs ≤ rhs`` using ``tol · max(1, spectral radius)``."""
    lhs, rhs = hermitian(lhs, atol=np.inf), hermitian(rhs, atol=np.inf)
    residual = rhs - lhs
    w = linalg.eigenvalues(residual)
    scale = max(1.0, linalg.spectral_radius(lhs), linalg.spectral_radius(rhs))
    cert = WitnessCertificate(
        statement_id, tuple(as_matrix(U) for U in unitaries), residual, float(w[-1]),
        tol * scale, {k: _digest(v) for k, v in (inputs or {}).items()})
    if strict and not cert.valid:
        raise CertificateError(cert)
    return cert


# --- eigenvalue alignment ---------------------------------------------------------


def _check_dominance(lower: np.ndarray, upper: np.ndarray, tol: float) -> None:
    scale = max(1.0, float(np.max(np.abs(lower))), float(np.max(np.abs(upper))))
    bad = np.nonzero(lower > upper + tol * scale)[0]
    if bad.size:
        k = int(bad[0])
        raise DominanceError(k + 1, float(lower[k]), float(upper[k]))


def align_eigenbasis(X, Y, tol: float = TAU_ORDER) -> np.ndarray:
    """Unitary ``U`` with ``X ≤ U Y U*``, given ``λ_k(X) ≤ λ_k(Y)`` for all k.

    ``U = Q_X Q_Y*`` carries the eigenframe of ``Y`` onto that of ``X``, so
    ``U Y U* = Q_X diag(λ(Y)) Q_X*``.
    """
    dx, dy = spectral_decompose(X), spectral_decompose(Y)
    if dx.dim != dy.dim:
        raise linalg.DimensionError(f"dimension mismatch {dx.dim} vs {dy.dim}")
    _check_dominance(dx.eigenvalues, dy.eigenvalues, tol)
    return dx.frame @ dy.frame.conj().T


def transfer_below(X, Y, tol: float = TAU_ORDER) -> np.ndarray:
    """Unitary ``W`` with ``W X W* ≤ Y``, given ``λ_k(X) ≤ λ_k(Y)``."""
    return align_eigenbasis(X, Y, tol).conj().T


# --- Jensen-type inequalities -------------------------------------------------------


def _require_unital(phi: PositiveLinearMap) -> None:
    verdict, _ = classify_unitality(phi)
    if verdict != Unitality.UNITAL:
        raise WitnessError(f"map must be unital (got {verdict.value})")


def _require_convex_or_concave(f: ScalarFunction) -> None:
    if not (f.is_convex or f.is_concave):
        raise WitnessError(f"{f.name} is neither convex nor concave")


def jensen_witness_monotone(f: ScalarFunction, phi: PositiveLinearMap, A,
                            statement_id: str = "jensen-monotone",
                            strict: bool = True) -> WitnessCertificate:
    """Single unitary ``U`` with ``f(Φ(A)) ≤ U Φ(f(A)) U*`` (reversed for
    concave ``f``), for monotone ``f`` and unital ``Φ``."""
    if not f.is_monotone:
        raise WitnessError(f"{f.name} is not monotone")
    _require_convex_or_concave(f)
    _require_unital(phi)
    A = hermitian(A)
    f_phi = apply_function(f, phi(A))
    phi_f = phi(apply_function(f, A))
    if f.is_convex:
        U = align_eigenbasis(f_phi, phi_f)
        lhs, rhs = f_phi, conjugate(U, phi_f)
    else:
        U = transfer_below(phi_f, f_phi)
        lhs, rhs = conjugate(U, phi_f), f_phi
    return certify(statement_id, [U], lhs, rhs, {"A": A}, strict)


def _half_pair(f_phi: np.ndarray, phi_f: np.ndarray, U: np.ndarray, V: np.ndarray,
               convex: bool) -> tuple[np.ndarray, np.ndarray]:
    avg = (conjugate(U, phi_f) + conjugate(V, phi_f)) / 2
    return (f_phi, avg) if convex else (avg, f_phi)


def jensen_pair(f: ScalarFunction, phi: PositiveLinearMap, A) -> tuple[np.ndarray, np.ndarray]:
    """Unitaries ``U, V`` with ``f(Φ(A)) ≤ (UΦ(f(A))U* + VΦ(f(A))V*)/2`` for
    convex ``f`` (reversed for concave), without certifying.

    The eigenframe ``Q`` of ``B = Φ(A)`` is split at the point ``r`` where
    ``f`` changes monotonicity: ``S'`` carries the eigenvalues ``≤ r`` and
    ``S''`` the rest. On each part the monotone argument gives ``U₀``, ``V₀``,
    and the pinching by ``diag(I, -I)`` glues them into
    ``U = Q diag(U₀, V₀) Q*`` and ``V = Q diag(U₀, -V₀) Q*``.
    """
    _require_convex_or_concave(f)
    B = phi(A)
    phi_f = phi(apply_function(f, A))
    dec = spectral_decompose(B)
    lam = dec.eigenvalues
    scale = max(1.0, float(np.max(np.abs(lam))))
    r = monotone_split(f, (float(lam[-1]), float(lam[0])))
    f_lam = f(f.domain.clamp(lam, linalg.DOMAIN_TOL * scale))
    low = lam <= r + SPLIT_TOL * scale
    order = np.concatenate([np.nonzero(low)[0], np.nonzero(~low)[0]])
    Q = dec.frame[:, order]
    d1 = int(low.sum())
    blocks_u, blocks_v = [], []
    for sl, sign in ((slice(0, d1), 1.0), (slice(d1, len(lam)), -1.0)):
        Qp = Q[:, sl]
        if Qp.shape[1] == 0:
            continue
        part_f = np.diag(f_lam[order][sl]).astype(complex)
        part_phi = hermitian(Qp.conj().T @ phi_f @ Qp, atol=np.inf)
        if f.is_convex:
            W = align_eigenbasis(part_f, part_phi)
        else:
            W = transfer_below(part_phi, part_f)
        blocks_u.append(W)
        blocks_v.append(sign * W)
    U = Q @ direct_sum(*blocks_u) @ Q.conj().T
    V = Q @ direct_sum(*blocks_v) @ Q.conj().T
    return U, V


def jensen_witness_general(f: ScalarFunction, phi: PositiveLinearMap, A,
                           statement_id: str = "jensen",
                           strict: bool = True) -> WitnessCertificate:
    """Pair ``U, V`` with ``f(Φ(A)) ≤ (UΦ(f(A))U* + VΦ(f(A))V*)/2`` for convex
    ``f`` and unital ``Φ``; the inequality reverses for concave ``f``."""
    _require_unital(phi)
    A = hermitian(A)
    U, V = jensen_pair(f, phi, A)
    f_phi = apply_function(f, phi(A))
    phi_f = phi(apply_function(f, A))
    lhs, rhs = _half_pair(f_phi, phi_f, U, V, f.is_convex)
    return certify(statement_id, [U, V], lhs, rhs, {"A": A}, strict)


def jensen_orientation(f: ScalarFunction, unital: bool = True) -> bool:
    """True when the Jensen-type inequality for ``f`` reads ``f(Φ(A)) ≤ …``.

    Affine functions are both convex and concave; under a sub-unital map the
    sign of ``f(0)`` decides which direction survives.
    """
    if unital or not (f.is_convex and f.is_concave):
        return f.is_convex
    return f.value_at_zero <= 0


def jensen_witness_subunital(f: ScalarFunction, psi: PositiveLinearMap, A,
                             statement_id: str = "jensen-subunital", single: bool = False,
                             strict: bool = True) -> WitnessCertificate:
    """Jensen witness for a sub-unital ``Ψ``: concave ``f`` with ``f(0) ≥ 0``
    gives ``f(Ψ(A)) ≥ (UΨ(f(A))U* + VΨ(f(A))V*)/2``; convex ``f`` with
    ``f(0) ≤ 0`` the reverse.

    Runs the unital construction on the extension ``M ↦ Ψ(M₁₁) + m(I - Ψ(I))``
    applied to ``A ⊕ 0``, always with the convex-oriented function.
    """
    f0 = f.value_at_zero
    if f0 is None:
        raise WitnessError("sub-unital form needs 0 in the domain")
    if f.is_concave and not f.is_convex and f0 < 0:
        raise WitnessError("concave sub-unital form needs f(0) >= 0")
    if f.is_convex and not f.is_concave and f0 > 0:
        raise WitnessError("convex sub-unital form needs f(0) <= 0")
    _require_convex_or_concave(f)
    convex = jensen_orientation(f, unital=False)
    h = f if convex else f.negated()
    A = hermitian(A)
    ext = SubUnitalExtension(psi)
    A0 = embed_corner(A, 0.0)
    if single:
        cert = jensen_witness_monotone(h, ext, A0, statement_id, strict=False)
        U = V = cert.unitaries[0]
    else:
        U, V = jensen_pair(h, ext, A0)
    f_psi = apply_function(f, psi(A))
    psi_f = psi(apply_function(f, A))
    lhs, rhs = _half_pair(f_psi, psi_f, U, V, convex)
    return certify(statement_id, [U] if single else [U, V], lhs, rhs, {"A": A}, strict)


def jensen_witness(f: ScalarFunction, phi: PositiveLinearMap, A, statement_id: str = "jensen",
                   single: Optional[bool] = None, strict: bool = True) -> WitnessCertificate:
    """Dispatch on unitality and monotonicity."""
    verdict, _ = classify_unitality(phi)
    if single is None:
        single = f.is_monotone
    if verdict == Unitality.UNITAL:
        if single:
            return jensen_witness_monotone(f, phi, A, statement_id, strict)
        return jensen_witness_general(f, phi, A, statement_id, strict)
    if verdict == Unitality.SUB_UNITAL:
        return jensen_witness_subunital(f, phi, A, statement_id, single, strict)
    raise WitnessError("map is neither unital nor sub-unital")


# --- subadditivity ---------------------------------------------------------------------


def _subadd_unitaries(f: ScalarFunction, A: np.ndarray, B: np.ndarray) -> tuple:
    """Unitaries for ``f(A+B) ≤ U f(A) U* + V f(B) V*`` with ``f`` concave,
    monotone, ``f(0) ≥ 0``.

    With ``f₀ = f - f(0)`` of constant sign ``ε`` and ``S = A + B`` the
    contractions ``X = A^{1/2} S^{-1/2}``, ``Y = B^{1/2} S^{-1/2}`` satisfy
    ``X*X + Y*Y = I``, and ``L_A = ε|f₀|(S)^{1/2} X*X |f₀|(S)^{1/2}`` is
    eigenvalue-dominated by ``f₀(A)`` (likewise for ``B``). Aligning frames
    gives ``f₀(S) = L_A + L_B ≤ U f₀(A) U* + V f₀(B) V*``. The computation runs
    on the range of ``S``; ``A`` and ``B`` vanish on its kernel.
    """
    c = f.value_at_zero
    f0 = f.shifted(-c)
    n = A.shape[0]
    dec = spectral_decompose(A + B)
    lam = dec.eigenvalues
    keep = lam > RANGE_TOL * max(1.0, float(lam[0]))
    if not np.any(keep):
        return np.eye(n, dtype=complex), np.eye(n, dtype=complex)
    Q = dec.frame[:, keep]
    s = lam[keep]
    A_r = hermitian(Q.conj().T @ A @ Q, atol=np.inf)
    B_r = hermitian(Q.conj().T @ B @ Q, atol=np.inf)
    f0_s = f0(f0.domain.clamp(s, linalg.DOMAIN_TOL * max(1.0, s[0])))
    eps = -1.0 if np.sum(f0_s) < 0 else 1.0
    # S is diagonal in these coordinates, so X*X = S^{-1/2} P S^{-1/2}
    w = np.sqrt(np.abs(f0_s) / s)
    unitaries = []
    for P in (A_r, B_r):
        L = eps * (w[:, None] * P * w[None, :])
        U = align_eigenbasis(L, apply_function(f0, P), tol=1e-6)
        unitaries.append(Q @ U @ Q.conj().T + (np.eye(n) - Q @ Q.conj().T))
    return tuple(unitaries)


def _subadd_hypotheses(f: ScalarFunction, A: np.ndarray, B: np.ndarray) -> None:
    if not (f.is_concave and f.is_monotone):
        raise WitnessError(f"{f.name} must be monotone and concave")
    c = f.value_at_zero
    if c is None or c < 0:
        raise WitnessError("need 0 in the domain and f(0) >= 0")
    for M in (A, B):
        if not linalg.is_psd(M):
            raise WitnessError("operands must be positive semi-definite")


def subadd_witness(f: ScalarFunction, A, B, strict: bool = True) -> WitnessCertificate:
    """``f(A+B) ≤ U f(A) U* + V f(B) V*`` for monotone concave ``f`` on
    ``[0, ∞)`` with ``f(0) ≥ 0`` and PSD ``A, B``.

    A monotone convex ``g`` with ``g(0) ≤ 0`` is accepted too and certifies
    the reversed form ``g(A+B) ≥ U g(A) U* + V g(B) V*``.
    """
    A, B = hermitian(A), hermitian(B)
    f0 = f.value_at_zero
    # affine f is both; its sign at zero picks the form that can hold
    reverse = f.is_convex and (not f.is_concave or (f0 is not None and f0 < 0))
    h = f.negated() if reverse else f
    _subadd_hypotheses(h, A, B)
    sid = "superadditivity" if reverse else "subadditivity"

    def build(U, V):
        rhs = conjugate(U, apply_function(h, A)) + conjugate(V, apply_function(h, B))
        lhs = apply_function(h, A + B)
        if reverse:
            lhs, rhs = -rhs, -lhs
        return certify(sid, [U, V], lhs, rhs, {"A": A, "B": B}, strict=False)

    best = None
    try:
        best = build(*_subadd_unitaries(h, A, B))
    except WitnessError:
        pass
    if best is None or not best.valid:
        # regularized retries; the certificate is always checked on the original pair
        norm = linalg.operator_norm(A + B)
        n = A.shape[0]
        for e in REGULARIZATION_SWEEP:
            shift = e * max(norm, 1e-300) / 2 * np.eye(n)
            try:
                cand = build(*_subadd_unitaries(h, A + shift, B + shift))
            except WitnessError:
                continue
            if best is None or cand.min_residual_eigenvalue > best.min_residual_eigenvalue:
                best = cand
    if best is None:
        raise WitnessError("no subadditivity witness could be constructed")
    if strict and not best.valid:
        raise CertificateError(best)
    return best


def difference_witness(f: ScalarFunction, A, B, strict: bool = True) -> WitnessCertificate:
    """``U f(A) U* - V f(B) V* ≤ f(|A - B|)`` for concave ``f: [0,∞) → [0,∞)``
    and PSD ``A, B``.

    Chains ``A ≤ |A-B| + B`` (frame alignment, ``f`` being non-decreasing)
    with the subadditivity witness for ``(|A-B|, B)``.
    """
    A, B = hermitian(A), hermitian(B)
    if not f.is_concave or f.value_at_zero is None or f.value_at_zero < 0:
        raise WitnessError("need a non-negative concave function on [0, inf)")
    if not f.is_nondecreasing:
        raise WitnessError("a non-negative concave function on [0, inf) is non-decreasing")
    D = linalg.abs_hermitian(A - B)
    fA, fB, fD = (apply_function(f, M) for M in (A, B, D))
    W = transfer_below(fA, apply_function(f, D + B))
    S, T = subadd_witness(f, D, B, strict=False).unitaries
    U = S.conj().T @ W
    V = S.conj().T @ T
    lhs = conjugate(U, fA) - conjugate(V, fB)
    return certify("difference", [U, V], lhs, fD, {"A": A, "B": B}, strict)


diff_witness = difference_witness


# --- block decomposition -----------------------------------------------------------


@dataclass(frozen=True)
class BlockDecomposition:
    """``H = U (A ⊕ 0) U* + V (0 ⊕ B) V*``."""

    U: np.ndarray
    V: np.ndarray
    H: np.ndarray = field(repr=False)
    split: int

    @property
    def A(self) -> np.ndarray:
        return self.H[:self.split, :self.split]

    @property
    def B(self) -> np.ndarray:
        return self.H[self.split:, self.split:]

    def parts(self) -> tuple[np.ndarray, np.ndarray]:
        m = self.H.shape[0] - self.split
        left = conjugate(self.U, direct_sum(self.A, np.zeros((m, m))))
        right = conjugate(self.V, direct_sum(np.zeros((self.split, self.split)), self.B))
        return left, right

    @property
    def error(self) -> float:
        """``‖U(A⊕0)U* + V(0⊕B)V* - H‖ / max(1, ‖H‖)`` in the operator norm."""
        left, right = self.parts()
        return linalg.relative_residual(left + right, self.H)


def block_decompose(H, n: int) -> BlockDecomposition:
    """Unitaries splitting a PSD block matrix into its diagonal blocks.

    With ``R = H^{1/2}``, let ``T`` keep the first ``n`` rows of ``R`` and
    ``S`` the rest, so ``H = T*T + S*S`` while ``TT* = A ⊕ 0`` and
    ``SS* = 0 ⊕ B``. The polar factors of ``T*`` and ``S*`` conjugate one
    form into the other.
    """
    H = hermitian(H)
    N = H.shape[0]
    if not 1 <= n < N:
        raise WitnessError(f"split {n} must satisfy 1 <= split < {N}")
    if not linalg.is_psd(H):
        raise WitnessError("block matrix must be positive semi-definite")
    R = linalg.psd_sqrt(H)
    T = np.zeros_like(R)
    S = np.zeros_like(R)
    T[:n] = R[:n]
    S[n:] = R[n:]
    U, _ = linalg.polar_unitary(T.conj().T)
    V, _ = linalg.polar_unitary(S.conj().T)
    return BlockDecomposition(U, V, H, n)


def block_certificate(dec: BlockDecomposition, tol: float = TAU_ORDER) -> WitnessCertificate:
    """Certificate for the decomposition as two-sided order: the residual
    must vanish, so its extreme eigenvalue of either sign is reported."""
    left, right = dec.parts()
    residual = dec.H - left - right
    w = linalg.eigenvalues(residual)
    worst = -float(max(abs(w[0]), abs(w[-1])))
    scale = max(1.0, linalg.spectral_radius(dec.H))
    return WitnessCertificate("block-decomposition", (dec.U, dec.V), residual, worst,
                              tol * scale, {"H": _digest(dec.H)})


def rank_one_decomposition(A) -> list:
    """Rank-one projections ``Fᵢ`` with ``A = Σ aᵢᵢ Fᵢ``, by splitting off one
    diagonal entry at a time."""
    A = hermitian(A)
    n = A.shape[0]
    if n == 1:
        return [np.eye(1, dtype=complex)]
    dec = block_decompose(A, 1)
    e1 = np.zeros((n, n), dtype=complex)
    e1[0, 0] = 1
    projections = [conjugate(dec.U, e1)]
    for F in rank_one_decomposition(A[1:, 1:]):
        projections.append(conjugate(dec.V, direct_sum(np.zeros((1, 1)), F)))
    return projections


@dataclass(frozen=True)
class PinchResult:
    F: tuple  # A = Σ aᵢᵢ Fᵢ
    E: tuple  # f(A) ≤ Σ f(aᵢᵢ) Eᵢ
    certificate: WitnessCertificate
    trace_margin: float  # Σ f(aᵢᵢ) - Tr f(A)


def _snapped_function(f: ScalarFunction, A: np.ndarray) -> np.ndarray:
    """``f(A)`` with eigenvalues below ``KERNEL_TOL·‖A‖`` treated as exact zeros.

    For functions that are not Lipschitz at 0 (``t^p`` with ``p < 1``) the
    rounding-level eigenvalues of a singular matrix would otherwise leak
    values such as ``(1e-16)^0.3 ≈ 1.6e-5`` into ``f(A)``.
    """
    dec = spectral_decompose(A)
    lam = dec.eigenvalues.copy()
    lam[np.abs(lam) <= KERNEL_TOL * max(1.0, float(np.max(np.abs(lam))))] = 0.0
    return dec.map(f(f.domain.clamp(lam, linalg.DOMAIN_TOL * max(1.0, float(lam[0])))))


def _pinch_projections(work: np.ndarray, ft: ScalarFunction) -> tuple[list, list]:
    n = work.shape[0]
    diag = np.real(np.diag(work))
    F = rank_one_decomposition(work)
    parts = [d * P for d, P in zip(diag, F)]
    E = []
    T = np.eye(n, dtype=complex)
    for k in range(n - 1):
        rest = sum(parts[k + 1:])
        U, V = _subadd_unitaries(ft, parts[k], rest)
        E.append(conjugate(T @ U, F[k]))
        T = T @ V
    E.append(conjugate(T, F[-1]))
    return F, E


def diagonal_pinch(A, f: ScalarFunction, strict: bool = True) -> PinchResult:
    """Rank-one projections ``Eᵢ`` with ``f(A) ≤ Σ f(aᵢᵢ) Eᵢ`` for concave
    ``f: [0,∞) → [0,∞)``.

    When ``f(0) > 0`` the construction runs with the concave chord
    modification ``f̃`` (``f̃(0) = 0``, ``f̃ = f`` above ``λ_min(A)``), which
    agrees with ``f`` on the spectrum and on the diagonal. A singular ``A``
    is then shifted by a small multiple of the identity; several shifts are
    tried because a tiny shift makes the chord steep and a large one costs
    accuracy. The certificate always refers to the original ``A``.
    """
    A = hermitian(A)
    if not linalg.is_psd(A):
        raise WitnessError("matrix must be positive semi-definite")
    c = f.value_at_zero
    if not f.is_concave or c is None or c < 0:
        raise WitnessError("need a non-negative concave function on [0, inf)")
    n = A.shape[0]
    fA = _snapped_function(f, A)
    fa = f(np.real(np.diag(A)))
    trace_margin = float(np.sum(fa) - np.trace(fA).real)

    def attempt(work: np.ndarray, ft: ScalarFunction):
        F, E = _pinch_projections(work, ft)
        rhs = sum(v * P for v, P in zip(fa, E))
        return F, E, certify("diagonal-pinch", [], fA, rhs, {"A": A}, strict=False)

    candidates = []
    if c == 0:
        candidates.append((A, f))
    else:
        norm = max(1.0, linalg.operator_norm(A))
        lam_min = float(linalg.eigenvalues(A)[-1])
        if lam_min > PINCH_SHIFTS[0] * norm:
            candidates.append((A, f.with_chord_at_zero(lam_min)))
        else:
            for e in PINCH_SHIFTS:
                delta = e * norm - min(lam_min, 0.0)
                candidates.append((A + delta * np.eye(n), f.with_chord_at_zero(lam_min + delta)))
    best = None
    for work, ft in candidates:
        F, E, cert = attempt(work, ft)
        if best is None or cert.min_residual_eigenvalue > best[2].min_residual_eigenvalue:
            best = (F, E, cert)
        if cert.valid and cert.min_residual_eigenvalue >= 0:
            break
    F, E, cert = best
    if cert.min_residual_eigenvalue < 0:
        # f(A) is PSD with diagonal f(A)ᵢᵢ ≤ f(aᵢᵢ) (scalar Jensen), so its own
        # rank-one decomposition f(A) = Σ f(A)ᵢᵢ Gᵢ already satisfies the claim
        G = rank_one_decomposition(fA)
        rhs = sum(v * P for v, P in zip(fa, G))
        direct = certify("diagonal-pinch", [], fA, rhs, {"A": A}, strict=False)
        if direct.min_residual_eigenvalue > cert.min_residual_eigenvalue:
            E, cert = G, direct
    if strict and not cert.valid:
        raise CertificateError(cert)
    return PinchResult(tuple(F), tuple(E), cert, trace_margin)


# --- triangle-type inequalities ---------------------------------------------------------


def _is_normal(X, tol: float = 1e-9) -> bool:
    X = as_matrix(X)
    return linalg.operator_norm(X @ X.conj().T - X.conj().T @ X) <= tol * max(
        1.0, linalg.operator_norm(X) ** 2)


def normal_triangle_witness(X, Y, strict: bool = True) -> WitnessCertificate:
    """``|X+Y| ≤ (|X| + |Y| + W*(|X| + |Y|)W)/2`` with ``W`` the polar unitary
    of ``X + Y``, for normal ``X, Y``."""
    X, Y = as_matrix(X), as_matrix(Y)
    if not (_is_normal(X) and _is_normal(Y)):
        raise WitnessError("operands must be normal")
    W, absXY = linalg.polar_unitary(X + Y)
    P = linalg.modulus(X) + linalg.modulus(Y)
    rhs = (P + conjugate(W.conj().T, P)) / 2
    return certify("normal-triangle", [W], absXY, rhs, {"X": X, "Y": Y}, strict)


def _require_nondecreasing_convex(f: ScalarFunction) -> None:
    if not (f.is_convex and f.is_nondecreasing) or not f.domain.contains(0.0):
        raise WitnessError("need a non-decreasing convex function on [0, inf)")


def _compose_through_mean(f: ScalarFunction, lower, P, W) -> tuple[np.ndarray, np.ndarray]:
    """Unitaries for ``f(lower) ≤ (U f(P) U* + V f(P) V*)/2`` given
    ``lower ≤ (P + W P W*)/2`` and ``f`` non-decreasing convex."""
    n = P.shape[0]
    WPW = conjugate(W, P)
    M = (P + WPW) / 2
    U1 = align_eigenbasis(apply_function(f, lower), apply_function(f, M))
    cert = jensen_witness_monotone(f, mean_map(n), direct_sum(P, WPW), strict=False)
    U2 = cert.unitaries[0]
    U = U1 @ U2
    return U, U @ W


def cartesian_witness(f: ScalarFunction, A, B, strict: bool = True) -> WitnessCertificate:
    """``f(|A + iB|) ≤ (U f(|A|+|B|) U* + V f(|A|+|B|) V*)/2`` for Hermitian
    ``A, B`` and non-decreasing convex ``f`` on ``[0, ∞)``."""
    _require_nondecreasing_convex(f)
    A, B = hermitian(A), hermitian(B)
    tri = normal_triangle_witness(A, 1j * B, strict=False)
    W = tri.unitaries[0]
    P = linalg.abs_hermitian(A) + linalg.abs_hermitian(B)
    Z = A + 1j * B
    absZ = linalg.modulus(Z)
    U, V = _compose_through_mean(f, absZ, P, W.conj().T)
    fP = apply_function(f, P)
    rhs = (conjugate(U, fP) + conjugate(V, fP)) / 2
    return certify("cartesian", [U, V], apply_function(f, absZ), rhs, {"A": A, "B": B}, strict)


@dataclass(frozen=True)
class PositivePartWitness:
    W: np.ndarray
    pinch: WitnessCertificate  # (A+B)₊ ≤ (P + W P W*)/2 with P = A₊ + B₊
    full: WitnessCertificate  # f((A+B)₊) ≤ (U f(P) U* + V f(P) V*)/2


def positive_part_witness(A, B, f: ScalarFunction, strict: bool = True) -> PositivePartWitness:
    """Witness for ``f((A+B)₊) ≤ (U f(A₊+B₊) U* + V f(A₊+B₊) V*)/2``.

    ``W = E - F`` with ``E`` the projection onto the range of ``(A+B)₊`` and
    ``F = I - E``; then ``(A+B)₊ ≤ E P E + F P F = (P + W P W*)/2``.
    """
    _require_nondecreasing_convex(f)
    A, B = hermitian(A), hermitian(B)
    n = A.shape[0]
    S = A + B
    Sp = linalg.positive_part(S)
    dec = spectral_decompose(Sp)
    rng = dec.eigenvalues > KERNEL_TOL * max(1.0, linalg.operator_norm(S))
    Qr = dec.frame[:, rng]
    E = Qr @ Qr.conj().T
    W = 2 * E - np.eye(n)
    P = linalg.positive_part(A) + linalg.positive_part(B)
    pinch = certify("positive-part-pinch", [W], Sp, (P + conjugate(W, P)) / 2,
                    {"A": A, "B": B}, strict)
    U, V = _compose_through_mean(f, Sp, P, W)
    fP = apply_function(f, P)
    rhs = (conjugate(U, fP) + conjugate(V, fP)) / 2
    full = certify("positive-part", [U, V], apply_function(f, Sp), rhs, {"A": A, "B": B}, strict)
    return PositivePartWitness(W, pinch, full)


__all__ = [
    "WitnessCertificate", "WitnessError", "DominanceError", "CertificateError", "certify",
    "align_eigenbasis", "transfer_below", "jensen_witness_monotone", "jensen_witness_general",
    "jensen_witness_subunital", "jensen_witness", "jensen_pair", "jensen_orientation", "subadd_witness",
    "difference_witness", "diff_witness", "block_decompose", "block_certificate", "BlockDecomposition",
    "rank_one_decomposition", "diagonal_pinch", "PinchResult", "normal_triangle_witness",
    "cartesian_witness", "positive_part_witness", "PositivePartWitness",
]
