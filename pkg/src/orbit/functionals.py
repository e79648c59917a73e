"""Symmetric norms, derived anti-norms, determinantal functionals and a
catalogue of inequality statements that evaluate to signed margins.

A margin is ``RHS - LHS`` for scalar statements and the smallest eigenvalue
of ``RHS - LHS`` for Löwner-order statements, so ``margin >= -tol`` always
means "the inequality holds".
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from orbit.functions import Convexity, ScalarFunction
from orbit.linalg import (
    DOMAIN_TOL,
    TAU_ORDER,
    DimensionError,
    LinalgError,
    apply_function,
    apply_scalar_map,
    as_matrix,
    eigenvalues,
    hermitian,
    modulus,
)
from orbit.maps import PositiveLinearMap, Unitality, classify_unitality

SINGULAR_RATIO = 1e-12


class StatementError(ValueError):
    """Unknown statement id or malformed operands."""


class NotApplicable(Exception):
    """Raised inside an evaluator when a hypothesis fails."""


# --- norms ---------------------------------------------------------------------


def singular_values(X) -> np.ndarray:
    return np.linalg.svd(as_matrix(X), compute_uv=False)


def schatten_norm(X, p: float) -> float:
    if not p >= 1:
        raise StatementError(f"Schatten exponent must be >= 1, got {p}")
    s = singular_values(X)
    if math.isinf(p):
        return float(s[0]) if s.size else 0.0
    top = float(s[0]) if s.size else 0.0
    if top == 0.0:
        return 0.0
    # scale out the largest value so large p does not overflow
    return top * float(np.sum((s / top) ** p) ** (1.0 / p))


def ky_fan(X, k: int) -> float:
    s = singular_values(X)
    if not 1 <= k <= s.size:
        raise StatementError(f"Ky Fan index must lie in 1..{s.size}, got {k}")
    return float(np.sum(s[:k]))


def sigma_k(X, k: int) -> float:
    """Sum of the ``k`` largest (signed) eigenvalues."""
    w = eigenvalues(X)
    if not 1 <= k <= w.size:
        raise StatementError(f"index must lie in 1..{w.size}, got {k}")
    return float(np.sum(w[:k]))


NORM_KINDS = ("schatten", "ky-fan", "operator", "normalized-trace")


@dataclass(frozen=True)
class SymmetricNorm:
    """A unitarily invariant norm from the supported families.

    ``param`` is the exponent for ``schatten`` and the index for ``ky-fan``.
    Ky Fan indices beyond the matrix size sum every singular value.
    ``normalized-trace`` divides the trace norm by the matrix size.
    """

    kind: str
    param: float = 1.0

    def __post_init__(self):
        if self.kind not in NORM_KINDS:
            raise StatementError(f"unknown norm kind {self.kind!r}")
        if self.kind == "schatten" and not self.param >= 1:
            raise StatementError("Schatten exponent must be >= 1")
        if self.kind == "ky-fan" and (self.param < 1 or int(self.param) != self.param):
            raise StatementError("Ky Fan index must be a positive integer")

    def __call__(self, X) -> float:
        X = as_matrix(X)
        if self.kind == "schatten":
            return schatten_norm(X, self.param)
        if self.kind == "ky-fan":
            return ky_fan(X, min(int(self.param), X.shape[0]))
        if self.kind == "operator":
            return schatten_norm(X, math.inf)
        return schatten_norm(X, 1) / X.shape[0]

    def padded(self, X, size: int) -> float:
        """Norm of ``X ⊕ 0`` of total size ``size``."""
        X = as_matrix(X)
        n = X.shape[0]
        if size < n:
            raise DimensionError(f"cannot pad {n}x{n} down to {size}")
        if self.kind == "normalized-trace":
            return schatten_norm(X, 1) / size
        if self.kind == "ky-fan":
            return ky_fan(X, min(int(self.param), n))
        return self(X)

    def label(self) -> str:
        if self.kind in ("schatten", "ky-fan"):
            return f"{self.kind}:{self.param:g}"
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "SymmetricNorm":
        kind, _, arg = text.partition(":")
        try:
            return cls(kind, float(arg) if arg else 1.0)
        except ValueError as exc:
            raise StatementError(f"cannot parse norm {text!r}") from exc


# --- anti-norms and determinants -------------------------------------------------


def _psd_eigenvalues(A) -> np.ndarray:
    w = eigenvalues(A)
    if w.size and w[-1] < -TAU_ORDER * max(1.0, abs(w[0])):
        raise StatementError("matrix is not positive semi-definite")
    return np.clip(w, 0.0, None)


def anti_norm_derived(A, p: float, base: SymmetricNorm) -> float:
    """``‖A^p‖^{1/p}`` for ``p < 0``, extended by 0 on singular matrices."""
    if not p < 0:
        raise StatementError("derived anti-norms need a negative exponent")
    w = _psd_eigenvalues(A)
    if w.size == 0 or w[0] == 0.0 or w[-1] < SINGULAR_RATIO * w[0]:
        return 0.0
    # A^p is diagonal in the eigenbasis, so the norm depends only on w^p
    powered = np.diag(w ** p)
    return float(base(powered) ** (1.0 / p))


def log_det(A) -> float:
    """``log det A`` for PSD ``A``; ``-inf`` when singular."""
    w = _psd_eigenvalues(A)
    if np.any(w <= 0):
        return -math.inf
    return float(np.sum(np.log(w)))


def determinant(A) -> float:
    return math.exp(log_det(A))


def minkowski_functional(A) -> float:
    """``det(A)^{1/n}`` as the exponential of the mean log-eigenvalue."""
    A = as_matrix(A)
    ld = log_det(A)
    if ld == -math.inf:
        return 0.0
    return math.exp(ld / A.shape[0])


# --- majorization ----------------------------------------------------------------


def partial_sums(X) -> np.ndarray:
    return np.cumsum(eigenvalues(X))


def majorization_margin(X, Y) -> float:
    """``min_k σ_k(Y) - σ_k(X)``; non-negative iff ``X`` is weakly majorized by ``Y``."""
    X, Y = hermitian(X), hermitian(Y)
    if X.shape != Y.shape:
        raise DimensionError(f"shape mismatch {X.shape} vs {Y.shape}")
    return float(np.min(partial_sums(Y) - partial_sums(X)))


def weak_majorization_leq(X, Y, tol: float = TAU_ORDER) -> bool:
    X, Y = hermitian(X), hermitian(Y)
    scale = max(1.0, float(np.max(np.abs(eigenvalues(X)))), float(np.max(np.abs(eigenvalues(Y)))))
    return majorization_margin(X, Y) >= -tol * scale


def odd_index_margin(lower, upper) -> float:
    """``min_k λ_k(upper) - λ_{2k-1}(lower)`` over ``1 <= k <= (n+1)/2``."""
    lo, up = eigenvalues(lower), eigenvalues(upper)
    if lo.shape != up.shape:
        raise DimensionError("shape mismatch")
    n = lo.size
    ks = np.arange(1, (n + 1) // 2 + 1)
    return float(np.min(up[ks - 1] - lo[2 * ks - 2]))


# --- evaluation records ----------------------------------------------------------


@dataclass
class Evaluation:
    statement_id: str
    margin: float
    scale: float = 1.0
    applicable: bool = True
    relative: bool = False
    reason: str = ""
    checks: dict = field(default_factory=dict)

    def threshold(self, tol: float = TAU_ORDER) -> float:
        return tol * (self.scale if self.relative else max(1.0, self.scale))

    def holds(self, tol: float = TAU_ORDER) -> bool:
        """True when not applicable or when the margin clears the tolerance."""
        if not self.applicable:
            return True
        return self.margin >= -self.threshold(tol)

    def to_json(self) -> dict:
        return {
            "statement_id": self.statement_id,
            "margin": None if math.isnan(self.margin) else self.margin,
            "scale": self.scale,
            "applicable": self.applicable,
            "relative": self.relative,
            "reason": self.reason,
            "checks": self.checks,
        }


@dataclass(frozen=True)
class InequalityStatement:
    id: str
    kind: str  # "scalar" or "order"
    operands: tuple
    needs_function: bool
    evaluator: Callable = field(repr=False)
    summary: str = ""
    relative: bool = False


STATEMENTS: dict[str, InequalityStatement] = {}


def _statement(sid: str, kind: str, operands: tuple, summary: str, needs_function: bool = True,
               relative: bool = False):
    def register(fn):
        STATEMENTS[sid] = InequalityStatement(sid, kind, operands, needs_function, fn, summary,
                                              relative)
        return fn

    return register


class _Checks:
    """Collects hypothesis verdicts and aborts on the first failure."""

    def __init__(self):
        self.record: dict = {}

    def require(self, name: str, ok: bool) -> None:
        self.record[name] = bool(ok)
        if not ok:
            raise NotApplicable(name)


def _spec_scale(*Ms) -> float:
    return max([1.0] + [float(np.max(np.abs(eigenvalues(M)))) for M in Ms if np.size(M)])


def _in_domain(f: ScalarFunction, A) -> bool:
    w = eigenvalues(A)
    tol = DOMAIN_TOL * max(1.0, float(np.max(np.abs(w))))
    return all(f.domain.contains(float(x), tol) for x in w)


def _is_psd(A) -> bool:
    w = eigenvalues(A)
    return bool(w[-1] >= -TAU_ORDER * max(1.0, abs(w[0])))


def _is_pd(A) -> bool:
    w = eigenvalues(A)
    return bool(w[-1] > SINGULAR_RATIO * max(1.0, abs(w[0])))


def _is_contraction(Z) -> bool:
    return singular_values(Z)[0] <= 1 + 1e-10


def _is_expansive(Z) -> bool:
    return singular_values(Z)[-1] >= 1 - 1e-10


def _is_isometric_column(Zs) -> bool:
    total = sum(Z.conj().T @ Z for Z in Zs)
    return bool(np.max(np.abs(total - np.eye(total.shape[0]))) <= 1e-10)


def _f_nonnegative(f: ScalarFunction, *Ms, points: Sequence[float] = ()) -> bool:
    """Sampled ``f >= 0`` on the convex hull of the spectra (and ``points``)."""
    ends = list(points)
    for M in Ms:
        w = eigenvalues(M)
        ends += [float(w[-1]), float(w[0])]
    lo, hi = f.domain.intersect(min(ends), max(ends))
    return f.nonnegative_on(lo, hi)


def _value_at_zero_at_least(f: ScalarFunction, bound: float) -> bool:
    v = f.value_at_zero
    return v is not None and v >= bound


def _value_at_zero_at_most(f: ScalarFunction, bound: float) -> bool:
    v = f.value_at_zero
    return v is not None and v <= bound


def _trace_f(f: ScalarFunction, A) -> float:
    return float(np.real(np.trace(apply_function(f, A))))


def _min_eig(X) -> float:
    return float(eigenvalues(X)[-1])


def _cstar(Zs, Xs) -> np.ndarray:
    return hermitian(sum(Z.conj().T @ X @ Z for Z, X in zip(Zs, Xs)), atol=np.inf)


def _result(margin: float, *values: float) -> tuple[float, float]:
    return float(margin), max([1.0] + [abs(float(v)) for v in values if math.isfinite(v)])


# --- catalogue -----------------------------------------------------------------


@_statement("vn-trace-1.1", "scalar", ("A", "B"), "Tr f((A+B)/2) >= Tr (f(A)+f(B))/2, f concave")
def _vn_trace(c: _Checks, f, A, B, **_):
    c.require("f concave", f.is_concave)
    c.require("spectra in domain", _in_domain(f, A) and _in_domain(f, B))
    lhs = (_trace_f(f, A) + _trace_f(f, B)) / 2
    rhs = _trace_f(f, (A + B) / 2)
    return _result(rhs - lhs, lhs, rhs)


@_statement("rotfeld-1.2", "scalar", ("A", "B"), "Tr f(A+B) <= Tr f(A) + Tr f(B)")
def _rotfeld_trace(c: _Checks, f, A, B, **_):
    c.require("f concave", f.is_concave)
    c.require("f(0) >= 0", _value_at_zero_at_least(f, 0.0))
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    c.require("spectra in domain", _in_domain(f, A) and _in_domain(f, B) and _in_domain(f, A + B))
    lhs = _trace_f(f, A + B)
    rhs = _trace_f(f, A) + _trace_f(f, B)
    return _result(rhs - lhs, lhs, rhs)


@_statement("hp-trace-2.6", "scalar", ("As", "Zs"), "Tr f(sum Z*AZ) <= Tr sum Z*f(A)Z, f convex")
def _hp_trace(c: _Checks, f, As, Zs, **_):
    c.require("f convex", f.is_convex)
    c.require("isometric column", _is_isometric_column(Zs))
    c.require("spectra in domain", all(_in_domain(f, A) for A in As))
    lhs = _trace_f(f, _cstar(Zs, As))
    rhs = float(np.real(np.trace(_cstar(Zs, [apply_function(f, A) for A in As]))))
    return _result(rhs - lhs, lhs, rhs)


@_statement("bk-trace-2.7", "scalar", ("A", "Z"), "Tr f(Z*AZ) <= Tr Z*f(A)Z, f(0) <= 0")
def _bk_trace(c: _Checks, f, A, Z, **_):
    c.require("f convex", f.is_convex)
    c.require("f(0) <= 0", _value_at_zero_at_most(f, 0.0))
    c.require("Z contraction", _is_contraction(Z))
    c.require("spectrum in domain", _in_domain(f, A))
    lhs = _trace_f(f, _cstar([Z], [A]))
    rhs = float(np.real(np.trace(Z.conj().T @ apply_function(f, A) @ Z)))
    return _result(rhs - lhs, lhs, rhs)


@_statement("det-mean", "scalar", ("A", "B"),
            "det^{1/n} f((A+B)/2) >= (det^{1/n} f(A) + det^{1/n} f(B))/2")
def _det_mean(c: _Checks, f, A, B, **_):
    c.require("f concave", f.is_concave)
    c.require("spectra in domain", _in_domain(f, A) and _in_domain(f, B))
    c.require("f >= 0", _f_nonnegative(f, A, B))
    lhs = (minkowski_functional(apply_function(f, A)) + minkowski_functional(apply_function(f, B))) / 2
    rhs = minkowski_functional(apply_function(f, (A + B) / 2))
    return _result(rhs - lhs, lhs, rhs)


@_statement("det-schur", "scalar", ("A", "Z"), "det f(Z∘A) >= det Z∘f(A)", relative=True)
def _det_schur(c: _Checks, f, A, Z, **_):
    c.require("f concave", f.is_concave)
    c.require("0 in domain", f.domain.contains(0.0))
    c.require("spectrum in domain", _in_domain(f, A))
    c.require("f >= 0", _f_nonnegative(f, A, points=(0.0,)))
    c.require("Z psd", _is_psd(Z))
    c.require("diag(Z) <= 1", bool(np.all(np.real(np.diag(Z)) <= 1 + 1e-10)))
    lhs = determinant(Z * apply_function(f, A))
    rhs = determinant(apply_function(f, hermitian(Z * A, atol=np.inf)))
    return rhs - lhs, max(abs(lhs), abs(rhs))


@_statement("fisher", "scalar", ("H", "split"), "det H <= det A det B", needs_function=False,
            relative=True)
def _fisher(c: _Checks, H, split, **_):
    c.require("H psd", _is_psd(H))
    c.require("proper split", 0 < split < H.shape[0])
    lhs = determinant(H)
    rhs = determinant(H[:split, :split]) * determinant(H[split:, split:])
    return rhs - lhs, max(abs(lhs), abs(rhs))


@_statement("minkowski-2.4", "scalar", ("A", "B"),
            "det^{1/n}(A+B) >= det^{1/n} A + det^{1/n} B", needs_function=False)
def _minkowski(c: _Checks, A, B, **_):
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    lhs = minkowski_functional(A) + minkowski_functional(B)
    rhs = minkowski_functional(A + B)
    return _result(rhs - lhs, lhs, rhs)


@_statement("antinorm-2.10", "scalar", ("A", "B", "p", "norm"),
            "derived anti-norms are superadditive", needs_function=False)
def _antinorm(c: _Checks, A, B, p, norm, **_):
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    c.require("p < 0", p < 0)
    lhs = anti_norm_derived(A, p, norm) + anti_norm_derived(B, p, norm)
    rhs = anti_norm_derived(A + B, p, norm)
    return _result(rhs - lhs, lhs, rhs)


@_statement("majorization", "scalar", ("As", "Zs"),
            "sigma_k f(sum Z*AZ) <= sigma_k sum Z*f(A)Z for every k")
def _majorization(c: _Checks, f, As, Zs, **_):
    c.require("f convex or concave", f.convexity != Convexity.NEITHER)
    c.require("isometric column", _is_isometric_column(Zs))
    c.require("spectra in domain", all(_in_domain(f, A) for A in As))
    f_phi = apply_function(f, _cstar(Zs, As))
    phi_f = _cstar(Zs, [apply_function(f, A) for A in As])
    lower, upper = (f_phi, phi_f) if f.is_convex else (-f_phi, -phi_f)
    return _result(majorization_margin(lower, upper), *eigenvalues(f_phi), *eigenvalues(phi_f))


@_statement("odd-index", "scalar", ("As", "Zs"),
            "lambda_{2k-1} f(sum Z*AZ) <= lambda_k sum Z*f(A)Z")
def _odd_index(c: _Checks, f, As, Zs, **_):
    c.require("f convex or concave", f.convexity != Convexity.NEITHER)
    c.require("isometric column", _is_isometric_column(Zs))
    c.require("spectra in domain", all(_in_domain(f, A) for A in As))
    f_phi = apply_function(f, _cstar(Zs, As))
    phi_f = _cstar(Zs, [apply_function(f, A) for A in As])
    lower, upper = (f_phi, phi_f) if f.is_convex else (-f_phi, -phi_f)
    return _result(odd_index_margin(lower, upper), *eigenvalues(f_phi), *eigenvalues(phi_f))


@_statement("choi", "order", ("A", "map"), "f(Phi(A)) <= Phi(f(A)), f operator convex")
def _choi(c: _Checks, f, A, map: PositiveLinearMap, **_):
    c.require("f operator convex or concave", f.operator_convex or f.operator_concave)
    c.require("map unital", classify_unitality(map)[0] == Unitality.UNITAL)
    c.require("spectrum in domain", _in_domain(f, A))
    f_phi = apply_function(f, map(A))
    phi_f = map(apply_function(f, A))
    diff = phi_f - f_phi if f.operator_convex else f_phi - phi_f
    return _result(_min_eig(diff), _spec_scale(f_phi, phi_f))


@_statement("hansen-pedersen", "order", ("As", "Zs"), "f(sum Z*AZ) <= sum Z*f(A)Z, operator convex")
def _hansen_pedersen(c: _Checks, f, As, Zs, **_):
    c.require("f operator convex or concave", f.operator_convex or f.operator_concave)
    c.require("isometric column", _is_isometric_column(Zs))
    c.require("spectra in domain", all(_in_domain(f, A) for A in As))
    f_phi = apply_function(f, _cstar(Zs, As))
    phi_f = _cstar(Zs, [apply_function(f, A) for A in As])
    diff = phi_f - f_phi if f.operator_convex else f_phi - phi_f
    return _result(_min_eig(diff), _spec_scale(f_phi, phi_f))


@_statement("hansen", "order", ("A", "Z"), "Z*f(A)Z <= f(Z*AZ), operator concave, f(0) >= 0")
def _hansen(c: _Checks, f, A, Z, **_):
    c.require("f operator concave", f.operator_concave)
    c.require("f(0) >= 0", _value_at_zero_at_least(f, 0.0))
    c.require("Z contraction", _is_contraction(Z))
    c.require("spectrum in domain", _in_domain(f, A))
    lhs = _cstar([Z], [apply_function(f, A)])
    rhs = apply_function(f, _cstar([Z], [A]))
    return _result(_min_eig(rhs - lhs), _spec_scale(lhs, rhs))


@_statement("expansive-trace", "scalar", ("A", "Z"), "Tr f(Z*AZ) <= Tr Z*f(A)Z, Z expansive")
def _expansive_trace(c: _Checks, f, A, Z, **_):
    c.require("f concave", f.is_concave)
    c.require("f(0) >= 0", _value_at_zero_at_least(f, 0.0))
    c.require("A psd", _is_psd(A))
    c.require("Z expansive", _is_expansive(Z))
    c.require("spectra in domain", _in_domain(f, A) and _in_domain(f, _cstar([Z], [A])))
    lhs = _trace_f(f, _cstar([Z], [A]))
    rhs = float(np.real(np.trace(Z.conj().T @ apply_function(f, A) @ Z)))
    return _result(rhs - lhs, lhs, rhs)


def _rotfeld_hypotheses(c: _Checks, f, *Ms):
    c.require("f concave", f.is_concave)
    c.require("psd operands", all(_is_psd(M) for M in Ms))
    c.require("spectra in domain", all(_in_domain(f, M) for M in Ms))
    c.require("f >= 0", _f_nonnegative(f, *Ms))


@_statement("rotfeld-norm", "scalar", ("A", "B", "norm"), "||f(A+B)|| <= ||f(A)|| + ||f(B)||")
def _rotfeld_norm(c: _Checks, f, A, B, norm, **_):
    _rotfeld_hypotheses(c, f, A, B, A + B)
    lhs_ = norm(apply_function(f, A + B))
    rhs_ = norm(apply_function(f, A)) + norm(apply_function(f, B))
    return _result(rhs_ - lhs_, lhs_, rhs_)


@_statement("rotfeld-sum-norm", "scalar", ("A", "B", "norm"), "||f(A+B)|| <= ||f(A) + f(B)||")
def _rotfeld_sum_norm(c: _Checks, f, A, B, norm, **_):
    _rotfeld_hypotheses(c, f, A, B, A + B)
    lhs_ = norm(apply_function(f, A + B))
    rhs_ = norm(apply_function(f, A) + apply_function(f, B))
    return _result(rhs_ - lhs_, lhs_, rhs_)


def _blocks(H, split):
    return H[:split, :split], H[split:, split:]


@_statement("block-norm-3.5", "scalar", ("H", "split", "norm"),
            "||f(H)|| <= ||f(A)|| + ||f(B)|| for a partitioned psd H")
def _block_norm(c: _Checks, f, H, split, norm, **_):
    c.require("proper split", 0 < split < H.shape[0])
    A, B = _blocks(H, split)
    _rotfeld_hypotheses(c, f, H, A, B)
    size = H.shape[0]
    lhs_ = norm(apply_function(f, H))
    rhs_ = norm.padded(apply_function(f, A), size) + norm.padded(apply_function(f, B), size)
    return _result(rhs_ - lhs_, lhs_, rhs_)


@_statement("block-trace", "scalar", ("H", "split"), "Tr f(H) <= Tr f(A) + Tr f(B)")
def _block_trace(c: _Checks, f, H, split, **_):
    c.require("f concave", f.is_concave)
    c.require("proper split", 0 < split < H.shape[0])
    c.require("H psd", _is_psd(H))
    A, B = _blocks(H, split)
    c.require("spectra in domain", all(_in_domain(f, M) for M in (H, A, B)))
    lhs = _trace_f(f, H)
    rhs = _trace_f(f, A) + _trace_f(f, B)
    return _result(rhs - lhs, lhs, rhs)


@_statement("det-3.6", "scalar", ("A", "B"),
            "det^{1/n} g(A+B) >= det^{1/n} g(A) + det^{1/n} g(B), g convex, g(0) = 0")
def _det_convex(c: _Checks, f, A, B, **_):
    c.require("g convex", f.is_convex)
    c.require("g(0) = 0", f.value_at_zero is not None and abs(f.value_at_zero) <= 1e-12)
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    c.require("g >= 0", _f_nonnegative(f, A, B, A + B))
    lhs = (minkowski_functional(apply_function(f, A)) + minkowski_functional(apply_function(f, B)))
    rhs = minkowski_functional(apply_function(f, A + B))
    return _result(rhs - lhs, lhs, rhs)


@_statement("poly-3.12", "scalar", ("A", "B", "norm"),
            "||g(A+B)||^{1/m} <= ||g(A)||^{1/m} + ||g(B)||^{1/m}")
def _poly_norm(c: _Checks, f, A, B, norm, **_):
    c.require("g polynomial with non-negative coefficients",
              bool(f.params) and f.spec.startswith("poly:") and all(x >= 0 for x in f.params))
    m = len(f.params) - 1
    c.require("degree >= 1", m >= 1)
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    root = 1.0 / m
    lhs = norm(apply_function(f, A + B)) ** root
    rhs = norm(apply_function(f, A)) ** root + norm(apply_function(f, B)) ** root
    return _result(rhs - lhs, lhs, rhs)


@_statement("schatten-triangle", "scalar", ("A", "B", "p"),
            "(Tr (A+B)^p)^{1/p} <= (Tr A^p)^{1/p} + (Tr B^p)^{1/p}", needs_function=False)
def _schatten_triangle(c: _Checks, A, B, p, **_):
    c.require("p > 1", p > 1)
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    lhs = schatten_norm(A + B, p)
    rhs = schatten_norm(A, p) + schatten_norm(B, p)
    return _result(rhs - lhs, lhs, rhs)


def cond_bound_constant(omega: float) -> float:
    return (omega + 1) / (2 * math.sqrt(omega))


def condition_number(X) -> float:
    s = singular_values(X)
    return math.inf if s[-1] == 0 else float(s[0] / s[-1])


@_statement("cond-bound-2.19", "order", ("As", "omega"),
            "|sum A_i| <= ((w+1)/(2 sqrt w)) sum |A_i| when every condition number <= w",
            needs_function=False)
def _cond_bound(c: _Checks, As, omega, **_):
    c.require("omega >= 1", omega >= 1)
    c.require("condition numbers <= omega",
              all(condition_number(X) <= omega * (1 + 1e-9) for X in As))
    total = sum(As)
    lhs = modulus(total)
    rhs = cond_bound_constant(omega) * sum(modulus(X) for X in As)
    return _result(_min_eig(rhs - lhs), _spec_scale(lhs, rhs))


@_statement("ando-difference", "scalar", ("A", "B", "norm"),
            "||f(A) - f(B)|| <= ||f(|A-B|)||, f operator monotone on [0, inf)")
def _ando(c: _Checks, f, A, B, norm, **_):
    c.require("f operator monotone", f.operator_monotone)
    c.require("f(0) >= 0", _value_at_zero_at_least(f, 0.0))
    c.require("A, B psd", _is_psd(A) and _is_psd(B))
    c.require("f >= 0", _f_nonnegative(f, A, B))
    diff = apply_scalar_map(np.abs, A - B)
    lhs = norm(apply_function(f, A) - apply_function(f, B))
    rhs = norm(apply_function(f, diff))
    return _result(rhs - lhs, lhs, rhs)


# --- dispatcher ----------------------------------------------------------------


def _normalize_operand(name: str, value):
    if name in ("A", "B", "H", "Z"):
        return as_matrix(value) if name == "Z" else hermitian(value)
    if name == "As":
        return [as_matrix(v) for v in value]
    if name == "Zs":
        return [as_matrix(v) for v in value]
    if name == "split":
        return int(value)
    if name in ("p", "omega"):
        return float(value)
    if name == "norm":
        return value if isinstance(value, SymmetricNorm) else SymmetricNorm.parse(str(value))
    if name == "map":
        if not isinstance(value, PositiveLinearMap):
            raise StatementError("operand 'map' must be a positive linear map")
        return value
    raise StatementError(f"unknown operand {name!r}")


def evaluate_inequality(statement_id: str, operands: dict,
                        f: Optional[ScalarFunction] = None) -> Evaluation:
    """Evaluate one catalogue statement on concrete operands.

    Hypothesis failures come back as ``applicable=False`` with the failing
    check named in ``reason``; they never count as violations.
    """
    try:
        st = STATEMENTS[statement_id]
    except KeyError:
        raise StatementError(f"unknown statement id {statement_id!r}") from None
    missing = [name for name in st.operands if name not in operands]
    if missing:
        raise StatementError(f"{statement_id}: missing operands {missing}")
    if st.needs_function and f is None:
        raise StatementError(f"{statement_id}: a scalar function is required")
    try:
        kwargs = {name: _normalize_operand(name, operands[name]) for name in st.operands}
    except (LinalgError, TypeError, ValueError) as exc:
        raise StatementError(f"{statement_id}: malformed operands: {exc}") from exc
    _check_shapes(statement_id, kwargs)
    checks = _Checks()
    try:
        if st.needs_function:
            margin, scale = st.evaluator(checks, f, **kwargs)
        else:
            margin, scale = st.evaluator(checks, **kwargs)
    except NotApplicable as na:
        return Evaluation(statement_id, math.nan, applicable=False, relative=st.relative,
                          reason=str(na), checks=checks.record)
    return Evaluation(statement_id, float(margin), float(scale), relative=st.relative,
                      checks=checks.record)


def _check_shapes(statement_id: str, kw: dict) -> None:
    mats = [kw[k] for k in ("A", "B", "Z") if k in kw]
    mats += list(kw.get("As", [])) + list(kw.get("Zs", []))
    shapes = {M.shape for M in mats}
    if kw.get("As") is not None and kw.get("Zs") is not None and len(kw["As"]) != len(kw["Zs"]):
        raise StatementError(f"{statement_id}: As and Zs differ in length")
    if len(shapes) > 1:
        raise StatementError(f"{statement_id}: operand shapes disagree: {sorted(shapes)}")
    for M in mats:
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise StatementError(f"{statement_id}: operands must be square")


def statement_ids() -> list[str]:
    return sorted(STATEMENTS)
