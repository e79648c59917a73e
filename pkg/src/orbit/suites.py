"""Random-instance trials for every witness construction and catalogue
statement.

A trial draws operands that satisfy the statement's hypotheses, runs the
construction or evaluator, and returns one :class:`TrialOutcome` per checked
inequality (Jensen-type trials also report the majorization and odd-index
consequences of the same instance).
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from orbit import generators as gen
from orbit import linalg
from orbit.functionals import (STATEMENTS, SymmetricNorm, evaluate_inequality,
                               majorization_margin, odd_index_margin)
from orbit.functions import ScalarFunction, parse_function
from orbit.linalg import TAU_ORDER, apply_function, direct_sum
from orbit.maps import (Compression, CStarCombination, Expectation, PositiveLinearMap,
                        SchurMultiplier, Unitality, classify_unitality, cstar_block_map,
                        mean_map, stinespring_reduce)
from orbit import witnesses as wit


@dataclass
class TrialOutcome:
    statement_id: str
    margin: float
    threshold: float
    applicable: bool = True
    operands_hash: str = ""
    note: str = ""

    @property
    def failed(self) -> bool:
        if not self.applicable:
            return False
        return not (self.margin >= -self.threshold)


@dataclass(frozen=True)
class FunctionChoice:
    """A catalogue function with a bounded sampling window inside its domain."""

    f: ScalarFunction
    window: tuple[float, float]

    def nonnegative(self) -> bool:
        return self.f.nonnegative_on(*self.window)


def _choice(spec: str, lo: float, hi: float) -> FunctionChoice:
    return FunctionChoice(parse_function(spec), (lo, hi))


POOL: tuple[FunctionChoice, ...] = (
    _choice("pow:2", 0.0, 3.0),
    _choice("pow:3", 0.0, 2.0),
    _choice("pow:1.5", 0.0, 3.0),
    _choice("pow:-1", 0.25, 4.0),
    _choice("pow:-0.5", 0.25, 4.0),
    _choice("abs", -3.0, 3.0),
    _choice("pos", -3.0, 3.0),
    _choice("exp", -2.0, 2.0),
    _choice("sq:1", -1.0, 3.0),
    _choice("poly:1,1,1", 0.0, 2.0),
    _choice("poly:0,1,2", 0.0, 2.0),
    _choice("pwl:-1,2;0,0;1,0.5;2,3", -2.0, 3.0),
    _choice("pwl:0,-0.5;1,0;2,2", 0.0, 3.0),
    _choice("affine:1,-0.5", -2.0, 2.0),
    _choice("pow:0.5", 0.0, 4.0),
    _choice("pow:0.3", 0.0, 4.0),
    _choice("log", 0.2, 5.0),
    _choice("log1p", 0.0, 5.0),
    _choice("pwl:-1,-3;0,0;1,1;3,0", -2.0, 4.0),
    _choice("pwl:0,0;1,1.5;3,2.5", 0.0, 5.0),
    _choice("affine:0.5,1", 0.0, 4.0),
    _choice("affine:-1,2", -2.0, 2.0),
)


def override_choice(f: ScalarFunction) -> FunctionChoice:
    return FunctionChoice(f, f.domain.sample_window(2.0))


# --- function classes ----------------------------------------------------------------

def _f0(f: ScalarFunction) -> Optional[float]:
    return f.value_at_zero


def _on_half_line(c: FunctionChoice) -> bool:
    return c.window[0] >= 0 and c.f.domain.contains(0.0)


def convex_or_concave(c: FunctionChoice) -> bool:
    return c.f.is_convex or c.f.is_concave


def monotone_jensen(c: FunctionChoice) -> bool:
    return convex_or_concave(c) and c.f.is_monotone


def subunital_jensen(c: FunctionChoice) -> bool:
    """Convex with ``f(0) <= 0`` or concave with ``f(0) >= 0`` and 0 in the window."""
    f0 = _f0(c.f)
    if f0 is None or not c.window[0] <= 0 <= c.window[1]:
        return False
    return (c.f.is_convex and f0 <= 0) or (c.f.is_concave and f0 >= 0)


def concave_subunital(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return (c.f.is_concave and f0 is not None and f0 >= 0
            and c.window[0] <= 0 <= c.window[1])


def concave_monotone_half_line(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return (_on_half_line(c) and c.f.is_concave and c.f.is_monotone
            and f0 is not None and f0 >= 0)


def convex_monotone_half_line(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return (_on_half_line(c) and c.f.is_convex and c.f.is_monotone
            and f0 is not None and f0 <= 0)


def nonneg_concave_half_line(c: FunctionChoice) -> bool:
    return _on_half_line(c) and c.f.is_concave and c.nonnegative()


def concave_half_line(c: FunctionChoice) -> bool:
    return c.window[0] >= 0 and c.f.is_concave


def nondecreasing_convex_half_line(c: FunctionChoice) -> bool:
    return (c.f.domain.contains(0.0) and c.f.is_convex and c.f.is_nondecreasing)


def convex_only(c: FunctionChoice) -> bool:
    return c.f.is_convex


def concave_only(c: FunctionChoice) -> bool:
    return c.f.is_concave


def convex_nonpositive_at_zero(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return c.f.is_convex and f0 is not None and f0 <= 0 and c.window[0] <= 0 <= c.window[1]


def nonneg_concave(c: FunctionChoice) -> bool:
    return c.f.is_concave and c.nonnegative()


def nonneg_concave_with_zero(c: FunctionChoice) -> bool:
    return nonneg_concave(c) and c.window[0] <= 0 <= c.window[1]


def convex_vanishing_at_zero(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return (_on_half_line(c) and c.f.is_convex and f0 is not None and abs(f0) <= 1e-12
            and c.f.nonnegative_on(0.0, 100.0))


def polynomial_class(c: FunctionChoice) -> bool:
    return c.f.spec.startswith("poly:") and len(c.f.params) >= 2


def operator_class(c: FunctionChoice) -> bool:
    return c.f.operator_convex or c.f.operator_concave


def operator_concave_hansen(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return c.f.operator_concave and f0 is not None and f0 >= 0 and c.window[0] >= 0


def operator_monotone_half_line(c: FunctionChoice) -> bool:
    f0 = _f0(c.f)
    return (c.f.operator_monotone and _on_half_line(c) and f0 is not None and f0 >= 0
            and c.nonnegative())


def any_function(c: FunctionChoice) -> bool:
    return True


# --- helpers ----------------------------------------------------------------------------


def operands_hash(*objs) -> str:
    h = hashlib.sha256()
    for obj in objs:
        if isinstance(obj, (list, tuple)):
            h.update(operands_hash(*obj).encode())
        elif isinstance(obj, np.ndarray):
            h.update(repr(obj.shape).encode())
            h.update(np.ascontiguousarray(obj, dtype=np.complex128).tobytes())
        else:
            h.update(repr(obj).encode())
    return h.hexdigest()[:16]


def _herm(rng, n, window) -> np.ndarray:
    return gen.random_hermitian_in(rng, n, *window)


def _psd(rng, n, hi: float = 4.0) -> np.ndarray:
    """PSD operand with norm at most ``hi``; occasionally rank-deficient."""
    u = rng.random()
    if u < 0.15 and n > 1:
        rank = int(rng.integers(1, n))
        A = gen.random_psd(rng, n, rank=rank)
    elif u < 0.2:
        return np.zeros((n, n), dtype=complex)
    else:
        A = gen.random_psd(rng, n)
    top = float(linalg.eigenvalues(A)[0])
    if top > 0:
        A = A * (rng.uniform(0.1, 1.0) * hi / top)
    return A


def _random_norm(rng) -> SymmetricNorm:
    k = int(rng.integers(4))
    if k == 0:
        return SymmetricNorm("schatten", float(rng.choice([1.0, 1.5, 2.0, 3.0, 7.0])))
    if k == 1:
        return SymmetricNorm("ky-fan", float(rng.integers(1, 5)))
    if k == 2:
        return SymmetricNorm("operator")
    return SymmetricNorm("normalized-trace")


def random_unital_map(rng, d: int) -> tuple[PositiveLinearMap, int]:
    """A unital positive map into ``M_d`` and its source dimension."""
    if d == 1 and rng.random() < 0.5:
        n = int(rng.integers(1, 5))
        h = gen.complex_gaussian(rng, n, 1).ravel()
        return Expectation(h / np.linalg.norm(h)), n
    kind = int(rng.integers(3))
    if kind == 0:
        n = d + int(rng.integers(0, 3))
        J = gen.haar_unitary(rng, n)[:, :d]
        return Compression(J), n
    if kind == 1:
        return SchurMultiplier(gen.schur_subunital(rng, d, unital=True)), d
    m = int(rng.integers(1, 4))
    V = gen.haar_unitary(rng, m * d)[:, :d]
    # C*-combination with m blocks of n = d rows: Σ Zᵢ* A Zᵢ on M_d
    return CStarCombination(tuple(V[i * d:(i + 1) * d] for i in range(m))), d


def random_subunital_map(rng, d: int) -> tuple[PositiveLinearMap, int]:
    kind = int(rng.integers(3))
    if kind == 0:
        return CStarCombination((gen.random_contraction(rng, d),)), d
    if kind == 1:
        return SchurMultiplier(gen.schur_subunital(rng, d)), d
    n = d + int(rng.integers(0, 3))
    J = gen.haar_unitary(rng, n)[:, :d] * math.sqrt(rng.uniform(0.2, 1.0))
    return CStarCombination((J,)), n


def _certificate_outcome(cert: wit.WitnessCertificate, h: str) -> TrialOutcome:
    return TrialOutcome(cert.statement_id, cert.min_residual_eigenvalue, cert.tolerance_used,
                        operands_hash=h)


def _scaled(tol: float, *mats) -> float:
    return tol * max([1.0] + [linalg.spectral_radius(M) for M in mats])


def _jensen_consequences(convex: bool, f_phi, phi_f, tol: float, h: str) -> list:
    """Majorization and odd-index checks for one Jensen-type instance."""
    lower, upper = (f_phi, phi_f) if convex else (-f_phi, -phi_f)
    thr = _scaled(tol, f_phi, phi_f)
    return [
        TrialOutcome("majorization", majorization_margin(lower, upper), thr, operands_hash=h),
        TrialOutcome("odd-index", odd_index_margin(lower, upper), thr, operands_hash=h),
    ]


# --- witness trials --------------------------------------------------------------------


def _jensen_common(sid: str, f, phi, X, tol: float, single: Optional[bool], h: str) -> list:
    cert = wit.jensen_witness(f, phi, X, statement_id=sid, single=single, strict=False)
    cert = _retolerance(cert, tol)
    f_phi = apply_function(f, phi(X))
    phi_f = phi(apply_function(f, X))
    unital = classify_unitality(phi)[0] == Unitality.UNITAL
    convex = wit.jensen_orientation(f, unital)
    return [_certificate_outcome(cert, h)] + _jensen_consequences(convex, f_phi, phi_f, tol, h)


def _retolerance(cert: wit.WitnessCertificate, tol: float) -> wit.WitnessCertificate:
    if tol == TAU_ORDER:
        return cert
    return replace(cert, tolerance_used=cert.tolerance_used / TAU_ORDER * tol)


def trial_jensen_monotone(rng, d, c: FunctionChoice, tol):
    phi, n = random_unital_map(rng, d)
    A = _herm(rng, n, c.window)
    return _jensen_common("jensen-monotone", c.f, phi, A, tol, True, operands_hash(A))


def trial_jensen(rng, d, c: FunctionChoice, tol):
    phi, n = random_unital_map(rng, d)
    A = _herm(rng, n, c.window)
    return _jensen_common("jensen", c.f, phi, A, tol, False, operands_hash(A))


def trial_jensen_mean(rng, d, c: FunctionChoice, tol):
    A, B = _herm(rng, d, c.window), _herm(rng, d, c.window)
    return _jensen_common("jensen-mean", c.f, mean_map(d), direct_sum(A, B), tol,
                          c.f.is_monotone, operands_hash(A, B))


def trial_jensen_cstar(rng, d, c: FunctionChoice, tol):
    m = int(rng.integers(1, 5))
    Zs = gen.isometric_column(rng, d, m)
    As = [_herm(rng, d, c.window) for _ in range(m)]
    return _jensen_common("jensen-cstar", c.f, cstar_block_map(Zs), direct_sum(*As), tol,
                          c.f.is_monotone, operands_hash(As, Zs))


def trial_jensen_contraction(rng, d, c: FunctionChoice, tol):
    Z = gen.random_contraction(rng, d)
    A = _herm(rng, d, c.window)
    return _jensen_common("jensen-contraction", c.f, CStarCombination((Z,)), A, tol,
                          c.f.is_monotone, operands_hash(A, Z))


def trial_jensen_schur(rng, d, c: FunctionChoice, tol):
    Z = gen.schur_subunital(rng, d)
    A = _herm(rng, d, c.window)
    return _jensen_common("jensen-schur", c.f, SchurMultiplier(Z), A, tol, c.f.is_monotone,
                          operands_hash(A, Z))


def trial_jensen_subunital(rng, d, c: FunctionChoice, tol):
    psi, n = random_subunital_map(rng, d)
    A = _herm(rng, n, c.window)
    single = c.f.is_monotone and bool(rng.integers(2))
    return _jensen_common("jensen-subunital", c.f, psi, A, tol, single, operands_hash(A))


def _psd_pair(rng, d, c: FunctionChoice):
    hi = c.window[1] / 2
    return _psd(rng, d, hi), _psd(rng, d, hi)


def trial_subadditivity(rng, d, c: FunctionChoice, tol):
    A, B = _psd_pair(rng, d, c)
    cert = _retolerance(wit.subadd_witness(c.f, A, B, strict=False), tol)
    return [_certificate_outcome(cert, operands_hash(A, B))]


trial_superadditivity = trial_subadditivity


def trial_difference(rng, d, c: FunctionChoice, tol):
    A, B = _psd_pair(rng, d, c)
    cert = _retolerance(wit.difference_witness(c.f, A, B, strict=False), tol)
    return [_certificate_outcome(cert, operands_hash(A, B))]


def _block_matrix(rng, d) -> tuple[np.ndarray, int]:
    N = max(d, 2)
    H = _psd(rng, N, 4.0)
    return H, int(rng.integers(1, N))


def trial_block_decomposition(rng, d, c, tol):
    H, split = _block_matrix(rng, d)
    dec = wit.block_decompose(H, split)
    cert = _retolerance(wit.block_certificate(dec), tol)
    return [_certificate_outcome(cert, operands_hash(H, split))]


def trial_diagonal_pinch(rng, d, c: FunctionChoice, tol):
    A = _psd(rng, d, c.window[1])
    res = wit.diagonal_pinch(A, c.f, strict=False)
    h = operands_hash(A)
    out = [_certificate_outcome(_retolerance(res.certificate, tol), h)]
    fa = c.f(np.real(np.diag(A)))
    out.append(TrialOutcome("diagonal-trace", res.trace_margin,
                            tol * max(1.0, float(np.sum(np.abs(fa)))), operands_hash=h))
    return out


def trial_cartesian(rng, d, c: FunctionChoice, tol):
    half = c.window[1] / 2
    A = _herm(rng, d, (-half, half))
    B = _herm(rng, d, (-half, half))
    cert = _retolerance(wit.cartesian_witness(c.f, A, B, strict=False), tol)
    return [_certificate_outcome(cert, operands_hash(A, B))]


def trial_positive_part(rng, d, c: FunctionChoice, tol):
    half = c.window[1] / 2
    A = _herm(rng, d, (-half, half))
    B = _herm(rng, d, (-half, half))
    res = wit.positive_part_witness(A, B, c.f, strict=False)
    h = operands_hash(A, B)
    return [_certificate_outcome(_retolerance(res.pinch, tol), h),
            _certificate_outcome(_retolerance(res.full, tol), h)]


def trial_normal_triangle(rng, d, c, tol):
    X, Y = gen.random_normal(rng, d), gen.random_normal(rng, d)
    cert = _retolerance(wit.normal_triangle_witness(X, Y, strict=False), tol)
    return [_certificate_outcome(cert, operands_hash(X, Y))]


def trial_dilation(rng, d, c, tol):
    phi, n = random_unital_map(rng, d)
    A = _herm(rng, n, (-3.0, 3.0))
    red = stinespring_reduce(phi, A)
    target = phi(A)
    err = linalg.operator_norm(red.compress(red.pi_A) - target)
    return [TrialOutcome("dilation", -err, tol * max(1.0, linalg.operator_norm(target)),
                         operands_hash=operands_hash(A), note=phi.kind)]


# --- catalogue trials ----------------------------------------------------------------------


def _evaluation_outcome(sid: str, operands: dict, f, tol: float, h: str) -> TrialOutcome:
    ev = evaluate_inequality(sid, operands, f)
    if not ev.applicable:
        return TrialOutcome(sid, math.nan, 0.0, applicable=False, operands_hash=h, note=ev.reason)
    return TrialOutcome(sid, ev.margin, ev.threshold(tol), operands_hash=h)


NEUTRAL = FunctionChoice(parse_function("affine:1,0"), (0.0, 4.0))


def _statement_trial(sid: str, sampler: Callable) -> Callable:
    def trial(rng, d, c: Optional[FunctionChoice], tol):
        c = c or NEUTRAL
        ops = sampler(rng, d, c)
        f = c.f if STATEMENTS[sid].needs_function else None
        return [_evaluation_outcome(sid, ops, f, tol, operands_hash(*ops.values()))]

    trial.__name__ = f"trial_{sid}"
    return trial


def _two_in_window(rng, d, c):
    return {"A": _herm(rng, d, c.window), "B": _herm(rng, d, c.window)}


def _psd_two(rng, d, c):
    A, B = _psd_pair(rng, d, c)
    return {"A": A, "B": B}


def _psd_two_in_window(rng, d, c):
    hi = c.window[1] / 2
    return {"A": _herm(rng, d, (0.0, hi)), "B": _herm(rng, d, (0.0, hi))}


def _column(rng, d, c):
    m = int(rng.integers(1, 5))
    return {"As": [_herm(rng, d, c.window) for _ in range(m)],
            "Zs": gen.isometric_column(rng, d, m)}


def _with_contraction(rng, d, c):
    return {"A": _herm(rng, d, c.window), "Z": gen.random_contraction(rng, d)}


def _psd_with_contraction(rng, d, c):
    return {"A": _herm(rng, d, (max(0.0, c.window[0]), c.window[1])),
            "Z": gen.random_contraction(rng, d)}


def _with_expansive(rng, d, c):
    return {"A": _psd(rng, d, c.window[1]), "Z": gen.random_expansive(rng, d)}


def _with_schur(rng, d, c):
    return {"A": _herm(rng, d, (0.0, c.window[1])), "Z": gen.schur_subunital(rng, d)}


def _block(rng, d, c):
    H, split = _block_matrix(rng, d)
    return {"H": H, "split": split}


def _block_in_window(rng, d, c):
    N = max(d, 2)
    return {"H": _herm(rng, N, c.window), "split": int(rng.integers(1, N))}


def _block_with_norm(rng, d, c):
    return {**_block(rng, d, c), "norm": _random_norm(rng)}


def _psd_two_norm(rng, d, c):
    return {**_psd_two(rng, d, c), "norm": _random_norm(rng)}


def _antinorm_operands(rng, d, c):
    return {**_psd_two(rng, d, c), "p": float(rng.choice([-0.1, -0.5, -1.0, -2.0, -3.0])),
            "norm": _random_norm(rng)}


def _schatten_operands(rng, d, c):
    return {**_psd_two(rng, d, c), "p": float(rng.choice([1.5, 2.0, 3.0, 4.5]))}


OMEGAS = (1.0, 2.0, 10.0, 100.0)


def _cond_operands(rng, d, c):
    omega = float(rng.choice(OMEGAS))
    m = int(rng.integers(2, 6))
    return {"As": [gen.conditioned_invertible(rng, d, omega) for _ in range(m)], "omega": omega}


def _with_unital_map(rng, d, c):
    phi, n = random_unital_map(rng, d)
    return {"A": _herm(rng, n, c.window), "map": phi}


def _fisher_operands(rng, d, c):
    return _block(rng, d, c)


# --- registry ----------------------------------------------------------------------------


@dataclass(frozen=True)
class Suite:
    id: str
    kind: str  # "witness", "statement" or "dilation"
    trial: Callable = None
    accepts: Callable[[FunctionChoice], bool] = any_function
    uses_function: bool = True


WITNESS_SUITES = (
    Suite("jensen-monotone", "witness", trial_jensen_monotone, monotone_jensen),
    Suite("jensen", "witness", trial_jensen, convex_or_concave),
    Suite("jensen-mean", "witness", trial_jensen_mean, convex_or_concave),
    Suite("jensen-cstar", "witness", trial_jensen_cstar, convex_or_concave),
    Suite("jensen-contraction", "witness", trial_jensen_contraction, concave_subunital),
    Suite("jensen-schur", "witness", trial_jensen_schur, concave_subunital),
    Suite("jensen-subunital", "witness", trial_jensen_subunital, subunital_jensen),
    Suite("subadditivity", "witness", trial_subadditivity, concave_monotone_half_line),
    Suite("superadditivity", "witness", trial_superadditivity, convex_monotone_half_line),
    Suite("difference", "witness", trial_difference, nonneg_concave_half_line),
    Suite("block-decomposition", "witness", trial_block_decomposition, uses_function=False),
    Suite("diagonal-pinch", "witness", trial_diagonal_pinch, nonneg_concave_half_line),
    Suite("cartesian", "witness", trial_cartesian, nondecreasing_convex_half_line),
    Suite("positive-part", "witness", trial_positive_part, nondecreasing_convex_half_line),
    Suite("normal-triangle", "witness", trial_normal_triangle, uses_function=False),
)

_STATEMENT_PLAN = (
    ("vn-trace-1.1", _two_in_window, concave_only),
    ("rotfeld-1.2", _psd_two_in_window, lambda c: concave_subunital(c) and c.window[0] >= 0),
    ("hp-trace-2.6", _column, convex_only),
    ("bk-trace-2.7", _with_contraction, convex_nonpositive_at_zero),
    ("det-mean", _two_in_window, nonneg_concave),
    ("det-schur", _with_schur, nonneg_concave_with_zero),
    ("fisher", _fisher_operands, None),
    ("minkowski-2.4", _psd_two, None),
    ("antinorm-2.10", _antinorm_operands, None),
    ("majorization", _column, convex_or_concave),
    ("odd-index", _column, convex_or_concave),
    ("choi", _with_unital_map, operator_class),
    ("hansen-pedersen", _column, operator_class),
    ("hansen", _psd_with_contraction, operator_concave_hansen),
    ("expansive-trace", _with_expansive, lambda c: concave_subunital(c) and c.window[0] >= 0),
    ("rotfeld-norm", _psd_two_norm, nonneg_concave_half_line),
    ("rotfeld-sum-norm", _psd_two_norm, nonneg_concave_half_line),
    ("block-norm-3.5", _block_with_norm, nonneg_concave_half_line),
    ("block-trace", _block_in_window, concave_half_line),
    ("det-3.6", _psd_two, convex_vanishing_at_zero),
    ("poly-3.12", _psd_two_norm, polynomial_class),
    ("schatten-triangle", _schatten_operands, None),
    ("cond-bound-2.19", _cond_operands, None),
    ("ando-difference", _psd_two_norm, operator_monotone_half_line),
)

STATEMENT_SUITES = tuple(
    Suite(sid, "statement", _statement_trial(sid, sampler), accepts or any_function,
          uses_function=accepts is not None)
    for sid, sampler, accepts in _STATEMENT_PLAN
)

DILATION_SUITE = Suite("dilation", "dilation", trial_dilation, uses_function=False)

SUITES: dict[str, Suite] = {s.id: s for s in WITNESS_SUITES + STATEMENT_SUITES + (DILATION_SUITE,)}

DEFAULT_SUITE = tuple(SUITES)


def function_choices(suite: Suite, override: Optional[ScalarFunction] = None) -> list:
    """Pool entries admissible for ``suite`` (or the override when it fits)."""
    if not suite.uses_function:
        return [None]
    if override is not None:
        c = override_choice(override)
        return [c] if suite.accepts(c) else []
    return [c for c in POOL if suite.accepts(c)]
