"""Suite execution, counterexample reproduction and conjecture fuzzing."""
from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from orbit import generators as gen
from orbit import linalg
from orbit.functionals import cond_bound_constant, condition_number
from orbit.functions import (Convexity, ScalarFunction, check_convexity, parse_function,
                             piecewise_linear)
from orbit.linalg import TAU_ORDER, apply_function, precise_eigensolver
from orbit.suites import (DEFAULT_SUITE, OMEGAS, SUITES, Suite, TrialOutcome, function_choices,
                          operands_hash)


class HarnessError(ValueError):
    pass


def _finite(x: float):
    if x is None:
        return None
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "-inf" if x < 0 else "inf"
    return float(x)


@dataclass
class Failure:
    suite: str
    statement_id: str
    trial: int
    dim: int
    seed: int
    operands_hash: str
    margin: float
    threshold: float
    note: str = ""

    def to_json(self) -> dict:
        d = asdict(self)
        d["margin"] = _finite(self.margin)
        return d


@dataclass
class StatementStats:
    instances: int = 0
    applicable: int = 0
    failures: int = 0
    noise: int = 0
    worst_margin: float = math.inf
    worst_ratio: float = math.inf  # margin / threshold

    def add(self, o: TrialOutcome, failed: bool, noise: bool) -> None:
        self.instances += 1
        if not o.applicable:
            return
        self.applicable += 1
        self.failures += failed
        self.noise += noise
        if o.margin < self.worst_margin or math.isnan(o.margin):
            self.worst_margin = o.margin
        if o.threshold > 0 and o.margin / o.threshold < self.worst_ratio:
            self.worst_ratio = o.margin / o.threshold

    def to_json(self) -> dict:
        d = asdict(self)
        d["worst_margin"] = _finite(self.worst_margin) if self.applicable else None
        d["worst_ratio"] = _finite(self.worst_ratio) if self.applicable else None
        return d


@dataclass
class SuiteReport:
    suite: list
    dims: list
    trials: int
    seed: int
    tol: float
    function: Optional[str]
    failures: list = field(default_factory=list)
    statements: dict = field(default_factory=dict)
    skipped_suites: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def worst_margin(self) -> float:
        vals = [s.worst_margin for s in self.statements.values() if s.applicable]
        return min(vals) if vals else math.inf

    @property
    def worst_statement(self) -> Optional[str]:
        best = None
        for sid, s in sorted(self.statements.items()):
            if s.applicable and (best is None or s.worst_margin < self.statements[best].worst_margin):
                best = sid
        return best

    def margins_by_statement(self) -> dict:
        return {sid: s.worst_margin for sid, s in self.statements.items() if s.applicable}

    def to_json(self, include_timing: bool = True) -> dict:
        out = {
            "config": {"suite": list(self.suite), "dims": list(self.dims), "trials": self.trials,
                       "seed": self.seed, "tol": self.tol, "function": self.function},
            "passed": self.passed,
            "failures": [f.to_json() for f in self.failures],
            "statements": {k: v.to_json() for k, v in sorted(self.statements.items())},
            "skipped_suites": list(self.skipped_suites),
            "worst_margin": _finite(self.worst_margin) if self.statements else None,
            "worst_statement": self.worst_statement,
        }
        if include_timing:
            out["wall_time"] = self.wall_time
        return out

    def dumps(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_json(include_timing), sort_keys=True, indent=2)


def _run_trial(suite: Suite, seed: int, trial: int, dim: int, choices: list, tol: float,
               ) -> list[TrialOutcome]:
    rng = gen.trial_rng(seed, suite.id, trial)
    choice = choices[int(rng.integers(len(choices)))]
    try:
        return suite.trial(rng, dim, choice, tol)
    except (ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        return [TrialOutcome(suite.id, -math.inf, 0.0, note=f"{type(exc).__name__}: {exc}")]


def run_suite(suite: Sequence[str] | str = "all", dims: Iterable[int] = range(1, 9),
              trials: int = 100, seed: int = 42, tol: float = TAU_ORDER,
              function: Optional[ScalarFunction | str] = None,
              reverify: bool = True) -> SuiteReport:
    """Run ``trials`` random instances of each suite, cycling through ``dims``.

    Negative margins are recomputed with the high-precision eigensolver
    before they are reported; those that clear the tolerance there are
    counted as numerical noise.
    """
    ids = list(DEFAULT_SUITE) if suite == "all" or suite == ["all"] else list(suite)
    unknown = [s for s in ids if s not in SUITES]
    if unknown:
        raise HarnessError(f"unknown suite ids {unknown}")
    dims = [int(d) for d in dims]
    if not dims or any(d < 1 for d in dims):
        raise HarnessError("dimensions must be positive")
    if trials < 0:
        raise HarnessError("trials must be non-negative")
    if isinstance(function, str):
        function = parse_function(function)
    report = SuiteReport(ids, dims, int(trials), int(seed), float(tol),
                         function.spec or function.name if function is not None else None)
    start = time.perf_counter()
    for sid in ids:
        st = SUITES[sid]
        choices = function_choices(st, function)
        if not choices:
            report.skipped_suites.append(sid)
            continue
        for t in range(trials):
            dim = dims[t % len(dims)]
            outcomes = _run_trial(st, seed, t, dim, choices, tol)
            redo = None
            if reverify and any(o.failed for o in outcomes):
                with precise_eigensolver():
                    redo = _run_trial(st, seed, t, dim, choices, tol)
            for i, o in enumerate(outcomes):
                failed, noise = o.failed, False
                if failed and redo is not None and i < len(redo) \
                        and redo[i].statement_id == o.statement_id and not redo[i].failed:
                    failed, noise = False, True
                report.statements.setdefault(o.statement_id, StatementStats()).add(o, failed, noise)
                if failed:
                    report.failures.append(Failure(sid, o.statement_id, t, dim, seed,
                                                   o.operands_hash, o.margin, o.threshold, o.note))
    report.wall_time = time.perf_counter() - start
    return report


# --- counterexample -------------------------------------------------------------------


def counterexample_pair(s: float, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Rank-one PSD pair summing to ``diag(s, t)``."""
    r = math.sqrt(s * t)
    A = 0.5 * np.array([[s, r], [r, t]], dtype=complex)
    B = 0.5 * np.array([[s, -r], [-r, t]], dtype=complex)
    return A, B


def reproduce_counterexample(s: float, t: float, f: ScalarFunction | str = "pow:2") -> float:
    """Trace-subadditivity margin ``Tr f(A) + Tr f(B) - Tr f(A+B)`` on the
    rank-one pair; negative for ``f(t) = t²`` whenever ``s != t``."""
    if not (s > 0 and t > 0):
        raise HarnessError("s and t must be positive")
    if isinstance(f, str):
        f = parse_function(f)
    A, B = counterexample_pair(s, t)

    def tr(M):
        return float(np.real(np.trace(apply_function(f, M))))

    return tr(A) + tr(B) - tr(A + B)


# --- conjecture fuzzing ----------------------------------------------------------------

CONJECTURES = ("half-orbit-2.13", "monotony-deletion-3.13", "cond-sharpness-2.19")


@dataclass
class Findings:
    conjecture: str
    budget: int
    seed: int
    summary: dict = field(default_factory=dict)
    records: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"conjecture": self.conjecture, "budget": self.budget, "seed": self.seed,
                "summary": self.summary, "records": self.records}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2, default=_finite)


def dominance_margin(lower, upper) -> float:
    """``min_k λ_k(upper) - λ_k(lower)``: non-negative iff some unitary ``V``
    gives ``lower ≤ V upper V*``."""
    return float(np.min(linalg.eigenvalues(upper) - linalg.eigenvalues(lower)))


HALF_ORBIT_FUNCTIONS = ("abs", "pos", "sq:0", "sq:1", "exp", "pwl:-1,1;0,0;1,0;2,2", "affine:1,0")


def _half_orbit_instance(g: ScalarFunction, A, B) -> tuple[float, float]:
    gA, gB = apply_function(g, A), apply_function(g, B)
    R = (gA + gB) / 4
    L = apply_function(g, (A + B) / 2) - R
    scale = max(1.0, linalg.spectral_radius(L), linalg.spectral_radius(R))
    return dominance_margin(L, R), scale


def _fuzz_half_orbit(budget: int, seed: int, functions: Sequence[str], tol: float) -> Findings:
    out = Findings("half-orbit-2.13", budget, seed)
    per = {spec: {"samples": 0, "dominance_holds": 0, "worst_margin": math.inf,
                  "confirmed_failures": 0} for spec in functions}
    for k in range(budget):
        rng = gen.trial_rng(seed, "half-orbit-2.13", k)
        spec = functions[k % len(functions)]
        g = parse_function(spec)
        n = int(rng.integers(1, 6))
        A = gen.random_hermitian_in(rng, n, -2.0, 2.0)
        B = gen.random_hermitian_in(rng, n, -2.0, 2.0)
        margin, scale = _half_orbit_instance(g, A, B)
        st = per[spec]
        st["samples"] += 1
        st["worst_margin"] = min(st["worst_margin"], margin)
        if margin >= -tol * scale:
            st["dominance_holds"] += 1
            continue
        with precise_eigensolver():
            m2, s2 = _half_orbit_instance(g, A, B)
        confirmed = m2 < -tol * s2
        st["confirmed_failures"] += confirmed
        if confirmed and len(out.records) < 50:
            out.records.append({"function": spec, "dim": n, "trial": k, "margin": m2,
                                "operands_hash": operands_hash(A, B),
                                "A": linalg.matrix_to_json(A), "B": linalg.matrix_to_json(B)})
    for st in per.values():
        st["worst_margin"] = _finite(st["worst_margin"]) if st["samples"] else None
    out.summary = {"per_function": per, "tol": tol,
                   "note": "dominance of sorted eigenvalues is equivalent to the existence of V"}
    return out


def random_concave_nonmonotone(rng) -> ScalarFunction:
    """Random piecewise-linear concave function on [0, ∞) that rises then falls,
    with ``f(0) >= 0``."""
    k = int(rng.integers(2, 5))
    u = int(rng.integers(1, k))
    rising = np.sort(rng.uniform(0.2, 3.0, u))[::-1]
    falling = -np.sort(rng.uniform(0.1, 2.0, k - u))
    slopes = np.concatenate([rising, falling])
    xs = np.concatenate([[0.0], np.cumsum(rng.uniform(0.3, 1.5, k))])
    ys = rng.uniform(0.0, 1.0) + np.concatenate([[0.0], np.cumsum(slopes * np.diff(xs))])
    return piecewise_linear(list(zip(xs.tolist(), ys.tolist())))


def weyl_margin(target, P, Q) -> tuple[float, tuple[int, int]]:
    """``min λ_i(P) + λ_j(Q) - λ_{i+j-1}(target)``; a negative value rules out
    unitaries with ``target ≤ U P U* + V Q V*``."""
    t, p, q = (linalg.eigenvalues(M) for M in (target, P, Q))
    n = t.size
    best, where = math.inf, (0, 0)
    for i in range(n):
        for j in range(n - i):
            m = p[i] + q[j] - t[i + j]
            if m < best:
                best, where = m, (i + 1, j + 1)
    return float(best), where


def _deletion_instance(f: ScalarFunction, A, B) -> tuple[float, tuple[int, int], float]:
    fA, fB, fS = (apply_function(f, M) for M in (A, B, A + B))
    margin, where = weyl_margin(fS, fA, fB)
    scale = max(1.0, *(linalg.spectral_radius(M) for M in (fA, fB, fS)))
    return margin, where, scale


def _fuzz_monotony_deletion(budget: int, seed: int, max_dim: int, tol: float) -> Findings:
    out = Findings("monotony-deletion-3.13", budget, seed)
    worst = math.inf
    confirmed = 0
    hypothesis_rejects = 0
    for k in range(budget):
        rng = gen.trial_rng(seed, "monotony-deletion-3.13", k)
        f = random_concave_nonmonotone(rng)
        n = int(rng.integers(1, max_dim + 1))
        peak = float(f.split_point or 1.0)
        A = gen.random_psd(rng, n, scale=rng.uniform(0.3, 3.0) * peak)
        B = gen.random_psd(rng, n, scale=rng.uniform(0.3, 3.0) * peak)
        margin, where, scale = _deletion_instance(f, A, B)
        worst = min(worst, margin)
        if margin >= -tol * scale:
            continue
        # re-check hypotheses and the margin before recording anything
        ok_hyp = (f.convexity in (Convexity.CONCAVE, Convexity.AFFINE)
                  and check_convexity(f, rng, window=(0.0, 20.0))
                  and f.value_at_zero >= 0 and linalg.is_psd(A) and linalg.is_psd(B))
        if not ok_hyp:
            hypothesis_rejects += 1
            continue
        with precise_eigensolver():
            m2, where2, s2 = _deletion_instance(f, A, B)
        if m2 < -tol * s2:
            confirmed += 1
            if len(out.records) < 50:
                out.records.append({"function": f.spec, "dim": n, "trial": k, "margin": m2,
                                    "weyl_indices": list(where2),
                                    "A": linalg.matrix_to_json(A), "B": linalg.matrix_to_json(B)})
    out.summary = {
        "samples": budget,
        "necessary_condition_violations": confirmed,
        "hypothesis_rejects": hypothesis_rejects,
        "worst_weyl_margin": _finite(worst) if budget else None,
        "interpretation": ("a violation of the Weyl-type necessary condition rules out the "
                           "unitaries for that instance; zero violations is evidence only"),
    }
    return out


def required_constant(As: Sequence[np.ndarray]) -> float:
    """Smallest ``c`` with ``|Σ Aᵢ| ≤ c Σ |Aᵢ|``."""
    S = sum(linalg.modulus(X) for X in As)
    T = linalg.modulus(sum(As))
    dec = linalg.spectral_decompose(S)
    inv_sqrt = dec.map(1.0 / np.sqrt(dec.eigenvalues))
    return float(linalg.eigenvalues(inv_sqrt @ T @ inv_sqrt)[0])


def _cond_sample(rng, omega: float, structured: bool) -> list:
    n = int(rng.integers(1, 5))
    m = int(rng.integers(2, 6))
    if structured:
        U = gen.haar_unitary(rng, n)
        return [rng.uniform(0.5, 2.0) * U for _ in range(m)]
    return [gen.conditioned_invertible(rng, n, omega) for _ in range(m)]


def _fuzz_cond_sharpness(budget: int, seed: int, omegas: Sequence[float]) -> Findings:
    out = Findings("cond-sharpness-2.19", budget, seed)
    per = {}
    for omega in omegas:
        bound = cond_bound_constant(omega)
        sup, arg = 0.0, None
        for k in range(budget):
            rng = gen.trial_rng(seed, f"cond-sharpness-2.19/{omega:g}", k)
            As = _cond_sample(rng, omega, structured=(k % 10 == 0 and omega == 1.0))
            if max(condition_number(X) for X in As) > omega * (1 + 1e-9):
                continue
            ratio = required_constant(As) / bound
            if ratio > sup:
                sup, arg = ratio, {"trial": k, "m": len(As), "dim": As[0].shape[0],
                                   "operands_hash": operands_hash(As)}
        per[f"{omega:g}"] = {"bound": bound, "sup_ratio": sup, "argmax": arg}
    out.summary = {"per_omega": per,
                   "note": "ratio = (smallest admissible constant) / ((w+1)/(2 sqrt w))"}
    return out


def fuzz_conjecture(conjecture: str, budget: int = 1000, seed: int = 0,
                    tol: float = TAU_ORDER, **options) -> Findings:
    """Exploratory sampling around an open question; returns descriptive findings."""
    if budget < 0:
        raise HarnessError("budget must be non-negative")
    if conjecture == "half-orbit-2.13":
        return _fuzz_half_orbit(budget, seed, options.get("functions", HALF_ORBIT_FUNCTIONS), tol)
    if conjecture == "monotony-deletion-3.13":
        return _fuzz_monotony_deletion(budget, seed, options.get("max_dim", 5), tol)
    if conjecture == "cond-sharpness-2.19":
        return _fuzz_cond_sharpness(budget, seed, options.get("omegas", OMEGAS))
    raise HarnessError(f"unknown conjecture id {conjecture!r}")
