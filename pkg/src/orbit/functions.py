"""Scalar functions with the metadata the inequalities quantify over.

A :class:`ScalarFunction` carries its domain interval, its declared convexity
and monotonicity, and (optionally) a split point ``r`` on each side of which it
is monotone. Declarations are checked by sampling, never inferred.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np


class FunctionError(ValueError):
    pass


class Convexity(str, enum.Enum):
    CONVEX = "convex"
    CONCAVE = "concave"
    AFFINE = "affine"  # both convex and concave
    NEITHER = "neither"


class Monotone(str, enum.Enum):
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"
    CONSTANT = "constant"
    NONE = "none"


@dataclass(frozen=True)
class Interval:
    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise FunctionError(f"empty interval [{self.lo}, {self.hi}]")

    def __str__(self) -> str:
        left = "[" if self.lo_closed and math.isfinite(self.lo) else "("
        right = "]" if self.hi_closed and math.isfinite(self.hi) else ")"
        return f"{left}{self.lo}, {self.hi}{right}"

    def contains(self, t: float, tol: float = 0.0) -> bool:
        if self.lo_closed:
            ok_lo = t >= self.lo - tol
        else:
            ok_lo = t > self.lo
        if self.hi_closed:
            ok_hi = t <= self.hi + tol
        else:
            ok_hi = t < self.hi
        return ok_lo and ok_hi

    def clamp(self, values: np.ndarray, tol: float) -> np.ndarray:
        """Snap values within ``tol`` of a closed endpoint onto it.

        Raises :class:`orbit.linalg.DomainError` for anything further out.
        """
        from orbit.linalg import DomainError

        values = np.asarray(values, dtype=float)
        for v in values:
            if not self.contains(float(v), tol):
                raise DomainError(float(v), self)
        return np.clip(values, self.lo, self.hi)

    def intersect(self, lo: float, hi: float) -> tuple[float, float]:
        return max(self.lo, lo), min(self.hi, hi)

    def sample_window(self, width: float = 10.0) -> tuple[float, float]:
        """A bounded closed window inside the interval, for sampling."""
        lo, hi = self.lo, self.hi
        if not math.isfinite(lo) and not math.isfinite(hi):
            return -width, width
        if not math.isfinite(hi):
            hi = lo + 2 * width
        if not math.isfinite(lo):
            lo = hi - 2 * width
        if not self.lo_closed:
            lo = lo + 1e-3 * max(1.0, hi - lo)
        if not self.hi_closed:
            hi = hi - 1e-3 * max(1.0, hi - lo)
        return lo, hi


REAL_LINE = Interval()
HALF_LINE = Interval(0.0, math.inf)
OPEN_HALF_LINE = Interval(0.0, math.inf, lo_closed=False)


@dataclass(frozen=True)
class ScalarFunction:
    name: str
    evaluator: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)
    domain: Interval
    convexity: Convexity
    monotone: Monotone
    split_point: Optional[float] = None
    breakpoints: tuple = ()
    # operator classes known from the literature for this exact function
    operator_convex: bool = False
    operator_concave: bool = False
    operator_monotone: bool = False
    spec: str = ""
    params: tuple = ()

    def __call__(self, t):
        return self.evaluator(np.asarray(t, dtype=float))

    @property
    def is_convex(self) -> bool:
        return self.convexity in (Convexity.CONVEX, Convexity.AFFINE)

    @property
    def is_concave(self) -> bool:
        return self.convexity in (Convexity.CONCAVE, Convexity.AFFINE)

    @property
    def is_monotone(self) -> bool:
        return self.monotone != Monotone.NONE

    @property
    def is_nondecreasing(self) -> bool:
        return self.monotone in (Monotone.NONDECREASING, Monotone.CONSTANT)

    @property
    def value_at_zero(self) -> Optional[float]:
        """``f(0)``, or ``None`` when 0 is outside the domain."""
        if not self.domain.contains(0.0):
            return None
        return float(self(np.array([0.0]))[0])

    def nonnegative_on(self, lo: float, hi: float, samples: int = 257) -> bool:
        lo, hi = self.domain.intersect(lo, hi)
        if not math.isfinite(hi):
            hi = lo + 1e3
        ts = np.linspace(lo, hi, samples)
        ts = ts[[self.domain.contains(t) for t in ts]]
        return bool(np.all(self(ts) >= -1e-12))

    def negated(self) -> "ScalarFunction":
        flip_c = {Convexity.CONVEX: Convexity.CONCAVE, Convexity.CONCAVE: Convexity.CONVEX}
        flip_m = {Monotone.NONDECREASING: Monotone.NONINCREASING,
                  Monotone.NONINCREASING: Monotone.NONDECREASING}
        ev = self.evaluator
        return replace(
            self,
            name=f"-({self.name})",
            evaluator=lambda t: -ev(t),
            convexity=flip_c.get(self.convexity, self.convexity),
            monotone=flip_m.get(self.monotone, self.monotone),
            operator_convex=self.operator_concave,
            operator_concave=self.operator_convex,
            operator_monotone=False,
            spec="",
            params=(),
        )

    def shifted(self, c: float) -> "ScalarFunction":
        """``t ↦ f(t) + c``."""
        ev = self.evaluator
        return replace(self, name=f"{self.name}{c:+g}", evaluator=lambda t: ev(t) + c, spec="",
                       params=())

    def with_chord_at_zero(self, r: float) -> "ScalarFunction":
        """Concave ``f̃`` on ``[0, ∞)`` with ``f̃(0) = 0`` and ``f̃ = f`` on ``[r, ∞)``.

        Linear from the origin to ``(r, f(r))``; concave whenever ``f`` is
        concave on ``[0, ∞)`` with ``f(0) ≥ 0``.
        """
        if not r > 0:
            raise FunctionError("chord point must be positive")
        ev = self.evaluator
        fr = float(ev(np.array([r]))[0])

        def chord(t):
            t = np.asarray(t, dtype=float)
            out = np.empty_like(t)
            low = t < r
            out[low] = fr * t[low] / r
            out[~low] = ev(t[~low])
            return out

        return replace(self, name=f"chord({self.name},{r:g})", evaluator=chord,
                       convexity=Convexity.CONCAVE, domain=HALF_LINE, split_point=None, breakpoints=(),
                       operator_convex=False, operator_concave=False, operator_monotone=False,
                       spec="", params=())


# --- catalogue -------------------------------------------------------------------


def power(p: float) -> ScalarFunction:
    if p == 0:
        raise FunctionError("power exponent must be non-zero")
    if p > 0:
        domain = HALF_LINE
        conv = Convexity.AFFINE if p == 1 else (Convexity.CONVEX if p > 1 else Convexity.CONCAVE)
        mono = Monotone.NONDECREASING
    else:
        domain = OPEN_HALF_LINE
        conv, mono = Convexity.CONVEX, Monotone.NONINCREASING

    def ev(t, p=p):
        with np.errstate(divide="ignore"):
            return np.power(np.asarray(t, dtype=float), p)

    return ScalarFunction(
        name=f"t^{p:g}", evaluator=ev, domain=domain, convexity=conv, monotone=mono,
        operator_convex=(1 <= p <= 2) or (-1 <= p < 0),
        operator_concave=0 < p <= 1,
        operator_monotone=0 < p <= 1,
        spec=f"pow:{p:g}",
    )


def absolute() -> ScalarFunction:
    return ScalarFunction("|t|", np.abs, REAL_LINE, Convexity.CONVEX, Monotone.NONE,
                          split_point=0.0, breakpoints=(0.0,), spec="abs")


def positive_part() -> ScalarFunction:
    return ScalarFunction("t_+", lambda t: np.maximum(t, 0.0), REAL_LINE, Convexity.CONVEX,
                          Monotone.NONDECREASING, split_point=0.0, breakpoints=(0.0,), spec="pos")


def log() -> ScalarFunction:
    def ev(t):
        with np.errstate(divide="ignore"):
            return np.log(t)

    return ScalarFunction("log t", ev, OPEN_HALF_LINE, Convexity.CONCAVE, Monotone.NONDECREASING,
                          operator_concave=True, operator_monotone=True, spec="log")


def log1p() -> ScalarFunction:
    return ScalarFunction("log(1+t)", np.log1p, HALF_LINE, Convexity.CONCAVE,
                          Monotone.NONDECREASING, operator_concave=True,
                          operator_monotone=True, spec="log1p")


def exp() -> ScalarFunction:
    return ScalarFunction("exp t", np.exp, REAL_LINE, Convexity.CONVEX, Monotone.NONDECREASING,
                          spec="exp")


def affine(a: float, b: float) -> ScalarFunction:
    """``t ↦ a t + b``."""
    mono = (Monotone.NONDECREASING if a > 0 else Monotone.NONINCREASING if a < 0
            else Monotone.CONSTANT)
    return ScalarFunction(f"{a:g}t{b:+g}", lambda t: a * t + b, REAL_LINE, Convexity.AFFINE, mono,
                          operator_convex=True, operator_concave=True,
                          operator_monotone=a >= 0, spec=f"affine:{a:g},{b:g}")


def shifted_square(c: float) -> ScalarFunction:
    """``t ↦ (t - c)²``: convex, decreasing then increasing around ``c``."""
    return ScalarFunction(f"(t-{c:g})^2", lambda t: (t - c) ** 2, REAL_LINE, Convexity.CONVEX,
                          Monotone.NONE, split_point=c, operator_convex=True, spec=f"sq:{c:g}")


def polynomial(coefficients: Sequence[float]) -> ScalarFunction:
    """Polynomial with non-negative coefficients (ascending order) on ``[0, ∞)``."""
    coeffs = [float(c) for c in coefficients]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    if not coeffs or any(c < 0 for c in coeffs):
        raise FunctionError("polynomial coefficients must be non-negative")
    deg = len(coeffs) - 1
    poly = np.polynomial.Polynomial(coeffs)
    if deg <= 1:
        conv = Convexity.AFFINE
    else:
        conv = Convexity.CONVEX
    mono = Monotone.NONDECREASING if any(coeffs[1:]) else Monotone.CONSTANT
    return ScalarFunction(
        f"poly{tuple(coeffs)}", lambda t: poly(np.asarray(t, dtype=float)), HALF_LINE, conv, mono,
        operator_convex=deg <= 2,
        operator_monotone=deg <= 1,
        operator_concave=deg <= 1,
        spec="poly:" + ",".join(f"{c:g}" for c in coeffs),
        params=tuple(coeffs),
    )


def piecewise_linear(points: Sequence[tuple[float, float]]) -> ScalarFunction:
    """Interpolate the breakpoints and extend linearly with the end slopes.

    The domain is the whole real line. Convexity and monotonicity are read
    off the slope sequence.
    """
    pts = sorted((float(x), float(y)) for x, y in points)
    if len(pts) < 2:
        raise FunctionError("need at least two breakpoints")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if np.any(np.diff(xs) <= 0):
        raise FunctionError("breakpoint abscissae must be distinct")
    slopes = np.diff(ys) / np.diff(xs)
    ds = np.diff(slopes)
    tol = 1e-12 * max(1.0, float(np.max(np.abs(slopes))))
    if np.all(np.abs(ds) <= tol):
        conv = Convexity.AFFINE
    elif np.all(ds >= -tol):
        conv = Convexity.CONVEX
    elif np.all(ds <= tol):
        conv = Convexity.CONCAVE
    else:
        conv = Convexity.NEITHER
    if np.all(slopes == 0):
        mono = Monotone.CONSTANT
    elif np.all(slopes >= 0):
        mono = Monotone.NONDECREASING
    elif np.all(slopes <= 0):
        mono = Monotone.NONINCREASING
    else:
        mono = Monotone.NONE

    def ev(t):
        t = np.asarray(t, dtype=float)
        out = np.interp(t, xs, ys)
        left, right = t < xs[0], t > xs[-1]
        out[left] = ys[0] + slopes[0] * (t[left] - xs[0])
        out[right] = ys[-1] + slopes[-1] * (t[right] - xs[-1])
        return out

    split = None
    if conv in (Convexity.CONVEX, Convexity.CONCAVE) and mono == Monotone.NONE:
        sign = 1 if conv == Convexity.CONVEX else -1
        # first breakpoint where the slope changes sign is the leftmost extremum
        idx = int(np.argmax(sign * slopes >= 0))
        split = float(xs[idx])
    return ScalarFunction(
        "pwl" + str(tuple(pts)), ev, REAL_LINE, conv, mono, split_point=split,
        breakpoints=tuple(xs), operator_convex=conv == Convexity.AFFINE,
        operator_concave=conv == Convexity.AFFINE,
        spec="pwl:" + ";".join(f"{x:g},{y:g}" for x, y in pts),
    )


CATALOGUE = {
    "power": power,
    "abs": absolute,
    "positive-part": positive_part,
    "log": log,
    "log1p": log1p,
    "exp": exp,
    "affine": affine,
    "shifted-square": shifted_square,
    "polynomial": polynomial,
    "piecewise-linear": piecewise_linear,
}


def make_catalogue_function(name: str, *params) -> ScalarFunction:
    try:
        factory = CATALOGUE[name]
    except KeyError:
        raise FunctionError(f"unknown catalogue function {name!r}") from None
    try:
        return factory(*params)
    except TypeError as exc:
        raise FunctionError(f"bad parameters for {name!r}: {exc}") from exc


def parse_function(text: str) -> ScalarFunction:
    """Parse the command-line function syntax.

    >>> parse_function("pow:0.5").name
    't^0.5'
    >>> parse_function("pwl:0,0;1,2;3,3").convexity.value
    'concave'
    """
    head, _, arg = text.strip().partition(":")
    try:
        if head == "pow":
            return power(float(arg))
        if head == "abs":
            return absolute()
        if head == "pos":
            return positive_part()
        if head == "log":
            return log()
        if head == "log1p":
            return log1p()
        if head == "exp":
            return exp()
        if head == "sq":
            return shifted_square(float(arg or 0))
        if head == "affine":
            a, b = (float(x) for x in arg.split(","))
            return affine(a, b)
        if head == "poly":
            return polynomial([float(x) for x in arg.split(",")])
        if head == "pwl":
            pts = [tuple(float(v) for v in p.split(",")) for p in arg.split(";") if p]
            return piecewise_linear(pts)
    except ValueError as exc:
        raise FunctionError(f"cannot parse function {text!r}: {exc}") from exc
    raise FunctionError(f"unknown function syntax {text!r}")


# --- sampled verification of declared metadata -----------------------------------


def _rel_tol(*vals) -> float:
    return 1e-12 * max(1.0, *(float(np.max(np.abs(v))) for v in vals))


def check_convexity(f: ScalarFunction, rng: np.random.Generator, triples: int = 1000,
                    window: Optional[tuple[float, float]] = None) -> bool:
    """Sample ``a < b`` in the domain and test the declared convexity class at
    ``θ ∈ {1/4, 1/2, 3/4}``."""
    if f.convexity == Convexity.NEITHER:
        return True
    lo, hi = window or f.domain.sample_window()
    a = rng.uniform(lo, hi, triples)
    b = rng.uniform(lo, hi, triples)
    a, b = np.minimum(a, b), np.maximum(a, b)
    fa, fb = f(a), f(b)
    for theta in (0.25, 0.5, 0.75):
        mid = f(theta * a + (1 - theta) * b)
        chord = theta * fa + (1 - theta) * fb
        tol = _rel_tol(mid, chord)
        if f.is_convex and np.any(mid > chord + tol):
            return False
        if f.is_concave and np.any(mid < chord - tol):
            return False
    return True


def _monotone_on(f: ScalarFunction, lo: float, hi: float, rng, pairs: int) -> Optional[Monotone]:
    if hi <= lo:
        return Monotone.CONSTANT
    a = rng.uniform(lo, hi, pairs)
    b = rng.uniform(lo, hi, pairs)
    a, b = np.minimum(a, b), np.maximum(a, b)
    d = f(b) - f(a)
    tol = _rel_tol(f(a), f(b))
    if np.all(d >= -tol):
        return Monotone.NONDECREASING
    if np.all(d <= tol):
        return Monotone.NONINCREASING
    return None


def check_monotone(f: ScalarFunction, rng: np.random.Generator, pairs: int = 1000,
                   window: Optional[tuple[float, float]] = None) -> bool:
    if f.monotone == Monotone.NONE:
        return True
    lo, hi = window or f.domain.sample_window()
    a = rng.uniform(lo, hi, pairs)
    b = rng.uniform(lo, hi, pairs)
    a, b = np.minimum(a, b), np.maximum(a, b)
    d = f(b) - f(a)
    tol = _rel_tol(f(a), f(b))
    if f.monotone == Monotone.CONSTANT:
        return bool(np.all(np.abs(d) <= tol))
    if f.monotone == Monotone.NONDECREASING:
        return bool(np.all(d >= -tol))
    return bool(np.all(d <= tol))


def check_split(f: ScalarFunction, r: float, rng: np.random.Generator, pairs: int = 1000,
                window: Optional[tuple[float, float]] = None) -> bool:
    """``f`` is monotone on both ``Ω ∩ (-∞, r]`` and ``Ω ∩ [r, ∞)`` (sampled)."""
    lo, hi = window or f.domain.sample_window()
    left = _monotone_on(f, lo, min(r, hi), rng, pairs)
    right = _monotone_on(f, max(r, lo), hi, rng, pairs)
    return left is not None and right is not None


# --- monotone split point -------------------------------------------------------

_GOLDEN = (math.sqrt(5) - 1) / 2


def _golden_min(g: Callable[[float], float], a: float, b: float, xtol: float) -> float:
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    gc, gd = g(c), g(d)
    while b - a > xtol:
        if gc <= gd:
            b, d, gd = d, c, gc
            c = b - _GOLDEN * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + _GOLDEN * (b - a)
            gd = g(d)
    return (a + b) / 2


def monotone_split(f: ScalarFunction, hull: tuple[float, float], xtol: float = 1e-10) -> float:
    """A point ``r`` in ``hull`` with ``f`` monotone on each side of it.

    For convex ``f`` this is the leftmost minimizer over the hull (maximizer
    for concave ``f``); monotone functions split at the left endpoint.
    """
    lo, hi = float(hull[0]), float(hull[1])
    if lo > hi:
        raise FunctionError("empty hull")
    if f.convexity == Convexity.NEITHER:
        raise FunctionError(f"{f.name} is neither convex nor concave")
    if f.is_monotone or hi == lo:
        return lo
    sign = 1.0 if f.is_convex else -1.0

    def g(t: float) -> float:
        return sign * float(f(np.array([t]))[0])

    if f.split_point is not None:
        return min(max(f.split_point, lo), hi)
    if f.breakpoints:
        cands = [lo, hi] + [x for x in f.breakpoints if lo < x < hi]
        return min(cands, key=lambda x: (g(x), x))
    r = _golden_min(g, lo, hi, xtol)
    if g(lo) <= g(r):
        return lo
    if g(hi) < g(r):
        return hi
    return r
