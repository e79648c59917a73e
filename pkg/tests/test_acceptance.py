"""End-to-end acceptance runs at full size.

Each test records one PASS/FAIL line through the ``criterion`` fixture; the
lines are repeated in the terminal summary.
"""
import math

import numpy as np
import pytest

from orbit import linalg
from orbit.functionals import SymmetricNorm, anti_norm_derived, cond_bound_constant, minkowski_functional
from orbit.generators import haar_unitary, isometric_column, random_hermitian_in, schur_subunital, trial_rng
from orbit.harness import fuzz_conjecture, reproduce_counterexample, required_constant, run_suite
from orbit.maps import CStarCombination, Compression, Expectation, SchurMultiplier, stinespring_reduce
from orbit.witnesses import block_decompose

import oracles as O

pytestmark = pytest.mark.slow

SEED = 42
TRIALS = 1000
DIMS = list(range(1, 9))

WITNESS_SUITES = ["jensen-monotone", "jensen", "jensen-mean", "jensen-cstar", "jensen-contraction",
                  "jensen-schur", "subadditivity", "superadditivity", "difference",
                  "block-decomposition", "diagonal-pinch", "cartesian", "positive-part"]

STATEMENT_SUITES = ["vn-trace-1.1", "rotfeld-1.2", "hp-trace-2.6", "bk-trace-2.7", "det-mean",
                    "det-schur", "fisher", "minkowski-2.4", "antinorm-2.10", "block-norm-3.5",
                    "det-3.6", "rotfeld-norm", "rotfeld-sum-norm", "poly-3.12", "schatten-triangle"]


@pytest.fixture(scope="module")
def witness_report():
    return {sid: run_suite([sid], DIMS, TRIALS, SEED) for sid in WITNESS_SUITES}


def _failure_summary(reports):
    bad = {sid: len(r.failures) for sid, r in reports.items() if r.failures}
    return "all clean" if not bad else f"failures {bad}"


def test_witness_soundness(witness_report, criterion):
    rows = []
    ok = True
    for sid, rep in witness_report.items():
        stats = rep.statements.get(sid)
        enough = stats is not None and stats.applicable >= TRIALS
        ok &= rep.passed and enough
        rows.append(f"{sid}:{stats.applicable if stats else 0}")
    total = sum(r.wall_time for r in witness_report.values())
    assert criterion("1 witness soundness", ok,
                     f"{_failure_summary(witness_report)}; {total:.0f}s; " + " ".join(rows))


def test_scalar_reduction_at_dim_one(criterion):
    rep = run_suite("all", dims=[1], trials=TRIALS, seed=SEED, reverify=False)
    worst = min((s.worst_margin for s in rep.statements.values() if s.applicable), default=math.inf)
    ok = worst >= -1e-12 and not any(math.isnan(s.worst_margin) for s in rep.statements.values()
                                     if s.applicable)
    assert criterion("2 scalar reduction", ok, f"worst margin {worst:.2e} over {len(rep.statements)} ids")


def test_block_reconstruction(criterion):
    worst = 0.0
    for k in range(TRIALS):
        rng = trial_rng(SEED, "acceptance-block", k)
        N = int(rng.integers(2, 9))
        rank = int(rng.integers(1, N + 1))
        H = O.rand_psd(rng, N, rank=rank)
        split = int(rng.integers(1, N))
        dec = block_decompose(H, split)
        A = np.zeros_like(H)
        A[:split, :split] = H[:split, :split]
        B = np.zeros_like(H)
        B[split:, split:] = H[split:, split:]
        rebuilt = dec.U @ A @ dec.U.conj().T + dec.V @ B @ dec.V.conj().T
        err = np.linalg.norm(rebuilt - H, 2) / max(1.0, np.linalg.norm(H, 2))
        worst = max(worst, err)
        assert O.is_unitary(dec.U) and O.is_unitary(dec.V)
    assert criterion("3 block reconstruction", worst <= 1e-8, f"worst relative error {worst:.2e}")


def test_trace_norm_determinant_suite(criterion):
    reports = {sid: run_suite([sid], DIMS, TRIALS, SEED) for sid in STATEMENT_SUITES}
    ok = all(r.passed for r in reports.values())
    applicable = {sid: r.statements[sid].applicable for sid, r in reports.items() if sid in r.statements}
    ok &= all(applicable.get(sid, 0) > 0 for sid in STATEMENT_SUITES)
    thin = {sid: n for sid, n in applicable.items() if n < TRIALS}
    assert criterion("4 trace/norm/determinant", ok,
                     f"{_failure_summary(reports)}; partially applicable {thin or 'none'}")


def test_counterexample_reproduction(criterion):
    square = reproduce_counterexample(4.0, 1.0, "pow:2")
    closed = (4.0 + 1.0) ** 2 / 2 - (4.0 ** 2 + 1.0 ** 2)
    root = reproduce_counterexample(4.0, 1.0, "pow:0.5")
    ok = abs(square - closed) <= 1e-10 and abs(square + 4.5) <= 1e-10 and root >= 0
    assert criterion("5 counterexample", ok, f"t^2 margin {square:.12f}, sqrt margin {root:.6f}")


def test_condition_number_bound(criterion):
    rep = run_suite(["cond-bound-2.19"], DIMS, TRIALS, SEED)
    rng = np.random.default_rng(SEED)
    exact = []
    for m in range(2, 6):
        U = haar_unitary(rng, 3)
        As = [rng.uniform(0.5, 2.0) * U for _ in range(m)]
        exact.append(required_constant(As) / cond_bound_constant(1.0))
    fz = fuzz_conjecture("cond-sharpness-2.19", budget=200, seed=SEED, omegas=(1.0,))
    sup1 = fz.summary["per_omega"]["1"]["sup_ratio"]
    ok = rep.passed and all(abs(r - 1.0) <= 1e-12 for r in exact) and abs(sup1 - 1.0) <= 1e-12
    worst = rep.statements["cond-bound-2.19"].worst_margin
    assert criterion("6 condition-number bound", ok,
                     f"worst margin {worst:.2e}; ratios at w=1 {min(exact):.15f}..{max(exact):.15f}")


def test_majorization_consequences(witness_report, criterion):
    jensen = [sid for sid in WITNESS_SUITES if sid.startswith("jensen")]
    counts, fails = {}, 0
    for sid in jensen:
        rep = witness_report[sid]
        for key in ("majorization", "odd-index"):
            st = rep.statements[key]
            counts[key] = counts.get(key, 0) + st.applicable
            fails += st.failures
    ok = fails == 0 and all(v >= TRIALS * len(jensen) for v in counts.values())
    assert criterion("7 majorization", ok, f"instances {counts}, failures {fails}")


def _unital_map(kind, rng, d):
    if kind == "compression":
        n = d + int(rng.integers(0, 4))
        return Compression(haar_unitary(rng, n)[:, :d]), n
    if kind == "schur":
        return SchurMultiplier(schur_subunital(rng, d, unital=True)), d
    if kind == "cstar":
        Zs = isometric_column(rng, d, int(rng.integers(1, 4)))
        return CStarCombination(tuple(Zs)), d
    n = int(rng.integers(1, 6))
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return Expectation(h / np.linalg.norm(h)), n


def test_dilation_recovery(criterion):
    worst = {}
    for kind in ("compression", "schur", "cstar", "expectation"):
        w = 0.0
        for k in range(500):
            rng = trial_rng(SEED, f"acceptance-dilation-{kind}", k)
            d = 1 + k % 8 if kind != "expectation" else 1
            phi, n = _unital_map(kind, rng, d)
            A = random_hermitian_in(rng, n, -3.0, 3.0)
            red = stinespring_reduce(phi, A)
            w = max(w, np.max(np.abs(red.compress(red.pi_A) - phi(A))),
                    np.max(np.abs(red.compress(red.pi_of(np.exp)) - phi(O.funm("exp", A)))))
        worst[kind] = w
    ok = all(v <= 1e-8 for v in worst.values())
    assert criterion("8 dilation recovery", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_anti_norm_limit(criterion):
    tr = SymmetricNorm("normalized-trace")
    worst = 0.0
    for k in range(100):
        rng = trial_rng(SEED, "acceptance-antinorm", k)
        A = random_hermitian_in(rng, 1 + k % 8, 0.2, 5.0)
        worst = max(worst, abs(minkowski_functional(A) - anti_norm_derived(A, -1e-3, tr)))
    assert criterion("9 anti-norm limit", worst <= 1e-2, f"worst gap {worst:.2e}")
