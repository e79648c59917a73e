import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from orbit.harness import (CONJECTURES, HarnessError, counterexample_pair, dominance_margin,
                           fuzz_conjecture, reproduce_counterexample, required_constant, run_suite)
from orbit.suites import DEFAULT_SUITE, SUITES

import oracles as O


def test_zero_trials_is_empty_pass():
    rep = run_suite("all", trials=0)
    assert rep.passed and not rep.failures and not rep.statements


def test_scalar_jensen_at_dim_one():
    rep = run_suite(["jensen", "jensen-monotone", "jensen-mean"], dims=[1], trials=40, seed=3)
    assert rep.passed
    assert rep.statements and all(s.applicable > 0 for s in rep.statements.values())


def test_report_is_byte_identical_without_timing():
    args = dict(suite=["subadditivity", "fisher", "dilation"], dims=[1, 2, 3], trials=8, seed=9)
    a, b = run_suite(**args), run_suite(**args)
    assert a.dumps(include_timing=False) == b.dumps(include_timing=False)
    assert "wall_time" in json.loads(a.dumps())


def test_seed_changes_the_report():
    a = run_suite(["jensen"], dims=[3], trials=4, seed=1).dumps(include_timing=False)
    b = run_suite(["jensen"], dims=[3], trials=4, seed=2).dumps(include_timing=False)
    assert a != b


def test_bad_configuration_rejected():
    with pytest.raises(HarnessError):
        run_suite(["no-such-suite"])
    with pytest.raises(HarnessError):
        run_suite(["jensen"], dims=[0])
    with pytest.raises(HarnessError):
        run_suite(["jensen"], trials=-1)


def test_every_suite_runs_a_few_trials():
    rep = run_suite("all", dims=[1, 2, 3, 4], trials=4, seed=42)
    assert rep.passed, [f.to_json() for f in rep.failures]
    assert set(rep.suite) == set(DEFAULT_SUITE)


def test_function_override_skips_incompatible_suites():
    rep = run_suite(["subadditivity", "superadditivity"], dims=[2], trials=3, function="pow:2")
    assert "subadditivity" in rep.skipped_suites
    assert "superadditivity" not in rep.skipped_suites


def test_failures_are_exactly_the_negative_margins():
    # an absurdly negative tolerance flips every applicable non-trivial margin into a failure
    rep = run_suite(["rotfeld-1.2"], dims=[3], trials=5, seed=4, tol=-1e6, reverify=False)
    fails = sum(s.failures for s in rep.statements.values())
    assert fails == len(rep.failures) == sum(s.applicable for s in rep.statements.values())


# counterexample on the rank-one pair

def test_pair_sums_to_diagonal():
    A, B = counterexample_pair(4.0, 1.0)
    assert np.allclose(A + B, np.diag([4.0, 1.0]))
    assert O.min_eig(A) >= -1e-12 and O.min_eig(B) >= -1e-12
    assert np.linalg.matrix_rank(A) == 1


def test_symmetric_case_is_boundary():
    assert abs(reproduce_counterexample(2.0, 2.0, "pow:2")) < 1e-12


def test_square_violates_by_closed_form():
    s, t = 4.0, 1.0
    closed = (s + t) ** 2 / 2 - (s ** 2 + t ** 2)
    assert closed == -4.5
    assert abs(reproduce_counterexample(s, t, "pow:2") - closed) <= 1e-10


def test_sqrt_control_case():
    m = reproduce_counterexample(4.0, 1.0, "pow:0.5")
    # A and B have single eigenvalue (s+t)/2
    assert m == pytest.approx(2 * math.sqrt(2.5) - 3, abs=1e-12)
    assert m >= 0


@given(st.floats(0.01, 50), st.floats(0.01, 50))
def test_square_margin_formula(s, t):
    assert reproduce_counterexample(s, t, "pow:2") == pytest.approx(
        (s + t) ** 2 / 2 - (s * s + t * t), abs=1e-10 * max(1.0, s * s + t * t))


def test_counterexample_rejects_nonpositive():
    with pytest.raises(HarnessError):
        reproduce_counterexample(0.0, 1.0)


# fuzzing

def test_half_orbit_dominance_for_modulus_and_positive_part():
    out = fuzz_conjecture("half-orbit-2.13", budget=200, seed=5, functions=("abs", "pos"))
    for spec in ("abs", "pos"):
        st_ = out.summary["per_function"][spec]
        assert st_["samples"] == 100 and st_["dominance_holds"] == 100
        assert st_["confirmed_failures"] == 0


def test_cond_sharpness_at_one_is_exact():
    out = fuzz_conjecture("cond-sharpness-2.19", budget=50, seed=1, omegas=(1.0,))
    assert out.summary["per_omega"]["1"]["sup_ratio"] == pytest.approx(1.0, abs=1e-10)


def test_monotony_deletion_writes_findings(tmp_path):
    out = fuzz_conjecture("monotony-deletion-3.13", budget=200, seed=2)
    path = tmp_path / "findings.json"
    path.write_text(out.dumps())
    doc = json.loads(path.read_text())
    assert doc["conjecture"] == "monotony-deletion-3.13" and doc["summary"]["samples"] == 200


def test_unknown_conjecture():
    assert len(CONJECTURES) == 3
    with pytest.raises(HarnessError):
        fuzz_conjecture("riemann")


def test_dominance_margin_and_required_constant(rng):
    assert dominance_margin(np.diag([1.0, 0.0]), np.diag([0.0, 2.0])) == pytest.approx(0.0)
    U = O.rand_unitary(rng, 3)
    assert required_constant([U, 2 * U]) == pytest.approx(1.0)
    # opposite signs cancel: |A + (-A)| = 0
    assert required_constant([U, -U]) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=15)
@given(st.sampled_from(sorted(SUITES)), st.integers(0, 10 ** 6))
def test_any_suite_passes_small_runs(sid, seed):
    rep = run_suite([sid], dims=[1, 2, 3, 5], trials=4, seed=seed)
    assert rep.passed, [f.to_json() for f in rep.failures]
