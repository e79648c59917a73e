import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbit.generators import (KINDS, GeneratorError, GeneratorSpec, generate, sample, trial_rng)

import oracles as O
from oracles import seeds


def _svals(M):
    return np.linalg.svd(M, compute_uv=False)


def test_psd_seed_7():
    A = generate(GeneratorSpec("psd", 3, seed=7))
    assert O.min_eig(A) >= -1e-12


def test_isometric_column_sums_to_identity():
    Zs = generate(GeneratorSpec("isometric-column", 2, seed=1, params={"m": 3}))
    assert len(Zs) == 3
    total = sum(Z.conj().T @ Z for Z in Zs)
    assert np.max(np.abs(total - np.eye(2))) <= 1e-10


def test_conditioned_at_one_is_scaled_unitary():
    A = generate(GeneratorSpec("conditioned-invertible", 4, seed=3, params={"omega": 1.0}))
    s = _svals(A)
    assert s.max() / s.min() == pytest.approx(1.0, abs=1e-12)
    assert O.is_unitary(A / s[0])


def test_invalid_specs():
    with pytest.raises(GeneratorError):
        GeneratorSpec("banana", 2)
    with pytest.raises(GeneratorError):
        GeneratorSpec("psd", 0)
    with pytest.raises(GeneratorError):
        generate(GeneratorSpec("conditioned-invertible", 2, params={"omega": 0.5}))


def _conforms(kind, X, params):
    if kind == "psd":
        return np.allclose(X, X.conj().T) and O.min_eig(X) >= -1e-12 * max(1.0, np.abs(X).max())
    if kind == "hermitian-in-interval":
        lo, hi = params["interval"]
        ev = np.linalg.eigvalsh(X)
        tol = 1e-8 * max(1.0, abs(lo), abs(hi))
        return np.allclose(X, X.conj().T) and ev.min() >= lo - tol and ev.max() <= hi + tol
    if kind == "unitary":
        return O.is_unitary(X)
    if kind == "contraction":
        return _svals(X).max() <= 1 + 1e-10
    if kind == "expansive":
        return _svals(X).min() >= 1 - 1e-10
    if kind == "isometric-column":
        n = X[0].shape[1]
        return len(X) == params["m"] and np.max(np.abs(sum(Z.conj().T @ Z for Z in X) - np.eye(n))) <= 1e-10
    if kind == "schur-multiplier-subunital":
        d = np.diag(X).real
        return O.min_eig(X) >= -1e-10 and np.all(d <= 1 + 1e-10)
    if kind == "normal":
        return np.max(np.abs(X @ X.conj().T - X.conj().T @ X)) <= 1e-10 * max(1.0, np.abs(X).max() ** 2)
    if kind == "conditioned-invertible":
        s = _svals(X)
        return s.max() <= params["omega"] * (1 + 1e-9) * s.min()
    raise AssertionError(kind)


PARAMS = {"hermitian-in-interval": {"interval": (-2.0, 3.0)}, "isometric-column": {"m": 3},
          "conditioned-invertible": {"omega": 10.0}}


@pytest.mark.parametrize("kind", KINDS)
def test_kind_conformance_over_100_samples(kind):
    params = PARAMS.get(kind, {})
    rng = np.random.default_rng(11)
    for i in range(100):
        n = 1 + i % 8
        assert _conforms(kind, sample(kind, rng, n, **params), params), (kind, i)


@pytest.mark.parametrize("kind", KINDS)
def test_generate_is_deterministic(kind):
    spec = GeneratorSpec(kind, 3, seed=5, params=PARAMS.get(kind, {}))
    a, b = generate(spec), generate(spec)
    if isinstance(a, list):
        assert all(np.array_equal(x, y) for x, y in zip(a, b))
    else:
        assert np.array_equal(a, b)


def test_trial_streams_are_independent_of_order():
    first = trial_rng(42, "jensen", 3).standard_normal(4)
    trial_rng(42, "jensen", 2).standard_normal(100)
    assert np.array_equal(first, trial_rng(42, "jensen", 3).standard_normal(4))
    assert not np.array_equal(first, trial_rng(42, "jensen", 4).standard_normal(4))
    assert not np.array_equal(first, trial_rng(42, "jensen-general", 3).standard_normal(4))


@given(seeds, st.integers(1, 6), st.floats(1.0, 100.0))
def test_condition_bound_respected(seed, n, omega):
    X = sample("conditioned-invertible", np.random.default_rng(seed), n, omega=omega)
    s = _svals(X)
    assert s.max() <= omega * (1 + 1e-9) * s.min()


@given(seeds, st.integers(1, 6), st.floats(-5, 5), st.floats(0.01, 5))
def test_interval_spectrum_respected(seed, n, lo, width):
    X = sample("hermitian-in-interval", np.random.default_rng(seed), n, interval=(lo, lo + width))
    ev = np.linalg.eigvalsh(X)
    tol = 1e-10 * max(1.0, abs(lo) + width)
    assert ev.min() >= lo - tol and ev.max() <= lo + width + tol
