import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbit import linalg
from orbit.generators import haar_unitary, isometric_column, schur_subunital
from orbit.maps import (CStarCombination, Compression, Expectation, MapError, SchurMultiplier,
                        Unitality, classify_unitality, cstar_block_map, embed_corner, map_from_json,
                        mean_map, naimark_dilate, stinespring_reduce, sub_unital_extend)

import oracles as O
from oracles import seeds


def _random_unital(rng, kind, n):
    if kind == "compression":
        d = int(rng.integers(1, n + 1))
        return Compression(haar_unitary(rng, n)[:, :d])
    if kind == "schur":
        return SchurMultiplier(schur_subunital(rng, n, unital=True))
    if kind == "cstar":
        return CStarCombination(tuple(isometric_column(rng, n, int(rng.integers(1, 4)))))
    h = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return Expectation(h / np.linalg.norm(h))


KINDS = ("compression", "schur", "cstar", "expectation")


def test_expectation_example():
    out = Expectation(np.array([1.0, 0.0]))(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert out.shape == (1, 1) and out[0, 0] == 0


def test_schur_with_ones_is_identity(rng):
    A = O.rand_herm(rng, 3)
    assert np.allclose(SchurMultiplier(np.ones((3, 3)))(A), A)


def test_cstar_with_halves_is_identity(rng):
    A = O.rand_herm(rng, 3)
    Z = np.eye(3) / np.sqrt(2)
    oracle = Z.conj().T @ A @ Z + Z.conj().T @ A @ Z
    out = CStarCombination((Z, Z))(A)
    assert np.allclose(out, oracle) and np.allclose(out, A)


def test_unitality_examples(rng):
    assert classify_unitality(Compression(haar_unitary(rng, 4)[:, :2]))[0] == Unitality.UNITAL
    assert classify_unitality(SchurMultiplier(np.diag([1.0, 0.5])))[0] == Unitality.SUB_UNITAL
    Z = 0.6 * haar_unitary(rng, 3)
    verdict, C = classify_unitality(CStarCombination((Z,)))
    assert verdict == Unitality.SUB_UNITAL and np.allclose(C, 0.36 * np.eye(3))
    assert classify_unitality(CStarCombination((2 * np.eye(2),)))[0] == Unitality.NEITHER
    assert classify_unitality(SchurMultiplier(np.diag([1.5, 1.0])))[0] == Unitality.NEITHER


def test_invalid_maps_rejected():
    with pytest.raises(MapError):
        Compression(np.array([[1.0], [1.0]]))
    with pytest.raises(MapError):
        SchurMultiplier(np.diag([1.0, -1.0]))
    with pytest.raises(MapError):
        Expectation(np.array([1.0, 1.0]))
    with pytest.raises(MapError):
        sub_unital_extend(CStarCombination((2 * np.eye(2),)))
    with pytest.raises(linalg.DimensionError):
        SchurMultiplier(np.eye(2))(np.eye(3))


def test_extension_of_unital_ignores_corner(rng):
    phi = Compression(haar_unitary(rng, 3)[:, :2])
    ext = sub_unital_extend(phi)
    A = O.rand_herm(rng, 3)
    assert np.allclose(ext(embed_corner(A, 7.0)), phi(A), atol=1e-12)


def test_extension_of_half_compression(rng):
    J = haar_unitary(rng, 3)[:, :2] / np.sqrt(2)
    psi = CStarCombination((J,))
    A = O.rand_herm(rng, 3)
    C = J.conj().T @ J
    oracle = J.conj().T @ A @ J + (np.eye(2) - C)
    assert np.allclose(sub_unital_extend(psi)(embed_corner(A, 1.0)), oracle)


def test_extension_of_subunital_schur_is_unital(rng):
    psi = SchurMultiplier(schur_subunital(rng, 4))
    ext = sub_unital_extend(psi)
    assert np.allclose(ext(np.eye(5)), np.eye(4))
    assert classify_unitality(ext)[0] == Unitality.UNITAL


def test_mean_map_and_block_map(rng):
    A, B = O.rand_herm(rng, 2), O.rand_herm(rng, 2)
    H = np.block([[A, O.rand_herm(rng, 2)], [O.rand_herm(rng, 2), B]])
    assert np.allclose(mean_map(2)(O.herm(H)), (A + B) / 2)
    Zs = isometric_column(rng, 2, 3)
    As = [O.rand_herm(rng, 2) for _ in Zs]
    oracle = sum(Z.conj().T @ X @ Z for Z, X in zip(Zs, As))
    assert np.allclose(cstar_block_map(Zs)(linalg.direct_sum(*As)), oracle)


def test_json_descriptors_round_trip(rng):
    for kind in KINDS:
        phi = _random_unital(rng, kind, 3)
        again = map_from_json(phi.to_json())
        A = O.rand_herm(rng, 3)
        assert np.allclose(phi(A), again(A))
    with pytest.raises(MapError):
        map_from_json({"kind": "teleport"})
    with pytest.raises(MapError):
        map_from_json({"kind": "schur"})


def test_trivial_dilation():
    dil = naimark_dilate([np.eye(2)])
    assert dil.big_dim == 2 and np.allclose(dil.projections[0], np.eye(2))


def test_two_halves_dilation():
    dil = naimark_dilate([np.array([[0.5]]), np.array([[0.5]])])
    P1, P2 = dil.projections
    assert dil.big_dim == 2
    assert np.allclose(P1 + P2, np.eye(2))
    assert np.isclose(np.trace(P1).real, 1) and np.allclose(P1 @ P1, P1)
    assert np.allclose(dil.compress(P1), [[0.5]]) and np.allclose(dil.compress(P2), [[0.5]])


def _check_dilation(dil, As):
    N = dil.big_dim
    assert np.allclose(sum(dil.projections), np.eye(N), atol=1e-9)
    for i, P in enumerate(dil.projections):
        assert np.allclose(P @ P, P, atol=1e-9) and np.allclose(P, P.conj().T)
        assert np.max(np.abs(dil.compress(P) - As[i])) < 1e-8
        for Q in dil.projections[i + 1:]:
            assert np.allclose(P @ Q, 0, atol=1e-9)


def test_partition_from_isometric_column(rng):
    Zs = isometric_column(rng, 2, 3)
    As = [Z.conj().T @ Z for Z in Zs]
    dil = naimark_dilate(As)
    assert dil.big_dim == 6
    _check_dilation(dil, As)


def test_dilation_rejects_non_partition():
    with pytest.raises(MapError):
        naimark_dilate([np.eye(2), np.eye(2)])


def test_stinespring_for_compression(rng):
    phi = Compression(haar_unitary(rng, 4)[:, :2])
    A = O.rand_herm(rng, 4)
    red = stinespring_reduce(phi, A)
    assert np.max(np.abs(red.compress(red.pi_A) - phi(A))) < 1e-8


def test_stinespring_for_expectation_weights():
    h = np.array([0.6, 0.8j, 0.0])
    A = np.diag([3.0, 1.0, 1.0])
    red = stinespring_reduce(Expectation(h), A)
    weights = sorted(float(np.real(red.compress(P)[0, 0])) for P in red.dilation.projections)
    assert np.allclose(weights, [0.36, 0.64])
    assert np.isclose(red.compress(red.pi_A)[0, 0].real, 0.36 * 3 + 0.64 * 1)


def test_stinespring_for_correlation_schur(rng):
    phi = SchurMultiplier(schur_subunital(rng, 3, unital=True))
    A = O.rand_herm(rng, 3)
    red = stinespring_reduce(phi, A)
    assert np.max(np.abs(red.compress(red.pi_A) - phi(A))) < 1e-8
    g = np.exp
    assert np.max(np.abs(red.compress(red.pi_of(g)) - phi(O.funm("exp", A)))) < 1e-8


@given(seeds, st.sampled_from(KINDS), st.integers(1, 5))
def test_linearity(seed, kind, n):
    rng = np.random.default_rng(seed)
    phi = _random_unital(rng, kind, n)
    A, B = O.rand_herm(rng, n), O.rand_herm(rng, n)
    a, b = rng.standard_normal(2)
    scale = max(1.0, abs(a) + abs(b)) * max(1.0, np.max(np.abs(A)), np.max(np.abs(B)))
    assert np.max(np.abs(phi(a * A + b * B) - a * phi(A) - b * phi(B))) < 1e-10 * scale


@given(seeds, st.sampled_from(KINDS), st.integers(1, 5))
def test_positivity_preserved(seed, kind, n):
    rng = np.random.default_rng(seed)
    phi = _random_unital(rng, kind, n)
    for _ in range(5):
        out = phi(O.rand_psd(rng, n, rank=int(rng.integers(1, n + 1))))
        assert O.min_eig(out) >= -1e-8 * max(1.0, np.max(np.abs(out)))


@given(seeds, st.sampled_from(KINDS), st.integers(1, 5))
def test_dilation_recovers_map(seed, kind, n):
    rng = np.random.default_rng(seed)
    phi = _random_unital(rng, kind, n)
    A = O.rand_herm(rng, n)
    red = stinespring_reduce(phi, A)
    assert red.dilation.big_dim == len(red.values) * phi.target_dim
    assert np.max(np.abs(red.compress(red.pi_A) - phi(A))) < 1e-8
