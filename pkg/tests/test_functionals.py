import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from orbit import functionals as F
from orbit.functions import parse_function
from orbit.generators import conditioned_invertible, haar_unitary, isometric_column
from orbit.maps import Compression

import oracles as O
from oracles import dims, seeds


def test_schatten_of_identity():
    for p in (1, 2, 3.5, 10):
        assert F.schatten_norm(np.eye(3), p) == pytest.approx(3 ** (1 / p))
    assert F.schatten_norm(np.eye(3), math.inf) == 1.0


def test_ky_fan_and_sigma():
    assert F.ky_fan(np.diag([3.0, 1.0, 2.0]), 2) == pytest.approx(5)
    assert F.sigma_k(np.diag([1.0, -5.0, 3.0]), 2) == pytest.approx(4)
    with pytest.raises(F.StatementError):
        F.ky_fan(np.eye(2), 3)
    with pytest.raises(F.StatementError):
        F.schatten_norm(np.eye(2), 0.5)


def test_anti_norm_examples():
    tr = F.SymmetricNorm("normalized-trace")
    assert F.anti_norm_derived(np.eye(2), -1, tr) == pytest.approx(1.0)
    assert F.anti_norm_derived(np.diag([1.0, 0.0]), -1, tr) == 0.0
    assert F.anti_norm_derived(np.diag([1.0, 4.0]), -1, F.SymmetricNorm("operator")) == pytest.approx(1.0)
    with pytest.raises(F.StatementError):
        F.anti_norm_derived(np.eye(2), 0.5, tr)


def test_minkowski_examples():
    assert F.minkowski_functional(np.eye(4)) == pytest.approx(1.0)
    assert F.minkowski_functional(np.diag([1.0, 4.0])) == pytest.approx(2.0)
    assert F.minkowski_functional(np.diag([1.0, 0.0])) == 0.0


def test_minkowski_is_limit_of_anti_norms(rng):
    tr = F.SymmetricNorm("normalized-trace")
    for _ in range(20):
        A = O.rand_psd(rng, 4) + 0.2 * np.eye(4)
        assert abs(F.minkowski_functional(A) - F.anti_norm_derived(A, -1e-3, tr)) <= 1e-2


def test_determinant_matches_numpy(rng):
    A = O.rand_psd(rng, 5) + 0.1 * np.eye(5)
    assert F.determinant(A) == pytest.approx(np.linalg.det(A).real, rel=1e-10)


def test_fisher_example():
    ev = F.evaluate_inequality("fisher", {"H": [[1, 0.5], [0.5, 1]], "split": 1})
    assert ev.applicable and ev.margin == pytest.approx(0.25)


def test_vn_trace_equal_operands(rng):
    A = O.rand_psd(rng, 3)
    ev = F.evaluate_inequality("vn-trace-1.1", {"A": A, "B": A}, parse_function("pow:0.5"))
    assert abs(ev.margin) < 1e-12


def test_det_schur_with_ones():
    A = np.diag([1.0, 2.0, 3.0])
    ev = F.evaluate_inequality("det-schur", {"A": A, "Z": np.ones((3, 3))}, parse_function("pow:0.5"))
    assert abs(ev.margin) < 1e-12 * ev.scale


def test_weak_majorization_examples(rng):
    X = O.rand_herm(rng, 3)
    assert F.weak_majorization_leq(X, X)
    assert F.weak_majorization_leq(np.diag([1.0, 1.0]), np.diag([2.0, 0.0]))
    assert not F.weak_majorization_leq(np.diag([2.0, 0.0]), np.diag([1.0, 0.5]))


def test_majorization_on_jensen_instance(rng):
    phi = Compression(haar_unitary(rng, 5)[:, :3])
    A = O.rand_herm(rng, 5)
    f_phi = O.funm("exp", phi(A))
    phi_f = phi(O.funm("exp", A))
    lo, up = O.eigs_desc(f_phi), O.eigs_desc(phi_f)
    assert np.all(np.cumsum(lo) <= np.cumsum(up) + 1e-10)
    assert F.weak_majorization_leq(f_phi, phi_f)


def test_odd_index_margin_by_hand():
    lower = np.diag([5.0, 4.0, 1.0])
    upper = np.diag([6.0, 1.5, 0.0])
    # k=1: 6-5, k=2: 1.5-1
    assert F.odd_index_margin(lower, upper) == pytest.approx(0.5)


def test_not_applicable_is_not_a_failure():
    ev = F.evaluate_inequality("vn-trace-1.1", {"A": np.eye(2), "B": np.eye(2)},
                               parse_function("pow:2"))
    assert not ev.applicable and ev.holds() and "concave" in ev.reason


def test_evaluation_errors():
    with pytest.raises(F.StatementError):
        F.evaluate_inequality("nope", {})
    with pytest.raises(F.StatementError):
        F.evaluate_inequality("fisher", {"H": np.eye(2)})
    with pytest.raises(F.StatementError):
        F.evaluate_inequality("vn-trace-1.1", {"A": np.eye(2), "B": np.eye(2)})
    with pytest.raises(F.StatementError):
        F.evaluate_inequality("vn-trace-1.1", {"A": np.eye(2), "B": np.eye(3)},
                              parse_function("pow:0.5"))
    with pytest.raises(F.StatementError):
        F.evaluate_inequality("rotfeld-norm", {"A": np.eye(2), "B": np.eye(2), "norm": "bogus"},
                              parse_function("pow:0.5"))


def test_norm_parsing_and_padding():
    n = F.SymmetricNorm.parse("schatten:3")
    assert n.kind == "schatten" and n.param == 3 and n.label() == "schatten:3"
    tr = F.SymmetricNorm.parse("normalized-trace")
    assert tr.padded(np.eye(2), 4) == pytest.approx(0.5)
    with pytest.raises(F.StatementError):
        F.SymmetricNorm("ky-fan", 1.5)


# oracle margins recomputed with scipy matrix functions

def _tr(M):
    return float(np.trace(M).real)


def test_margins_match_direct_formulas(rng):
    A, B = O.rand_psd(rng, 4), O.rand_psd(rng, 4)
    sq = parse_function("pow:0.5")
    vn = _tr(O.sqrtm((A + B) / 2)) - (_tr(O.sqrtm(A)) + _tr(O.sqrtm(B))) / 2
    assert F.evaluate_inequality("vn-trace-1.1", {"A": A, "B": B}, sq).margin == pytest.approx(vn, abs=1e-10)
    rot = _tr(O.sqrtm(A)) + _tr(O.sqrtm(B)) - _tr(O.sqrtm(A + B))
    assert F.evaluate_inequality("rotfeld-1.2", {"A": A, "B": B}, sq).margin == pytest.approx(rot, abs=1e-10)
    mk = np.linalg.det(A + B).real ** 0.25 - np.linalg.det(A).real ** 0.25 - np.linalg.det(B).real ** 0.25
    assert F.evaluate_inequality("minkowski-2.4", {"A": A, "B": B}).margin == pytest.approx(mk, abs=1e-10)
    p = 3.0
    st_ = (_tr(np.linalg.matrix_power(A, 3)) ** (1 / p) + _tr(np.linalg.matrix_power(B, 3)) ** (1 / p)
           - _tr(np.linalg.matrix_power(A + B, 3)) ** (1 / p))
    assert F.evaluate_inequality("schatten-triangle", {"A": A, "B": B, "p": p}).margin == pytest.approx(st_, abs=1e-10)


def test_hp_and_bk_trace_direct(rng):
    Zs = isometric_column(rng, 3, 2)
    As = [O.rand_herm(rng, 3) for _ in Zs]
    f = parse_function("exp")
    lhs = _tr(O.funm("exp", sum(Z.conj().T @ X @ Z for Z, X in zip(Zs, As))))
    rhs = _tr(sum(Z.conj().T @ O.funm("exp", X) @ Z for Z, X in zip(Zs, As)))
    ev = F.evaluate_inequality("hp-trace-2.6", {"As": As, "Zs": Zs}, f)
    assert ev.margin == pytest.approx(rhs - lhs, abs=1e-9)
    Z = 0.8 * haar_unitary(rng, 3)
    A = O.rand_psd(rng, 3)
    g = parse_function("pow:2")
    bk = _tr(Z.conj().T @ A @ A @ Z) - _tr(np.linalg.matrix_power(Z.conj().T @ A @ Z, 2))
    assert F.evaluate_inequality("bk-trace-2.7", {"A": A, "Z": Z}, g).margin == pytest.approx(bk, abs=1e-10)


def test_cond_bound_equal_multiples_of_unitary(rng):
    U = haar_unitary(rng, 3)
    As = [2.0 * U, 2.0 * U, 2.0 * U]
    ev = F.evaluate_inequality("cond-bound-2.19", {"As": As, "omega": 1.0})
    assert abs(ev.margin) < 1e-10
    assert F.cond_bound_constant(1.0) == 1.0
    assert F.cond_bound_constant(100.0) == pytest.approx(101 / 20)


def test_cond_bound_gated_by_condition_number(rng):
    A = np.diag([1.0, 10.0])
    ev = F.evaluate_inequality("cond-bound-2.19", {"As": [A, A], "omega": 2.0})
    assert not ev.applicable


def test_statement_registry_is_complete():
    required = {"vn-trace-1.1", "rotfeld-1.2", "hp-trace-2.6", "bk-trace-2.7", "det-mean", "det-schur",
                "fisher", "minkowski-2.4", "antinorm-2.10", "block-norm-3.5", "det-3.6",
                "rotfeld-norm", "poly-3.12", "schatten-triangle", "cond-bound-2.19", "majorization",
                "odd-index", "hansen", "expansive-trace", "block-trace", "ando-difference"}
    assert required <= set(F.statement_ids())


# --- properties --------------------------------------------------------------------------


@given(seeds, dims, st.sampled_from(["schatten:1", "schatten:2", "schatten:3.5", "ky-fan:2",
                                     "operator", "normalized-trace"]))
def test_norm_unitary_invariance_and_triangle(seed, n, spec):
    rng = np.random.default_rng(seed)
    norm = F.SymmetricNorm.parse(spec)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Y = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, V = O.rand_unitary(rng, n), O.rand_unitary(rng, n)
    assert norm(U @ X @ V) == pytest.approx(norm(X), rel=1e-10)
    assert norm(X + Y) <= norm(X) + norm(Y) + 1e-10 * (norm(X) + norm(Y))


@given(seeds, dims, st.floats(1, 8), st.floats(-5, 5))
def test_schatten_scaling(seed, n, p, c):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    assert F.schatten_norm(c * X, p) == pytest.approx(abs(c) * F.schatten_norm(X, p), rel=1e-10, abs=1e-300)


@given(seeds, dims, st.sampled_from([-0.5, -1.0, -2.0]),
       st.sampled_from(["normalized-trace", "operator", "schatten:2"]))
def test_antinorm_and_minkowski_superadditive(seed, n, p, spec):
    rng = np.random.default_rng(seed)
    A, B = O.rand_psd(rng, n), O.rand_psd(rng, n)
    norm = F.SymmetricNorm.parse(spec)
    lhs = F.anti_norm_derived(A + B, p, norm)
    assert lhs >= F.anti_norm_derived(A, p, norm) + F.anti_norm_derived(B, p, norm) - 1e-9 * max(1, lhs)
    m = F.minkowski_functional(A + B)
    assert m >= F.minkowski_functional(A) + F.minkowski_functional(B) - 1e-9 * max(1, m)


@given(seeds, st.integers(1, 4), st.integers(1, 4),
       st.sampled_from(["schatten:1", "schatten:2", "operator", "ky-fan:1", "normalized-trace"]),
       st.sampled_from(["log1p", "pwl:0,0;1,1.5;3,2.5", "affine:0.5,0"]))
def test_block_norm_matches_rotfeld_norm(seed, n, m, spec, fspec):
    rng = np.random.default_rng(seed)
    N = n + m
    # H = R*R has N zero eigenvalues; f is kept Lipschitz at 0 so rounding there stays small
    A, B = O.rand_psd(rng, N, rank=n), O.rand_psd(rng, N, rank=m)
    R = np.hstack([O.sqrtm(A), O.sqrtm(B)])
    H = R.conj().T @ R
    f = parse_function(fspec)
    block = F.evaluate_inequality("block-norm-3.5", {"H": O.herm(H), "split": N, "norm": spec}, f)
    rot = F.evaluate_inequality("rotfeld-norm", {"A": A, "B": B, "norm": spec}, f)
    assert block.applicable and rot.applicable
    # normalized trace divides by size: 2N for the block, N for the sum
    ratio = 2.0 if spec == "normalized-trace" else 1.0
    assert ratio * block.margin == pytest.approx(rot.margin, abs=1e-8)


@given(seeds, st.integers(2, 5), st.sampled_from([1.0, 2.0, 10.0, 100.0]))
def test_cond_bound_property(seed, m, omega):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 5))
    As = [conditioned_invertible(rng, n, omega) for _ in range(m)]
    ev = F.evaluate_inequality("cond-bound-2.19", {"As": As, "omega": omega})
    assert ev.applicable and ev.holds()
