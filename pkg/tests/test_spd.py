import numpy as np
import pytest
from scipy.linalg import expm

from geomoment.errors import NotPositiveDefinite, NotSymmetric
from geomoment.spd import (
    dist_airm,
    dist_hilbert,
    dist_logeuclid,
    eigvals_sym,
    inner_affine,
    matrix_log,
    validate_spd,
)
from helpers import rand_invertible, rand_orthogonal, rand_spd, rand_sym, rng_for


def test_validate_identity():
    P = validate_spd(np.eye(3), spd_tol=1e-10)
    assert P.dim == 3
    assert np.array_equal(P.entries, np.eye(3))


def test_validate_indefinite_diagonal():
    with pytest.raises(NotPositiveDefinite) as exc:
        validate_spd(np.diag([1.0, -1.0]), spd_tol=1e-10)
    assert exc.value.lambda_min == pytest.approx(-1.0)


def test_validate_asymmetric():
    with pytest.raises(NotSymmetric):
        validate_spd(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_validate_symmetrizes_float_noise():
    rng = rng_for("validate-noise")
    P = rand_spd(rng, 4)
    P[0, 1] += 1e-14 * abs(P).max()
    out = validate_spd(P)
    assert np.array_equal(out.entries, out.entries.T)


def test_eigvals_diagonal():
    assert np.allclose(eigvals_sym(np.diag([3.0, 1.0, 2.0])), [1.0, 2.0, 3.0])


def test_eigvals_2x2_hand():
    # char poly of [[2,1],[1,2]]: (2-l)^2 - 1 -> l = 1, 3
    assert np.allclose(eigvals_sym(np.array([[2.0, 1.0], [1.0, 2.0]])), [1.0, 3.0])


def test_eigvals_identity():
    assert np.allclose(eigvals_sym(np.eye(4)), np.ones(4))


def test_eigvals_residual():
    rng = rng_for("eig-residual")
    M = rand_sym(rng, 6, scale=3.0)
    lam = eigvals_sym(M)
    # residual check via full decomposition
    w, V = np.linalg.eigh(M)
    assert np.allclose(lam, w)
    res = np.linalg.norm(M @ V - V * w)
    assert res <= 1e-9 * max(np.linalg.norm(M), 1.0)


def test_matrix_log_identity():
    assert np.allclose(matrix_log(np.eye(5)), np.zeros((5, 5)))


def test_matrix_log_diagonal():
    L = matrix_log(np.diag([np.e, np.e**2]))
    assert np.allclose(L, np.diag([1.0, 2.0]))


def test_matrix_log_roundtrip_2x2():
    P = np.array([[2.0, 1.0], [1.0, 2.0]])
    L = matrix_log(P)
    assert np.allclose(expm(L), P, rtol=1e-10)


def test_exp_log_roundtrip_conditioned():
    rng = rng_for("explog")
    for _ in range(50):
        n = int(rng.integers(2, 7))
        P = rand_spd(rng, n, cond=1e6)
        err = np.linalg.norm(expm(matrix_log(P)) - P) / np.linalg.norm(P)
        assert err <= 1e-8


def test_airm_self_distance_zero():
    rng = rng_for("airm-self")
    P = rand_spd(rng, 4)
    assert dist_airm(P, P) <= 1e-12


def test_airm_hand_value():
    # U = diag(e^4, 1): sqrt(0.5 * 16) = 2.828427...
    d = dist_airm(np.eye(2), np.diag([np.e**4, 1.0]))
    assert d == pytest.approx(2.8284271247461903, abs=1e-12)


def test_airm_affine_invariance():
    rng = rng_for("airm-affine")
    for _ in range(50):
        P = rand_spd(rng, 4)
        Q = rand_spd(rng, 4)
        A = rand_invertible(rng, 4, cond=100.0)
        d0 = dist_airm(P, Q)
        d1 = dist_airm(A @ P @ A.T, A @ Q @ A.T)
        assert abs(d1 - d0) <= 1e-8 * (1.0 + d0)


def test_hilbert_scale_invariance():
    rng = rng_for("hilbert-scale")
    P = rand_spd(rng, 3)
    for c in (0.5, 2.0, 17.0):
        assert dist_hilbert(c * P, P) <= 1e-12


def test_hilbert_hand_value():
    assert dist_hilbert(np.eye(2), np.diag([4.0, 1.0])) == pytest.approx(
        np.log(4.0), abs=1e-12
    )


def test_hilbert_symmetry():
    rng = rng_for("hilbert-symm")
    for _ in range(20):
        P = rand_spd(rng, 5)
        Q = rand_spd(rng, 5)
        assert dist_hilbert(P, Q) == pytest.approx(dist_hilbert(Q, P), abs=1e-10)


def test_logeuclid_zero_and_hand_value():
    rng = rng_for("logeuclid")
    P = rand_spd(rng, 3)
    assert dist_logeuclid(P, P) == 0.0
    d = dist_logeuclid(np.eye(2), np.diag([np.e**2, np.e**2]))
    assert d == pytest.approx(np.sqrt(8.0), abs=1e-12)


def test_logeuclid_commuting_identity():
    rng = rng_for("logeuclid-diag")
    for _ in range(20):
        a, b, c, d = np.exp(rng.uniform(-2, 2, size=4))
        got = dist_logeuclid(np.diag([a, b]), np.diag([c, d]))
        want = np.hypot(np.log(a / c), np.log(b / d))
        assert got == pytest.approx(want, abs=1e-10)


def test_commuting_case_closed_forms():
    rng = rng_for("commuting")
    for _ in range(20):
        n = 4
        Q = rand_orthogonal(rng, n)
        p = np.exp(rng.uniform(-1.5, 1.5, size=n))
        q = np.exp(rng.uniform(-1.5, 1.5, size=n))
        P1 = (Q * p) @ Q.T
        P2 = (Q * q) @ Q.T
        ratios = np.log(q) - np.log(p)
        assert dist_airm(P1, P2) == pytest.approx(
            np.sqrt(0.5 * np.sum(ratios**2)), abs=1e-10
        )
        assert dist_hilbert(P1, P2) == pytest.approx(
            ratios.max() - ratios.min(), abs=1e-10
        )


def test_metric_axioms_sampled():
    rng = rng_for("axioms")
    for _ in range(100):
        P = rand_spd(rng, 5)
        Q = rand_spd(rng, 5)
        R = rand_spd(rng, 5)
        dpq = dist_airm(P, Q)
        assert abs(dpq - dist_airm(Q, P)) <= 1e-10
        assert dpq > 1e-9  # random pairs are far apart
        assert dist_airm(P, R) <= dpq + dist_airm(Q, R) + 1e-9


def test_inner_affine_identity_base():
    rng = rng_for("inner-id")
    V = rand_sym(rng, 4)
    assert inner_affine(np.eye(4), V, V) == pytest.approx(
        np.linalg.norm(V, "fro") ** 2, rel=1e-12
    )


def test_inner_affine_positive_and_symmetric():
    rng = rng_for("inner-pd")
    for _ in range(50):
        P = rand_spd(rng, 4)
        V = rand_sym(rng, 4)
        W = rand_sym(rng, 4)
        if np.linalg.norm(V) > 1e-12:
            assert inner_affine(P, V, V) > 0.0
        assert inner_affine(P, V, W) == pytest.approx(
            inner_affine(P, W, V), rel=1e-10, abs=1e-12
        )
