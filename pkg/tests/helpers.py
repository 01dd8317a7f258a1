"""Shared random-instance builders and finite-difference utilities."""

import numpy as np

from geomoment.rng import stream


def rng_for(test_id, seed=0):
    return stream(seed, 1000 + (hash(test_id) % 1000))


def rand_orthogonal(rng, n):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))


def rand_spd(rng, n, cond=50.0):
    """Random SPD matrix with condition number at most cond."""
    Q = rand_orthogonal(rng, n)
    lam = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    lam = lam / lam.min()
    return (Q * lam) @ Q.T


def rand_sym(rng, n, scale=1.0):
    A = rng.standard_normal((n, n)) * scale
    return 0.5 * (A + A.T)


def rand_invertible(rng, n, cond=100.0):
    """Random invertible matrix with condition number at most cond."""
    U = rand_orthogonal(rng, n)
    V = rand_orthogonal(rng, n)
    s = np.exp(rng.uniform(0.0, np.log(cond), size=n))
    s = s / s.min()
    return (U * s) @ V.T


def fd_sym_grad(f, P, h=1e-5):
    """Central-difference gradient of scalar f on symmetric coordinates.

    Entry (i, j), i != j, holds G_ij + G_ji of the true symmetric-matrix
    gradient G because both mirrored entries are perturbed together.
    """
    n = P.shape[0]
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            step = h * max(1.0, abs(P[i, j]))
            Pp = P.copy()
            Pm = P.copy()
            Pp[i, j] += step
            Pm[i, j] -= step
            if i != j:
                Pp[j, i] += step
                Pm[j, i] -= step
            out[i, j] = out[j, i] = (f(Pp) - f(Pm)) / (2.0 * step)
    return out


def sym_grad_pairs(G):
    """Map an analytic symmetric gradient to the fd_sym_grad convention."""
    return G + G.T - np.diag(np.diag(G))


def max_rel_err(a, b, floor=1e-6):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(b)), floor)
    return float(np.max(np.abs(a - b) / denom))
