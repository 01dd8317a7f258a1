"""Distances on the SPD manifold and the invariances that make them useful.

The affine-invariant distance is unchanged under congruence P -> A P A^T,
which is why it compares covariance-like objects fairly across linear
reparameterizations. The Hilbert projective distance only looks at the
extreme generalized eigenvalues and ignores overall scale entirely.
"""

import numpy as np

from geomoment import dist_airm, dist_hilbert, dist_logeuclid, validate_spd

rng = np.random.default_rng(0)


def random_spd(n, spread=2.0):
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    lam = np.exp(rng.uniform(-spread / 2, spread / 2, size=n))
    return (Q * lam) @ Q.T


P = random_spd(4)
Q = random_spd(4)
validate_spd(P)
validate_spd(Q)

print("affine-invariant distance d_A(P, Q):", dist_airm(P, Q))
print("Hilbert projective distance d_H(P, Q):", dist_hilbert(P, Q))
print("log-Euclidean distance    d_LE(P, Q):", dist_logeuclid(P, Q))

print("\nCongruence invariance of d_A:")
A = rng.standard_normal((4, 4)) + 2 * np.eye(4)
print("  d_A(APA', AQA') =", dist_airm(A @ P @ A.T, A @ Q @ A.T))
print("  d_A(P, Q)       =", dist_airm(P, Q))

print("\nScale blindness of d_H:")
print("  d_H(3P, 0.1Q) =", dist_hilbert(3.0 * P, 0.1 * Q))
print("  d_H(P, Q)     =", dist_hilbert(P, Q))
print("  d_A(3P, 0.1Q) =", dist_airm(3.0 * P, 0.1 * Q), "(the Riemannian one does care)")

print("\nClosed form on commuting matrices: d_A(I, diag(e^4, 1)) =")
print("  computed:", dist_airm(np.eye(2), np.diag([np.e**4, 1.0])))
print("  expected: sqrt(0.5 * 16) =", np.sqrt(8.0))
