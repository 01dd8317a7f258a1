"""Adaptation losses and their exact gradients w.r.t. per-sample features.

The geometric kinds chain distance -> embedding -> batch moments; the
baseline kinds are squared Euclidean discrepancies between the raw
moments. Gradients are hand-derived and checked against central finite
differences in the test suite.
"""

from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingParams, embed
from .errors import (
    DegenerateSpectrum,
    GateClosed,
    NearZeroDistance,
    NotPositiveDefinite,
    NotSymmetric,
)
from .moments import FeatureBatch, batch_moments
from .spd import as_matrix, dist_airm, dist_hilbert, eigh_sym, pencil_eigh, sym, validate_spd

DIST_KINDS = ("airm", "hilbert", "mean_euclid", "coral_frob", "log_euclid")

DIST_EPS = 1e-8  # below this the airm gradient is defined as zero
DEGEN_RTOL = 1e-9  # relative gap deciding eigenvalue degeneracy


@dataclass(frozen=True)
class LossEval:
    value: float
    grad_source: np.ndarray
    grad_target: np.ndarray


def _rows(z):
    if isinstance(z, FeatureBatch):
        return z.data
    return np.asarray(z, dtype=float)


def grad_spd_pair(P1, P2, kind):
    """Gradients of dist_airm or dist_hilbert w.r.t. both SPD arguments.

    Uses the generalized eigenpairs P2 v = lambda P1 v with v^T P1 v = 1,
    for which d(lambda)/dP2 = v v^T and d(lambda)/dP1 = -lambda v v^T.
    """
    if kind not in ("airm", "hilbert"):
        raise ValueError(f"kind must be airm or hilbert, got {kind!r}")
    P1 = as_matrix(P1)
    P2 = as_matrix(P2)
    lam, V = pencil_eigh(P1, P2)
    if lam[0] <= 0:
        raise NotPositiveDefinite(
            f"pencil eigenvalue {lam[0]:.6e} <= 0", lambda_min=float(lam[0])
        )
    if kind == "airm":
        logs = np.log(lam)
        d = np.sqrt(0.5 * np.sum(logs**2))
        if d < DIST_EPS:
            raise NearZeroDistance(f"distance {d:.3e} below {DIST_EPS:.1e}")
        # d(dist)/d(lambda_i) = log(lambda_i) / (2 d lambda_i)
        c2 = logs / (2.0 * d * lam)
        c1 = -logs / (2.0 * d)
        dP2 = sym((V * c2) @ V.T)
        dP1 = sym((V * c1) @ V.T)
        return dP1, dP2

    lo, hi = lam[0], lam[-1]
    if hi - lo <= DEGEN_RTOL * hi:
        raise DegenerateSpectrum(f"pencil spectrum collapses: [{lo:.6e}, {hi:.6e}]")
    hi_idx = np.nonzero(lam >= hi * (1.0 - DEGEN_RTOL))[0]
    lo_idx = np.nonzero(lam <= lo * (1.0 + DEGEN_RTOL))[0]
    if np.intersect1d(hi_idx, lo_idx).size:
        raise DegenerateSpectrum("extreme eigenspaces overlap")
    # average over a degenerate extreme eigenspace: deterministic subgradient
    Vh = V[:, hi_idx]
    Vl = V[:, lo_idx]
    Gmax = sym(Vh @ Vh.T) / hi_idx.size
    Gmin = sym(Vl @ Vl.T) / lo_idx.size
    dP2 = Gmax / hi - Gmin / lo
    dP1 = Gmin - Gmax
    return dP1, dP2


def grad_embed(m, upstream, params=EmbeddingParams()):
    """Chain an upstream gradient on the embedded matrix back to (mean, cov)."""
    G = sym(upstream)
    a = params.a
    n = m.dim
    Gtl = G[:n, :n]
    dcov = sym(Gtl)
    dmean = a * (Gtl + Gtl.T) @ m.mean + 2.0 * a * G[:n, n]
    return dmean, dcov


def grad_moments(batch, dmean, dcov):
    """Chain gradients on (mean, cov) back to every feature row.

    Row i receives dmean/b + (2/(b-1)) dcov (z_i - mean); the mean's
    dependence inside the covariance estimator cancels because the
    centered rows sum to zero.
    """
    data = _rows(batch)
    b = data.shape[0]
    mean = data.mean(axis=0)
    out = np.broadcast_to(np.asarray(dmean, dtype=float) / b, data.shape).copy()
    D = sym(dcov)
    if np.any(D):
        out += (data - mean) @ (D * (2.0 / (b - 1)))
    return out


def _log_derivative_coeffs(lam):
    """Daleckii-Krein divided-difference table for the matrix logarithm."""
    li = lam[:, None]
    lj = lam[None, :]
    diff = li - lj
    close = np.abs(diff) <= 1e-12 * np.maximum(li, lj)
    safe = np.where(close, 1.0, diff)
    K = np.where(close, 2.0 / (li + lj), (np.log(li) - np.log(lj)) / safe)
    return K


def _validated_embed(m, params):
    try:
        P = embed(m, params)
        validate_spd(P.entries)
    except (NotPositiveDefinite, NotSymmetric) as exc:
        raise GateClosed(f"embedded matrix failed SPD validation: {exc}") from exc
    return P


def _validated_cov(m):
    try:
        validate_spd(m.cov)
    except (NotPositiveDefinite, NotSymmetric) as exc:
        raise GateClosed(f"covariance failed SPD validation: {exc}") from exc
    return m.cov


def dist_loss(zs, zt, kind, params=EmbeddingParams()):
    """Distance loss between two feature batches with per-row gradients.

    Raises GateClosed when a geometric kind cannot be evaluated because
    an embedded matrix (or covariance, for log_euclid) is not SPD; the
    trainer treats that as "skip adaptation this step".
    """
    if kind not in DIST_KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {DIST_KINDS}")
    zs_data = _rows(zs)
    zt_data = _rows(zt)
    if zs_data.shape[1] != zt_data.shape[1]:
        raise ValueError(
            f"feature dims differ: {zs_data.shape[1]} vs {zt_data.shape[1]}"
        )
    ms = batch_moments(zs_data)
    mt = batch_moments(zt_data)

    if kind in ("airm", "hilbert"):
        Ps = _validated_embed(ms, params)
        Pt = _validated_embed(mt, params)
        dist = dist_airm if kind == "airm" else dist_hilbert
        value = dist(Ps, Pt)
        try:
            dPs, dPt = grad_spd_pair(Ps, Pt, kind)
            dmean_s, dcov_s = grad_embed(ms, dPs, params)
            dmean_t, dcov_t = grad_embed(mt, dPt, params)
            gs = grad_moments(zs_data, dmean_s, dcov_s)
            gt = grad_moments(zt_data, dmean_t, dcov_t)
        except (NearZeroDistance, DegenerateSpectrum):
            gs = np.zeros_like(zs_data)
            gt = np.zeros_like(zt_data)
        return LossEval(value=value, grad_source=gs, grad_target=gt)

    if kind == "mean_euclid":
        diff = ms.mean - mt.mean
        value = float(diff @ diff)
        gs = grad_moments(zs_data, 2.0 * diff, np.zeros_like(ms.cov))
        gt = grad_moments(zt_data, -2.0 * diff, np.zeros_like(mt.cov))
        return LossEval(value=value, grad_source=gs, grad_target=gt)

    if kind == "coral_frob":
        diff = ms.cov - mt.cov
        value = float(np.sum(diff * diff))
        zero = np.zeros(ms.dim)
        gs = grad_moments(zs_data, zero, 2.0 * diff)
        gt = grad_moments(zt_data, zero, -2.0 * diff)
        return LossEval(value=value, grad_source=gs, grad_target=gt)

    # log_euclid on the covariances directly
    Ss = _validated_cov(ms)
    St = _validated_cov(mt)
    lam_s, Qs = eigh_sym(Ss)
    lam_t, Qt = eigh_sym(St)
    Ls = sym((Qs * np.log(lam_s)) @ Qs.T)
    Lt = sym((Qt * np.log(lam_t)) @ Qt.T)
    diff = Ls - Lt
    value = float(np.sum(diff * diff))
    zero = np.zeros(ms.dim)
    Ks = _log_derivative_coeffs(lam_s)
    Kt = _log_derivative_coeffs(lam_t)
    dcov_s = sym(Qs @ (Ks * (Qs.T @ (2.0 * diff) @ Qs)) @ Qs.T)
    dcov_t = sym(Qt @ (Kt * (Qt.T @ (-2.0 * diff) @ Qt)) @ Qt.T)
    gs = grad_moments(zs_data, zero, dcov_s)
    gt = grad_moments(zt_data, zero, dcov_t)
    return LossEval(value=value, grad_source=gs, grad_target=gt)
