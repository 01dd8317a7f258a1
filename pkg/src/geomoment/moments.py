"""Empirical batch moments and the batch-size/dimension regime check."""

from dataclasses import dataclass

import numpy as np

from .embedding import GaussianMoments
from .errors import BatchTooSmall
from .spd import sym


@dataclass(frozen=True)
class FeatureBatch:
    """b x n matrix of encoded samples tagged with its domain."""

    domain: str  # "source" or "target"
    data: np.ndarray

    def __post_init__(self):
        if self.domain not in ("source", "target"):
            raise ValueError(f"domain must be source or target, got {self.domain!r}")
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2:
            raise ValueError(f"expected a b x n matrix, got shape {data.shape}")
        if data.shape[0] < 2:
            raise BatchTooSmall(f"need at least 2 rows, got {data.shape[0]}")
        if not np.all(np.isfinite(data)):
            raise ValueError("batch entries must be finite")
        object.__setattr__(self, "data", data)

    @property
    def b(self):
        return self.data.shape[0]

    @property
    def n(self):
        return self.data.shape[1]

    def to_csv_text(self):
        lines = ["domain,b,n", f"{self.domain},{self.b},{self.n}"]
        for row in self.data:
            lines.append(",".join(format(v, ".17g") for v in row))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv_text(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "domain,b,n":
            raise ValueError("expected header line 'domain,b,n'")
        domain, b, n = lines[1].split(",")
        data = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:]])
        if data.shape != (int(b), int(n)):
            raise ValueError(f"data shape {data.shape} does not match header ({b},{n})")
        return cls(domain=domain, data=data)


@dataclass(frozen=True)
class RegimeCheck:
    ok: bool
    ratio: float


def batch_moments(batch):
    """Row mean and unbiased covariance of a feature batch.

    Two-pass: mean first, then centered outer products with 1/(b-1)
    normalization, symmetrized exactly. The covariance may come out
    singular (identical rows); downstream gating detects that.
    """
    data = batch.data if isinstance(batch, FeatureBatch) else np.asarray(batch, dtype=float)
    b = data.shape[0]
    if b < 2:
        raise BatchTooSmall(f"need at least 2 rows, got {b}")
    mean = data.mean(axis=0)
    centered = data - mean
    cov = sym(centered.T @ centered / (b - 1))
    return GaussianMoments(mean=mean, cov=cov)


def check_regime(b, n):
    """Heuristic requiring at least ten times more samples than features."""
    if b <= 0 or n <= 0:
        raise ValueError("batch size and dimension must be positive")
    return RegimeCheck(ok=bool(b >= 10 * n), ratio=b / n)
