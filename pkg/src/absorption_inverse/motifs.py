"""Closed-form absorption inverses for four small graph families.

Vertex labels follow the usual 1-based drawings: the star's hub is the last
vertex, the path runs 1 - 2 - ... - n, and the directed cycle is
1 -> 2 -> ... -> n -> 1.  All formulas take uniform arc weight ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import AbsorptionGraph

KINDS = ("complete", "star", "path", "dicycle")


@dataclass(frozen=True)
class MotifSpec:
    kind: str
    n: int
    a: float
    d: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        lo = 3 if self.kind in ("star", "dicycle") else 2
        if self.n < lo:
            raise ValueError(f"{self.kind} needs n >= {lo}")
        if not self.a > 0:
            raise ValueError("a must be positive")
        d = tuple(float(x) for x in np.ravel(self.d))
        if len(d) != self.n or min(d) <= 0:
            raise ValueError("d must hold n positive rates")
        object.__setattr__(self, "d", d)

    @property
    def dvec(self) -> np.ndarray:
        return np.array(self.d)


def motif_adjacency(kind: str, n: int, a: float = 1.0) -> np.ndarray:
    A = np.zeros((n, n))
    if kind == "complete":
        A[:] = a
        np.fill_diagonal(A, 0.0)
    elif kind == "star":
        A[n - 1, : n - 1] = a
        A[: n - 1, n - 1] = a
    elif kind == "path":
        idx = np.arange(n - 1)
        A[idx, idx + 1] = a
        A[idx + 1, idx] = a
    elif kind == "dicycle":
        idx = np.arange(n)
        A[(idx + 1) % n, idx] = a
    else:
        raise ValueError(f"unknown motif kind {kind!r}")
    return A


def motif_graph(spec: MotifSpec) -> AbsorptionGraph:
    return AbsorptionGraph(motif_adjacency(spec.kind, spec.n, spec.a), spec.dvec)


def complete_ld(spec: MotifSpec) -> np.ndarray:
    d, n, a = spec.dvec, spec.n, spec.a
    s = d.sum()
    return (np.eye(n) - (d[:, None] + d[None, :]) / s + (d @ d) / s**2) / (a * n)


def star_ld(spec: MotifSpec) -> np.ndarray:
    """Hub is the last vertex.

    The normaliser ``s`` is the sum of all rates, hub included; ``q`` sums the
    squared leaf rates only.
    """
    d, n, a = spec.dvec, spec.n, spec.a
    leaf = d[:-1]
    s, q = d.sum(), leaf @ leaf
    X = np.empty((n, n))
    X[:-1, :-1] = q - s * (leaf[:, None] + leaf[None, :])
    X[:-1, :-1][np.diag_indices(n - 1)] = q + s**2 - 2 * s * leaf
    X[-1, :-1] = q - s * leaf
    X[:-1, -1] = q - s * leaf
    X[-1, -1] = q
    return X / (a * s**2)


def path_ld(spec: MotifSpec) -> np.ndarray:
    """Entrywise path formula, including the global ``1/a`` factor."""
    d, n, a = spec.dvec, spec.n, spec.a
    s = d.sum()
    k = np.arange(1, n + 1)
    prefix = np.cumsum(d)                      # sum_{k<=i} d_k
    weighted = (n - k) * d
    tail = weighted.sum() - np.cumsum(weighted)  # sum_{k>i} (n-k) d_k
    h = ((n - k) * prefix + tail) / s
    const = (prefix[:-1] ** 2).sum() / s**2
    X = n - np.maximum(k[:, None], k[None, :]) - h[:, None] - h[None, :] + const
    return X / a


def dicycle_ld(spec: MotifSpec) -> np.ndarray:
    d, n, a = spec.dvec, spec.n, spec.a
    s = d.sum()
    # Q[i, l] = s * delta_il - d_l ; the double sum runs over 1 <= k <= l <= n-1
    Q = s * np.eye(n) - d[None, :]
    lower = np.tril(np.ones((n - 1, n - 1)))
    M = np.zeros((n, n))
    M[:-1, :-1] = lower
    return Q @ M @ Q.T / (a * s**2)


_FORMULAS = {"complete": complete_ld, "star": star_ld, "path": path_ld, "dicycle": dicycle_ld}


def closed_form_ld(spec: MotifSpec) -> np.ndarray:
    return _FORMULAS[spec.kind](spec)
