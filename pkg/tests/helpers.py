"""Shared graph factories, hypothesis strategies and independent oracles for the tests."""

from __future__ import annotations

import itertools

import numpy as np
from hypothesis import strategies as st

from absorption_inverse import (
    AbsorptionGraph, random_balanced, random_strongly_connected, random_undirected,
)


def rng_for(seed):
    return np.random.default_rng(seed)


@st.composite
def graphs(draw, min_n=2, max_n=8, kind="any"):
    """Random strongly connected graph with random absorption.

    ``kind`` is ``"any"``, ``"directed"``, ``"balanced"`` or ``"undirected"``.
    """
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = rng_for(seed)
    if kind == "any":
        kind = draw(st.sampled_from(["directed", "balanced", "undirected"]))
    make = {"directed": random_strongly_connected, "balanced": random_balanced,
            "undirected": random_undirected}[kind]
    return make(n, rng)


def absorption_vectors(n, low=0.1, high=10.0):
    return st.lists(st.floats(low, high), min_size=n, max_size=n).map(np.array)


def permute(g: AbsorptionGraph, perm) -> AbsorptionGraph:
    """Relabel vertex ``k`` as ``perm[k]``."""
    P = np.eye(g.n)[perm].T            # P e_k = e_{perm[k]}
    A = P @ g.adjacency @ P.T
    d = np.empty(g.n)
    d[perm] = g.absorption
    return AbsorptionGraph(A, d)


# ---------------------------------------------------------------------------
# independent oracles

def tree_weights_bruteforce(A) -> np.ndarray:
    """Total weight of spanning in-trees rooted at each vertex.

    Walks every choice of one out-arc per non-root vertex and keeps the
    acyclic ones, checked with a topological sort rather than the library's
    cycle detector.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    out = [np.flatnonzero(A[:, j]) for j in range(n)]
    totals = np.zeros(n)
    for r in range(n):
        others = [j for j in range(n) if j != r]
        for heads in itertools.product(*(out[j] for j in others)):
            parent = dict(zip(others, heads))
            if is_acyclic_functional(parent, n):
                totals[r] += np.prod([A[h, j] for j, h in parent.items()])
    return totals


def is_acyclic_functional(parent: dict, n: int) -> bool:
    """Kahn topological sort on the arcs ``j -> parent[j]``."""
    indeg = [0] * n
    for h in parent.values():
        indeg[h] += 1
    queue = [v for v in range(n) if indeg[v] == 0]
    seen = 0
    while queue:
        v = queue.pop()
        seen += 1
        if v in parent:
            h = parent[v]
            indeg[h] -= 1
            if indeg[h] == 0:
                queue.append(h)
    return seen == n


def moore_penrose_residuals(L, X) -> list:
    scale = max(1.0, np.abs(L).max(), np.abs(X).max())
    return [np.abs(L @ X @ L - L).max() / scale,
            np.abs(X @ L @ X - X).max() / scale,
            np.abs((L @ X).T - L @ X).max() / scale,
            np.abs((X @ L).T - X @ L).max() / scale]


def definition_oracle(L, d, u):
    """Absorption inverse from its defining conditions alone.

    ``X`` is the unique matrix with ``X L = I - U D`` and ``X D u = 0``.
    Since ``D u`` lies outside the range of ``L``, the stacked matrix
    ``[L | D u]`` has full row rank and the system ``X [L | D u] = [I - UD | 0]``
    has exactly one solution, found here by least squares.
    """
    n = L.shape[0]
    dbar = d @ u
    UD = np.outer(u, d) / dbar
    lhs = np.hstack([L, (d * u)[:, None]])          # X [L | D u] = [I - UD | 0]
    rhs = np.hstack([np.eye(n) - UD, np.zeros((n, 1))])
    Xt, *_ = np.linalg.lstsq(lhs.T, rhs.T, rcond=None)
    return Xt.T
