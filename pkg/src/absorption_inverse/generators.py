"""Named example graphs and random strongly connected graphs."""

from __future__ import annotations

import numpy as np

from .graph import AbsorptionGraph, is_strongly_connected
from .motifs import motif_adjacency


def _absorption(d, n):
    return np.ones(n) if d is None else np.asarray(d, dtype=float)


def path_graph(n: int, a: float = 1.0, d=None) -> AbsorptionGraph:
    return AbsorptionGraph(motif_adjacency("path", n, a), _absorption(d, n))


def star_graph(n: int, a: float = 1.0, d=None) -> AbsorptionGraph:
    """Star with the hub as the last vertex."""
    return AbsorptionGraph(motif_adjacency("star", n, a), _absorption(d, n))


def complete_graph(n: int, a: float = 1.0, d=None) -> AbsorptionGraph:
    return AbsorptionGraph(motif_adjacency("complete", n, a), _absorption(d, n))


def directed_cycle(n: int, a: float = 1.0, d=None) -> AbsorptionGraph:
    """1 -> 2 -> ... -> n -> 1."""
    return AbsorptionGraph(motif_adjacency("dicycle", n, a), _absorption(d, n))


def cycle_graph(n: int, a: float = 1.0, d=None) -> AbsorptionGraph:
    """Undirected cycle (both arc directions, weight ``a``)."""
    A = motif_adjacency("dicycle", n, a)
    return AbsorptionGraph(A + A.T, _absorption(d, n))


def _grid_edges(offset):
    """Edges of a 3x3 grid whose vertices are numbered down columns from ``offset``."""
    edges = []
    for c in range(3):
        for r in range(3):
            v = offset + 3 * c + r
            if r < 2:
                edges.append((v, v + 1))
            if c < 2:
                edges.append((v, v + 3))
    return edges


def bridge_graph(d=None, attach="middle") -> AbsorptionGraph:
    """Two 3x3 grids joined through a single bridge vertex.

    Vertices 1-9 form the left grid and 11-19 the right grid, each numbered
    down its columns from left to right, so 1-3 is the far-left column and
    17-19 the far-right column.  Vertex 10 is the bridge.  With
    ``attach="middle"`` it is joined to the middle vertex of each facing
    column (8 and 12); with ``attach="column"`` to all of 7-9 and 11-13.
    Unit weights, undirected.  Labels here are 1-based; the matrix is 0-based.
    """
    edges = _grid_edges(1) + _grid_edges(11)
    if attach == "middle":
        edges += [(8, 10), (10, 12)]
    elif attach == "column":
        edges += [(v, 10) for v in (7, 8, 9)] + [(10, v) for v in (11, 12, 13)]
    else:
        raise ValueError(f"unknown attach mode {attach!r}")
    A = np.zeros((19, 19))
    for a, b in edges:
        A[a - 1, b - 1] = A[b - 1, a - 1] = 1.0
    return AbsorptionGraph(A, _absorption(d, 19))


def random_strongly_connected(n: int, rng, density: float = 0.4, low: float = 0.1,
                              high: float = 5.0, d=None) -> AbsorptionGraph:
    """Directed graph: a random Hamiltonian cycle plus random extra arcs.

    Weights are uniform on ``[low, high]``; generally unbalanced.
    """
    A = np.zeros((n, n))
    perm = rng.permutation(n)
    A[perm[(np.arange(n) + 1) % n], perm] = rng.uniform(low, high, n)
    extra = (rng.random((n, n)) < density) & (A == 0)
    np.fill_diagonal(extra, False)
    A[extra] = rng.uniform(low, high, extra.sum())
    if d is None:
        d = rng.uniform(0.1, 10.0, n)
    return AbsorptionGraph(A, d)


def random_balanced(n: int, rng, cycles: int = None, low: float = 0.1, high: float = 5.0,
                    d=None) -> AbsorptionGraph:
    """Balanced digraph built as a weighted sum of directed cycles.

    Every cycle is balanced, so the sum is too; the first cycle is
    Hamiltonian, which makes the graph strongly connected.
    """
    if cycles is None:
        cycles = n
    A = np.zeros((n, n))
    perm = rng.permutation(n)
    A[perm[(np.arange(n) + 1) % n], perm] += rng.uniform(low, high)
    for _ in range(cycles):
        m = int(rng.integers(2, n + 1))
        verts = rng.choice(n, size=m, replace=False)
        A[verts[(np.arange(m) + 1) % m], verts] += rng.uniform(low, high)
    if d is None:
        d = rng.uniform(0.1, 10.0, n)
    return AbsorptionGraph(A, d)


def random_undirected(n: int, rng, density: float = 0.4, low: float = 0.1, high: float = 5.0,
                      d=None) -> AbsorptionGraph:
    """Symmetric weights on a random spanning tree plus random extra edges."""
    A = np.zeros((n, n))
    order = rng.permutation(n)
    for k in range(1, n):
        parent = order[rng.integers(0, k)]
        A[order[k], parent] = A[parent, order[k]] = rng.uniform(low, high)
    extra = np.triu(rng.random((n, n)) < density, 1) & (A == 0)
    w = rng.uniform(low, high, (n, n))
    A[extra] = w[extra]
    A = np.maximum(A, A.T)
    assert is_strongly_connected(A)
    if d is None:
        d = rng.uniform(0.1, 10.0, n)
    return AbsorptionGraph(A, d)
