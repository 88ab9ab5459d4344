"""Exhaustive in-forest enumeration and the forest formula for the absorption inverse.

An in-forest assigns to every vertex either nothing (it is a root) or one
outgoing arc, such that following the arcs never cycles.  Each component is
then a tree converging to its root.  The weight of a forest is the product of
its arc weights.

Everything here is exponential in ``n`` and meant as an independent oracle
for small graphs.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import numerics
from .errors import SizeLimit
from .graph import AbsorptionGraph, absorption_scaled_graph

ENUMERATION_CAP = 9


@dataclass(frozen=True)
class InForest:
    """``parent[j]`` is the head of the arc leaving ``j``, or ``-1`` for a root."""

    parent: tuple
    weight: float

    @property
    def arcs(self) -> frozenset:
        return frozenset((j, p) for j, p in enumerate(self.parent) if p >= 0)

    @property
    def roots(self) -> frozenset:
        return frozenset(j for j, p in enumerate(self.parent) if p < 0)

    def root_of(self, j: int) -> int:
        while self.parent[j] >= 0:
            j = self.parent[j]
        return j


@dataclass(frozen=True)
class ForestFamily:
    """``Q[k][i, j]``: weight of k-arc in-forests where ``j`` lies in the tree rooted at ``i``.

    ``sigma[k]`` is the total weight of all k-arc in-forests.
    """

    Q: tuple
    sigma: np.ndarray

    def parametric_inverse(self, tau: float) -> np.ndarray:
        """``sum_k tau^k Q_k / sum_k tau^k sigma_k``."""
        powers = tau ** np.arange(len(self.sigma))
        num = sum(p * Qk for p, Qk in zip(powers, self.Q))
        return num / float(powers @ self.sigma)


def _roots_of(parent):
    """Root of every vertex, or None if the assignment contains a cycle."""
    n = len(parent)
    root = [-2] * n  # -2 unknown, -3 on current path
    for start in range(n):
        path = []
        j = start
        while root[j] == -2:
            if parent[j] < 0:
                root[j] = j
                break
            root[j] = -3
            path.append(j)
            j = parent[j]
        if root[j] == -3:
            return None
        r = root[j]
        for v in path:
            root[v] = r
    return root


def _out_neighbours(adjacency):
    A = np.asarray(adjacency)
    return [tuple(int(i) for i in np.flatnonzero(A[:, j])) for j in range(A.shape[0])]


def _iter_forests(out_nbrs, k=None):
    """Yield ``(parent, roots)`` for every in-forest, optionally with exactly ``k`` arcs."""
    n = len(out_nbrs)
    if k is None:
        choices = [(-1,) + nb for nb in out_nbrs]
        for parent in itertools.product(*choices):
            roots = _roots_of(parent)
            if roots is not None:
                yield parent, roots
        return
    for root_set in itertools.combinations(range(n), n - k):
        rs = set(root_set)
        choices = [(-1,) if j in rs else out_nbrs[j] for j in range(n)]
        for parent in itertools.product(*choices):
            roots = _roots_of(parent)
            if roots is not None:
                yield parent, roots


def _check_size(n, cap):
    if n > cap:
        raise SizeLimit(f"exhaustive forest enumeration capped at n={cap}, got n={n}")


def _weight(A, parent):
    return math.prod(float(A[p, j]) for j, p in enumerate(parent) if p >= 0)


def enumerate_in_forests(g, k: int, cap: int = ENUMERATION_CAP) -> list:
    """All in-forests of ``g`` with exactly ``k`` arcs.

    ``g`` may be an :class:`AbsorptionGraph` or a bare adjacency matrix.
    """
    A = g.adjacency if isinstance(g, AbsorptionGraph) else np.asarray(g, dtype=float)
    n = A.shape[0]
    _check_size(n, cap)
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must lie in 0..{n - 1}")
    return [InForest(parent, _weight(A, parent))
            for parent, _ in _iter_forests(_out_neighbours(A), k)]


def forest_matrices(g, cap: int = ENUMERATION_CAP) -> ForestFamily:
    """Forest matrices ``Q_0 .. Q_{n-1}`` and weights ``sigma_0 .. sigma_{n-1}``.

    Sums are taken with :func:`math.fsum` so the result does not depend on
    enumeration order.
    """
    A = g.adjacency if isinstance(g, AbsorptionGraph) else np.asarray(g, dtype=float)
    n = A.shape[0]
    _check_size(n, cap)
    terms = [[[[] for _ in range(n)] for _ in range(n)] for _ in range(n)]
    totals = [[] for _ in range(n)]
    for parent, roots in _iter_forests(_out_neighbours(A)):
        k = sum(p >= 0 for p in parent)
        w = _weight(A, parent)
        totals[k].append(w)
        for j, r in enumerate(roots):
            terms[k][r][j].append(w)
    Q = tuple(np.array([[math.fsum(terms[k][i][j]) for j in range(n)] for i in range(n)])
              for k in range(n))
    sigma = np.array([math.fsum(t) for t in totals])
    return ForestFamily(Q, sigma)


def parametric_forest_identity_check(g, tau: float, cap: int = ENUMERATION_CAP) -> float:
    """``||(I + tau L)^-1 - sum_k tau^k Q_k / sigma(tau)||_inf``."""
    A = g.adjacency if isinstance(g, AbsorptionGraph) else np.asarray(g, dtype=float)
    fam = forest_matrices(A, cap)
    L = np.diag(A.sum(axis=0)) - A
    lhs = numerics.invert(np.eye(A.shape[0]) + tau * L)
    return float(np.abs(lhs - fam.parametric_inverse(tau)).sum(axis=1).max())


def _forest_formula(Q_two, sigma_trees, sigma_two, d, u):
    """``Ld_ij = Q_two[i,j] / (d_i sigma_trees) - sigma_two u_i / (sigma_trees dbar)``."""
    dbar = d @ u
    return Q_two / (d[:, None] * sigma_trees) - sigma_two * u[:, None] / (sigma_trees * dbar)


def absorption_inverse_forest_oracle(g: AbsorptionGraph, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Absorption inverse assembled from spanning trees and two-tree forests.

    Builds the absorption-scaled graph and enumerates its in-forests with
    ``n-1`` and ``n-2`` arcs.  The kernel vector ``u`` also comes from the
    enumeration: ``u_i`` is proportional to the total weight of spanning trees
    of the original graph rooted at ``i``.
    """
    n = g.n
    _check_size(n, cap)
    if n == 1:
        return np.zeros((1, 1))
    scaled = absorption_scaled_graph(g).adjacency
    trees = enumerate_in_forests(scaled, n - 1, cap)
    two = enumerate_in_forests(scaled, n - 2, cap)
    sigma_trees = math.fsum(f.weight for f in trees)
    sigma_two = math.fsum(f.weight for f in two)
    terms = [[[] for _ in range(n)] for _ in range(n)]
    for f in two:
        for j in range(n):
            terms[f.root_of(j)][j].append(f.weight)
    Q_two = np.array([[math.fsum(terms[i][j]) for j in range(n)] for i in range(n)])
    u = spanning_tree_weights(g)
    u = u / u.sum()
    return _forest_formula(Q_two, sigma_trees, sigma_two, g.absorption, u)


def spanning_tree_weights(g, cap: int = ENUMERATION_CAP) -> np.ndarray:
    """Total weight of spanning in-trees rooted at each vertex."""
    A = g.adjacency if isinstance(g, AbsorptionGraph) else np.asarray(g, dtype=float)
    n = A.shape[0]
    _check_size(n, cap)
    per_root = [[] for _ in range(n)]
    for f in enumerate_in_forests(A, n - 1, cap):
        (r,) = f.roots
        per_root[r].append(f.weight)
    return np.array([math.fsum(t) for t in per_root])


@lru_cache(maxsize=None)
def _complete_templates(n: int, k: int):
    """Parent arrays (F, n) and root assignments (F, n) of all k-arc in-forests of K_n."""
    out = [tuple(i for i in range(n) if i != j) for j in range(n)]
    parents, roots = [], []
    for parent, r in _iter_forests(out, k):
        parents.append(parent)
        roots.append(r)
    return np.array(parents, dtype=int).reshape(-1, n), np.array(roots, dtype=int).reshape(-1, n)


class ForestExpansion:
    """Forest data of ``G`` that yields the absorption inverse for any ``d``.

    Scaling arcs out of ``j`` by ``1/d_j`` multiplies the weight of a forest by
    ``1 / prod(d over non-roots)``.  Grouping the forests of ``G`` by their
    root sets therefore turns the forest formula into a rational function of
    ``d`` whose coefficients are computed once.  :meth:`absorption_inverse`
    evaluates it for a whole stack of absorption vectors.

    The enumeration walks every in-forest of the complete digraph on ``n``
    vertices and keeps those whose arcs are all present, so it suits many
    small graphs of the same size.
    """

    def __init__(self, adjacency, cap: int = 6):
        A = np.asarray(adjacency, dtype=float)
        n = A.shape[0]
        _check_size(n, cap)
        self.n = n
        cols = np.arange(n)

        parents, _ = _complete_templates(n, n - 1)
        w = self._weights(A, parents, cols)
        roots = np.argmax(parents < 0, axis=1)
        self.tree_weight = np.bincount(roots, weights=w, minlength=n)

        parents, root_of = _complete_templates(n, n - 2)
        w = self._weights(A, parents, cols)
        # one coefficient matrix per unordered root pair
        pair_ids = {}
        pair_index = np.empty(len(parents), dtype=int)
        for f, p in enumerate(parents):
            key = tuple(np.flatnonzero(p < 0))
            pair_index[f] = pair_ids.setdefault(key, len(pair_ids))
        self.pairs = np.array(list(pair_ids), dtype=int).reshape(-1, 2)
        C = np.zeros((len(self.pairs), n, n))
        np.add.at(C, (pair_index[:, None], root_of, cols[None, :]), w[:, None])
        self.pair_Q = C
        self.pair_sigma = np.bincount(pair_index, weights=w, minlength=len(self.pairs))

    @staticmethod
    def _weights(A, parents, cols):
        arc = np.where(parents >= 0, A[np.maximum(parents, 0), cols[None, :]], 1.0)
        return arc.prod(axis=1)

    def absorption_inverse(self, ds) -> np.ndarray:
        """``Ld`` for absorption vectors ``ds`` of shape (..., n)."""
        ds = np.asarray(ds, dtype=float)
        u = self.tree_weight / self.tree_weight.sum()
        # common factor prod(d) dropped from every forest weight
        sigma_trees = ds @ self.tree_weight
        pair_prod = ds[..., self.pairs[:, 0]] * ds[..., self.pairs[:, 1]]
        sigma_two = pair_prod @ self.pair_sigma
        Q_two = np.tensordot(pair_prod, self.pair_Q, axes=(-1, 0))
        dbar = ds @ u
        return (Q_two / (ds[..., :, None] * sigma_trees[..., None, None])
                - (sigma_two / (sigma_trees * dbar))[..., None, None] * u[:, None])


def enumeration_size(g) -> int:
    """Number of (root | out-arc) assignments a full enumeration of ``g`` visits."""
    A = g.adjacency if isinstance(g, AbsorptionGraph) else np.asarray(g)
    return math.prod(int(np.count_nonzero(A[:, j])) + 1 for j in range(A.shape[0]))
