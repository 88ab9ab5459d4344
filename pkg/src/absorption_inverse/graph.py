"""Graphs with absorption, their Laplacians and the absorption-scaled graph.

Adjacency convention: ``adjacency[i, j]`` is the weight of the arc from
``j`` to ``i``.  Column ``j`` therefore lists the arcs leaving ``j`` and the
Laplacian ``L = W - A`` has zero column sums.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ParseError, ValidationError
from . import numerics

BALANCE_TOL = 1e-9

_FILE_KEYS = {"n", "edges", "absorption"}


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _reachable(adj, start):
    """Boolean mask of vertices reachable from ``start`` following arcs j -> i."""
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    seen[start] = True
    queue = deque([start])
    while queue:
        j = queue.popleft()
        for i in np.flatnonzero(adj[:, j]):
            if not seen[i]:
                seen[i] = True
                queue.append(i)
    return seen


def is_strongly_connected(adjacency) -> bool:
    """Forward and backward traversal from vertex 0."""
    adj = np.asarray(adjacency) != 0
    if adj.shape[0] == 1:
        return True
    return bool(_reachable(adj, 0).all() and _reachable(adj.T, 0).all())


@dataclass(frozen=True, eq=False)
class AbsorptionGraph:
    """A strongly connected weighted digraph paired with absorption rates.

    Parameters
    ----------
    adjacency : (n, n) array_like
        ``adjacency[i, j]`` is the weight of the arc ``j -> i``.
    absorption : (n,) array_like
        Strictly positive absorption rate of every vertex.

    Raises
    ------
    ValidationError
        On negative weights, self-loops, non-positive or mis-sized absorption,
        or a graph that is not strongly connected.
    """

    adjacency: np.ndarray
    absorption: np.ndarray

    def __post_init__(self):
        A = np.array(self.adjacency, dtype=float)
        d = np.array(self.absorption, dtype=float).ravel()
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
            raise ValidationError(f"adjacency must be square, got shape {A.shape}")
        n = A.shape[0]
        if not np.isfinite(A).all():
            raise ValidationError("adjacency has non-finite entries")
        if (A < 0).any():
            raise ValidationError("negative arc weight")
        if (np.diag(A) != 0).any():
            raise ValidationError("self-loops are not allowed")
        if d.shape != (n,):
            raise ValidationError(f"absorption has length {d.size}, expected {n}")
        if not np.isfinite(d).all() or (d <= 0).any():
            raise ValidationError("absorption rates must be finite and strictly positive")
        if not is_strongly_connected(A):
            raise ValidationError("graph is not strongly connected")
        object.__setattr__(self, "adjacency", _frozen(A))
        object.__setattr__(self, "absorption", _frozen(d))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def with_absorption(self, absorption) -> "AbsorptionGraph":
        return AbsorptionGraph(self.adjacency, absorption)

    def arcs(self):
        """List of ``(from, to, weight)`` with 0-based endpoints, sorted by (from, to)."""
        A = self.adjacency
        return [(j, i, float(A[i, j]))
                for j in range(self.n) for i in range(self.n) if A[i, j] != 0]

    def __eq__(self, other):
        if not isinstance(other, AbsorptionGraph):
            return NotImplemented
        return (np.array_equal(self.adjacency, other.adjacency)
                and np.array_equal(self.absorption, other.absorption))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class LaplacianBundle:
    """Laplacian ``L = W - A`` with its kernel data for a fixed absorption vector.

    ``u`` is the positive kernel vector of ``L`` normalised to sum 1,
    ``dbar = d @ u`` and ``U = u 1^T / dbar``.
    """

    L: np.ndarray
    w: np.ndarray
    u: np.ndarray
    d: np.ndarray
    dbar: float
    U: np.ndarray
    balanced: bool
    adjacency: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def D(self) -> np.ndarray:
        return np.diag(self.d)

    def with_absorption(self, d) -> "LaplacianBundle":
        """Same Laplacian, different absorption vector (``u`` is reused)."""
        d = _frozen(np.ravel(d))
        if d.shape != self.u.shape or (d <= 0).any():
            raise ValidationError("absorption must be positive with one entry per vertex")
        dbar = float(d @ self.u)
        return LaplacianBundle(self.L, self.w, self.u, d, dbar,
                               _frozen(np.outer(self.u, np.ones(self.n)) / dbar),
                               self.balanced, self.adjacency)


def is_balanced(g: AbsorptionGraph, tol: float = BALANCE_TOL) -> bool:
    """True iff every vertex has equal total in- and out-weight (relative ``tol``)."""
    A = g.adjacency
    inflow = A.sum(axis=1)
    outflow = A.sum(axis=0)
    return bool(np.all(np.abs(inflow - outflow) <= tol * np.maximum(1.0, outflow)))


def stationary_basis(L) -> np.ndarray:
    """Positive kernel vector of a strongly connected Laplacian, summing to 1.

    Deletes the last row and column, solves the nonsingular reduced system
    for the remaining components with the last one fixed at 1, then
    normalises.

    Raises
    ------
    NumericalError
        If the reduced system is singular (graph not strongly connected).
    """
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    if n == 1:
        return np.ones(1)
    x = numerics.lu_solve(L[:-1, :-1], -L[:-1, -1:])[:, 0]
    u = np.append(x, 1.0)
    return u / u.sum()


def laplacian(g: AbsorptionGraph) -> LaplacianBundle:
    A = g.adjacency
    w = A.sum(axis=0)
    L = np.diag(w) - A
    u = stationary_basis(L)
    d = g.absorption
    dbar = float(d @ u)
    U = np.outer(u, np.ones(g.n)) / dbar
    return LaplacianBundle(_frozen(L), _frozen(w), _frozen(u), d, dbar,
                           _frozen(U), is_balanced(g), A)


def absorption_scaled_graph(g: AbsorptionGraph) -> AbsorptionGraph:
    """Graph with arc weights ``a_ij / d_j``; its own absorption is all ones."""
    return AbsorptionGraph(g.adjacency / g.absorption[np.newaxis, :], np.ones(g.n))


# ---------------------------------------------------------------------------
# graph file v1


def _parse_number(x, what):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"{what} must be a number, got {x!r}")
    if not math.isfinite(x):
        raise ValidationError(f"{what} must be finite")
    return float(x)


def graph_from_dict(obj) -> AbsorptionGraph:
    if not isinstance(obj, dict):
        raise ParseError("graph file must hold a JSON object")
    missing = _FILE_KEYS - obj.keys()
    extra = obj.keys() - _FILE_KEYS
    if missing:
        raise ParseError(f"missing keys: {sorted(missing)}")
    if extra:
        raise ParseError(f"unknown keys: {sorted(extra)}")
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int):
        raise ParseError("'n' must be an integer")
    if n < 2:
        raise ValidationError("'n' must be at least 2")
    edges, absorption = obj["edges"], obj["absorption"]
    if not isinstance(edges, list) or not isinstance(absorption, list):
        raise ParseError("'edges' and 'absorption' must be arrays")

    A = np.zeros((n, n))
    seen = set()
    for e in edges:
        if not isinstance(e, list) or len(e) != 3:
            raise ParseError(f"edge must be [from, to, weight], got {e!r}")
        src, dst, wt = e
        for v in (src, dst):
            if isinstance(v, bool) or not isinstance(v, int):
                raise ParseError(f"vertex ids must be integers, got {v!r}")
            if not 1 <= v <= n:
                raise ValidationError(f"vertex id {v} outside 1..{n}")
        wt = _parse_number(wt, "edge weight")
        if wt <= 0:
            raise ValidationError(f"edge {src}->{dst} has non-positive weight {wt}")
        if src == dst:
            raise ValidationError(f"self-loop at vertex {src}")
        if (src, dst) in seen:
            raise ValidationError(f"duplicate arc {src}->{dst}")
        seen.add((src, dst))
        A[dst - 1, src - 1] = wt

    if len(absorption) != n:
        raise ValidationError(f"absorption has length {len(absorption)}, expected {n}")
    d = [_parse_number(x, "absorption rate") for x in absorption]
    return AbsorptionGraph(A, d)


def load_graph(source) -> AbsorptionGraph:
    """Read a v1 graph file from bytes, text, or a readable file object.

    File vertex ids are 1-based; the returned graph is indexed from 0.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, (bytes, bytearray)):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from exc
    try:
        obj = json.loads(source)
    except (json.JSONDecodeError, TypeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return graph_from_dict(obj)


def read_graph(path) -> AbsorptionGraph:
    with open(path, "rb") as fh:
        return load_graph(fh)


def graph_to_dict(g: AbsorptionGraph) -> dict:
    return {
        "n": g.n,
        "edges": [[j + 1, i + 1, w] for j, i, w in g.arcs()],
        "absorption": [float(x) for x in g.absorption],
    }


def dumps_graph(g: AbsorptionGraph, indent=None) -> str:
    return json.dumps(graph_to_dict(g), indent=indent)


def write_graph(g: AbsorptionGraph, path) -> None:
    Path(path).write_text(dumps_graph(g, indent=1) + "\n", encoding="utf-8")
