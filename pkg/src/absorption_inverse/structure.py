"""Distances, centrality and bipartitions derived from the absorption inverse.

The distance and centrality measures are only guaranteed meaningful on
balanced graphs and refuse other input with :class:`NotBalanced`.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import numerics
from .errors import DegeneratePartitionWarning, NonPositiveWarning, NotBalanced
from .graph import AbsorptionGraph, LaplacianBundle, laplacian
from .inverses import absorption_inverse

METRIC_TOL = 1e-9
EIG_TOL = 1e-10


@dataclass(frozen=True)
class DistanceMatrix:
    """``R[j, i]`` is the distance from ``j`` to ``i``; ``K`` is the largest diagonal of ``Ld``."""

    R: np.ndarray
    K: float


@dataclass(frozen=True)
class CentralityVector:
    scores: np.ndarray
    ranking: np.ndarray


@dataclass(frozen=True)
class Partition:
    """``membership[i]`` is 1 or 2; group 1 holds the nonnegative eigenvector entries."""

    membership: np.ndarray
    eigpair: numerics.EigenPair

    def groups(self):
        """0-based vertex indices of group 1 and group 2."""
        return (np.flatnonzero(self.membership == 1), np.flatnonzero(self.membership == 2))


def distance_matrix(Ld, balanced: bool = True) -> DistanceMatrix:
    """Absorption-scaled forest distance ``R(j, i) = K - Ld[i, j]`` for ``i != j``."""
    if not balanced:
        raise NotBalanced("forest distance is only a directed metric on balanced graphs")
    Ld = np.asarray(Ld, dtype=float)
    K = float(np.diag(Ld).max())
    R = K - Ld.T
    np.fill_diagonal(R, 0.0)
    return DistanceMatrix(R, K)


def four_point_violations(Ld, u=None, tol: float = METRIC_TOL) -> list:
    """Triples ``(i, j, k)`` where ``Ld_ii/u_i - Ld_ij/u_i - Ld_ki/u_k + Ld_kj/u_k < -tol``.

    ``u`` defaults to the uniform vector (balanced graphs).
    """
    Ld = np.asarray(Ld, dtype=float)
    n = Ld.shape[0]
    u = np.full(n, 1.0 / n) if u is None else np.asarray(u, dtype=float)
    Y = Ld / u[:, None]   # Y[i, j] = Ld_ij / u_i
    # V[i, j, k] = Y_ii - Y_ij - Y_ki + Y_kj
    V = np.empty((n, n, n))
    for i in range(n):
        V[i] = Y[i, i] - Y[i, :][:, None] - Y[:, i][None, :] + Y.T
    bad = np.argwhere(V < -tol)
    return [tuple(int(x) for x in t) for t in bad]


def verify_directed_metric(dist: DistanceMatrix, Ld=None, tol: float = METRIC_TOL) -> list:
    """All violations of the directed-metric axioms, as readable strings.

    Checks nonnegativity, zero diagonal, strict positivity off the diagonal
    and the triangle inequality ``R(j, k) <= R(j, i) + R(i, k)`` over every
    triple.  With ``Ld`` given, also checks the four-point inequality on the
    absorption inverse itself.  An empty list means everything holds.
    """
    R = np.asarray(dist.R, dtype=float)
    n = R.shape[0]
    out = []
    for j, i in np.argwhere(R < -tol):
        out.append(f"negative R({j + 1},{i + 1}) = {R[j, i]:.3e}")
    for i in np.flatnonzero(np.abs(np.diag(R)) > tol):
        out.append(f"nonzero R({i + 1},{i + 1}) = {R[i, i]:.3e}")
    off = ~np.eye(n, dtype=bool)
    for j, i in np.argwhere((R <= 0) & off):
        if R[j, i] >= -tol:
            out.append(f"R({j + 1},{i + 1}) = {R[j, i]:.3e} is not positive")
    # slack[j, i, k] = R(j, i) + R(i, k) - R(j, k)
    slack = R[:, :, None] + R[None, :, :] - R[:, None, :]
    for j, i, k in np.argwhere(slack < -tol):
        out.append(f"triangle R({j + 1},{k + 1}) > R({j + 1},{i + 1}) + R({i + 1},{k + 1}) "
                   f"by {-slack[j, i, k]:.3e}")
    if Ld is not None:
        for i, j, k in four_point_violations(Ld, tol=tol):
            out.append(f"four-point inequality fails at (i,j,k) = ({i + 1},{j + 1},{k + 1})")
    return out


def c_metric(Y) -> np.ndarray:
    """``C(i, j) = Y_ii + Y_jj - Y_ij - Y_ji``."""
    Y = np.asarray(Y, dtype=float)
    diag = np.diag(Y)
    # summing Y + Y^T first keeps C exactly symmetric
    C = (diag[:, None] + diag[None, :]) - (Y + Y.T)
    np.fill_diagonal(C, 0.0)
    return C


def _rank_descending(scores, atol):
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    ranking, group = [], [order[0]]
    for i in order[1:]:
        if abs(scores[i] - scores[group[0]]) <= atol:
            group.append(i)
        else:
            ranking.extend(sorted(group))
            group = [i]
    ranking.extend(sorted(group))
    return np.array(ranking)


def pagerank(Ld, balanced: bool = True, atol: float = 1e-12) -> CentralityVector:
    """Row sums of ``Ld`` and the vertices ordered by decreasing score.

    Scores within ``atol * max(1, max|Ld|)`` of each other count as tied and
    are ordered by index.
    """
    if not balanced:
        raise NotBalanced("absorption-inverse PageRank is defined for balanced graphs")
    Ld = np.asarray(Ld, dtype=float)
    scores = Ld.sum(axis=1)
    return CentralityVector(scores, _rank_descending(scores, atol * max(1.0, np.abs(Ld).max())))


def quasi_stationary(bundle: LaplacianBundle, Ld=None) -> np.ndarray:
    """First-order quasi-stationary distribution ``(I + (dbar/alpha) Ld) u``, normalised.

    ``alpha`` is the induced 1-norm of ``L`` (largest absolute column sum).
    Warns with :class:`NonPositiveWarning` if an entry is not positive, which
    means the absorption rates are too large for the approximation.
    """
    if Ld is None:
        Ld = absorption_inverse(bundle).Ld
    alpha = np.abs(bundle.L).sum(axis=0).max()
    p = bundle.u + (bundle.dbar / alpha) * (Ld @ bundle.u)
    p = p / p.sum()
    if (p <= 0).any():
        warnings.warn("quasi-stationary approximation has non-positive entries",
                      NonPositiveWarning, stacklevel=2)
    return p


def partition(Ld, tol: float = EIG_TOL, seed: int = 0) -> Partition:
    """Sign split of the leading eigenvector of ``Ld + Ld^T``.

    The eigenvector's sign is fixed so its first clearly nonzero entry is
    positive; entries ``>= 0`` go to group 1.
    """
    Ld = np.asarray(Ld, dtype=float)
    if Ld.shape[0] < 2:
        raise ValueError("need at least two vertices")
    pair = numerics.symmetric_leading_eigpair(Ld + Ld.T, tol=tol, seed=seed)
    s = pair.vector
    nz = np.flatnonzero(np.abs(s) > 1e-12 * np.abs(s).max())
    if nz.size and s[nz[0]] < 0:
        s = -s
    pair = numerics.EigenPair(pair.value, s)
    membership = np.where(s >= 0, 1, 2)
    if (membership == 1).all() or (membership == 2).all():
        warnings.warn("partition put every vertex in one group", DegeneratePartitionWarning,
                      stacklevel=2)
    return Partition(membership, pair)


def partition_sweep(g: AbsorptionGraph, vertex: int, values, d_template=None) -> list:
    """Partition of ``g`` with the absorption rate of ``vertex`` (0-based) set to each value."""
    base = np.array(g.absorption if d_template is None else d_template, dtype=float)
    bundle = laplacian(g)
    out = []
    for v in values:
        if not v > 0:
            raise ValueError("absorption values must be positive")
        d = base.copy()
        d[vertex] = v
        out.append((float(v), partition(absorption_inverse(bundle, d).Ld)))
    return out


def locate_partition_changes(g: AbsorptionGraph, vertex: int, values, d_template=None,
                             xtol: float = 1e-3) -> list:
    """Values of the swept rate where the partition changes, refined by bisection.

    ``values`` is scanned in order; each consecutive pair with different
    memberships is bisected until the bracket is narrower than ``xtol``.
    Returns ``(lo, hi)`` brackets.
    """
    base = np.array(g.absorption if d_template is None else d_template, dtype=float)
    bundle = laplacian(g)

    def members(v):
        d = base.copy()
        d[vertex] = v
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegeneratePartitionWarning)
            return partition(absorption_inverse(bundle, d).Ld).membership

    values = [float(v) for v in values]
    scan = [members(v) for v in values]
    brackets = []
    for (lo, mlo), (hi, mhi) in zip(zip(values, scan), zip(values[1:], scan[1:])):
        if np.array_equal(mlo, mhi):
            continue
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            if np.array_equal(members(mid), mlo):
                lo = mid
            else:
                hi = mid
        brackets.append((lo, hi))
    return brackets
