"""The absorption inverse and its companion generalized inverses.

Every construction here starts from a :class:`LaplacianBundle`.  The
absorption inverse ``Ld`` of ``L`` with respect to ``d`` is obtained by
sandwiching any {1}-inverse ``Y`` of ``L`` between the two projections::

    Ld = (I - U D) Y (I - D U),        U = u 1^T / (d . u)

The default ``Y`` is the zero-padded bottleneck matrix, which needs a single
LU factorisation of a nonsingular M-matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import numerics
from .errors import NoConvergence, PreconditionError, RouteDisagreement
from .graph import AbsorptionGraph, LaplacianBundle, absorption_scaled_graph, laplacian

ROUTES = ("bottleneck", "group", "pinv", "fundamental", "resolvent")

CONSTRUCTION_TOL = 1e-9
AGREEMENT_TOL = 1e-8
DISAGREEMENT_TOL = 1e-6


@dataclass(frozen=True)
class BottleneckMatrix:
    Mhat: np.ndarray
    padded: np.ndarray


@dataclass(frozen=True)
class InverseSet:
    """``Ld`` plus whichever companion inverses were requested."""

    Ld: np.ndarray
    route: str
    group: Optional[np.ndarray] = None
    pinv: Optional[np.ndarray] = None
    Z: Optional[np.ndarray] = None
    M: Optional[np.ndarray] = None


def _bundle_for(bundle: LaplacianBundle, d) -> LaplacianBundle:
    if d is None:
        return bundle
    d = np.asarray(d, dtype=float).ravel()
    if np.array_equal(d, bundle.d):
        return bundle
    return bundle.with_absorption(d)


def _rel(a, b):
    scale = max(np.abs(b).max(), 1e-300)
    return float(np.abs(a - b).max() / scale)


def bottleneck_matrix(bundle: LaplacianBundle) -> BottleneckMatrix:
    """Inverse of ``L`` with the last row and column removed, and its zero padding."""
    n = bundle.n
    Mhat = numerics.invert(bundle.L[:-1, :-1])
    M = np.zeros((n, n))
    M[:-1, :-1] = Mhat
    return BottleneckMatrix(Mhat, M)


def group_inverse(bundle: LaplacianBundle) -> np.ndarray:
    """``L#`` as ``(I - u 1^T) M (I - u 1^T)`` with ``M`` the padded bottleneck matrix."""
    P = np.eye(bundle.n) - np.outer(bundle.u, np.ones(bundle.n))
    return P @ bottleneck_matrix(bundle).padded @ P


def group_inverse_resolvent(bundle: LaplacianBundle, tau: float = 1.0) -> np.ndarray:
    """``L#`` as ``(L + tau J)^-1 - J / tau`` where ``J = u 1^T`` projects onto ker L."""
    if tau == 0:
        raise ValueError("tau must be nonzero")
    J = np.outer(bundle.u, np.ones(bundle.n))
    return numerics.invert(bundle.L + tau * J) - J / tau


def pseudoinverse(bundle: LaplacianBundle) -> np.ndarray:
    return numerics.pseudoinverse_rank_deficient_1(bundle.L, bundle.u, np.ones(bundle.n))


def jump_chain_stationary(bundle: LaplacianBundle) -> np.ndarray:
    """Stationary vector of ``P = A W^-1``, namely ``W u / (w . u)``."""
    wu = bundle.w * bundle.u
    return wu / wu.sum()


def fundamental_matrix_regular(bundle: LaplacianBundle) -> np.ndarray:
    """``Z = (L + pi w^T)^-1`` for the regular process generated by ``L``."""
    pi = jump_chain_stationary(bundle)
    return numerics.invert(bundle.L + np.outer(pi, bundle.w))


def fundamental_matrix_absorbing(bundle: LaplacianBundle, d=None, z: float = 1.0) -> np.ndarray:
    """``(L + z D)^-1``; entry (i, j) is the expected time in i before absorption from j."""
    if z <= 0:
        raise ValueError("z must be positive")
    b = _bundle_for(bundle, d)
    return numerics.invert(b.L + z * np.diag(b.d))


def rank_one_resolvent(bundle: LaplacianBundle, d=None, z: float = 1.0) -> np.ndarray:
    """``(L + z D U D)^-1``, which equals ``U / z + Ld``."""
    if z <= 0:
        raise ValueError("z must be positive")
    b = _bundle_for(bundle, d)
    D = np.diag(b.d)
    return numerics.invert(b.L + z * D @ b.U @ D)


def from_one_inverse(bundle: LaplacianBundle, Y, d=None) -> np.ndarray:
    """Project a {1}-inverse ``Y`` of ``L`` to the absorption inverse."""
    b = _bundle_for(bundle, d)
    n = b.n
    UD = b.U * b.d[np.newaxis, :]
    DU = b.d[:, np.newaxis] * b.U
    return (np.eye(n) - UD) @ Y @ (np.eye(n) - DU)


def absorption_inverse_many(bundle: LaplacianBundle, ds, Y=None) -> np.ndarray:
    """Absorption inverses for a stack of absorption vectors ``ds`` of shape (..., n).

    Uses one {1}-inverse ``Y`` (default: padded bottleneck matrix) for all of them.
    """
    ds = np.asarray(ds, dtype=float)
    if Y is None:
        Y = bottleneck_matrix(bundle).padded
    u = bundle.u
    dbar = ds @ u
    # (I - U D) = I - u d^T / dbar ; (I - D U) = I - (d * u) 1^T / dbar
    left = np.eye(bundle.n) - u[:, None] * ds[..., None, :] / dbar[..., None, None]
    right = np.eye(bundle.n) - (ds * u)[..., :, None] / dbar[..., None, None]
    return left @ Y @ right


def _route_matrix(b: LaplacianBundle, route: str, z: float = 1.0) -> np.ndarray:
    if route == "bottleneck":
        return from_one_inverse(b, bottleneck_matrix(b).padded)
    if route == "group":
        return from_one_inverse(b, group_inverse(b))
    if route == "pinv":
        return from_one_inverse(b, pseudoinverse(b))
    if route == "fundamental":
        return from_one_inverse(b, fundamental_matrix_regular(b))
    if route == "resolvent":
        return rank_one_resolvent(b, z=z) - b.U / z
    if route == "forest":
        from .forests import absorption_inverse_forest_oracle
        return absorption_inverse_forest_oracle(AbsorptionGraph(b.adjacency, b.d))
    raise ValueError(f"unknown route {route!r}; expected one of {ROUTES + ('forest',)}")


def absorption_inverse(bundle: LaplacianBundle, d=None, route: str = "bottleneck",
                       companions: bool = False, diagnostic: bool = False) -> InverseSet:
    """Absorption inverse of ``L`` with respect to ``d``.

    Parameters
    ----------
    bundle : LaplacianBundle
    d : (n,) array_like, optional
        Absorption rates; defaults to the ones the bundle was built with.
    route : str
        ``"bottleneck"`` (default), ``"group"``, ``"pinv"``, ``"fundamental"``,
        ``"resolvent"`` (``(L + DUD)^-1 - U``) or ``"forest"`` (exhaustive
        spanning-forest oracle, small graphs only).
    companions : bool
        Also compute ``L#``, ``L+``, ``Z`` and the padded bottleneck matrix.
    diagnostic : bool
        Rebuild ``Ld`` by every algebraic route and raise
        :class:`RouteDisagreement` if any two differ by more than ``1e-6``
        relative.
    """
    b = _bundle_for(bundle, d)
    Ld = _route_matrix(b, route)
    if diagnostic:
        for other in ROUTES:
            err = _rel(_route_matrix(b, other), Ld)
            if err > DISAGREEMENT_TOL:
                raise RouteDisagreement(f"route {other!r} differs from {route!r} by {err:.3e}")
    if not companions:
        return InverseSet(Ld, route)
    return InverseSet(Ld, route, group=group_inverse(b), pinv=pseudoinverse(b),
                      Z=fundamental_matrix_regular(b), M=bottleneck_matrix(b).padded)


def defining_residuals(bundle: LaplacianBundle, Ld, d=None) -> dict:
    """Max-abs residuals of the identities every absorption inverse satisfies.

    Keys: ``LXL`` (L Ld L = L), ``XLX`` (Ld L Ld = Ld), ``kernel`` (Ld D u = 0),
    ``left_projection`` (Ld L + U D = I), ``right_projection`` (L Ld + D U = I).
    Values are relative to ``max(1, ||L||)`` or ``max(1, ||Ld||)`` as appropriate.
    """
    b = _bundle_for(bundle, d)
    L, I = b.L, np.eye(b.n)
    UD = b.U * b.d[np.newaxis, :]
    DU = b.d[:, np.newaxis] * b.U
    sL = max(1.0, np.abs(L).max())
    sX = max(1.0, np.abs(Ld).max())
    return {
        "LXL": float(np.abs(L @ Ld @ L - L).max() / sL),
        "XLX": float(np.abs(Ld @ L @ Ld - Ld).max() / sX),
        "kernel": float(np.abs(Ld @ (b.d * b.u)).max() / sX),
        "left_projection": float(np.abs(Ld @ L + UD - I).max()),
        "right_projection": float(np.abs(L @ Ld + DU - I).max()),
    }


def verify_resolvent_identities(bundle: LaplacianBundle, Ld, d=None, z: float = 1.0,
                                relative: bool = False) -> dict:
    """Residuals of two identities valid for every ``z > 0``.

    ``resolvent``:  ``(L + zD)^-1 = U / z + (I + z Ld D)^-1 Ld``
    ``projection``: ``(I + z Ld D)^-1 = U D + (L + zD)^-1 L``

    Both are infinity-norm residuals.  With ``relative=True`` each is divided
    by the infinity norm of its left-hand side; use this for very small ``z``,
    where ``(L + zD)^-1`` grows like ``1/z`` and rounding alone makes the
    absolute residual large.

    Raises
    ------
    SingularMatrix
        If ``I + z Ld D`` cannot be inverted, which would point at a bad ``Ld``.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    b = _bundle_for(bundle, d)
    D = np.diag(b.d)
    F = fundamental_matrix_absorbing(b, z=z)
    K = numerics.invert(np.eye(b.n) + z * Ld @ D)
    r1 = F - b.U / z - K @ Ld
    r2 = K - b.U @ D - F @ b.L
    inf = lambda X: float(np.abs(X).sum(axis=1).max())
    if relative:
        return {"resolvent": inf(r1) / inf(F), "projection": inf(r2) / inf(K)}
    return {"resolvent": inf(r1), "projection": inf(r2)}


def laurent_series_eval(Ld, D, U, z: float, kmax: int):
    """Partial sum ``U/z + Ld + sum_{k=1..kmax} (-z Ld D)^k Ld`` and a convergence flag.

    The flag is ``spectral_radius(z Ld D) < 1``.  When power iteration does
    not settle (a complex dominant pair, common on directed graphs) the
    radius comes from a dense eigenvalue solve instead.
    """
    if kmax < 0:
        raise ValueError("kmax must be nonnegative")
    Ld = np.asarray(Ld, dtype=float)
    D = np.asarray(D, dtype=float)
    if D.ndim == 1:
        D = np.diag(D)
    step = -z * Ld @ D
    total = np.asarray(U, dtype=float) / z + Ld
    term = Ld
    for _ in range(kmax):
        term = step @ term
        total = total + term
    try:
        converges = numerics.spectral_radius(step) < 1.0
    except NoConvergence:
        converges = np.abs(np.linalg.eigvals(step)).max() < 1.0
    return total, bool(converges)


def residence_deviation_check(bundle: LaplacianBundle, d=None, Ld=None,
                              scale: float = 1e-3) -> dict:
    """Check that ``(L + eps D)^-1 - U_eps - Ld_eps`` shrinks linearly in ``eps``.

    The quantities with subscript ``eps`` are rebuilt for absorption
    ``eps * d``.  The remainder is evaluated at ``eps = scale`` and
    ``scale / 2``; the report's ``ratio`` should be close to 1/2.

    Raises
    ------
    PreconditionError
        If the series in ``eps`` does not converge at ``scale``.
    """
    b = _bundle_for(bundle, d)
    if Ld is None:
        Ld = absorption_inverse(b).Ld
    try:
        rho = numerics.spectral_radius(scale * Ld @ np.diag(b.d))
    except NoConvergence:
        rho = np.inf
    if not rho < 1:
        raise PreconditionError(f"series does not converge at scale {scale} (radius {rho})")

    def remainder(eps):
        be = b.with_absorption(eps * b.d)
        Ld_eps = absorption_inverse(be).Ld
        F = fundamental_matrix_absorbing(be)
        return float(np.abs(F - be.U - Ld_eps).sum(axis=1).max())

    r1, r2 = remainder(scale), remainder(scale / 2)
    ratio = r2 / r1 if r1 > 0 else 0.0
    return {"scale": scale, "radius": float(rho), "remainder": r1,
            "remainder_half": r2, "ratio": ratio, "ok": 0.4 <= ratio <= 0.6}


def check_equivalences(bundle: LaplacianBundle, d=None, inverses: InverseSet = None,
                       tol: float = AGREEMENT_TOL) -> dict:
    """Compare ``Ld`` with ``L#`` and ``L+``, and the scaled-graph identity ``L~# = D Ld``.

    For each of the first two comparisons the report records the norm, whether
    it is expected to vanish, and whether the observation matches.
    """
    b = _bundle_for(bundle, d)
    if inverses is None or inverses.group is None or inverses.pinv is None:
        inverses = absorption_inverse(b, companions=True)
    Ld = inverses.Ld
    equal_d = bool(np.ptp(b.d) <= 1e-12 * b.d.max())
    range_hermitian = bool(np.ptp(b.u) <= 1e-12 * b.u.max())

    g = AbsorptionGraph(b.adjacency, b.d)
    scaled = laplacian(absorption_scaled_graph(g))
    scaled_err = float(np.abs(group_inverse(scaled) - b.d[:, None] * Ld).max())

    report = {}
    for key, other, expected in (("group", inverses.group, equal_d),
                                 ("pinv", inverses.pinv, equal_d and range_hermitian)):
        norm = float(np.abs(Ld - other).max())
        report[key] = {"norm": norm, "expected_zero": expected,
                       "ok": (norm <= tol) == expected}
    report["scaled_group"] = {"norm": scaled_err, "ok": scaled_err <= tol}
    return report


__all__ = [
    "BottleneckMatrix", "InverseSet", "ROUTES",
    "absorption_inverse", "absorption_inverse_many", "bottleneck_matrix",
    "check_equivalences", "defining_residuals", "from_one_inverse",
    "fundamental_matrix_absorbing", "fundamental_matrix_regular", "group_inverse",
    "group_inverse_resolvent", "jump_chain_stationary", "laurent_series_eval",
    "pseudoinverse", "rank_one_resolvent", "residence_deviation_check",
    "verify_resolvent_identities",
]
