"""Command-line front end.

Exit status: 0 on success, 2 when the input is rejected (unreadable or
malformed file, graph not balanced where required, failed validation check),
1 on a numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import forests, inverses, structure
from .errors import AbsorptionInverseError, NotBalanced, ParseError, SizeLimit, ValidationError
from .graph import absorption_scaled_graph, dumps_graph, laplacian, read_graph
from .motifs import KINDS, MotifSpec, motif_graph

ROUTE_CHOICES = inverses.ROUTES + ("forest",)

# assignments visited by the forest check in ``validate`` before it is skipped
FOREST_BUDGET = 2_000_000


def _num(x) -> str:
    return format(float(x), ".17g")


def _matrix_csv(M, corner=""):
    n = M.shape[1]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([corner] + [str(j + 1) for j in range(n)])
    for i, row in enumerate(M):
        w.writerow([str(i + 1)] + [_num(x) for x in row])
    return buf.getvalue()


def _rows_csv(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_num(x) if isinstance(x, (float, np.floating)) else str(x) for x in r])
    return buf.getvalue()


def _json(obj) -> str:
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(type(o))
    return json.dumps(obj, default=default, indent=1) + "\n"


def _emit(text, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load(args):
    g = read_graph(args.input)
    return g, laplacian(g)


def cmd_inverse(args):
    g, b = _load(args)
    Ld = inverses.absorption_inverse(b, route=args.route).Ld
    res = inverses.defining_residuals(b, Ld)
    if args.format == "csv":
        return _matrix_csv(Ld)
    return _json({"n": g.n, "matrix": Ld,
                  "meta": {"route": args.route, "residuals": res,
                           "tolerances": {"construction": inverses.CONSTRUCTION_TOL}}})


def cmd_distance(args):
    g, b = _load(args)
    Ld = inverses.absorption_inverse(b, route=args.route).Ld
    dist = structure.distance_matrix(Ld, b.balanced)
    if args.format == "csv":
        return _matrix_csv(dist.R, corner="from\\to")
    violations = structure.verify_directed_metric(dist, Ld)
    return _json({"n": g.n, "matrix": dist.R,
                  "meta": {"route": args.route, "K": dist.K, "violations": violations,
                           "tolerances": {"metric": structure.METRIC_TOL}}})


def cmd_pagerank(args):
    g, b = _load(args)
    Ld = inverses.absorption_inverse(b, route=args.route).Ld
    c = structure.pagerank(Ld, b.balanced)
    rank = np.empty(g.n, dtype=int)
    rank[c.ranking] = np.arange(1, g.n + 1)
    if args.format == "csv":
        return _rows_csv(["vertex", "score", "rank"],
                         [(i + 1, float(c.scores[i]), int(rank[i])) for i in range(g.n)])
    return _json({"n": g.n, "scores": c.scores, "ranking": (c.ranking + 1).tolist(),
                  "meta": {"route": args.route}})


def cmd_partition(args):
    g, b = _load(args)
    Ld = inverses.absorption_inverse(b, route=args.route).Ld
    p = structure.partition(Ld)
    g1, g2 = p.groups()
    if args.format == "csv":
        return _rows_csv(["vertex", "group", "eigenvector"],
                         [(i + 1, int(p.membership[i]), float(p.eigpair.vector[i]))
                          for i in range(g.n)])
    return _json({"n": g.n, "groups": p.membership,
                  "group1": (g1 + 1).tolist(), "group2": (g2 + 1).tolist(),
                  "eigenvalue": p.eigpair.value, "eigenvector": p.eigpair.vector,
                  "meta": {"route": args.route, "tolerances": {"eigen": structure.EIG_TOL}}})


def _sweep_values(lo, hi, step):
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(count)


def cmd_sweep(args):
    if not args.step > 0:
        raise ValidationError("--step must be positive")
    if not 0 < args.min <= args.max:
        raise ValidationError("need 0 < --min <= --max")
    g = read_graph(args.input)
    v = args.vertex - 1
    if not 0 <= v < g.n:
        raise ValidationError(f"--vertex must lie in 1..{g.n}")
    values = _sweep_values(args.min, args.max, args.step)
    results = structure.partition_sweep(g, v, values)
    if args.format == "csv":
        return _rows_csv(["value"] + [f"group_{i + 1}" for i in range(g.n)],
                         [(val, *p.membership.tolist()) for val, p in results])
    changes = structure.locate_partition_changes(g, v, values)
    return _json({"n": g.n, "vertex": args.vertex,
                  "values": [val for val, _ in results],
                  "groups": [p.membership for _, p in results],
                  "meta": {"changes": changes}})


def cmd_forests(args):
    g = read_graph(args.input)
    target = absorption_scaled_graph(g) if args.scaled else g
    fam = forests.forest_matrices(target)
    if args.format == "csv":
        rows = [(k, float(s)) for k, s in enumerate(fam.sigma)]
        return _rows_csv(["k", "sigma"], rows)
    return _json({"n": g.n, "sigma": fam.sigma, "Q": list(fam.Q),
                  "meta": {"scaled": args.scaled}})


def _check(name, ok, detail=""):
    return {"check": name, "status": "pass" if ok else "fail", "detail": detail}


def _skip(name, why):
    return {"check": name, "status": "skipped", "detail": why}


def run_validation(g, tol: float = None) -> list:
    """Every invariant the library promises for ``g``, one dict per check.

    ``tol`` overrides both the construction and the route-agreement tolerance.
    """
    ctol = inverses.CONSTRUCTION_TOL if tol is None else tol
    atol = inverses.AGREEMENT_TOL if tol is None else tol
    b = laplacian(g)
    Ld = inverses.absorption_inverse(b).Ld
    out = []
    res = inverses.defining_residuals(b, Ld)
    worst = max(res.values())
    out.append(_check("defining identities", worst <= ctol,
                      f"max residual {worst:.2e}"))
    scale = np.abs(Ld).max()
    errs = {r: np.abs(inverses.absorption_inverse(b, route=r).Ld - Ld).max() / scale
            for r in inverses.ROUTES}
    out.append(_check("route agreement", max(errs.values()) <= atol,
                      f"max relative difference {max(errs.values()):.2e}"))
    diag = np.diag(Ld)
    out.append(_check("diagonal positivity", bool((diag > 0).all()), f"min {diag.min():.3e}"))
    gaps = diag[:, None] - Ld
    np.fill_diagonal(gaps, np.inf)
    out.append(_check("row diagonal maximality", bool((gaps > 0).all()),
                      f"min gap {gaps.min():.3e}"))
    rz = inverses.verify_resolvent_identities(b, Ld, z=1.0)
    out.append(_check("resolvent identities (z=1)", max(rz.values()) <= ctol,
                      f"max residual {max(rz.values()):.2e}"))
    eq = inverses.check_equivalences(b)
    out.append(_check("scaled-graph group inverse", eq["scaled_group"]["ok"],
                      f"norm {eq['scaled_group']['norm']:.2e}"))

    if b.balanced:
        lam = np.linalg.eigvalsh(Ld + Ld.T).min()
        out.append(_check("symmetric part positive semidefinite", lam >= -1e-8 * scale,
                          f"min eigenvalue {lam:.2e}"))
        ann = np.abs(b.d @ Ld).max()
        out.append(_check("d^T Ld = 0", ann <= ctol * max(1, scale),
                          f"max {ann:.2e}"))
        viol = structure.verify_directed_metric(structure.distance_matrix(Ld), Ld)
        out.append(_check("directed metric", not viol, f"{len(viol)} violations"))
    else:
        for name in ("symmetric part positive semidefinite", "d^T Ld = 0", "directed metric"):
            out.append(_skip(name, "skipped (unbalanced)"))

    if g.n > forests.ENUMERATION_CAP:
        out.append(_skip("forest oracle agreement", "skipped (size cap)"))
    elif forests.enumeration_size(g) > FOREST_BUDGET:
        out.append(_skip("forest oracle agreement", "skipped (enumeration budget)"))
    else:
        F = forests.absorption_inverse_forest_oracle(g)
        err = np.abs(F - Ld).max() / scale
        out.append(_check("forest oracle agreement", err <= atol,
                          f"max relative difference {err:.2e}"))
    return out


def cmd_validate(args):
    g = read_graph(args.input)
    checks = run_validation(g, args.tol)
    if args.format == "csv":
        text = _rows_csv(["check", "status", "detail"],
                         [(c["check"], c["status"], c["detail"]) for c in checks])
    else:
        lines = [f"{c['status'].upper():8s} {c['check']}: {c['detail']}" for c in checks]
        text = "\n".join(lines) + "\n"
    failed = [c for c in checks if c["status"] == "fail"]
    return text, (2 if failed else 0)


def cmd_motif(args):
    if args.d is None:
        d = [1.0] * args.n
    else:
        try:
            d = [float(x) for x in args.d.split(",")]
        except ValueError as exc:
            raise ValidationError(f"--d must be comma-separated numbers: {exc}") from exc
    try:
        spec = MotifSpec(args.kind, args.n, args.a, d)
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc
    return dumps_graph(motif_graph(spec), indent=1) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="absorption-inverse",
        description="Absorption inverse of graph Laplacians and derived graph measures.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, route=True, fmt=True):
        p = sub.add_parser(name, help=help)
        p.add_argument("--input", "-i", required=True, help="graph file (JSON v1)")
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        if route:
            p.add_argument("--route", choices=ROUTE_CHOICES, default="bottleneck")
        p.set_defaults(func=func)
        return p

    add("inverse", cmd_inverse, "absorption inverse matrix (rows: vertex i, columns: start j)")
    add("distance", cmd_distance, "absorption-scaled forest distance (rows: source)")
    add("pagerank", cmd_pagerank, "row-sum centrality of the absorption inverse")
    add("partition", cmd_partition, "two-way spectral partition")
    p = add("sweep", cmd_sweep, "partition while varying one absorption rate", route=False)
    p.add_argument("--vertex", type=int, required=True, help="1-based vertex whose rate varies")
    p.add_argument("--min", type=float, required=True)
    p.add_argument("--max", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p = add("forests", cmd_forests, "in-forest weights by arc count", route=False)
    p.add_argument("--scaled", action="store_true", help="use the absorption-scaled graph")
    p = add("validate", cmd_validate, "run every invariant check", route=False)
    p.add_argument("--tol", type=float, default=None, help="override the check tolerances")

    p = sub.add_parser("motif", help="write a graph file for a standard motif")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--d", default=None, help="comma-separated absorption rates")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_motif)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except (ParseError, ValidationError, NotBalanced, SizeLimit, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AbsorptionInverseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    code = 0
    if isinstance(result, tuple):
        result, code = result
    _emit(result, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
