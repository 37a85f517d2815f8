"""Command-line interface: one subcommand per capability, JSON in and out.

Exit status: 0 success, 1 domain error, 2 usage or parse error.  Errors are
written as ``{"error": code, ...}`` to the output stream; human-readable
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from . import codec
from .alcoved import alcoved_new, contains, dimension, dual_generators, generators, project_down, project_up
from .codec import DocumentError, encode_matrix, encode_scalar, encode_vector
from .errors import DomainError, NonConvergence, PositiveCircuit
from .games import (MeanPayoffGame, calibrated_policies, check_eigen, enumerate_cells, find_eigen,
                    value_iteration, verify_calibrated)
from .homog import HypercubeLattice, chains_to_fan, is_lattice, operator_from_lattice, skeleton
from .minmax import ShapleyOp, check_shapley_axioms, cnf, dnf, recession, semiderivative, to_proper_pair
from .retract import (AmbiCone, ambitropical_hull, co_approximation_interval, geodesic, hyperconvexity_witness,
                      p_max, p_min, pmax_operator, pmin_operator, q_minus, q_plus)
from .trop_core import NEG_INF, all_finite, hilbert_dist, hilbert_seminorm, kleene_star, sup_dist


class UsageError(Exception):
    pass


def _point(text: str, n: int = None) -> tuple:
    """Parse "1,-1/2,0" or a JSON array."""
    text = text.strip()
    try:
        vals = codec.decode_vector(codec.loads(text)) if text.startswith("[") else \
            tuple(codec.decode_scalar(t) for t in text.split(","))
    except DocumentError as exc:
        raise UsageError(f"bad point {text!r}: {exc}") from exc
    if not all_finite(vals):
        raise UsageError("points must be finite")
    if n is not None and len(vals) != n:
        raise UsageError(f"point {text!r} has {len(vals)} coordinates, expected {n}")
    return vals


def _read(path: str):
    if path == "-":
        return codec.loads(sys.stdin.read())
    try:
        with open(path) as fh:
            return codec.loads(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _doc_type(doc) -> str:
    if isinstance(doc, dict):
        if "type" in doc:
            return doc["type"]
        if "coords" in doc:
            return "operator"
        if "data" in doc:
            return "matrix"
    if isinstance(doc, list):
        return "matrix"
    raise DocumentError("cannot tell the document type")


def _threads(args) -> int:
    return args.threads or os.cpu_count() or 1


# ---------------------------------------------------------------- commands

def cmd_star(args):
    doc = _read(args.input)
    M = codec.decode_alcoved(doc).M if _doc_type(doc) == "alcoved" else codec.decode_matrix(doc)
    return {"star": encode_matrix(kleene_star(M))}


def cmd_alcoved(args):
    doc = _read(args.input)
    P = codec.decode_alcoved(doc) if _doc_type(doc) == "alcoved" else alcoved_new(codec.decode_matrix(doc))
    out = {"star": encode_matrix(P.star),
           "generators": [encode_vector(g) for g in generators(P)],
           "dual_generators": [encode_vector(g) for g in dual_generators(P)],
           "dimension": dimension(P)}
    if args.point:
        out["points"] = []
        for text in args.point:
            x = _point(text, P.n)
            out["points"].append({"x": encode_vector(x), "contains": contains(P, x),
                                  "project_up": encode_vector(project_up(P, x)),
                                  "project_down": encode_vector(project_down(P, x))})
    return out


def _operator(doc) -> ShapleyOp:
    kind = _doc_type(doc)
    if kind == "operator":
        return codec.decode_operator(doc)
    if kind == "game":
        return codec.decode_game(doc).pair.to_operator()
    if kind == "generators":
        return codec.decode_cone(doc).operator()
    raise DocumentError(f"expected an operator, got {kind!r}")


def cmd_eval(args):
    T = _operator(_read(args.input))
    out = {}
    if args.point:
        out["values"] = [encode_vector(T(_point(p, T.n_in))) for p in args.point]
    if args.form in ("cnf", "dnf"):
        forms = (cnf if args.form == "cnf" else dnf)(T, cap=args.row_cap)
        out[args.form] = [[encode_vector(r) for r in f.rows] for f in forms]
    elif args.form == "pair":
        out["pair"] = codec.encode_pair(to_proper_pair(T, cap=args.row_cap))
    if args.semiderivative:
        out["semiderivative"] = codec.encode_operator(semiderivative(T, _point(args.semiderivative, T.n_in)))
    if args.recession:
        out["recession"] = codec.encode_operator(recession(T))
    if args.axioms:
        if args.seed is None:
            raise UsageError("--axioms samples random points and needs --seed")
        rep = check_shapley_axioms(T, args.trials, random.Random(args.seed))
        out["axioms"] = {"ok": rep.ok, "violated": rep.axiom,
                         "witness": None if rep.witness is None else
                         {k: (encode_vector(v) if isinstance(v, tuple) else encode_scalar(v))
                          for k, v in rep.witness.items()}}
    return out


def cmd_hull(args):
    doc = _read(args.input)
    pts = codec.decode_points(doc)
    H = ambitropical_hull(pts)
    out = codec.encode_cone(H)
    out["hilbert_bound"] = encode_scalar(max(hilbert_seminorm(p) for p in pts))
    return out


_PROJECTIONS = {"pmax": p_max, "pmin": p_min, "qminus": q_minus, "qplus": q_plus}


def cmd_project(args):
    C = codec.decode_cone(_read(args.input))
    pts = [_point(p, C.n) for p in args.point]
    if args.which == "retract":
        f = C.retract
    else:
        g = _PROJECTIONS[args.which]
        f = lambda x: g(C.gens, x)
    with ThreadPoolExecutor(max_workers=_threads(args)) as pool:
        results = list(pool.map(f, pts))
    return {"which": args.which, "results": [{"x": encode_vector(x), "y": encode_vector(y)}
                                             for x, y in zip(pts, results)]}


def cmd_interval(args):
    C = codec.decode_cone(_read(args.input))
    out = []
    for text in args.point:
        z = _point(text, C.n)
        lo, hi = co_approximation_interval(C.gens, z)
        out.append({"z": encode_vector(z), "lo": encode_vector(lo), "hi": encode_vector(hi),
                    "retraction": encode_vector(C.retract(z))})
    return {"intervals": out}


def cmd_witness(args):
    C = codec.decode_cone(_read(args.input))
    balls = _read(args.balls)
    codec._require(balls, "centers", "radii")
    centers = [codec.decode_vector(c) for c in balls["centers"]]
    radii = [codec.decode_scalar(r) for r in balls["radii"]]
    w = hyperconvexity_witness(C, centers, radii)
    return {"witness": encode_vector(w),
            "distances": [encode_scalar(sup_dist(w, c)) for c in centers]}


def cmd_geodesic(args):
    C = codec.decode_cone(_read(args.input))
    x, y = _point(args.source, C.n), _point(args.target, C.n)
    pts = geodesic(C.retract, x, y, args.samples)
    sup_len = sum(sup_dist(a, b) for a, b in zip(pts, pts[1:]))
    hil_len = sum(hilbert_dist(a, b) for a, b in zip(pts, pts[1:]))
    return {"points": [encode_vector(p) for p in pts],
            "sup_length": encode_scalar(sup_len), "sup_distance": encode_scalar(sup_dist(pts[0], pts[-1])),
            "hilbert_length": encode_scalar(hil_len),
            "hilbert_distance": encode_scalar(hilbert_dist(pts[0], pts[-1]))}


def _eigen_or_fail(G, max_iters):
    found = find_eigen(G, max_iters)
    if found is None:
        raise NonConvergence("no eigenvector found within the iteration budget", max_iters=max_iters)
    return found


def _complex_doc(G: MeanPayoffGame, args):
    u, lam = _eigen_or_fail(G, args.max_iters)
    H = G.recentered(lam) if lam != 0 else G
    C = enumerate_cells(H, cap=args.cap, workers=_threads(args))
    doc = codec.encode_complex(C)
    doc["lambda"] = encode_scalar(lam)
    return doc


def cmd_mpg(args):
    G = codec.decode_game(_read(args.input))
    if args.action == "value":
        v, mean = value_iteration(G, args.horizon)
        return {"horizon": args.horizon, "v": encode_vector(v),
                "mean": None if mean is None else encode_vector(mean)}
    if args.action == "eigen":
        u, lam = _eigen_or_fail(G, args.max_iters)
        return {"lambda": encode_scalar(lam), "u": encode_vector(u)}
    if args.action == "calibrated":
        if args.u is not None:
            u = _point(args.u, G.n)
            lam = codec.decode_scalar(args.lam if args.lam is not None else "0")
        else:
            u, lam = _eigen_or_fail(G, args.max_iters)
        tau = calibrated_policies(G, u, lam)
        return {"lambda": encode_scalar(lam), "u": encode_vector(u), "policies": codec.encode_policy(tau),
                "verified_horizon": args.horizon,
                "verified": verify_calibrated(G, u, lam, tau, args.horizon)}
    return _complex_doc(G, args)


def cmd_cells(args):
    T = _operator(_read(args.input))
    return _complex_doc(MeanPayoffGame.from_operator(T), args)


def cmd_lattice(args):
    doc = _read(args.input)
    elems = codec.decode_lattice_elements(doc)
    if args.action == "check":
        v = is_lattice(elems)
        out = {"lattice": v.ok}
        if not v.ok:
            out["reason"] = v.reason
            if v.pair:
                out["pair"] = [codec.encode_bits(p) for p in v.pair]
                out["bounds"] = [codec.encode_bits(b) for b in v.bounds]
        return out
    L = HypercubeLattice.checked(elems)
    if args.action == "to-op":
        return codec.encode_operator(operator_from_lattice(L))
    return {"chains": [{"chain": [codec.encode_bits(c) for c in f.chain],
                        "blocks": codec.encode_partition(f.partition),
                        "dim": f.dim, "maximal": f.maximal} for f in chains_to_fan(L)]}


def cmd_skeleton(args):
    T = _operator(_read(args.input))
    return codec.encode_lattice(T.n_in, skeleton(T))


def cmd_plot(args):
    from .plot import plot_layers
    doc = _read(args.input)
    kind = _doc_type(doc)
    layers = {}
    radius = args.radius
    if kind in ("generators", "points"):
        C = ambitropical_hull(codec.decode_points(doc)) if kind == "points" else codec.decode_cone(doc)
        finite = [g for g in C.gens.max_gens + C.gens.min_gens if all_finite(g)]
        if radius is None:
            radius = (codec.decode_scalar("3/2") * max(hilbert_seminorm(g) for g in finite)) if finite else 3
        for name, op in (("max-cone", pmax_operator(C.gens)), ("min-cone", pmin_operator(C.gens)),
                         ("ambitropical", C.operator())):
            G = MeanPayoffGame.from_operator(op)
            layers[name] = [c.poly for c in enumerate_cells(G, cap=args.cap).cells]
    elif kind in ("game", "operator"):
        G = codec.decode_game(doc) if kind == "game" else MeanPayoffGame.from_operator(codec.decode_operator(doc))
        _, lam = _eigen_or_fail(G, args.max_iters)
        H = G.recentered(lam) if lam != 0 else G
        layers["ambitropical"] = [c.poly for c in enumerate_cells(H, cap=args.cap).cells]
        if radius is None:
            radius = _entry_radius(H.A + H.B)
    elif kind == "alcoved":
        P = codec.decode_alcoved(doc)
        layers["ambitropical"] = [P]
        if radius is None:
            radius = _entry_radius(P.M)
    else:
        raise DocumentError(f"cannot plot a {kind!r} document")
    return plot_layers(layers, codec.decode_scalar(str(radius)))


def _entry_radius(M):
    finite = [abs(a) for r in M for a in r if a != NEG_INF]
    return codec.decode_scalar("3/2") * max([1] + finite)


def cmd_selfcheck(args):
    from .selfcheck import run_checks
    results = run_checks()
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}", file=sys.stderr)
    out = {"ok": all(ok for _, ok in results), "checks": [{"name": n, "ok": ok} for n, ok in results]}
    if not out["ok"]:
        raise _Failed(out)
    return out


class _Failed(Exception):
    def __init__(self, doc):
        self.doc = doc


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ambitropical", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, func, help_, needs_input=True):
        sp = sub.add_parser(name, help=help_)
        if needs_input:
            sp.add_argument("--in", dest="input", required=True, help="input JSON document, '-' for stdin")
        sp.add_argument("--out", dest="output", default="-", help="output file (default stdout)")
        sp.add_argument("--seed", type=int, default=None, help="seed for randomized work")
        sp.add_argument("--threads", type=int, default=None, help="worker threads (default: all cores)")
        sp.set_defaults(func=func)
        return sp

    command("star", cmd_star, "Kleene star of a matrix")
    sp = command("alcoved", cmd_alcoved, "star, generators, membership and projections")
    sp.add_argument("--point", action="append", default=[])
    sp = command("eval", cmd_eval, "evaluate an operator and derived objects")
    sp.add_argument("--point", action="append", default=[])
    sp.add_argument("--form", choices=["cnf", "dnf", "pair"])
    sp.add_argument("--row-cap", type=int, default=10 ** 6)
    sp.add_argument("--semiderivative", metavar="POINT")
    sp.add_argument("--recession", action="store_true")
    sp.add_argument("--axioms", action="store_true")
    sp.add_argument("--trials", type=int, default=1000)
    command("hull", cmd_hull, "ambitropical hull of a point set")
    sp = command("project", cmd_project, "apply projections or the retraction")
    sp.add_argument("--point", action="append", required=True)
    sp.add_argument("--which", choices=["retract", "pmax", "pmin", "qminus", "qplus"], default="retract")
    sp = command("interval", cmd_interval, "best co-approximation interval")
    sp.add_argument("--point", action="append", required=True)
    sp = command("witness", cmd_witness, "point of the cone in pairwise-meeting balls")
    sp.add_argument("--balls", required=True, help='JSON {"centers": [...], "radii": [...]}')
    sp = command("geodesic", cmd_geodesic, "retracted segment between two cone points")
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--samples", type=int, default=11)

    mpg = sub.add_parser("mpg", help="mean-payoff games")
    msub = mpg.add_subparsers(dest="action", required=True)
    for action in ("value", "eigen", "calibrated", "cells"):
        sp = msub.add_parser(action)
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--out", dest="output", default="-")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=None)
        sp.add_argument("--horizon", type=int, default=3)
        sp.add_argument("--max-iters", type=int, default=10000)
        sp.add_argument("--cap", type=int, default=14)
        sp.add_argument("--u", default=None, help="eigenvector for 'calibrated'")
        sp.add_argument("--lambda", dest="lam", default=None)
        sp.set_defaults(func=cmd_mpg)

    lat = sub.add_parser("lattice", help="0/1 lattices")
    lsub = lat.add_subparsers(dest="action", required=True)
    for action in ("check", "to-op", "fan"):
        sp = lsub.add_parser(action)
        sp.add_argument("--in", dest="input", required=True)
        sp.add_argument("--out", dest="output", default="-")
        sp.add_argument("--seed", type=int, default=None)
        sp.add_argument("--threads", type=int, default=None)
        sp.set_defaults(func=cmd_lattice)

    command("skeleton", cmd_skeleton, "fixed 0/1 points of a homogeneous operator")
    sp = command("cells", cmd_cells, "cell complex of an operator's fixed-point set")
    sp.add_argument("--cap", type=int, default=14)
    sp.add_argument("--max-iters", type=int, default=10000)
    sp = command("plot", cmd_plot, "SVG cross-section of a 3-dimensional cone")
    sp.add_argument("--radius", default=None, help="Hilbert-ball radius of the drawing window")
    sp.add_argument("--cap", type=int, default=14)
    sp.add_argument("--max-iters", type=int, default=10000)
    command("selfcheck", cmd_selfcheck, "run the worked examples end to end", needs_input=False)
    return p


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _error_doc(exc: DomainError) -> dict:
    doc = {"error": exc.code}
    if isinstance(exc, PositiveCircuit):
        doc["witness"] = [i + 1 for i in exc.circuit]
        doc["weight"] = encode_scalar(exc.weight)
    elif getattr(exc, "cause", None) is not None:
        doc["witness"] = [i + 1 for i in exc.cause.circuit]
        doc["weight"] = encode_scalar(exc.cause.weight)
    for k, v in exc.payload.items():
        doc[k] = _jsonable(v)
    doc["message"] = str(exc)
    return doc


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(a) for a in v]
    if isinstance(v, (str, bool)) or v is None:
        return v
    if isinstance(v, int):
        return v
    try:
        return encode_scalar(v)
    except (TypeError, ValueError):
        return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    output = getattr(args, "output", "-")
    try:
        result = args.func(args)
    except _Failed as exc:
        _write(output, codec.dumps(exc.doc))
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _write(output, codec.dumps(_error_doc(exc)))
        return 1
    except (UsageError, DocumentError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        _write(output, codec.dumps({"error": "UsageError", "message": str(exc)}))
        return 2
    except (ValueError, TypeError, KeyError) as exc:
        # malformed documents that slipped past the codec's own checks
        print(f"parse error: {exc}", file=sys.stderr)
        _write(output, codec.dumps({"error": "ParseError", "message": str(exc)}))
        return 2
    _write(output, result if isinstance(result, str) else codec.dumps(result))
    return 0


if __name__ == "__main__":
    sys.exit(main())
