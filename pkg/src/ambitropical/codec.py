"""JSON documents.

Scalars are strings: ``"3"``, ``"-1/2"``, ``"-inf"``, ``"+inf"`` (integers are
also accepted on input).  Indices are 1-based in documents and 0-based in
memory.  Every ``decode_*`` inverts the matching ``encode_*`` exactly.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict, List

from .alcoved import AlcovedPoly, alcoved_new
from .games import CellComplex, MeanPayoffGame, PolicyPair
from .homog import HypercubeLattice, OrderedPartition
from .minmax import Affine, Max, Min, ProperPair, ShapleyOp, Shift, Term, Var
from .retract import AmbiCone, GeneratorSet
from .trop_core import NEG_INF, POS_INF, ext, mat, vec


class DocumentError(ValueError):
    """Malformed input document."""


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


# ---------------------------------------------------------------- scalars

def encode_scalar(a) -> str:
    if a == NEG_INF:
        return "-inf"
    if a == POS_INF:
        return "+inf"
    return str(Fraction(a))


def decode_scalar(v):
    try:
        return ext(v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad scalar {v!r}") from exc


def encode_vector(x) -> List[str]:
    return [encode_scalar(a) for a in x]


def decode_vector(v) -> tuple:
    if not isinstance(v, list):
        raise DocumentError("a vector must be a JSON array")
    return tuple(decode_scalar(a) for a in v)


def encode_matrix(M) -> Dict[str, Any]:
    return {"rows": len(M), "cols": len(M[0]) if M else 0, "data": [encode_vector(r) for r in M]}


def decode_matrix(d) -> tuple:
    if isinstance(d, list):
        return mat(decode_vector(r) for r in d)
    _require(d, "rows", "cols", "data")
    M = tuple(decode_vector(r) for r in d["data"])
    if len(M) != d["rows"] or any(len(r) != d["cols"] for r in M):
        raise DocumentError("matrix data does not match rows/cols")
    return M


def _require(d, *keys):
    if not isinstance(d, dict):
        raise DocumentError("expected a JSON object")
    missing = [k for k in keys if k not in d]
    if missing:
        raise DocumentError(f"missing field {missing[0]!r}")


# ---------------------------------------------------------------- terms

def encode_term(t: Term) -> Dict[str, Any]:
    if isinstance(t, Var):
        return {"op": "var", "i": t.i + 1}
    if isinstance(t, Shift):
        return {"op": "shift", "c": encode_scalar(t.c), "arg": encode_term(t.arg)}
    if isinstance(t, Max):
        return {"op": "max", "args": [encode_term(a) for a in t.args]}
    if isinstance(t, Min):
        return {"op": "min", "args": [encode_term(a) for a in t.args]}
    return {"op": "affine", "r": encode_scalar(t.r), "p": encode_vector(t.p)}


def decode_term(d) -> Term:
    _require(d, "op")
    op = d["op"]
    try:
        if op == "var":
            i = d["i"]
            if not isinstance(i, int) or i < 1:
                raise DocumentError("variable indices start at 1")
            return Var(i - 1)
        if op == "shift":
            return Shift(decode_scalar(d["c"]), decode_term(d["arg"]))
        if op in ("max", "min"):
            args = tuple(decode_term(a) for a in d["args"])
            return (Max if op == "max" else Min)(args)
        if op == "affine":
            return Affine(decode_scalar(d["r"]), decode_vector(d["p"]))
    except KeyError as exc:
        raise DocumentError(f"term {op!r} lacks field {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(str(exc)) from exc
    raise DocumentError(f"unknown term op {op!r}")


def encode_operator(T: ShapleyOp) -> Dict[str, Any]:
    return {"type": "operator", "n_in": T.n_in, "coords": [encode_term(t) for t in T.coords]}


def decode_operator(d) -> ShapleyOp:
    _require(d, "n_in", "coords")
    return ShapleyOp(d["n_in"], tuple(decode_term(t) for t in d["coords"]))


def encode_pair(P: ProperPair) -> Dict[str, Any]:
    return {"type": "pair", "A": encode_matrix(P.A), "B": encode_matrix(P.B)}


# ---------------------------------------------------------------- polyhedra and cones

def encode_alcoved(P: AlcovedPoly) -> Dict[str, Any]:
    return {"type": "alcoved", "M": encode_matrix(P.M)}


def decode_alcoved(d) -> AlcovedPoly:
    _require(d, "M")
    return alcoved_new(decode_matrix(d["M"]))


def encode_generators(G: GeneratorSet, side: str = None) -> Dict[str, Any]:
    doc = {"type": "generators", "n": G.n,
           "max_gens": [encode_vector(g) for g in G.max_gens],
           "min_gens": [encode_vector(g) for g in G.min_gens]}
    if G.max_segments:
        doc["max_segments"] = [[encode_vector(a), encode_vector(b)] for a, b in G.max_segments]
    if G.min_segments:
        doc["min_segments"] = [[encode_vector(a), encode_vector(b)] for a, b in G.min_segments]
    if side is not None:
        doc["side"] = side
    return doc


def decode_generators(d) -> GeneratorSet:
    _require(d, "n")
    segs = lambda key: tuple((decode_vector(a), decode_vector(b)) for a, b in d.get(key, []))
    return GeneratorSet(d["n"],
                        tuple(decode_vector(g) for g in d.get("max_gens", [])),
                        tuple(decode_vector(g) for g in d.get("min_gens", [])),
                        segs("max_segments"), segs("min_segments"))


def encode_cone(C: AmbiCone) -> Dict[str, Any]:
    return encode_generators(C.gens, C.side)


def decode_cone(d) -> AmbiCone:
    return AmbiCone(decode_generators(d), d.get("side", "minus"))


def encode_points(points) -> Dict[str, Any]:
    return {"type": "points", "points": [encode_vector(p) for p in points]}


def decode_points(d) -> List[tuple]:
    if isinstance(d, list):
        return [decode_vector(p) for p in d]
    _require(d, "points")
    return [decode_vector(p) for p in d["points"]]


# ---------------------------------------------------------------- games

def encode_game(G: MeanPayoffGame) -> Dict[str, Any]:
    return {"type": "game", "A": encode_matrix(G.A), "B": encode_matrix(G.B)}


def decode_game(d) -> MeanPayoffGame:
    _require(d, "A", "B")
    return MeanPayoffGame.from_matrices(decode_matrix(d["A"]), decode_matrix(d["B"]))


def encode_policy(tau: PolicyPair) -> Dict[str, Any]:
    return {"sigma": [sorted(j + 1 for j in s) for s in tau.sigma],
            "pi": [sorted(k + 1 for k in s) for s in tau.pi]}


def decode_policy(d) -> PolicyPair:
    _require(d, "sigma", "pi")
    return PolicyPair(tuple(frozenset(j - 1 for j in s) for s in d["sigma"]),
                      tuple(frozenset(k - 1 for k in s) for s in d["pi"]))


def encode_complex(C: CellComplex) -> Dict[str, Any]:
    return {
        "type": "complex",
        "cells": [{"dim": c.dim, "star": encode_matrix(c.poly.star), "type": encode_policy(c.type)}
                  for c in C.cells],
        "faces": [[a + 1, b + 1] for a, b in C.faces],
        "maximal": [i + 1 for i in C.maximal],
        "partial": C.partial,
    }


# ---------------------------------------------------------------- lattices

def encode_bits(x) -> str:
    return "".join(str(b) for b in x)


def decode_bits(s: str) -> tuple:
    if not isinstance(s, str) or set(s) - {"0", "1"}:
        raise DocumentError(f"bad bitstring {s!r}")
    return tuple(int(c) for c in s)


def encode_lattice(n: int, elements) -> Dict[str, Any]:
    return {"type": "lattice01", "n": n, "elements": sorted(encode_bits(e) for e in elements)}


def decode_lattice_elements(d) -> frozenset:
    _require(d, "n", "elements")
    elems = frozenset(decode_bits(s) for s in d["elements"])
    if any(len(e) != d["n"] for e in elems):
        raise DocumentError("bitstring length differs from n")
    return elems


def encode_partition(P: OrderedPartition) -> List[List[int]]:
    return [sorted(i + 1 for i in b) for b in P.blocks]


def encode_lattice_obj(L: HypercubeLattice) -> Dict[str, Any]:
    return encode_lattice(L.n, L.elements)
