"""Alcoved polyhedra ``{x : x_i >= M_ij + x_j for all i, j}``.

The Kleene star of the defining matrix is the canonical representation:
two nonempty alcoved polyhedra are equal iff their stars are equal, and
``Q(M1) <= Q(M2)`` (inclusion) iff ``M1* >= M2*`` entrywise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Sequence

from .errors import DimensionMismatch, EmptyInput, EmptyPolyhedron, PositiveCircuit
from .trop_core import NEG_INF, Mat, Vec, kleene_star, mat, trop_matvec, vec


@dataclass(frozen=True)
class AlcovedPoly:
    n: int
    M: Mat
    star: Mat = field(compare=False, repr=False)

    def __eq__(self, other):
        return isinstance(other, AlcovedPoly) and self.star == other.star

    def __hash__(self):
        return hash(self.star)


def alcoved_new(M) -> AlcovedPoly:
    """Build Q(M); raises :class:`EmptyPolyhedron` if M has a positive circuit."""
    M = mat(M)
    try:
        star = kleene_star(M)
    except PositiveCircuit as exc:
        raise EmptyPolyhedron(exc) from exc
    return AlcovedPoly(len(M), M, star)


def from_star(star: Mat) -> AlcovedPoly:
    return AlcovedPoly(len(star), star, star)


def contains(P: AlcovedPoly, x: Sequence) -> bool:
    if len(x) != P.n:
        raise DimensionMismatch(f"point of length {len(x)} in dimension {P.n}")
    return all(y <= xi for y, xi in zip(trop_matvec(P.star, x), x))


def project_up(P: AlcovedPoly, x: Sequence) -> Vec:
    """Least point of P above x."""
    return trop_matvec(P.star, x)


def project_down(P: AlcovedPoly, x: Sequence) -> Vec:
    """Greatest point of P below x."""
    n = P.n
    S = P.star
    return tuple(min(x[j] - S[j][i] for j in range(n) if S[j][i] != NEG_INF) for i in range(n))


def equivalence_classes(P: AlcovedPoly) -> List[List[int]]:
    """Classes of i ~ j iff x_i - x_j is constant on P (zero-weight circuit of M*)."""
    n = P.n
    S = P.star
    seen = [False] * n
    classes = []
    for i in range(n):
        if seen[i]:
            continue
        cls = [j for j in range(i, n) if not seen[j] and S[i][j] != NEG_INF and S[j][i] != NEG_INF
               and S[i][j] + S[j][i] == 0]
        for j in cls:
            seen[j] = True
        classes.append(cls)
    return classes


def generators(P: AlcovedPoly) -> List[Vec]:
    """One column of M* per critical class, represented by its smallest index."""
    S = P.star
    return [tuple(S[r][cls[0]] for r in range(P.n)) for cls in equivalence_classes(P)]


def dual_generators(P: AlcovedPoly) -> List[Vec]:
    """Min-plus generators of the upper closure of P: minus the generators of -P."""
    return [tuple(-a for a in g) for g in generators(negate(P))]


def negate(P: AlcovedPoly) -> AlcovedPoly:
    """-P = Q(M^T)."""
    T = tuple(zip(*P.star)) if P.n else ()
    return AlcovedPoly(P.n, T, T)


def dimension(P: AlcovedPoly) -> int:
    """Affine dimension of P, counting the line of constants."""
    return len(equivalence_classes(P))


def alcoved_envelope(points: Sequence[Sequence]) -> AlcovedPoly:
    """Smallest alcoved polyhedron containing ``points``."""
    pts = [vec(p) for p in points]
    if not pts:
        raise EmptyInput("envelope of an empty point set")
    n = len(pts[0])
    M = tuple(tuple(min(v[i] - v[j] for v in pts) for j in range(n)) for i in range(n))
    return alcoved_new(M)


def intersect(P1: AlcovedPoly, P2: AlcovedPoly) -> AlcovedPoly:
    """P1 cap P2; raises :class:`EmptyPolyhedron` when disjoint."""
    M = tuple(tuple(max(a, b) for a, b in zip(r1, r2)) for r1, r2 in zip(P1.star, P2.star))
    return alcoved_new(M)


def is_subset(P1: AlcovedPoly, P2: AlcovedPoly) -> bool:
    return all(a >= b for r1, r2 in zip(P1.star, P2.star) for a, b in zip(r1, r2))
