"""Homogeneous ambitropical polyhedra and their 0/1 skeletons.

A homogeneous deterministic operator is a monotone Boolean operator extended
to R^n by min/max.  Its fixed points on the cube form a lattice, and the
polyhedron is the union of the Weyl cells of chains of that lattice.
Cube points are stored as tuples of 0/1 ints.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .alcoved import AlcovedPoly, alcoved_new
from .errors import NotAFixedPoint, NotALattice, NotDeterministic, NotHomogeneous, SizeCap
from .minmax import Max, Min, ShapleyOp, Var, random_rational, recession, semiderivative
from .trop_core import NEG_INF, vec

DEFAULT_CUBE_CAP = 20

Point01 = Tuple[int, ...]


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def _cube(n):
    return product((0, 1), repeat=n)


# ---------------------------------------------------------------- skeletons

def assert_homogeneous(T: ShapleyOp, samples: int = 64, seed: int = 0) -> None:
    rng = random.Random(seed)
    R = recession(T)
    for _ in range(samples):
        x = tuple(random_rational(rng) for _ in range(T.n_in))
        if T(x) != R(x):
            raise NotHomogeneous("operator differs from its recession function", point=list(map(str, x)))


def skeleton(T: ShapleyOp, cap: int = DEFAULT_CUBE_CAP) -> FrozenSet[Point01]:
    """Fixed points of T in {0,1}^n."""
    if not T.is_deterministic():
        raise NotDeterministic("skeletons are defined for min-max operators")
    if T.n_in != T.n_out:
        raise ValueError("operator must be square")
    if T.n_in > cap:
        raise SizeCap(f"hypercube scan beyond n = {cap}", cap=cap)
    assert_homogeneous(T)
    return frozenset(x for x in _cube(T.n_in) if T(x) == x)


# ---------------------------------------------------------------- lattices

@dataclass(frozen=True)
class LatticeVerdict:
    ok: bool
    reason: Optional[str] = None
    pair: Optional[Tuple[Point01, Point01]] = None
    bounds: Tuple[Point01, ...] = ()

    def __bool__(self):
        return self.ok


def is_lattice(S: Iterable[Sequence[int]]) -> LatticeVerdict:
    """Check bottom/top membership and unique minimal upper / maximal lower bounds."""
    elems = sorted({tuple(int(b) for b in s) for s in S})
    if not elems:
        return LatticeVerdict(False, "empty set")
    n = len(elems[0])
    if (0,) * n not in elems:
        return LatticeVerdict(False, "bottom missing")
    if (1,) * n not in elems:
        return LatticeVerdict(False, "top missing")
    for upper in (True, False):
        for a_idx, a in enumerate(elems):
            for b in elems[a_idx + 1:]:
                if upper:
                    cands = [c for c in elems if _leq(a, c) and _leq(b, c)]
                    extreme = [c for c in cands if not any(d != c and _leq(d, c) for d in cands)]
                else:
                    cands = [c for c in elems if _leq(c, a) and _leq(c, b)]
                    extreme = [c for c in cands if not any(d != c and _leq(c, d) for d in cands)]
                if len(extreme) != 1:
                    kind = "minimal upper bounds" if upper else "maximal lower bounds"
                    return LatticeVerdict(False, f"several {kind}", (a, b), tuple(extreme))
    return LatticeVerdict(True)


@dataclass(frozen=True)
class HypercubeLattice:
    n: int
    elements: FrozenSet[Point01]

    @classmethod
    def checked(cls, S: Iterable[Sequence[int]]) -> "HypercubeLattice":
        elems = frozenset(tuple(int(b) for b in s) for s in S)
        verdict = is_lattice(elems)
        if not verdict:
            raise NotALattice(verdict.reason, pair=verdict.pair, bounds=verdict.bounds)
        return cls(len(next(iter(elems))), elems)


def _as_lattice(S) -> HypercubeLattice:
    return S if isinstance(S, HypercubeLattice) else HypercubeLattice.checked(S)


def lattice_projection(S, x: Point01) -> Point01:
    """sup in S of the elements of S below x: the least element of S above their union."""
    below = [u for u in S.elements if _leq(u, x)]
    union = tuple(max(col) for col in zip(*below))
    above = [u for u in S.elements if _leq(union, u)]
    least = [u for u in above if all(_leq(u, v) for v in above)]
    return least[0]


def operator_from_lattice(S, cap: int = DEFAULT_CUBE_CAP) -> ShapleyOp:
    """Homogeneous idempotent operator whose skeleton is S.

    Tabulates the lattice projection on the cube and writes each coordinate
    as the monotone DNF over its minimal true points.
    """
    L = _as_lattice(S)
    n = L.n
    if n > cap:
        raise SizeCap(f"hypercube scan beyond n = {cap}", cap=cap)
    table = {x: lattice_projection(L, x) for x in _cube(n)}
    coords = []
    for i in range(n):
        true_pts = [x for x, y in table.items() if y[i] == 1]
        minimal = sorted(x for x in true_pts if not any(y != x and _leq(y, x) for y in true_pts))
        clauses = []
        for y in minimal:
            lits = tuple(Var(k) for k in range(n) if y[k])
            clauses.append(lits[0] if len(lits) == 1 else Min(lits))
        coords.append(clauses[0] if len(clauses) == 1 else Max(tuple(clauses)))
    return ShapleyOp(n, coords)


# ---------------------------------------------------------------- Weyl fans

@dataclass(frozen=True)
class OrderedPartition:
    blocks: Tuple[FrozenSet[int], ...]

    def weyl_cell(self) -> AlcovedPoly:
        """{x : x_i <= x_j whenever i is in an earlier-or-equal block than j}."""
        n = sum(len(b) for b in self.blocks)
        M = [[NEG_INF] * n for _ in range(n)]
        for r, Ir in enumerate(self.blocks):
            for Is in self.blocks[r:]:
                for i in Ir:
                    for j in Is:
                        if i != j:
                            M[j][i] = 0
        return alcoved_new(M)


@dataclass(frozen=True)
class FanCell:
    chain: Tuple[Point01, ...]
    partition: OrderedPartition
    dim: int
    maximal: bool


def chain_to_partition(chain: Sequence[Point01]) -> OrderedPartition:
    """0 = c_0 < ... < c_S = 1 gives blocks supp(c_{S-s+1}) minus supp(c_{S-s})."""
    S = len(chain) - 1
    blocks = []
    for s in range(1, S + 1):
        hi, lo = chain[S - s + 1], chain[S - s]
        blocks.append(frozenset(i for i in range(len(hi)) if hi[i] and not lo[i]))
    return OrderedPartition(tuple(blocks))


def chains_to_fan(S) -> List[FanCell]:
    """Every chain of S from bottom to top, with its Weyl cell."""
    L = _as_lattice(S)
    n = L.n
    bot, topv = (0,) * n, (1,) * n
    elems = sorted(L.elements, key=lambda e: (sum(e), e))
    above = {e: [f for f in elems if f != e and _leq(e, f)] for e in elems}
    covers = {e: {f for f in above[e] if not any(g != f and _leq(g, f) for g in above[e])} for e in elems}
    out = []

    def dfs(path, is_max):
        last = path[-1]
        if last == topv:
            chain = tuple(path)
            out.append(FanCell(chain, chain_to_partition(chain), len(chain) - 1, is_max))
            return
        for f in above[last]:
            dfs(path + [f], is_max and f in covers[last])

    if bot == topv:
        return [FanCell((bot,), OrderedPartition(()), 0, True)]
    dfs([bot], True)
    return out


def chain_of_point(x: Sequence) -> Tuple[Point01, ...]:
    """Threshold sets of x, from the empty set to [n], as a chain in the cube."""
    levels = sorted(set(x), reverse=True)
    chain = [(0,) * len(x)]
    for t in levels:
        chain.append(tuple(1 if a >= t else 0 for a in x))
    return tuple(chain)


# ---------------------------------------------------------------- cones

def tangent_cone(T: ShapleyOp, u: Sequence) -> ShapleyOp:
    u = vec(u)
    if T(u) != u:
        raise NotAFixedPoint("T(u) != u")
    return semiderivative(T, u)


def recession_cone(T: ShapleyOp) -> ShapleyOp:
    if not T.is_deterministic():
        raise NotDeterministic("recession cones are computed for min-max operators")
    return recession(T)
