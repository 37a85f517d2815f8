"""Projections onto tropical cones and canonical retractions onto ambitropical cones.

A closed ambitropical cone is described by two generator families: the
max-plus family spans ``E^max`` and the min-plus family spans ``E^min``.
``p_max`` is the greatest point of ``E^max`` below x, ``p_min`` the least
point of ``E^min`` above x, and the canonical retractions are
``q_minus = p_min o p_max`` and ``q_plus = p_max o p_min``.

Besides finite generator lists a family may contain segments ``[a, b]`` of
finite points.  The projection over a segment is a sup (inf) of a concave
(convex) piecewise-affine function of the segment parameter, so it is
attained at an endpoint or at a crossing of two affine pieces.  Those
finitely many points are generated on the fly, which keeps every result
exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import EmptyInput, InvalidGenerator, NonConvergence, NotAFixedPoint, PairwiseConditionViolated
from .minmax import Max, Min, ShapleyOp, Shift, Var, as_map, compose
from .trop_core import (NEG_INF, POS_INF, Vec, all_finite, bottom, hilbert_seminorm, join, meet,
                        sup_dist, vec)

Segment = Tuple[Vec, Vec]


def _support(g, absent):
    return tuple(i for i, a in enumerate(g) if a != absent)


@dataclass(frozen=True)
class GeneratorSet:
    n: int
    max_gens: Tuple[Vec, ...]
    min_gens: Tuple[Vec, ...]
    max_segments: Tuple[Segment, ...] = ()
    min_segments: Tuple[Segment, ...] = ()
    _max_supp: tuple = field(init=False, repr=False, compare=False)
    _min_supp: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        set_ = lambda name, v: object.__setattr__(self, name, v)
        set_("max_gens", tuple(vec(g) for g in self.max_gens))
        set_("min_gens", tuple(vec(g) for g in self.min_gens))
        set_("max_segments", tuple((vec(a), vec(b)) for a, b in self.max_segments))
        set_("min_segments", tuple((vec(a), vec(b)) for a, b in self.min_segments))
        n = self.n
        for side, gens, segs, bad, absent in (("max", self.max_gens, self.max_segments, POS_INF, NEG_INF),
                                              ("min", self.min_gens, self.min_segments, NEG_INF, POS_INF)):
            if not gens and not segs:
                raise EmptyInput(f"no {side} generators")
            covered = set()
            for g in gens:
                if len(g) != n:
                    raise InvalidGenerator(f"{side} generator {g} is not of length {n}")
                if bad in g:
                    raise InvalidGenerator(f"{side} generator {g} has an entry {bad}")
                supp = _support(g, absent)
                if not supp:
                    raise InvalidGenerator(f"{side} generator {g} has empty support")
                covered.update(supp)
            for a, b in segs:
                if len(a) != n or len(b) != n or not (all_finite(a) and all_finite(b)):
                    raise InvalidGenerator(f"{side} segment endpoints must be finite of length {n}")
                covered.update(range(n))
            if covered != set(range(n)):
                missing = sorted(set(range(n)) - covered)
                raise InvalidGenerator(f"no {side} generator is finite at coordinate {missing[0] + 1}")
        set_("_max_supp", tuple((g, _support(g, NEG_INF)) for g in self.max_gens))
        set_("_min_supp", tuple((g, _support(g, POS_INF)) for g in self.min_gens))

    @classmethod
    def symmetric(cls, points) -> "GeneratorSet":
        pts = tuple(vec(p) for p in points)
        if not pts:
            raise EmptyInput("no points")
        return cls(len(pts[0]), pts, pts)

    def is_polytope_description(self) -> bool:
        return all(all_finite(g) for g in self.max_gens + self.min_gens)


def segment_breakpoints(a: Vec, b: Vec, x: Sequence) -> List[Vec]:
    """Points of [a, b] where x - g(s) can change its argmax or argmin."""
    d = [bj - aj for aj, bj in zip(a, b)]
    base = [xj - aj for xj, aj in zip(x, a)]
    params = {Fraction(0), Fraction(1)}
    n = len(a)
    for l in range(n):
        for k in range(l + 1, n):
            if d[l] != d[k]:
                s = Fraction(base[l] - base[k]) / (d[l] - d[k])
                if 0 < s < 1:
                    params.add(s)
    return [tuple(aj + s * dj for aj, dj in zip(a, d)) for s in sorted(params)]


def segment_grid(a: Sequence, b: Sequence, count: int) -> List[Vec]:
    """``count`` equally spaced points of [a, b], endpoints included."""
    a, b = vec(a), vec(b)
    return [tuple(aj + Fraction(k, count - 1) * (bj - aj) for aj, bj in zip(a, b)) for k in range(count)]


def p_max(gens: GeneratorSet, x: Sequence) -> Vec:
    """Greatest point of the max-plus span below x: sup over g of b(x - g) + g."""
    out = [NEG_INF] * gens.n
    pairs = list(gens._max_supp)
    for a, b in gens.max_segments:
        pairs.extend((g, range(gens.n)) for g in segment_breakpoints(a, b, x))
    for g, supp in pairs:
        lam = min(x[l] - g[l] for l in supp)
        for i in supp:
            v = lam + g[i]
            if v > out[i]:
                out[i] = v
    return tuple(out)


def p_min(gens: GeneratorSet, x: Sequence) -> Vec:
    """Least point of the min-plus span above x: inf over g of t(x - g) + g."""
    out = [POS_INF] * gens.n
    pairs = list(gens._min_supp)
    for a, b in gens.min_segments:
        pairs.extend((g, range(gens.n)) for g in segment_breakpoints(a, b, x))
    for g, supp in pairs:
        lam = max(x[l] - g[l] for l in supp)
        for i in supp:
            v = lam + g[i]
            if v < out[i]:
                out[i] = v
    return tuple(out)


def q_minus(gens: GeneratorSet, x: Sequence) -> Vec:
    return p_min(gens, p_max(gens, x))


def q_plus(gens: GeneratorSet, x: Sequence) -> Vec:
    return p_max(gens, p_min(gens, x))


def co_approximation_interval(gens: GeneratorSet, z: Sequence) -> Tuple[Vec, Vec]:
    """The order interval [p_max(z), p_min(z)] of best co-approximations."""
    return p_max(gens, z), p_min(gens, z)


def pmax_operator(gens: GeneratorSet) -> ShapleyOp:
    """p_max as a min-max operator (finite generator lists only)."""
    if gens.max_segments:
        raise ValueError("segment families have no finite min-max expression")
    coords = []
    for i in range(gens.n):
        coords.append(Max(tuple(
            Shift(g[i], Min(tuple(Shift(-g[l], Var(l)) for l in supp)))
            for g, supp in gens._max_supp if i in supp)))
    return ShapleyOp(gens.n, coords)


def pmin_operator(gens: GeneratorSet) -> ShapleyOp:
    if gens.min_segments:
        raise ValueError("segment families have no finite min-max expression")
    coords = []
    for i in range(gens.n):
        coords.append(Min(tuple(
            Shift(g[i], Max(tuple(Shift(-g[l], Var(l)) for l in supp)))
            for g, supp in gens._min_supp if i in supp)))
    return ShapleyOp(gens.n, coords)


@dataclass(frozen=True)
class AmbiCone:
    """The fixed-point set of one canonical retraction built from ``gens``.

    ``side == "minus"`` uses q_minus (the default description);
    ``side == "plus"`` uses q_plus, which is how hulls are presented.
    """

    gens: GeneratorSet
    side: str = "minus"

    def __post_init__(self):
        if self.side not in ("minus", "plus"):
            raise ValueError("side must be 'minus' or 'plus'")

    @property
    def n(self) -> int:
        return self.gens.n

    def retract(self, x: Sequence) -> Vec:
        return (q_minus if self.side == "minus" else q_plus)(self.gens, x)

    def contains(self, x: Sequence) -> bool:
        x = vec(x)
        return self.retract(x) == x

    def operator(self) -> ShapleyOp:
        up, down = pmax_operator(self.gens), pmin_operator(self.gens)
        return compose(down, up) if self.side == "minus" else compose(up, down)


def ambitropical_hull(points: Sequence[Sequence]) -> AmbiCone:
    """Hull of a finite set: the range of q_plus with both families equal to the points."""
    pts = [vec(p) for p in points]
    if not pts:
        raise EmptyInput("hull of an empty point set")
    if not all(all_finite(p) for p in pts):
        raise InvalidGenerator("hull points must be finite")
    return AmbiCone(GeneratorSet.symmetric(pts), side="plus")


def as_cone(c) -> AmbiCone:
    return c if isinstance(c, AmbiCone) else AmbiCone(c)


# ---------------------------------------------------------------- iteration

@dataclass(frozen=True)
class IterationResult:
    status: str  # "fixed", "cycle", "tolerance" or "budget"
    point: Vec
    iterations: int
    period: Optional[int] = None
    residual: Optional[object] = None


def iterate_to_fixed_point(T, x0: Sequence, max_iters: int = 1000, tol_hilbert=0) -> IterationResult:
    """Iterate x <- T(x) until an exact fixed point, a cycle modulo constants,
    a residual below ``tol_hilbert`` (if positive), or the budget."""
    f = as_map(T)
    x = vec(x0)
    seen = {}
    residual = None
    for k in range(max_iters + 1):
        y = f(x)
        if y == x:
            return IterationResult("fixed", x, k, residual=0)
        diff = tuple(a - b for a, b in zip(y, x))
        residual = hilbert_seminorm(diff) if diff else 0
        if tol_hilbert and residual <= tol_hilbert and max(map(abs, diff)) <= tol_hilbert:
            return IterationResult("tolerance", x, k, residual=residual)
        key = tuple(a - bottom(x) for a in x)
        if key in seen:
            return IterationResult("cycle", x, k, period=k - seen[key], residual=residual)
        seen[key] = k
        if k == max_iters:
            break
        x = y
    return IterationResult("budget", x, max_iters, residual=residual)


def lattice_sup(T, x: Sequence, y: Sequence, max_iters: int = 10000) -> Vec:
    """Least fixed point of T above both fixed points x and y."""
    r = iterate_to_fixed_point(T, join(vec(x), vec(y)), max_iters)
    if r.status != "fixed":
        raise NonConvergence(f"no fixed point reached ({r.status})", iterations=r.iterations)
    return r.point


def lattice_inf(T, x: Sequence, y: Sequence, max_iters: int = 10000) -> Vec:
    r = iterate_to_fixed_point(T, meet(vec(x), vec(y)), max_iters)
    if r.status != "fixed":
        raise NonConvergence(f"no fixed point reached ({r.status})", iterations=r.iterations)
    return r.point


def geodesic(Q: Callable, x: Sequence, y: Sequence, samples: int) -> List[Vec]:
    """Image under the retraction Q of ``samples`` equally spaced points of [x, y]."""
    if samples < 2:
        raise ValueError("need at least two samples")
    Q = as_map(Q)
    return [Q(p) for p in segment_grid(x, y, samples)]


def hyperconvexity_witness(cone, centers: Sequence[Sequence], radii: Sequence) -> Vec:
    """A point of the cone in every ball B(c_a, r_a) for the sup-norm.

    The balls must pairwise intersect and every center must lie in the cone.
    """
    cone = as_cone(cone)
    cs = [vec(c) for c in centers]
    rs = [vec([r])[0] for r in radii]
    if not cs or len(cs) != len(rs):
        raise EmptyInput("need as many radii as centers, at least one")
    for a in range(len(cs)):
        if rs[a] < 0:
            raise ValueError("radii must be nonnegative")
        if not cone.contains(cs[a]):
            raise NotAFixedPoint(f"center {a + 1} is not in the cone", index=a + 1)
        for b in range(a + 1, len(cs)):
            if sup_dist(cs[a], cs[b]) > rs[a] + rs[b]:
                raise PairwiseConditionViolated(f"balls {a + 1} and {b + 1} do not meet", pair=[a + 1, b + 1])
    z = tuple(max(c[i] - r for c, r in zip(cs, rs)) for i in range(cone.n))
    return cone.retract(z)
