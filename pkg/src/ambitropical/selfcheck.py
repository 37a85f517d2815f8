"""End-to-end checks on the worked examples, with frozen expected values."""

from __future__ import annotations

from fractions import Fraction as F
from typing import Callable, List, Tuple

from . import catalog
from .errors import PositiveCircuit
from .games import calibrated_policies, check_eigen, enumerate_cells, find_eigen
from .homog import chains_to_fan, is_lattice, skeleton
from .retract import ambitropical_hull, p_max, p_min, q_minus
from .trop_core import kleene_star, normalize

CHECKS: List[Tuple[str, Callable[[], bool]]] = []


def check(name):
    def deco(f):
        CHECKS.append((name, f))
        return f
    return deco


@check("kleene star rejects a positive loop")
def _():
    try:
        kleene_star(((1,),))
    except PositiveCircuit as exc:
        return exc.circuit == (0,) and exc.weight == 1
    return False


@check("four-state game eigenpair and calibrated Max arcs")
def _():
    G = catalog.fathi_game()
    u = (-2, -2, -1, 0)
    tau = calibrated_policies(G, u, 1)
    return (check_eigen(G, u, 1) and find_eigen(G) == (u, 1)
            and tau.pi == (frozenset({2}), frozenset({3}), frozenset({3}), frozenset({3})))


@check("butterfly projections in closed form")
def _():
    gens = catalog.butterfly_generators()
    pts = [(1, 0, 0), (F(1, 2), 3, -2), (0, -1, 4), (2, 2, F(-7, 3))]
    return all(p_max(gens, x) == (min(x[0], max(x[1], x[2])), x[1], x[2])
               and p_min(gens, x) == (max(x[0], min(x[1], x[2])), x[1], x[2]) for x in pts)


@check("bounded butterfly retraction in closed form")
def _():
    gens = catalog.bounded_butterfly_generators()
    R = catalog.bounded_butterfly_retraction()
    pts = [(3, 0, 0), (F(1, 2), 3, -2), (0, -1, 4), (2, 2, F(-7, 3)), (F(5, 4), F(1, 3), 0)]
    return all(q_minus(gens, x) == R(x) for x in pts)


@check("segment cone: retraction is not sunny")
def _():
    grid = catalog.segment_generators(101)
    u = p_max(grid, (2, F(1, 2), 0))
    y = normalize(p_min(grid, u))
    exact = catalog.segment_generators()
    x_mid = (F(11, 8), F(3, 8), 0)
    y_mid = normalize(q_minus(exact, x_mid))
    return u == (1, F(1, 2), 0) and y == (F(3, 4), F(1, 4), 0) and y_mid == (F(13, 16), F(3, 16), 0)


@check("butterfly cell complex")
def _():
    from .games import MeanPayoffGame
    C = enumerate_cells(MeanPayoffGame.from_operator(catalog.butterfly_operator()))
    dims = sorted(C.cells[i].dim for i in C.maximal)
    return dims == [3, 3] and sum(c.dim == 1 for c in C.cells) == 1


@check("butterfly skeleton and its two maximal chains")
def _():
    sk = skeleton(catalog.butterfly_operator())
    chains = [c for c in chains_to_fan(sk) if c.maximal]
    return (sk == {(0, 0, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 0), (1, 1, 0)}
            and sorted(len(c.chain) for c in chains) == [4, 4])


@check("five-bit lattice and its non-lattice projection")
def _():
    L = [tuple(int(b) for b in s) for s in catalog.FIVE_BIT_LATTICE]
    bad = is_lattice([e[:4] for e in L])
    return bool(is_lattice(L)) and not bad and set(bad.bounds) == {(0, 1, 1, 1), (1, 1, 1, 0)}


@check("two-point hull")
def _():
    H = ambitropical_hull([(1, 0, 0), (0, 1, 0)])
    return H.contains((1, 0, 0)) and H.contains((0, 1, 0)) and H.contains((1, 1, 0)) \
        and not H.contains((F(1, 2), F(1, 2), 0))


@check("nine-point hull fixes its points")
def _():
    H = ambitropical_hull(catalog.NINE_POINTS)
    return all(H.contains(p) for p in catalog.NINE_POINTS)


def run_checks() -> List[Tuple[str, bool]]:
    results = []
    for name, f in CHECKS:
        try:
            ok = bool(f())
        except Exception:  # a crash is a failed check, reported like any other
            ok = False
        results.append((name, ok))
    return results
