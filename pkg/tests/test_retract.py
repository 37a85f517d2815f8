from __future__ import annotations

import random
from fractions import Fraction as F

import pytest

from ambitropical import catalog
from ambitropical.alcoved import alcoved_new, dual_generators, generators, project_down, project_up
from ambitropical.errors import (EmptyInput, InvalidGenerator, NonConvergence, NotAFixedPoint,
                                 PairwiseConditionViolated)
from ambitropical.minmax import ShapleyOp, Max, Var
from ambitropical.retract import (AmbiCone, GeneratorSet, ambitropical_hull, co_approximation_interval,
                                  geodesic, hyperconvexity_witness, iterate_to_fixed_point, lattice_inf,
                                  lattice_sup, p_max, p_min, pmax_operator, pmin_operator, q_minus, q_plus)
from ambitropical.trop_core import NEG_INF, POS_INF, hilbert_dist, join, leq, meet, shift, sup_dist

from oracles import NEG, pmax_formula, pmin_formula, rand_point, rat

A, B = (1, 0, 0), (0, 1, 0)


def random_gens(rng, n=None, count=None):
    n = n or rng.randint(2, 4)
    pts = [rand_point(rng, n) for _ in range(count or rng.randint(1, 5))]
    return GeneratorSet.symmetric(pts)


def random_partial_gens(rng, n):
    """Max-plus generators with -inf entries, covering every coordinate."""
    gens = []
    for _ in range(rng.randint(1, 4)):
        gens.append(tuple(NEG if rng.random() < 0.4 else rat(rng) for _ in range(n)))
    gens = [g for g in gens if any(a != NEG for a in g)]
    gens += [tuple(0 if i == k else NEG for i in range(n)) for k in range(n) if rng.random() < 0.5]
    covered = {i for g in gens for i in range(n) if g[i] != NEG}
    gens += [tuple(rat(rng) if i == k else NEG for i in range(n)) for k in range(n) if k not in covered]
    return gens


# ---------------------------------------------------------------- projections

def test_two_point_projection_examples():
    E = GeneratorSet.symmetric([A, B])
    assert p_max(E, (0, 0, 0)) == (0, 0, -1)
    lo, hi = co_approximation_interval(E, (0, 0, 0))
    assert lo == (0, 0, -1)
    assert hi == (0, 0, 0)  # (0,0,0) = min(a, b) already lies in the min-plus span
    assert p_max(E, A) == A and p_min(E, B) == B


def test_projections_match_formula_with_partial_supports():
    rng = random.Random(41)
    for _ in range(200):
        n = rng.randint(1, 4)
        gens = random_partial_gens(rng, n)
        mins = [tuple(POS_INF if a == NEG else -a for a in g) for g in gens]
        E = GeneratorSet(n, gens, mins)
        for _ in range(5):
            x = rand_point(rng, n, -4, 4, 8)
            assert p_max(E, x) == pmax_formula(gens, x)
            assert p_min(E, x) == pmin_formula(mins, x)


def test_projection_axioms():
    rng = random.Random(42)
    for _ in range(150):
        E = random_gens(rng)
        x, y = rand_point(rng, E.n, -4, 4, 8), rand_point(rng, E.n, -4, 4, 8)
        c = rat(rng)
        for P in (p_max, p_min):
            px = P(E, x)
            assert P(E, px) == px
            assert P(E, shift(x, c)) == shift(px, c)
            assert leq(P(E, meet(x, y)), P(E, join(x, y)))
        assert leq(p_max(E, x), x) and leq(x, p_min(E, x))


def test_operator_forms_agree():
    rng = random.Random(43)
    for _ in range(60):
        E = random_gens(rng)
        up, down = pmax_operator(E), pmin_operator(E)
        for _ in range(5):
            x = rand_point(rng, E.n)
            assert up(x) == p_max(E, x) and down(x) == p_min(E, x)


def test_sunny_projections():
    # onto a tropical cone p_max is sunny, and p_min dually
    rng = random.Random(44)
    for _ in range(150):
        n = rng.randint(2, 4)
        gens = random_partial_gens(rng, n)
        E = GeneratorSet(n, gens, [tuple(POS_INF if a == NEG else a for a in g) for g in gens])
        x = rand_point(rng, n)
        y = p_max(E, x)
        for t in (F(1, 7), F(1, 2), F(5, 6), 2, 5):
            z = tuple(b + t * (a - b) for a, b in zip(x, y))
            assert p_max(E, z) == y
        y = p_min(E, x)
        for t in (F(1, 3), F(3, 4), 3):
            assert p_min(E, tuple(b + t * (a - b) for a, b in zip(x, y))) == y


def test_stable_points_are_fixed():
    rng = random.Random(45)
    for _ in range(100):
        E = random_gens(rng)
        x = q_plus(E, rand_point(rng, E.n))
        if p_max(E, x) == x and p_min(E, x) == x:
            assert q_minus(E, x) == x


# ---------------------------------------------------------------- generator sets

def test_generator_set_validation():
    with pytest.raises(EmptyInput):
        GeneratorSet(2, [], [(0, 0)])
    with pytest.raises(InvalidGenerator):
        GeneratorSet(2, [(POS_INF, 0)], [(0, 0)])
    with pytest.raises(InvalidGenerator):
        GeneratorSet(2, [(NEG_INF, NEG_INF)], [(0, 0)])
    with pytest.raises(InvalidGenerator):
        GeneratorSet(2, [(0, NEG_INF)], [(0, 0)])  # coordinate 2 never reached
    with pytest.raises(InvalidGenerator):
        GeneratorSet(3, [(0, 0)], [(0, 0)])
    assert GeneratorSet.symmetric([A, B]).is_polytope_description()
    assert not catalog.butterfly_generators().is_polytope_description()


def test_segment_family_is_exact():
    # with integer endpoints every breakpoint parameter has denominator dividing 240
    rng = random.Random(46)
    grid = [F(k, 240) for k in range(241)]
    for _ in range(40):
        a = tuple(rng.randint(-2, 2) for _ in range(3))
        b = tuple(rng.randint(-2, 2) for _ in range(3))
        pts = [tuple(p + s * (q - p) for p, q in zip(a, b)) for s in grid]
        E = GeneratorSet(3, (), (), max_segments=((a, b),), min_segments=((a, b),))
        for _ in range(5):
            x = rand_point(rng, 3, -3, 3, 4)
            assert p_max(E, x) == pmax_formula(pts, x)
            assert p_min(E, x) == pmin_formula(pts, x)


# ---------------------------------------------------------------- retractions

def _alcoved_description(rng, n):
    while True:
        M = tuple(tuple(NEG if rng.random() < 0.5 else rat(rng, -3, 1) for _ in range(n)) for _ in range(n))
        try:
            P = alcoved_new(M)
        except Exception:
            continue
        return P, GeneratorSet(n, generators(P), dual_generators(P))


def test_alcoved_description_gives_its_projections():
    rng = random.Random(47)
    for _ in range(60):
        P, E = _alcoved_description(rng, rng.randint(2, 4))
        for _ in range(5):
            x = rand_point(rng, P.n)
            assert q_minus(E, x) == project_down(P, x)
            assert q_plus(E, x) == project_up(P, x)


def _median(*vs):
    return tuple(sorted(c)[1] for c in zip(*vs))


def test_retractions_lie_between_canonical_ones():
    rng = random.Random(48)
    cones = [catalog.butterfly_generators(), catalog.bounded_butterfly_generators()]
    cones += [_alcoved_description(rng, 3)[1] for _ in range(4)]
    for E in cones:
        Qm = lambda x: q_minus(E, x)
        Qp = lambda x: q_plus(E, x)
        others = [
            lambda x: Qm(_median(x, Qm(x), Qp(x))),
            lambda x: Qp(_median(x, Qm(x), Qp(x))),
            lambda x: Qm(meet(join(x, Qm(x)), Qp(x))),
        ]
        for _ in range(100):
            x = rand_point(rng, E.n, -4, 4, 4)
            lo, hi = Qm(x), Qp(x)
            for P in others:
                y = P(x)
                assert P(y) == y and Qm(y) == y
                assert leq(lo, y) and leq(y, hi)


def test_hull_examples():
    H = ambitropical_hull([A])
    assert H.contains((F(7, 2), F(5, 2), F(5, 2))) and not H.contains((0, 0, 0))
    with pytest.raises(EmptyInput):
        ambitropical_hull([])
    with pytest.raises(InvalidGenerator):
        ambitropical_hull([(0, NEG_INF)])


def test_cone_operator_matches_retraction():
    rng = random.Random(49)
    for side in ("minus", "plus"):
        C = AmbiCone(catalog.bounded_butterfly_generators(), side)
        T = C.operator()
        for _ in range(50):
            x = rand_point(rng, 3)
            assert T(x) == C.retract(x)
    with pytest.raises(ValueError):
        AmbiCone(catalog.butterfly_generators(), "sideways")


# ---------------------------------------------------------------- iteration and lattice operations

def test_iteration_statuses():
    T = catalog.butterfly_operator()
    r = iterate_to_fixed_point(T, (0, 1, 1))
    assert (r.status, r.point, r.iterations) == ("fixed", (1, 1, 1), 1)
    r = iterate_to_fixed_point(T, (0, 0, 0))
    assert (r.status, r.iterations) == ("fixed", 0)
    rotate = ShapleyOp(2, (Var(1), Var(0)))
    r = iterate_to_fixed_point(rotate, (0, 1))
    assert r.status == "cycle" and r.period == 2
    drift = ShapleyOp(1, (Max((Var(0),)),))
    assert iterate_to_fixed_point(drift, (5,)).status == "fixed"


def test_stochastic_iteration_approaches_segment():
    T = catalog.stochastic_segment_operator()
    rng = random.Random(50)
    for _ in range(20):
        x = rand_point(rng, 3)
        residuals = []
        y = x
        for _ in range(30):
            z = T(y)
            residuals.append(sup_dist(z, y))
            y = z
        assert all(b <= a for a, b in zip(residuals, residuals[1:]))
        r = iterate_to_fixed_point(T, x, max_iters=400, tol_hilbert=F(1, 2 ** 40))
        assert r.status in ("fixed", "tolerance")
        p = r.point
        gap = abs((p[0] + p[1]) / 2 - p[2] - F(1, 2))
        assert gap <= F(1, 2 ** 38)
        assert p[0] >= p[2] - F(1, 2 ** 38) and p[1] >= p[2] - F(1, 2 ** 38)


def test_budget_status():
    T = catalog.stochastic_segment_operator()
    # from (2, 0, 0) the second coordinate creeps up to 1 geometrically
    r = iterate_to_fixed_point(T, (2, 0, 0), max_iters=50)
    assert r.status == "budget" and 0 < r.residual < F(1, 2 ** 20)


def test_butterfly_lattice_operations():
    T = catalog.butterfly_operator()
    x, y = (0, 1, 0), (0, 0, 1)
    s = lattice_sup(T, x, y)
    assert s == (1, 1, 1)
    i = lattice_inf(T, x, y)
    assert i == (0, 0, 0)
    rng = random.Random(51)
    ups = [T(rand_point(rng, 3)) for _ in range(3000)]
    for u in ups:
        if leq(x, u) and leq(y, u):
            assert leq(s, u)
        if leq(u, x) and leq(u, y):
            assert leq(u, i)
    assert lattice_sup(T, x, x) == x


def test_lattice_sup_on_alcoved_cone_is_join():
    rng = random.Random(52)
    for _ in range(40):
        P, E = _alcoved_description(rng, 3)
        C = AmbiCone(E)
        x, y = C.retract(rand_point(rng, 3)), C.retract(rand_point(rng, 3))
        assert lattice_sup(C.retract, x, y) == join(x, y)
        assert lattice_inf(C.retract, x, y) == meet(x, y)


def test_lattice_sup_reports_nonconvergence():
    T = catalog.stochastic_segment_operator()
    with pytest.raises(NonConvergence):
        lattice_sup(T, (2, 0, 0), (2, 0, 0), max_iters=50)


# ---------------------------------------------------------------- geodesics and hyperconvexity

def _additive(path, x, y):
    legs = list(zip(path, path[1:]))
    return (sum(sup_dist(a, b) for a, b in legs) == sup_dist(x, y)
            and sum(hilbert_dist(a, b) for a, b in legs) == hilbert_dist(x, y))


def test_geodesics():
    T = catalog.butterfly_operator()
    x, y = (1, 2, 0), (-1, -3, 4)
    assert T(x) == x and T(y) == y
    path = geodesic(T, x, y, 9)
    assert all(T(p) == p for p in path) and _additive(path, x, y)
    rng = random.Random(53)
    for _ in range(30):
        P, _ = _alcoved_description(rng, 3)
        x, y = project_down(P, rand_point(rng, 3)), project_down(P, rand_point(rng, 3))
        path = geodesic(lambda z: project_down(P, z), x, y, 7)
        assert _additive(path, x, y)
    assert geodesic(T, x, x, 4) == [x] * 4


def test_hyperconvexity_witness_examples():
    C = AmbiCone(catalog.bounded_butterfly_generators())
    c = (0, 1, 0)
    assert hyperconvexity_witness(C, [c], [0]) == c
    u, v = (0, 1, 0), (0, 0, 1)
    r = sup_dist(u, v) / 2
    w = hyperconvexity_witness(C, [u, v], [r, r])
    assert C.contains(w) and sup_dist(w, u) <= r and sup_dist(w, v) <= r
    with pytest.raises(PairwiseConditionViolated):
        hyperconvexity_witness(C, [u, v], [F(1, 4), F(1, 4)])
    with pytest.raises(NotAFixedPoint):
        hyperconvexity_witness(C, [(1, 0, 0)], [1])
