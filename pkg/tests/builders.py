"""Random instances built with the library's own term and game types."""

from __future__ import annotations

import random

from ambitropical.games import MeanPayoffGame
from ambitropical.minmax import Max, Min, ShapleyOp, Shift, Var

from oracles import NEG, rat


def rand_term(rng: random.Random, n: int, depth: int, shifts: bool = True):
    if depth == 0 or rng.random() < 0.3:
        t = Var(rng.randrange(n))
        if shifts and rng.random() < 0.4:
            t = Shift(rat(rng, -2, 2), t)
        return t
    kids = tuple(rand_term(rng, n, depth - 1, shifts) for _ in range(rng.randint(2, 3)))
    node = (Max if rng.random() < 0.5 else Min)(kids)
    if shifts and rng.random() < 0.2:
        node = Shift(rat(rng, -2, 2), node)
    return node


def rand_operator(rng, n, depth=3, shifts=True, n_out=None):
    return ShapleyOp(n, tuple(rand_term(rng, n, depth, shifts) for _ in range(n_out or n)))


def rand_game(rng, n, m, p_inf=0.4, lo=-2, hi=2):
    """Random proper game: every row of B and every column of A has a finite entry."""
    def row(p):
        r = [NEG if rng.random() < p else rat(rng, lo, hi, 2) for _ in range(n)]
        if all(a == NEG for a in r):
            r[rng.randrange(n)] = rat(rng, lo, hi, 2)
        return r

    A = [row(0.6) for _ in range(m)]
    for i in range(n):
        if all(A[j][i] == NEG for j in range(m)):
            A[rng.randrange(m)][i] = rat(rng, lo, hi, 2)
    B = [row(p_inf) for _ in range(m)]
    return MeanPayoffGame.from_matrices(A, B)


def rand_boolean_operator(rng, n):
    """Homogeneous operator whose coordinates mostly keep their own variable,
    so that its cube fixed set is a lattice of varied size."""
    coords = []
    for i in range(n):
        t = rand_term(rng, n, 2, shifts=False)
        kind = rng.randrange(4)
        coords.append(Var(i) if kind == 0 else Min((Var(i), t)) if kind == 1
                      else Max((Var(i), t)) if kind == 2 else t)
    return ShapleyOp(n, tuple(coords))
