"""Independent reference computations used as test oracles.

Nothing here calls the library's algorithms; each function recomputes its
answer from definitions by brute force.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

NEG = float("-inf")


def rat(rng: random.Random, lo=-3, hi=3, den=4) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def rand_point(rng, n, lo=-3, hi=3, den=4):
    return tuple(rat(rng, lo, hi, den) for _ in range(n))


def rand_matrix(rng, n, lo, hi, p_inf=0.35, den=4):
    return tuple(tuple(NEG if rng.random() < p_inf else rat(rng, lo, hi, den) for _ in range(n))
                 for _ in range(n))


# ---------------------------------------------------------------- paths

def simple_paths(M, i):
    """Yield (end, weight, vertices) for every simple path starting at i, including the empty one."""
    n = len(M)

    def go(path, w):
        yield path[-1], w, tuple(path)
        for v in range(n):
            a = M[path[-1]][v]
            if a != NEG and v not in path:
                yield from go(path + [v], w + a)

    yield from go([i], 0)


def simple_circuits(M):
    """Every simple circuit as (vertices, weight), listed once per rotation start."""
    n = len(M)
    out = []
    for i in range(n):
        for end, w, verts in simple_paths(M, i):
            a = M[end][i]
            if a != NEG:
                out.append((verts, w + a))
    return out


def star_by_paths(M):
    """sup over all paths i -> j, or None when some circuit is positive."""
    if any(w > 0 for _, w in simple_circuits(M)):
        return None
    n = len(M)
    S = [[NEG] * n for _ in range(n)]
    for i in range(n):
        for end, w, _ in simple_paths(M, i):
            if w > S[i][end]:
                S[i][end] = w
    return tuple(tuple(r) for r in S)


def matmul_loops(A, B):
    out = []
    for i in range(len(A)):
        row = []
        for j in range(len(B[0])):
            best = NEG
            for k in range(len(B)):
                if A[i][k] != NEG and B[k][j] != NEG:
                    best = max(best, A[i][k] + B[k][j])
            row.append(best)
        out.append(tuple(row))
    return tuple(out)


# ---------------------------------------------------------------- games

def minimax_tree(A, B, k):
    """v^k by recursion over the full game tree, Min first then Max."""
    n, m = len(A[0]), len(A)

    def value(i, depth):
        if depth == 0:
            return 0
        best_min = None
        for j in range(m):
            if A[j][i] == NEG:
                continue
            best_max = max(B[j][s] + value(s, depth - 1) for s in range(n) if B[j][s] != NEG)
            v = -A[j][i] + best_max
            best_min = v if best_min is None else min(best_min, v)
        return best_min

    return tuple(value(i, k) for i in range(n))


# ---------------------------------------------------------------- cones

def pmax_formula(gens, x):
    """sup over generators g of (min over supp g of x - g) + g."""
    n = len(x)
    out = [NEG] * n
    for g in gens:
        supp = [i for i in range(n) if g[i] != NEG]
        lam = min(x[i] - g[i] for i in supp)
        for i in supp:
            out[i] = max(out[i], lam + g[i])
    return tuple(out)


def pmin_formula(gens, x):
    n = len(x)
    out = [float("inf")] * n
    for g in gens:
        supp = [i for i in range(n) if g[i] != float("inf")]
        lam = max(x[i] - g[i] for i in supp)
        for i in supp:
            out[i] = min(out[i], lam + g[i])
    return tuple(out)


# ---------------------------------------------------------------- Boolean

def cube(n):
    return list(product((0, 1), repeat=n))


def leq(a, b):
    return all(x <= y for x, y in zip(a, b))
