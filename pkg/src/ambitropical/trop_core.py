"""Exact max-plus / min-plus arithmetic over the extended rationals.

Finite scalars are Python ``int`` or :class:`fractions.Fraction`; the two
infinities are the float sentinels ``NEG_INF`` and ``POS_INF``.  Python's
numeric tower already orders and adds these correctly, so the only thing we
guard is the undefined sum ``NEG_INF + POS_INF``.

Vectors are tuples, matrices are tuples of row tuples.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Tuple, Union

from .errors import DimensionMismatch, ImproperMatrix, PositiveCircuit, UndefinedSum

NEG_INF = -math.inf
POS_INF = math.inf

Scalar = Union[int, Fraction, float]
Vec = Tuple[Scalar, ...]
Mat = Tuple[Vec, ...]


def ext(value) -> Scalar:
    """Coerce ``value`` to an extended rational.

    Accepts ints, Fractions, the strings ``"p/q"``, ``"-inf"``, ``"+inf"``,
    and floats (finite floats are converted exactly via their decimal repr).
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else value
    if isinstance(value, str):
        s = value.strip()
        if s in ("-inf", "-Infinity"):
            return NEG_INF
        if s in ("+inf", "inf", "Infinity", "+Infinity"):
            return POS_INF
        return ext(Fraction(s))
    if isinstance(value, float):
        if math.isnan(value):
            raise ValueError("NaN is not an extended rational")
        if math.isinf(value):
            return value
        return ext(Fraction(repr(value)))
    if isinstance(value, Rational):
        return ext(Fraction(value.numerator, value.denominator))
    raise TypeError(f"cannot interpret {value!r} as an extended rational")


def vec(values: Iterable) -> Vec:
    return tuple(ext(v) for v in values)


def mat(rows: Iterable[Iterable]) -> Mat:
    m = tuple(vec(r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise DimensionMismatch("ragged matrix")
    return m


def is_finite(a: Scalar) -> bool:
    return not (isinstance(a, float) and math.isinf(a))


def all_finite(x: Sequence[Scalar]) -> bool:
    return all(is_finite(a) for a in x)


def add(a: Scalar, b: Scalar) -> Scalar:
    """Extended sum; ``NEG_INF + POS_INF`` raises :class:`UndefinedSum`."""
    if isinstance(a, float) and isinstance(b, float) and a != b:
        raise UndefinedSum("NEG_INF + POS_INF is undefined")
    return a + b


def shape(A: Mat) -> Tuple[int, int]:
    return len(A), (len(A[0]) if A else 0)


def identity(n: int) -> Mat:
    return tuple(tuple(0 if i == j else NEG_INF for j in range(n)) for i in range(n))


def transpose(A: Mat) -> Mat:
    return tuple(zip(*A)) if A else ()


def trop_matmul(A: Mat, B: Mat) -> Mat:
    """Max-plus product: entry (i, j) is max over k of A[i][k] + B[k][j]."""
    m, n = shape(A)
    n2, p = shape(B)
    if n != n2 and m and n2:
        raise DimensionMismatch(f"inner dimensions {n} and {n2} differ")
    out = []
    for i in range(m):
        row = []
        for j in range(p):
            best = NEG_INF
            for k in range(n):
                s = add(A[i][k], B[k][j])
                if s > best:
                    best = s
            row.append(best)
        out.append(tuple(row))
    return tuple(out)


def trop_matvec(A: Mat, x: Sequence[Scalar]) -> Vec:
    """Max-plus action A x."""
    if A and len(A[0]) != len(x):
        raise DimensionMismatch(f"matrix has {len(A[0])} columns, vector {len(x)} entries")
    out = []
    for row in A:
        best = NEG_INF
        for a, xk in zip(row, x):
            if a != NEG_INF:
                s = add(a, xk)
                if s > best:
                    best = s
        out.append(best)
    return tuple(out)


def check_proper_columns(A: Mat) -> None:
    for k, col in enumerate(transpose(A)):
        if all(a == NEG_INF for a in col):
            raise ImproperMatrix(f"column {k + 1} is identically -inf", column=k + 1)


def adjoint_apply(A: Mat, y: Sequence[Scalar]) -> Vec:
    """Min-plus residuation: (A# y)_k = min over i of (-A[i][k] + y[i]).

    This is the largest x with A x <= y.
    """
    if len(A) != len(y):
        raise DimensionMismatch(f"matrix has {len(A)} rows, vector {len(y)} entries")
    check_proper_columns(A)
    p = len(A[0]) if A else 0
    out = []
    for k in range(p):
        best = POS_INF
        for i, yi in enumerate(y):
            a = A[i][k]
            if a != NEG_INF:
                s = add(-a, yi)
                if s < best:
                    best = s
        out.append(best)
    return tuple(out)


def kleene_star(M: Mat) -> Mat:
    """M* = I v M v ... v M^(n-1), by repeated squaring of I v M.

    Raises :class:`PositiveCircuit` when the digraph of ``M`` carries a circuit
    of positive weight.
    """
    n = len(M)
    if any(len(r) != n for r in M):
        raise DimensionMismatch("Kleene star needs a square matrix")
    if any(a == POS_INF for r in M for a in r):
        raise ValueError("+inf entries are not allowed in a max-plus matrix")
    P = tuple(tuple(max(M[i][j], 0) if i == j else M[i][j] for j in range(n)) for i in range(n))
    reach = 1
    while reach < n:
        P = _square(P)
        reach *= 2
    if any(P[i][i] > 0 for i in range(n)):
        # some simple circuit is positive; it need not pass through i
        raise next(w for w in map(lambda s: _circuit_witness(M, s), range(n)) if w is not None)
    return P


def _square(P: Mat) -> Mat:
    n = len(P)
    out = []
    for i in range(n):
        Pi = P[i]
        row = [NEG_INF] * n
        for k in range(n):
            a = Pi[k]
            if a == NEG_INF:
                continue
            Pk = P[k]
            for j in range(n):
                b = Pk[j]
                if b != NEG_INF:
                    s = a + b
                    if s > row[j]:
                        row[j] = s
        out.append(tuple(row))
    return tuple(out)


def _circuit_witness(M: Mat, start: int):
    # best[k][v]: heaviest walk of exactly k arcs from start to v
    n = len(M)
    best = [[NEG_INF] * n for _ in range(n + 1)]
    parent = [[None] * n for _ in range(n + 1)]
    best[0][start] = 0
    for k in range(1, n + 1):
        for u in range(n):
            w = best[k - 1][u]
            if w == NEG_INF:
                continue
            for v in range(n):
                a = M[u][v]
                if a != NEG_INF and w + a > best[k][v]:
                    best[k][v] = w + a
                    parent[k][v] = u
    k = next((k for k in range(1, n + 1) if best[k][start] > 0), None)
    if k is None:
        return None
    walk = [start]
    v = start
    for step in range(k, 0, -1):
        v = parent[step][v]
        walk.append(v)
    walk.reverse()  # start ... start, k arcs
    # split the closed walk into simple circuits; one of them is positive
    stack: list = []
    for v in walk:
        if v in stack:
            pos = stack.index(v)
            cycle = stack[pos:]
            weight = sum(M[cycle[t]][cycle[(t + 1) % len(cycle)]] for t in range(len(cycle)))
            if weight > 0:
                return PositiveCircuit(cycle, weight)
            del stack[pos + 1:]
        else:
            stack.append(v)
    raise AssertionError("closed walk of positive weight without a positive circuit")


def circuit_weight(M: Mat, circuit: Sequence[int]) -> Scalar:
    c = list(circuit)
    return sum(M[c[t]][c[(t + 1) % len(c)]] for t in range(len(c)))


def top(x: Sequence[Scalar]) -> Scalar:
    return max(x)


def bottom(x: Sequence[Scalar]) -> Scalar:
    return min(x)


def hilbert_seminorm(x: Sequence[Scalar]) -> Scalar:
    return max(x) - min(x)


def sup_norm(x: Sequence[Scalar]) -> Scalar:
    return max(abs(a) for a in x) if x else 0


def sup_dist(x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
    return max(abs(a - b) for a, b in zip(x, y)) if x else 0


def hilbert_dist(x: Sequence[Scalar], y: Sequence[Scalar]) -> Scalar:
    d = [a - b for a, b in zip(x, y)]
    return max(d) - min(d)


def shift(x: Sequence[Scalar], c: Scalar) -> Vec:
    return tuple(a + c for a in x)


def sub(x: Sequence[Scalar], y: Sequence[Scalar]) -> Vec:
    return tuple(a - b for a, b in zip(x, y))


def join(x: Sequence[Scalar], y: Sequence[Scalar]) -> Vec:
    return tuple(max(a, b) for a, b in zip(x, y))


def meet(x: Sequence[Scalar], y: Sequence[Scalar]) -> Vec:
    return tuple(min(a, b) for a, b in zip(x, y))


def leq(x: Sequence[Scalar], y: Sequence[Scalar]) -> bool:
    return all(a <= b for a, b in zip(x, y))


def normalize(x: Sequence[Scalar], anchor: int = -1) -> Vec:
    """Representative of x modulo constants with coordinate ``anchor`` at 0."""
    c = x[anchor]
    return tuple(a - c for a in x)
