"""Min-max terms and the Shapley operators they define.

A coordinate of an operator is a tree built from variables, constant shifts,
binary-or-wider max/min nodes, and (as an extension beyond the deterministic
grammar) affine-stochastic leaves ``r + sum_j p_j x_j``.  Indices are 0-based
in memory; the JSON codec converts to 1-based.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .errors import DimensionMismatch, ImproperMatrix, NotDeterministic, SizeBlowup
from .trop_core import NEG_INF, POS_INF, Mat, Scalar, Vec, adjoint_apply, check_proper_columns, ext, mat, trop_matvec

DEFAULT_ROW_CAP = 10 ** 6
_ABSORB_LIMIT = 4000


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var:
    i: int

    def value(self, x):
        return x[self.i]


@dataclass(frozen=True)
class Shift:
    c: Scalar
    arg: "Term"

    def value(self, x):
        return self.c + self.arg.value(x)


@dataclass(frozen=True)
class Max:
    args: Tuple["Term", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("max node needs at least one argument")

    def value(self, x):
        return max(a.value(x) for a in self.args)


@dataclass(frozen=True)
class Min:
    args: Tuple["Term", ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("min node needs at least one argument")

    def value(self, x):
        return min(a.value(x) for a in self.args)


@dataclass(frozen=True)
class Affine:
    """``r + sum_j p[j] * x[j]`` with p a probability vector."""

    r: Scalar
    p: Tuple[Scalar, ...]

    def __post_init__(self):
        p = tuple(ext(v) for v in self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", ext(self.r))
        if any(v < 0 for v in p) or sum(p) != 1:
            raise ValueError("affine leaf needs a probability row")

    def value(self, x):
        return self.r + sum(pj * xj for pj, xj in zip(self.p, x) if pj)


Term = Union[Var, Shift, Max, Min, Affine]


def var_indices(t: Term) -> set:
    if isinstance(t, Var):
        return {t.i}
    if isinstance(t, Shift):
        return var_indices(t.arg)
    if isinstance(t, Affine):
        return {j for j, pj in enumerate(t.p) if pj}
    return set().union(*(var_indices(a) for a in t.args))


def is_deterministic(t: Term) -> bool:
    if isinstance(t, Affine):
        return False
    if isinstance(t, Var):
        return True
    if isinstance(t, Shift):
        return is_deterministic(t.arg)
    return all(is_deterministic(a) for a in t.args)


def _maxn(args):
    args = tuple(args)
    return args[0] if len(args) == 1 else Max(args)


def _minn(args):
    args = tuple(args)
    return args[0] if len(args) == 1 else Min(args)


# ---------------------------------------------------------------- operators

@dataclass(frozen=True)
class ShapleyOp:
    n_in: int
    coords: Tuple[Term, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(self.coords))
        for t in self.coords:
            bad = [i for i in var_indices(t) if not 0 <= i < self.n_in]
            if bad:
                raise DimensionMismatch(f"variable index {bad[0] + 1} outside 1..{self.n_in}")
        for t in _walk_affine(self.coords):
            if len(t.p) != self.n_in:
                raise DimensionMismatch("affine row length differs from n_in")

    @property
    def n_out(self) -> int:
        return len(self.coords)

    def __call__(self, x) -> Vec:
        return evaluate(self, x)

    def is_deterministic(self) -> bool:
        return all(is_deterministic(t) for t in self.coords)


def _walk_affine(terms):
    for t in terms:
        if isinstance(t, Affine):
            yield t
        elif isinstance(t, Shift):
            yield from _walk_affine((t.arg,))
        elif isinstance(t, (Max, Min)):
            yield from _walk_affine(t.args)


def evaluate(T: ShapleyOp, x: Sequence) -> Vec:
    if len(x) != T.n_in:
        raise DimensionMismatch(f"operator expects {T.n_in} inputs, got {len(x)}")
    return tuple(t.value(x) for t in T.coords)


def identity_op(n: int) -> ShapleyOp:
    return ShapleyOp(n, tuple(Var(i) for i in range(n)))


def as_map(T) -> Callable[[Sequence], Vec]:
    """Accept a ShapleyOp, a ProperPair, or any callable on tuples."""
    return T if callable(T) else (lambda x: evaluate(T, x))


# ---------------------------------------------------------------- normal forms

@dataclass(frozen=True)
class NormalForm:
    """Two-level form.

    ``kind == "cnf"``: min over rows of max_i (c_ki + x_i), absent = -inf.
    ``kind == "dnf"``: max over rows of min_i (c_ki + x_i), absent = +inf.
    """

    kind: str
    n: int
    rows: Tuple[Vec, ...]

    def value(self, x) -> Scalar:
        if self.kind == "cnf":
            return min(max(c + xi for c, xi in zip(row, x) if c != NEG_INF) for row in self.rows)
        return max(min(c + xi for c, xi in zip(row, x) if c != POS_INF) for row in self.rows)


def _absorb(rows: List[Dict[int, Scalar]], stronger) -> List[Dict[int, Scalar]]:
    uniq = {tuple(sorted(r.items())): r for r in rows}
    rows = list(uniq.values())
    if len(rows) > _ABSORB_LIMIT:
        return rows
    return [r for a, r in enumerate(rows)
            if not any(a != b and s.keys() <= r.keys() and all(stronger(s[i], r[i]) for i in s)
                       for b, s in enumerate(rows))]


def _two_level(t: Term, outer_is_max: bool, cap: int) -> List[Dict[int, Scalar]]:
    """Rows of the DNF (outer max) or CNF (outer min) of a deterministic term."""
    if isinstance(t, Var):
        return [{t.i: 0}]
    if isinstance(t, Shift):
        return [{i: c + t.c for i, c in r.items()} for r in _two_level(t.arg, outer_is_max, cap)]
    if isinstance(t, Affine):
        raise NotDeterministic("affine leaves have no min-max normal form")
    # in a DNF a max node concatenates rows and a min node distributes;
    # CNF is the mirror image
    stronger = (lambda s, r: s >= r) if outer_is_max else (lambda s, r: s <= r)
    merge = min if outer_is_max else max
    parts = [_two_level(a, outer_is_max, cap) for a in t.args]
    if isinstance(t, Max) == outer_is_max:
        rows = [r for p in parts for r in p]
        if len(rows) > cap:
            raise SizeBlowup(f"normal form exceeds {cap} rows", cap=cap)
        return _absorb(rows, stronger)
    acc = parts[0]
    for p in parts[1:]:
        if len(acc) * len(p) > cap:
            raise SizeBlowup(f"normal form exceeds {cap} rows", cap=cap)
        prod = []
        for r in acc:
            for s in p:
                m = dict(r)
                for i, c in s.items():
                    m[i] = merge(m[i], c) if i in m else c
                prod.append(m)
        acc = _absorb(prod, stronger)
    return acc


def _rows_to_form(kind, rows, n):
    absent = NEG_INF if kind == "cnf" else POS_INF
    dense = [tuple(r.get(i, absent) for i in range(n)) for r in rows]
    return NormalForm(kind, n, tuple(sorted(dense)))


def cnf(T, n: Optional[int] = None, cap: int = DEFAULT_ROW_CAP):
    """CNF of a term (returns a NormalForm) or of each coordinate of an operator."""
    if isinstance(T, ShapleyOp):
        return tuple(cnf(t, T.n_in, cap) for t in T.coords)
    n = n if n is not None else max(var_indices(T)) + 1
    return _rows_to_form("cnf", _two_level(T, False, cap), n)


def dnf(T, n: Optional[int] = None, cap: int = DEFAULT_ROW_CAP):
    """DNF of a term (returns a NormalForm) or of each coordinate of an operator."""
    if isinstance(T, ShapleyOp):
        return tuple(dnf(t, T.n_in, cap) for t in T.coords)
    n = n if n is not None else max(var_indices(T)) + 1
    return _rows_to_form("dnf", _two_level(T, True, cap), n)


# ---------------------------------------------------------------- proper pairs

@dataclass(frozen=True)
class ProperPair:
    """T = A# o B, i.e. T_i(x) = min_j (-A[j][i] + max_k (B[j][k] + x_k))."""

    A: Mat
    B: Mat

    def __post_init__(self):
        A, B = mat(self.A), mat(self.B)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if len(A) != len(B):
            raise DimensionMismatch("A and B must have the same number of rows")
        check_proper_columns(A)
        for j, row in enumerate(B):
            if all(b == NEG_INF for b in row):
                raise ImproperMatrix(f"row {j + 1} of B is identically -inf", row=j + 1)
        if any(a == POS_INF for r in A + B for a in r):
            raise ValueError("+inf entries are not allowed in a proper pair")

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n_out(self) -> int:
        return len(self.A[0])

    @property
    def n_in(self) -> int:
        return len(self.B[0])

    def __call__(self, x) -> Vec:
        return adjoint_apply(self.A, trop_matvec(self.B, x))

    def to_operator(self) -> ShapleyOp:
        coords = []
        for i in range(self.n_out):
            rows = []
            for j in range(self.m):
                a = self.A[j][i]
                if a == NEG_INF:
                    continue
                inner = _maxn(Var(k) if b == 0 else Shift(b, Var(k))
                              for k, b in enumerate(self.B[j]) if b != NEG_INF)
                rows.append(inner if a == 0 else Shift(-a, inner))
            coords.append(_minn(rows))
        return ShapleyOp(self.n_in, coords)


def to_proper_pair(T: ShapleyOp, cap: int = DEFAULT_ROW_CAP) -> ProperPair:
    """Write a deterministic operator as A# o B with A over {0, -inf}.

    Each row of B is a clause of some coordinate's CNF; identical clauses are
    shared between coordinates.
    """
    if not T.is_deterministic():
        raise NotDeterministic("operator has affine leaves")
    index: Dict[Vec, int] = {}
    used: List[set] = []
    for i, form in enumerate(cnf(T, cap=cap)):
        for row in form.rows:
            j = index.setdefault(row, len(index))
            if j == len(used):
                used.append(set())
            used[j].add(i)
    B = tuple(index)
    A = tuple(tuple(0 if i in used[j] else NEG_INF for i in range(T.n_out)) for j in range(len(B)))
    return ProperPair(A, B)


# ---------------------------------------------------------------- combinators

def substitute(t: Term, inner: Sequence[Term], n: int) -> Term:
    """Replace each Var(i) of ``t`` by ``inner[i]`` (terms over n variables)."""
    if isinstance(t, Var):
        return inner[t.i]
    if isinstance(t, Shift):
        return Shift(t.c, substitute(t.arg, inner, n))
    if isinstance(t, (Max, Min)):
        return type(t)(tuple(substitute(a, inner, n) for a in t.args))
    # an affine leaf stays affine only if what it averages is affine
    p = [Fraction(0)] * n
    r = t.r
    for j, pj in enumerate(t.p):
        if not pj:
            continue
        s = inner[j]
        if isinstance(s, Var):
            p[s.i] += pj
        elif isinstance(s, Affine):
            r += pj * s.r
            for k, q in enumerate(s.p):
                p[k] += pj * q
        else:
            raise NotDeterministic("cannot average min-max terms inside an affine leaf")
    return Affine(r, tuple(p))


def compose(T1: ShapleyOp, T2: ShapleyOp) -> ShapleyOp:
    """x -> T1(T2(x))."""
    if T1.n_in != T2.n_out:
        raise DimensionMismatch(f"cannot feed {T2.n_out} outputs into {T1.n_in} inputs")
    return ShapleyOp(T2.n_in, tuple(substitute(t, T2.coords, T2.n_in) for t in T1.coords))


def join(T1: ShapleyOp, T2: ShapleyOp) -> ShapleyOp:
    _same_shape(T1, T2)
    return ShapleyOp(T1.n_in, tuple(Max((a, b)) for a, b in zip(T1.coords, T2.coords)))


def meet(T1: ShapleyOp, T2: ShapleyOp) -> ShapleyOp:
    _same_shape(T1, T2)
    return ShapleyOp(T1.n_in, tuple(Min((a, b)) for a, b in zip(T1.coords, T2.coords)))


def _same_shape(T1, T2):
    if (T1.n_in, T1.n_out) != (T2.n_in, T2.n_out):
        raise DimensionMismatch("operators have different shapes")


def flip(T: ShapleyOp) -> ShapleyOp:
    """x -> -T(-x)."""

    def go(t):
        if isinstance(t, Var):
            return t
        if isinstance(t, Shift):
            return Shift(-t.c, go(t.arg))
        if isinstance(t, Max):
            return Min(tuple(go(a) for a in t.args))
        if isinstance(t, Min):
            return Max(tuple(go(a) for a in t.args))
        return Affine(-t.r, t.p)

    return ShapleyOp(T.n_in, tuple(go(t) for t in T.coords))


# ---------------------------------------------------------------- derivatives

def _deriv(t: Term, u) -> Tuple[Scalar, Term]:
    if isinstance(t, Var):
        return u[t.i], t
    if isinstance(t, Shift):
        v, d = _deriv(t.arg, u)
        return v + t.c, d
    if isinstance(t, Affine):
        return t.value(u), Affine(0, t.p)
    parts = [_deriv(a, u) for a in t.args]
    best = (max if isinstance(t, Max) else min)(v for v, _ in parts)
    active = tuple(d for v, d in parts if v == best)
    return best, (_maxn(active) if isinstance(t, Max) else _minn(active))


def semiderivative(T: ShapleyOp, u: Sequence) -> ShapleyOp:
    """Homogeneous operator h -> lim (T(u + s h) - T(u)) / s as s -> 0+."""
    if len(u) != T.n_in:
        raise DimensionMismatch("base point has the wrong length")
    return ShapleyOp(T.n_in, tuple(_deriv(t, u)[1] for t in T.coords))


def _drop_constants(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, Shift):
        return _drop_constants(t.arg)
    if isinstance(t, Affine):
        return Affine(0, t.p)
    cls = type(t)
    return cls(tuple(_drop_constants(a) for a in t.args))


def recession(T: ShapleyOp) -> ShapleyOp:
    """Homogeneous operator x -> lim T(s x) / s as s -> infinity."""
    return ShapleyOp(T.n_in, tuple(_drop_constants(t) for t in T.coords))


# ---------------------------------------------------------------- axioms

@dataclass(frozen=True)
class AxiomReport:
    ok: bool
    axiom: Optional[str] = None
    witness: Optional[dict] = None


def random_rational(rng: random.Random, lo=-5, hi=5, den=8) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), rng.randint(1, den))


def check_shapley_axioms(T, trials: int, rng: Optional[random.Random] = None,
                         n: Optional[int] = None) -> AxiomReport:
    """Sample monotonicity, additive homogeneity and top-nonexpansiveness.

    ``T`` is a ShapleyOp, or any callable on tuples when ``n`` is given.
    """
    rng = rng or random.Random(0)
    f = as_map(T)
    n = n if n is not None else T.n_in
    for _ in range(trials):
        x = tuple(random_rational(rng) for _ in range(n))
        d = tuple(abs(random_rational(rng)) if rng.random() < 0.7 else 0 for _ in range(n))
        y = tuple(a + b for a, b in zip(x, d))
        lam = random_rational(rng)
        fx, fy = f(x), f(y)
        if not all(a <= b for a, b in zip(fx, fy)):
            return AxiomReport(False, "monotone", {"x": x, "y": y})
        fxl = f(tuple(a + lam for a in x))
        if fxl != tuple(a + lam for a in fx):
            return AxiomReport(False, "additively homogeneous", {"x": x, "lambda": lam})
        z = tuple(random_rational(rng) for _ in range(n))
        fz = f(z)
        if max(a - b for a, b in zip(fx, fz)) > max(a - b for a, b in zip(x, z)):
            return AxiomReport(False, "top-nonexpansive", {"x": x, "y": z})
    return AxiomReport(True)
