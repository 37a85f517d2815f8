"""Deterministic mean-payoff games given by a proper pair (A, B).

From state i, Min picks a row j with A[j][i] finite and pays -A[j][i]; then
Max picks a state k with B[j][k] finite and receives B[j][k].  The dynamic
programming operator is ``T(x)_i = min_j (-A[j][i] + max_k (B[j][k] + x_k))``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .alcoved import AlcovedPoly, alcoved_new, dimension, from_star, is_subset
from .errors import DimensionMismatch, EmptyPolyhedron, HorizonTooLarge, NotAnEigenvector, PositiveCircuit, SizeCap
from .minmax import ProperPair, ShapleyOp, to_proper_pair
from .trop_core import NEG_INF, Mat, Vec, kleene_star, shift, top, trop_matvec, vec

DEFAULT_CELL_CAP = 14
DEFAULT_MAX_HORIZON = 12
DEFAULT_PATH_CAP = 10 ** 6


@dataclass(frozen=True)
class MeanPayoffGame:
    pair: ProperPair

    def __post_init__(self):
        if self.pair.n_in != self.pair.n_out:
            raise DimensionMismatch("a game needs as many Min states as Max targets")

    @classmethod
    def from_matrices(cls, A, B) -> "MeanPayoffGame":
        return cls(ProperPair(A, B))

    @classmethod
    def from_operator(cls, T: ShapleyOp) -> "MeanPayoffGame":
        return cls(to_proper_pair(T))

    @property
    def A(self) -> Mat:
        return self.pair.A

    @property
    def B(self) -> Mat:
        return self.pair.B

    @property
    def n(self) -> int:
        return self.pair.n_in

    @property
    def m(self) -> int:
        return self.pair.m

    def __call__(self, x) -> Vec:
        return self.pair(x)

    def recentered(self, lam) -> "MeanPayoffGame":
        """Same game with every Max payment lowered by ``lam``."""
        B = tuple(tuple(b - lam if b != NEG_INF else b for b in row) for row in self.B)
        return MeanPayoffGame(ProperPair(self.A, B))


@dataclass(frozen=True)
class PolicyPair:
    """Nondeterministic policies: sigma[i] is a set of rows, pi[j] a set of states."""

    sigma: Tuple[FrozenSet[int], ...]
    pi: Tuple[FrozenSet[int], ...]

    def __post_init__(self):
        object.__setattr__(self, "sigma", tuple(frozenset(s) for s in self.sigma))
        object.__setattr__(self, "pi", tuple(frozenset(s) for s in self.pi))

    def sigma_inverse(self) -> Tuple[FrozenSet[int], ...]:
        inv = [set() for _ in self.pi]
        for i, rows in enumerate(self.sigma):
            for j in rows:
                inv[j].add(i)
        return tuple(frozenset(s) for s in inv)

    def is_proper(self) -> bool:
        return all(self.sigma) and all(self.pi)

    def merge(self, other: "PolicyPair") -> "PolicyPair":
        return PolicyPair(tuple(a | b for a, b in zip(self.sigma, other.sigma)),
                          tuple(a | b for a, b in zip(self.pi, other.pi)))

    def refines(self, other: "PolicyPair") -> bool:
        """True if every choice allowed here is allowed by ``other``."""
        return (all(a <= b for a, b in zip(self.sigma, other.sigma))
                and all(a <= b for a, b in zip(self.pi, other.pi)))


def _check_policy(G: MeanPayoffGame, tau: PolicyPair) -> None:
    if len(tau.sigma) != G.n or len(tau.pi) != G.m:
        raise DimensionMismatch("policy pair does not match the game")
    for i, rows in enumerate(tau.sigma):
        if any(G.A[j][i] == NEG_INF for j in rows):
            raise ValueError(f"sigma({i + 1}) uses an arc of weight -inf")
    for j, states in enumerate(tau.pi):
        if any(G.B[j][k] == NEG_INF for k in states):
            raise ValueError(f"pi({j + 1}) uses an arc of weight -inf")


# ---------------------------------------------------------------- values

def value_iteration(G: MeanPayoffGame, horizon: int) -> Tuple[Vec, Optional[Vec]]:
    """Return v^k = T^k(0) and the mean estimate v^k / k (None for k = 0)."""
    v = (0,) * G.n
    for _ in range(horizon):
        v = G(v)
    if horizon == 0:
        return v, None
    return v, tuple(Fraction(a) / horizon for a in v)


def check_eigen(G: MeanPayoffGame, u: Sequence, lam) -> bool:
    u = vec(u)
    lam = vec([lam])[0]
    return G(u) == shift(u, lam)


def find_eigen(G: MeanPayoffGame, max_iters: int = 10000) -> Optional[Tuple[Vec, object]]:
    """Search T(u) = lam + u along normalized value iteration.

    Returns ``(u, lam)`` with ``max(u) == 0``, or None when the iterates cycle
    modulo constants without a constant increment, or the budget runs out.
    """
    w = (0,) * G.n
    seen = set()
    for _ in range(max_iters):
        y = G(w)
        d = {a - b for a, b in zip(y, w)}
        if len(d) == 1:
            lam = d.pop()
            u = shift(w, -top(w))
            if check_eigen(G, u, lam):
                return u, lam
        w = shift(y, -top(y))
        if w in seen:
            return None
        seen.add(w)
    return None


def calibrated_policies(G: MeanPayoffGame, u: Sequence, lam) -> PolicyPair:
    """Full argmin / argmax policies at an eigenvector."""
    u = vec(u)
    if not check_eigen(G, u, lam):
        raise NotAnEigenvector("T(u) != lambda + u")
    Bu = trop_matvec(G.B, u)
    sigma = []
    for i in range(G.n):
        vals = {j: -G.A[j][i] + Bu[j] for j in range(G.m) if G.A[j][i] != NEG_INF}
        best = min(vals.values())
        sigma.append(frozenset(j for j, v in vals.items() if v == best))
    pi = []
    for j in range(G.m):
        vals = {k: G.B[j][k] + u[k] for k in range(G.n) if G.B[j][k] != NEG_INF}
        best = max(vals.values())
        pi.append(frozenset(k for k, v in vals.items() if v == best))
    return PolicyPair(sigma, pi)


def verify_calibrated(G: MeanPayoffGame, u: Sequence, lam, policies: PolicyPair, horizon: int,
                      max_horizon: int = DEFAULT_MAX_HORIZON, path_cap: int = DEFAULT_PATH_CAP) -> bool:
    """Check both path inequalities by enumerating every play of length ``horizon``.

    With Min restricted to sigma every play pays at most u_i0 - u_ik + k lam;
    with Max restricted to pi every play pays at least that much.
    """
    u = vec(u)
    lam = vec([lam])[0]
    _check_policy(G, policies)
    if horizon > max_horizon:
        raise HorizonTooLarge(f"horizon {horizon} exceeds {max_horizon}", cap=max_horizon)
    any_row = [[j for j in range(G.m) if G.A[j][i] != NEG_INF] for i in range(G.n)]
    any_state = [[k for k in range(G.n) if G.B[j][k] != NEG_INF] for j in range(G.m)]
    branching = max(len(r) for r in any_row) * max(len(s) for s in any_state)
    if G.n * branching ** horizon > path_cap:
        raise HorizonTooLarge(f"more than {path_cap} plays of length {horizon}", cap=path_cap)

    min_moves = [sorted(s) for s in policies.sigma]
    max_moves = [sorted(s) for s in policies.pi]

    def plays(i, k, rows, states):
        # yields (payoff, final state)
        if k == 0:
            yield 0, i
            return
        for j in rows[i]:
            for s in states[j]:
                step = -G.A[j][i] + G.B[j][s]
                for rest, end in plays(s, k - 1, rows, states):
                    yield step + rest, end

    for i0 in range(G.n):
        for pay, end in plays(i0, horizon, min_moves, any_state):
            if pay > u[i0] - u[end] + horizon * lam:
                return False
        for pay, end in plays(i0, horizon, any_row, max_moves):
            if pay < u[i0] - u[end] + horizon * lam:
                return False
    return True


# ---------------------------------------------------------------- cells

def type_of(G: MeanPayoffGame, x: Sequence) -> PolicyPair:
    """Maximal type of x: attainers of max_l ((A v B)_jl + x_l) among B and A entries."""
    x = vec(x)
    sigma = [set() for _ in range(G.n)]
    pi = []
    for j in range(G.m):
        Aj, Bj = G.A[j], G.B[j]
        val = max(max(a, b) + xl for a, b, xl in zip(Aj, Bj, x) if max(a, b) != NEG_INF)
        pi.append(frozenset(k for k in range(G.n) if Bj[k] != NEG_INF and Bj[k] + x[k] == val))
        for i in range(G.n):
            if Aj[i] != NEG_INF and Aj[i] + x[i] == val:
                sigma[i].add(j)
    return PolicyPair(sigma, pi)


def _row_constraints(G: MeanPayoffGame, j: int, pis, sinv):
    """Lower bounds x_a - x_l >= c contributed by row j."""
    C = [max(a, b) for a, b in zip(G.A[j], G.B[j])]
    out = []
    for anchor, base in [(k, G.B[j][k]) for k in pis] + [(i, G.A[j][i]) for i in sinv]:
        for l, c in enumerate(C):
            if c != NEG_INF:
                # l == anchor is a loop; positive exactly when the entry does not attain the max
                out.append((anchor, l, c - base))
    return out


def _constraint_matrix(n, constraints, start=None):
    L = [list(r) for r in start] if start else [[NEG_INF] * n for _ in range(n)]
    for a, l, c in constraints:
        if c > L[a][l]:
            L[a][l] = c
    return tuple(tuple(r) for r in L)


def cell_of_type(G: MeanPayoffGame, tau: PolicyPair) -> Optional[AlcovedPoly]:
    """The alcoved polyhedron X_tau, or None if its system is infeasible."""
    _check_policy(G, tau)
    sinv = tau.sigma_inverse()
    cons = [c for j in range(G.m) for c in _row_constraints(G, j, tau.pi[j], sinv[j])]
    try:
        return alcoved_new(_constraint_matrix(G.n, cons))
    except EmptyPolyhedron:
        return None


def maximal_type(G: MeanPayoffGame, P: AlcovedPoly) -> PolicyPair:
    """The type shared by all relative-interior points of a cell."""
    S = P.star

    def valid(j, anchor, base):
        C = [max(a, b) for a, b in zip(G.A[j], G.B[j])]
        return all(c == NEG_INF or S[anchor][l] >= c - base for l, c in enumerate(C))

    pi = [frozenset(k for k in range(G.n) if G.B[j][k] != NEG_INF and valid(j, k, G.B[j][k]))
          for j in range(G.m)]
    sigma = [frozenset(j for j in range(G.m) if G.A[j][i] != NEG_INF and valid(j, i, G.A[j][i]))
             for i in range(G.n)]
    return PolicyPair(sigma, pi)


@dataclass(frozen=True)
class Cell:
    type: PolicyPair
    poly: AlcovedPoly
    dim: int


@dataclass(frozen=True)
class CellComplex:
    cells: Tuple[Cell, ...]
    faces: Tuple[Tuple[int, int], ...]  # (a, b): cell a is a proper face of cell b
    partial: bool = False

    @property
    def maximal(self) -> Tuple[int, ...]:
        below = {a for a, _ in self.faces}
        return tuple(i for i in range(len(self.cells)) if i not in below)

    def locate(self, x) -> List[int]:
        from .alcoved import contains
        return [i for i, c in enumerate(self.cells) if contains(c.poly, x)]


def _subsets(items, allow_empty):
    items = sorted(items)
    lo = 0 if allow_empty else 1
    for r in range(len(items), lo - 1, -1):
        yield from (frozenset(c) for c in combinations(items, r))


def enumerate_cells(G: MeanPayoffGame, cap: int = DEFAULT_CELL_CAP, workers: int = 1,
                    max_nodes: int = 10 ** 6) -> CellComplex:
    """All cells X_tau of proper types, deduplicated, with their face order.

    Depth-first over rows; each row picks the B-attainers and A-attainers of its
    maximum, largest sets first.  Infeasible partial systems are cut as soon as
    the constraint digraph has a positive circuit.
    """
    n, m = G.n, G.m
    if n + m > cap:
        raise SizeCap(f"n + m = {n + m} exceeds the cap {cap}", cap=cap)
    options = []
    for j in range(m):
        bsupp = [k for k in range(n) if G.B[j][k] != NEG_INF]
        asupp = [i for i in range(n) if G.A[j][i] != NEG_INF]
        opts = [(p, s) for p in _subsets(bsupp, False) for s in _subsets(asupp, True)]
        opts.sort(key=lambda o: -(len(o[0]) + len(o[1])))
        options.append([(p, s, _row_constraints(G, j, p, s)) for p, s in opts])
    # rows after which state i can no longer enter sigma
    last_row = [max(j for j in range(m) if G.A[j][i] != NEG_INF) for i in range(n)]

    def explore(first_choice):
        found: Dict[tuple, AlcovedPoly] = {}
        budget = [max_nodes]

        def dfs(j, L, covered):
            if budget[0] <= 0:
                return False
            budget[0] -= 1
            if j == m:
                found.setdefault(L, from_star(L))
                return True
            complete = True
            choices = options[j] if j > 0 else [first_choice]
            for p, s, cons in choices:
                cov = covered | s
                if any(last_row[i] == j and i not in cov for i in range(n)):
                    continue
                L2 = _constraint_matrix(n, cons, L)
                try:
                    L2 = kleene_star(L2)
                except PositiveCircuit:
                    continue
                complete &= dfs(j + 1, L2, cov)
            return complete

        ok = dfs(0, _constraint_matrix(n, []), frozenset())
        return found, ok

    firsts = options[0] if m else []
    if workers > 1 and len(firsts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(explore, firsts))
    else:
        results = [explore(f) for f in firsts]
    polys: Dict[tuple, AlcovedPoly] = {}
    partial = False
    for found, ok in results:
        polys.update(found)
        partial |= not ok
    ordered = sorted(polys.values(), key=lambda P: (-dimension(P), _star_key(P.star)))
    cells = tuple(Cell(maximal_type(G, P), P, dimension(P)) for P in ordered)
    faces = tuple((a, b) for a in range(len(cells)) for b in range(len(cells))
                  if a != b and is_subset(cells[a].poly, cells[b].poly))
    return CellComplex(cells, faces, partial)


def _star_key(star):
    # total order on stars that does not choke on mixing floats and Fractions
    return tuple((a == NEG_INF, 0 if a == NEG_INF else a) for row in star for a in row)
