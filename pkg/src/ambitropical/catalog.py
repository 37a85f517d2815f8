"""Small worked instances used by ``selfcheck``, the test-suite and the README."""

from __future__ import annotations

from fractions import Fraction

from .games import MeanPayoffGame
from .minmax import Affine, Max, Min, ShapleyOp, Shift, Var
from .retract import GeneratorSet, segment_grid
from .trop_core import NEG_INF, POS_INF, identity

x1, x2, x3 = Var(0), Var(1), Var(2)


def majority(a, b, c):
    return Max((Min((a, b)), Min((a, c)), Min((b, c))))


def butterfly_operator() -> ShapleyOp:
    """(median(x1, x2, x3), x2, x3): fixed set {x2>=x1>=x3} u {x3>=x1>=x2}."""
    return ShapleyOp(3, (majority(x1, x2, x3), x2, x3))


def butterfly_generators() -> GeneratorSet:
    """Generators of the butterfly, max side and min side."""
    return GeneratorSet(
        3,
        max_gens=[(NEG_INF, 0, NEG_INF), (0, 0, NEG_INF), (0, 0, 0), (NEG_INF, NEG_INF, 0), (0, NEG_INF, 0)],
        min_gens=[(POS_INF, POS_INF, 0), (0, POS_INF, 0), (0, 0, 0), (POS_INF, 0, POS_INF), (0, 0, POS_INF)],
    )


BOUNDED_BUTTERFLY_VERTICES = [(0, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1), (1, 0, 1)]


def bounded_butterfly_generators() -> GeneratorSet:
    """Two unit triangles {x2>=x1>=x3, x2<=x3+1} and {x3>=x1>=x2, x3<=x2+1}."""
    return GeneratorSet.symmetric(BOUNDED_BUTTERFLY_VERTICES)


def bounded_butterfly_retraction() -> ShapleyOp:
    """Closed form of q_minus for the bounded butterfly."""
    one = lambda t: Shift(1, t)
    return ShapleyOp(3, (
        Max((Min((x1, x2, one(x3))), Min((x1, one(x2), x3)), Min((x2, x3, one(x1))))),
        Min((x2, one(x1), one(x3))),
        Min((x3, one(x2), one(x1))),
    ))


def stochastic_segment_operator() -> ShapleyOp:
    """(max(x1,x3), max(x2,x3), -1/2 + (x1+x2)/2).

    Its fixed set meets the plane x3 = 0 in the segment from (1,0,0) to (0,1,0).
    """
    half = Fraction(1, 2)
    return ShapleyOp(3, (Max((x1, x3)), Max((x2, x3)), Affine(-half, (half, half, 0))))


SEGMENT = ((1, 0, 0), (0, 1, 0))


def segment_generators(grid: int = 0) -> GeneratorSet:
    """The segment cone: exact (grid=0) or sampled at ``grid`` equally spaced points."""
    if grid:
        pts = segment_grid(*SEGMENT, grid)
        return GeneratorSet(3, pts, pts)
    return GeneratorSet(3, (), (), max_segments=(SEGMENT,), min_segments=(SEGMENT,))


def fathi_game() -> MeanPayoffGame:
    """Four states, Min has no choice, value 1 everywhere."""
    N = NEG_INF
    B = [[N, -1, 0, N], [N, -1, N, -1], [N, N, 0, 0], [N, N, N, 1]]
    return MeanPayoffGame.from_matrices(identity(4), B)


NINE_POINTS = [tuple(col) for col in zip(
    (4, 5, 3, 1, 0, 0, 0, 0, 4),
    (0, 2, 4, 3, 4, 2, 2, -1, 0),
    (0, 0, 0, 0, 2, 4, 2, 0, 3),
)]

FIVE_BIT_LATTICE = ["00000", "11111", "01001", "00101", "01110", "11101"]
