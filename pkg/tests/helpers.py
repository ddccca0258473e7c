"""Shared builders and oracles for the worked examples used across the
test suite."""

import itertools

from tropgroups.matrix import MonomialMatrix, TropMatrix
from tropgroups.semiring import NEG_INF, eps, val
from tropgroups.spaces import _apply

A_VAL = val(-1) + eps(1)
B_VAL = val(-1) + eps(2)
C_VAL = val(-1) + eps(3)

SECTION4 = TropMatrix.from_rows(
    [
        [0, 0, NEG_INF, NEG_INF],
        [NEG_INF, 1, NEG_INF, NEG_INF],
        [NEG_INF, NEG_INF, 1, 0],
    ]
)

ALT4_10PT_GENS = [
    "(1,3,2)(5,10,7)(6,8,9)",
    "(1,4)(2,3)(6,10)(7,8)",
    "(1,3)(2,4)(5,9)(6,10)",
]


def matrix_e():
    """2x2 idempotent with free off-diagonal entries."""
    return TropMatrix.from_rows([[0, A_VAL], [B_VAL, 0]])


def unit_p():
    """The unit commuting with matrix_e."""
    return MonomialMatrix((1, 0), (A_VAL, B_VAL))


def matrix_f():
    """4x4 idempotent whose commuting units form a group of order 8."""
    a, b, c = A_VAL, B_VAL, C_VAL
    return TropMatrix.from_rows(
        [
            [0, a, c, a],
            [b, 0, b, c],
            [c, a, 0, a],
            [b, c, b, 0],
        ]
    )


def unit_q():
    """The 4-cycle unit commuting with matrix_f."""
    a, b = A_VAL, B_VAL
    return MonomialMatrix((1, 2, 3, 0), (a, b, a, b))


def brute_force_member(x, a, candidates=None):
    """Oracle: search coefficient tuples over instance entry differences
    (plus -inf) for an exact combination reproducing x."""
    if candidates is None:
        diffs = set()
        for i in range(a.nrows):
            if x[i] is NEG_INF:
                continue
            for j in range(a.ncols):
                if a.entries[i][j] is not NEG_INF:
                    diffs.add(x[i] - a.entries[i][j])
        candidates = list(diffs) + [NEG_INF]
    for coeffs in itertools.product(candidates, repeat=a.ncols):
        if _apply(a, coeffs) == tuple(x):
            return coeffs
    return None
