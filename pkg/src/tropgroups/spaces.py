"""Column/row space membership, Green's relations, ranks, reduction.

Membership in a column space is decided by residuation: the principal
solution lambda_j = min over rows i with A_ij finite of (x_i - A_ij) is the
componentwise-largest candidate, so x is in the span iff A (x) lambda = x.

Conventions with -inf entries: a generator column that is entirely -inf
gets coefficient -inf, and a generator that is finite at a coordinate where
x is -inf gets coefficient -inf.  These are the unique maximal feasible
choices, so the principal-solution test stays exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .matrix import TropMatrix
from .semiring import NEG_INF, TropScalar, trop_mul


class ZeroMatrix(ValueError):
    """All entries are -inf; there is nothing to reduce."""


@dataclass(frozen=True)
class SpanWitness:
    """Coefficients that reproduce the target from the generator columns."""

    coefficients: tuple[TropScalar, ...]


def _apply(a: TropMatrix, coeffs: Sequence[TropScalar]) -> tuple[TropScalar, ...]:
    """A (x) lambda as a plain vector."""
    out = []
    for i in range(a.nrows):
        acc: TropScalar = NEG_INF
        row = a.entries[i]
        for j, lam in enumerate(coeffs):
            term = trop_mul(row[j], lam)
            if acc is NEG_INF or (term is not NEG_INF and acc < term):
                acc = term
        out.append(acc)
    return tuple(out)


def member(x: Sequence[TropScalar], a: TropMatrix) -> Optional[SpanWitness]:
    """Principal-solution membership test for x in the column span of A."""
    x = tuple(x)
    if len(x) != a.nrows:
        raise ValueError("vector length must match the number of rows")
    coeffs: list[TropScalar] = []
    for j in range(a.ncols):
        lam: TropScalar = None
        feasible = True
        for i in range(a.nrows):
            aij = a.entries[i][j]
            if aij is NEG_INF:
                continue
            if x[i] is NEG_INF:
                feasible = False
                break
            cand = x[i] - aij
            if lam is None or cand < lam:
                lam = cand
        if not feasible or lam is None:
            coeffs.append(NEG_INF)
        else:
            coeffs.append(lam)
    if _apply(a, coeffs) == x:
        return SpanWitness(tuple(coeffs))
    return None


def col_space_equal(a: TropMatrix, b: TropMatrix) -> bool:
    """True iff the columns of each matrix span the same subsemimodule."""
    if a.nrows != b.nrows:
        raise ValueError("column spaces live in spaces of equal dimension")
    return all(member(b.col(j), a) for j in range(b.ncols)) and all(
        member(a.col(j), b) for j in range(a.ncols)
    )


def row_space_equal(a: TropMatrix, b: TropMatrix) -> bool:
    if a.ncols != b.ncols:
        raise ValueError("row spaces live in spaces of equal dimension")
    return col_space_equal(a.transpose(), b.transpose())


def h_related(a: TropMatrix, b: TropMatrix) -> bool:
    """Mutual divisibility on both sides: same shape and both spaces equal."""
    if a.shape != b.shape:
        return False
    return col_space_equal(a, b) and row_space_equal(a, b)


def _scaling_equivalent(u: Sequence[TropScalar], v: Sequence[TropScalar]) -> bool:
    """u = lam (x) v for a finite lam (identical -inf support, constant gap)."""
    lam = None
    for x, y in zip(u, v):
        if (x is NEG_INF) != (y is NEG_INF):
            return False
        if x is NEG_INF:
            continue
        d = x - y
        if lam is None:
            lam = d
        elif lam != d:
            return False
    return True


def _extremal_indices(vectors: list[tuple[TropScalar, ...]], length: int) -> list[int]:
    """Indices of a minimal generating subfamily, earliest index per
    scaling-equivalence class, classes kept iff outside the span of the
    other classes."""
    classes: list[list[int]] = []
    for idx, v in enumerate(vectors):
        if all(x is NEG_INF for x in v):
            continue
        for cls in classes:
            if _scaling_equivalent(v, vectors[cls[0]]):
                cls.append(idx)
                break
        else:
            classes.append([idx])
    reps = [cls[0] for cls in classes]
    kept = []
    for k, rep in enumerate(reps):
        others = [vectors[r] for i, r in enumerate(reps) if i != k]
        if not others:
            kept.append(rep)
            continue
        gens = TropMatrix([[col[i] for col in others] for i in range(length)])
        if member(vectors[rep], gens) is None:
            kept.append(rep)
    return kept


def column_rank(a: TropMatrix) -> int:
    return len(_extremal_indices([a.col(j) for j in range(a.ncols)], a.nrows))


def row_rank(a: TropMatrix) -> int:
    return len(_extremal_indices([a.row(i) for i in range(a.nrows)], a.ncols))


def reduce_full_rank(x: TropMatrix) -> tuple[TropMatrix, list[int], list[int]]:
    """Restrict to extremal rows, then extremal columns of the result.

    Returns (Z, kept_row_indices, kept_col_indices); Z has full row and
    column rank and its column/row spaces are isomorphic to those of x.
    """
    if x.all_neg_inf():
        raise ZeroMatrix("matrix has no finite entry")
    row_keep = _extremal_indices([x.row(i) for i in range(x.nrows)], x.ncols)
    y = TropMatrix([x.row(i) for i in row_keep])
    col_keep = _extremal_indices([y.col(j) for j in range(y.ncols)], y.nrows)
    z = TropMatrix([[y.entries[i][j] for j in col_keep] for i in range(y.nrows)])
    return z, row_keep, col_keep


def has_full_rank(a: TropMatrix) -> bool:
    return row_rank(a) == a.nrows and column_rank(a) == a.ncols
