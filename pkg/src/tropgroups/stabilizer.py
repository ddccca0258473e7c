"""The unit-stabilizer group of a matrix and its structural description.

For a full-rank matrix A, the units P with C(P @ A) = C(A) form a group;
each such P pairs with a unique unit Q satisfying P @ A = A @ Q.  When the
finite-entry graph of A is connected every element has a single eigenvalue
(the common cycle mean of its pattern) and the group splits as a scaling
line times the finite group Sigma of eigenvalue-0 elements, which this
module enumerates exactly.

Disconnected matrices decompose along component classes: the full group is
a direct product over classes of wreath-type factors, one (R x G_alpha) per
isomorphism class of component column spaces, wrapped by the symmetric
group permuting the h_alpha components of the class.  ``stabilizer_pairs``
materialises the canonical finite subgroup built from per-class Sigma and
the stored class witnesses; ``group_description`` records the factors
symbolically.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

from .components import (
    Component,
    ComponentPartition,
    class_partition,
    connected_components,
    _restrict_unchecked,
)
from .errors import SearchBudgetExceeded
from .matrix import (
    MonomialMatrix,
    TropMatrix,
    is_idempotent,
    monomial_eigenvalue,
)
from .pairsearch import (
    DEFAULT_MAX_NODES,
    NotConnected,
    commuting_solutions,
    pair_solutions,
)
from .permgroups import (
    PairedPermGroup,
    Perm,
    PermGroup,
    _generating_sequence,
    format_cycles,
    identify_group,
    is_paired_two_closed,
)
from .semiring import NEG_INF, Value
from .spaces import has_full_rank, reduce_full_rank, _scaling_equivalent

DEFAULT_MAX_ELEMENTS = 10**6


class NotFullRank(ValueError):
    """The operation requires a matrix of full row and column rank."""


class NotIdempotent(ValueError):
    """The operation requires an idempotent matrix."""


@dataclass(frozen=True)
class StabilizerElement:
    """A stabilizer pair: P @ A = A @ Q, normalised to eigenvalue 0."""

    P: MonomialMatrix
    Q: MonomialMatrix
    eigenvalue: Value


def _sorted_elements(elements: list[StabilizerElement]) -> list[StabilizerElement]:
    return sorted(elements, key=lambda e: (e.P.sigma, e.Q.sigma, e.P.scalings))


def _connected_sigma(a: TropMatrix, max_nodes: int) -> list[StabilizerElement]:
    """All stabilizer pairs of a connected full-rank matrix, one per
    pattern pair, shifted so every element has eigenvalue 0."""
    out = []
    for sigma, tau, lam, mu in pair_solutions(a, a, max_nodes=max_nodes):
        ev = monomial_eigenvalue(MonomialMatrix(sigma, lam))
        p = MonomialMatrix(sigma, tuple(x - ev for x in lam))
        q = MonomialMatrix(tau, tuple(x - ev for x in mu))
        out.append(StabilizerElement(p, q, Value(0)))
    return _sorted_elements(out)


def right_mate(a: TropMatrix, p: MonomialMatrix) -> MonomialMatrix:
    """The unique unit Q with P @ A = A @ Q, for P in the stabilizer of a
    full-rank matrix.  Each column of P @ A is a scaling of exactly one
    column of A."""
    b = p.left_apply(a)
    tau = [-1] * a.ncols
    mu: list = [None] * a.ncols
    bcols = [b.col(j) for j in range(a.ncols)]
    acols = [a.col(j) for j in range(a.ncols)]
    for j, bc in enumerate(bcols):
        for k, ac in enumerate(acols):
            if _scaling_equivalent(bc, ac):
                gap = next(
                    x - y for x, y in zip(bc, ac) if x is not NEG_INF
                )
                if tau[k] != -1:
                    raise ValueError("column image is ambiguous; not full rank")
                tau[k] = j
                mu[k] = gap
                break
        else:
            raise ValueError("P is not a stabilizer element of the matrix")
    return MonomialMatrix(tau, mu)


def stabilizer_pairs(
    a: TropMatrix,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
    max_elements: int = DEFAULT_MAX_ELEMENTS,
) -> list[StabilizerElement]:
    """The finite group Sigma of eigenvalue-0 stabilizer pairs of a
    full-rank matrix.

    For a connected finite-entry graph this is the whole eigenvalue-0
    subgroup.  Otherwise the canonical subgroup is assembled from the
    per-class Sigma of the component representatives and the stored class
    witnesses; it realises the product of the wreath factors.
    """
    if not has_full_rank(a):
        raise NotFullRank("stabilizer pairs require a full-rank matrix")
    part = class_partition(a, max_nodes=max_nodes)
    if len(part.components) == 1:
        return _connected_sigma(a, max_nodes)
    return _assembled_sigma(a, part, max_nodes, max_elements)


def _assembled_sigma(
    a: TropMatrix,
    part: ComponentPartition,
    max_nodes: int,
    max_elements: int,
) -> list[StabilizerElement]:
    per_class_sigma = []
    total = 1
    for cls in part.classes:
        rep = _restrict_unchecked(a, part.components[cls.representative])
        sigma = _connected_sigma(rep, max_nodes)
        per_class_sigma.append(sigma)
        h = len(cls.members)
        total *= len(sigma) ** h * _factorial(h)
    if total > max_elements:
        raise SearchBudgetExceeded(
            f"assembled stabilizer has {total} elements, above the cap {max_elements}"
        )

    n = a.nrows
    elements = []
    class_choices = []
    for cls, sigma in zip(part.classes, per_class_sigma):
        h = len(cls.members)
        class_choices.append(
            list(
                itertools.product(
                    itertools.permutations(range(h)),
                    itertools.product(sigma, repeat=h),
                )
            )
        )
    for combo in itertools.product(*class_choices):
        g_sigma = [-1] * n
        g_scal: list = [None] * n
        for cls, (pi, parts_choice) in zip(part.classes, combo):
            for t, member in enumerate(cls.members):
                u_i = cls.witnesses[t]
                u_j = cls.witnesses[pi[t]]
                s_t = parts_choice[t].P
                block = u_i.invert() @ s_t @ u_j
                rows_i = part.components[member].rows
                rows_j = part.components[cls.members[pi[t]]].rows
                for li, gi in enumerate(rows_i):
                    g_sigma[gi] = rows_j[block.sigma[li]]
                    g_scal[gi] = block.scalings[li]
        p = MonomialMatrix(g_sigma, g_scal)
        q = right_mate(a, p)
        elements.append(StabilizerElement(p, q, monomial_eigenvalue(p)))
    return _sorted_elements(elements)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def commuting_units(
    e: TropMatrix, *, max_nodes: int = DEFAULT_MAX_NODES
) -> list[StabilizerElement]:
    """All units commuting with a full-rank idempotent, normalised to
    eigenvalue 0.  The finite-entry graph must be connected; disconnected
    idempotents are described per class by ``maximal_subgroup``."""
    if not e.is_square() or not is_idempotent(e):
        raise NotIdempotent("commutation search requires an idempotent")
    if not has_full_rank(e):
        raise NotFullRank("commutation search requires full rank")
    out = []
    for sigma, lam in commuting_solutions(e, max_nodes=max_nodes):
        ev = monomial_eigenvalue(MonomialMatrix(sigma, lam))
        p = MonomialMatrix(sigma, tuple(x - ev for x in lam))
        out.append(StabilizerElement(p, p, Value(0)))
    return _sorted_elements(out)


def normalize_eigenvectors(
    a: TropMatrix,
    elements: Optional[list[StabilizerElement]] = None,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> tuple[MonomialMatrix, MonomialMatrix, TropMatrix]:
    """Diagonal units U, V with B = U @ A @ V whose stabilizer fixes the
    all-zero vectors: every Sigma element of B is a plain permutation.

    The common right eigenvector u is built by propagating finite entries
    of Sigma elements from each least not-yet-covered coordinate, and the
    left eigenvector v dually from the paired units.
    """
    if len(connected_components(a)) != 1:
        raise NotConnected("eigenvector normalisation needs a connected matrix")
    if elements is None:
        if not has_full_rank(a):
            raise NotFullRank("eigenvector normalisation requires full rank")
        elements = _connected_sigma(a, max_nodes)

    n, m = a.shape
    u: list = [None] * n
    while any(x is None for x in u):
        k = next(i for i in range(n) if u[i] is None)
        u[k] = Value(0)
        for el in elements:
            inv = el.P.invert()
            t = inv.sigma[k]
            cand = el.P.scalings[t]
            if u[t] is None:
                u[t] = cand
            elif u[t] != cand:
                raise AssertionError("eigenvector construction disagreed")
    v: list = [None] * m
    while any(x is None for x in v):
        k = next(j for j in range(m) if v[j] is None)
        v[k] = Value(0)
        for el in elements:
            t = el.Q.sigma[k]
            cand = el.Q.scalings[k]
            if v[t] is None:
                v[t] = cand
            elif v[t] != cand:
                raise AssertionError("eigenvector construction disagreed")

    u_diag = MonomialMatrix(tuple(range(n)), tuple(-x for x in u))
    v_diag = MonomialMatrix(tuple(range(m)), tuple(-x for x in v))
    b = v_diag.right_apply(u_diag.left_apply(a))
    zero = Value(0)
    v_inv = v_diag.invert()
    for el in elements:
        conj_p = (u_diag @ el.P) @ u_diag.invert()
        conj_q = (v_inv @ el.Q) @ v_diag
        if any(s != zero for s in conj_p.scalings) or any(
            s != zero for s in conj_q.scalings
        ):
            raise AssertionError("normalised stabilizer element is not a permutation")
    return u_diag, v_diag, b


@dataclass(frozen=True)
class Factor:
    """One wreath-type factor (R x G) wr S_h of a group description."""

    finite_part: PermGroup
    paired: PairedPermGroup
    degree: int
    col_degree: int
    multiplicity: int
    order: int
    component: Optional[Component]
    name: Optional[str]


def make_factor(
    paired: PairedPermGroup,
    multiplicity: int,
    component: Optional[Component] = None,
) -> Factor:
    order = paired.order()
    left = PermGroup(
        paired.degrees[0], [g for g, _ in paired.generators], known_order=order
    )
    return Factor(
        finite_part=left,
        paired=paired,
        degree=paired.degrees[0],
        col_degree=paired.degrees[1],
        multiplicity=multiplicity,
        order=order,
        component=component,
        name=identify_group(left),
    )


@dataclass(frozen=True)
class GroupDescription:
    """The product over classes of (R x G_alpha) wr S_{h_alpha}."""

    factors: tuple[Factor, ...]

    @property
    def r_rank(self) -> int:
        return sum(f.multiplicity for f in self.factors)

    @property
    def finite_order(self) -> int:
        total = 1
        for f in self.factors:
            total *= f.order ** f.multiplicity * _factorial(f.multiplicity)
        return total

    def formula(self) -> str:
        parts = []
        for i, f in enumerate(self.factors):
            if f.order == 1:
                base = "R"
            else:
                base = f"(R x {f.name or f'G{i + 1}'})"
            if f.multiplicity > 1:
                base = f"{base} wr S_{f.multiplicity}"
            parts.append(base)
        return " x ".join(parts)

    def to_json_dict(self) -> dict:
        factors = []
        for f in self.factors:
            entry = {
                "degree": f.degree,
                "col_degree": f.col_degree,
                "multiplicity": f.multiplicity,
                "order": f.order,
                "name": f.name,
                "generators": [format_cycles(g) for g in f.finite_part.generators],
                "col_generators": [
                    format_cycles(h) for _, h in f.paired.generators
                ],
            }
            if f.component is not None:
                entry["component_rows"] = [i + 1 for i in f.component.rows]
                entry["component_cols"] = [j + 1 for j in f.component.cols]
            factors.append(entry)
        return {
            "factors": factors,
            "r_rank": self.r_rank,
            "finite_order": self.finite_order,
            "formula": self.formula(),
        }


def group_description(
    a: TropMatrix,
    *,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> GroupDescription:
    """Reduce to full rank, split into component classes, and compute one
    finite factor per class from the Sigma of its representative."""
    z, _rows, _cols = reduce_full_rank(a)
    part = class_partition(z, max_nodes=max_nodes)
    factors = []
    for cls in part.classes:
        comp = part.components[cls.representative]
        rep = _restrict_unchecked(z, comp)
        elements = _connected_sigma(rep, max_nodes)
        normalize_eigenvectors(rep, elements)  # verifies the permutation form
        pairs = sorted(
            (Perm(el.P.sigma), Perm(el.Q.sigma)) for el in elements
        )
        gens = _reduced_pair_generators(pairs, rep.shape)
        paired = PairedPermGroup(rep.shape, gens, known_order=len(elements))
        factors.append(make_factor(paired, len(cls.members), comp))
    return GroupDescription(tuple(factors))


def _reduced_pair_generators(
    pairs: list[tuple[Perm, Perm]], degrees: tuple[int, int]
) -> list[tuple[Perm, Perm]]:
    """A short generating set for a group listed as (left, right) pairs.

    The left projection is faithful, so reduce on the left and carry the
    mates along."""
    mate = {left: right for left, right in pairs}
    left_gens = _generating_sequence(sorted(mate), degrees[0])
    return [(g, mate[g]) for g in left_gens]


def maximal_subgroup(
    e: TropMatrix, *, max_nodes: int = DEFAULT_MAX_NODES
) -> GroupDescription:
    """The structure of the maximal subgroup attached to an idempotent."""
    if not e.is_square() or not is_idempotent(e):
        raise NotIdempotent("maximal subgroups are attached to idempotents")
    return group_description(e, max_nodes=max_nodes)


def classification_conditions(desc: GroupDescription, n: int, m: int) -> bool:
    """The shape conditions a description must satisfy to arise from an
    n x m matrix: degree budgets on both sides, paired 2-closure of every
    finite part, at most one factor on a single point, and no three trivial
    factors within two points."""
    if sum(f.degree * f.multiplicity for f in desc.factors) > n:
        return False
    if sum(f.col_degree * f.multiplicity for f in desc.factors) > m:
        return False
    for f in desc.factors:
        if not is_paired_two_closed(f.paired):
            return False
    singles = sum(1 for f in desc.factors if min(f.degree, f.col_degree) == 1)
    if singles > 1:
        return False
    small_trivial = sum(
        1
        for f in desc.factors
        if f.order == 1 and min(f.degree, f.col_degree) <= 2
    )
    if small_trivial > 2:
        return False
    return True
