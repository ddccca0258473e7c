"""Connected-component structure of the finite-entry bipartite graph.

A matrix with no all--inf row or column induces a coloured directed
bipartite graph on row vertices and column vertices, one edge per finite
entry, coloured by the entry.  Connected components split the
unit-stabilizer computation into independent blocks; components whose
restricted column spaces are isomorphic are grouped into classes, each
member carrying a unit witnessing the isomorphism onto the class
representative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .graphs import ColouredBipartiteGraph
from .matrix import MonomialMatrix, TropMatrix
from .pairsearch import pair_solutions
from .semiring import NEG_INF, is_finite
from .spaces import col_space_equal


class DegenerateRowOrColumn(ValueError):
    """A row or column contains no finite entry."""


class NotAComponent(ValueError):
    """The vertex set is not a connected component of the graph."""


@dataclass(frozen=True)
class Component:
    """A connected component: the row and column indices it contains."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]


def _check_non_degenerate(a: TropMatrix) -> None:
    for i in range(a.nrows):
        if all(x is NEG_INF for x in a.entries[i]):
            raise DegenerateRowOrColumn(f"row {i + 1} has no finite entry")
    for j in range(a.ncols):
        if all(a.entries[i][j] is NEG_INF for i in range(a.nrows)):
            raise DegenerateRowOrColumn(f"column {j + 1} has no finite entry")


def bipartite_graph(a: TropMatrix) -> ColouredBipartiteGraph:
    """The coloured bipartite graph of the finite entries of the matrix."""
    _check_non_degenerate(a)
    edges = {
        (i, j): a.entries[i][j]
        for i in range(a.nrows)
        for j in range(a.ncols)
        if is_finite(a.entries[i][j])
    }
    return ColouredBipartiteGraph(a.nrows, a.ncols, edges)


def connected_components(a: TropMatrix) -> list[Component]:
    """Components of the underlying undirected graph, ordered by their
    smallest row index."""
    _check_non_degenerate(a)
    n, m = a.shape
    seen_r, seen_c = [False] * n, [False] * m
    comps = []
    for start in range(n):
        if seen_r[start]:
            continue
        rows, cols = [], []
        stack = [("r", start)]
        seen_r[start] = True
        while stack:
            kind, v = stack.pop()
            if kind == "r":
                rows.append(v)
                for j in range(m):
                    if is_finite(a.entries[v][j]) and not seen_c[j]:
                        seen_c[j] = True
                        stack.append(("c", j))
            else:
                cols.append(v)
                for i in range(n):
                    if is_finite(a.entries[i][v]) and not seen_r[i]:
                        seen_r[i] = True
                        stack.append(("r", i))
        comps.append(Component(tuple(sorted(rows)), tuple(sorted(cols))))
    comps.sort(key=lambda c: c.rows[0])
    return comps


def restrict(a: TropMatrix, component: Component) -> TropMatrix:
    """The submatrix on the component's rows and columns (in index order)."""
    comps = connected_components(a)
    if component not in comps:
        raise NotAComponent(f"{component} is not a component of the matrix")
    return TropMatrix(
        [[a.entries[i][j] for j in component.cols] for i in component.rows]
    )


def _restrict_unchecked(a: TropMatrix, component: Component) -> TropMatrix:
    return TropMatrix(
        [[a.entries[i][j] for j in component.cols] for i in component.rows]
    )


def _first_pair_solution(
    target: TropMatrix, source: TropMatrix, max_nodes: int
) -> Optional[MonomialMatrix]:
    """A unit P with P @ source = target @ Q for some unit Q, if any."""
    if target.shape != source.shape:
        return None
    sols = pair_solutions(target, source, max_nodes=max_nodes, first_only=True)
    if not sols:
        return None
    sigma, _tau, lam, _mu = sols[0]
    return MonomialMatrix(sigma, lam)


def col_space_isomorphic(
    a: TropMatrix, b: TropMatrix, *, max_nodes: int = 2_000_000
) -> Optional[MonomialMatrix]:
    """A unit U with C(U @ B) = C(A), or None.

    Both matrices must have full rank.  Disconnected inputs are matched
    component by component; the blocks of U are the per-component
    witnesses.
    """
    if a.shape != b.shape:
        return None
    comps_a = connected_components(a)
    comps_b = connected_components(b)
    if len(comps_a) == 1 and len(comps_b) == 1:
        return _first_pair_solution(a, b, max_nodes)
    if len(comps_a) != len(comps_b):
        return None
    if sorted((len(c.rows), len(c.cols)) for c in comps_a) != sorted(
        (len(c.rows), len(c.cols)) for c in comps_b
    ):
        return None
    restr_a = [_restrict_unchecked(a, c) for c in comps_a]
    restr_b = [_restrict_unchecked(b, c) for c in comps_b]
    k = len(comps_a)
    cache: dict[tuple[int, int], Optional[MonomialMatrix]] = {}

    def witness(i: int, j: int) -> Optional[MonomialMatrix]:
        if (i, j) not in cache:
            cache[(i, j)] = _first_pair_solution(restr_a[i], restr_b[j], max_nodes)
        return cache[(i, j)]

    assignment = [-1] * k
    used = [False] * k

    def match(i: int) -> bool:
        if i == k:
            return True
        for j in range(k):
            if not used[j] and witness(i, j) is not None:
                assignment[i] = j
                used[j] = True
                if match(i + 1):
                    return True
                used[j] = False
                assignment[i] = -1
        return False

    if not match(0):
        return None
    n = a.nrows
    sigma = [-1] * n
    scalings: list = [None] * n
    for i, j in enumerate(assignment):
        local = witness(i, j)
        for li, ga in enumerate(comps_a[i].rows):
            sigma[ga] = comps_b[j].rows[local.sigma[li]]
            scalings[ga] = local.scalings[li]
    u = MonomialMatrix(sigma, scalings)
    if not col_space_equal(u.left_apply(b), a):
        raise AssertionError("assembled witness failed verification")
    return u


@dataclass(frozen=True)
class ComponentClass:
    """Components with pairwise isomorphic restricted column spaces.

    ``members`` are indices into the component list; the representative is
    the first member.  ``witnesses[k]`` is a unit U with
    C(U @ A|_members[k]) = C(A|_representative).
    """

    members: tuple[int, ...]
    witnesses: tuple[MonomialMatrix, ...]

    @property
    def representative(self) -> int:
        return self.members[0]


@dataclass(frozen=True)
class ComponentPartition:
    components: tuple[Component, ...]
    classes: tuple[ComponentClass, ...]


def class_partition(a: TropMatrix, *, max_nodes: int = 2_000_000) -> ComponentPartition:
    """Group the components by column-space isomorphism of restrictions.

    Requires a full-rank matrix (restrictions are then full rank and their
    finite-entry graphs connected)."""
    comps = connected_components(a)
    restrs = [_restrict_unchecked(a, c) for c in comps]
    classes: list[tuple[list[int], list[MonomialMatrix]]] = []
    for idx, restr in enumerate(restrs):
        placed = False
        for members, witnesses in classes:
            rep = restrs[members[0]]
            if rep.shape != restr.shape:
                continue
            w = _first_pair_solution(rep, restr, max_nodes)
            if w is not None:
                members.append(idx)
                witnesses.append(w)
                placed = True
                break
        if not placed:
            classes.append(([idx], [MonomialMatrix.identity(restr.nrows)]))
    return ComponentPartition(
        tuple(comps),
        tuple(
            ComponentClass(tuple(members), tuple(witnesses))
            for members, witnesses in classes
        ),
    )
