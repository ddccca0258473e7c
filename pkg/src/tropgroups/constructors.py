"""Witness matrices realising prescribed groups.

Two constructions are provided.  From an irreducible coloured bipartite
graph, a full-rank rectangular matrix whose stabilizer is the graph's
automorphism group times a scaling line: missing edges get a fresh colour,
colours are refined by vertex orbits, dominated orbits are removed, and
every surviving colour is assigned an exact value inside a prescribed
rational interval.  From a 2-closed permutation group (or a complete
coloured digraph), a full-rank idempotent whose maximal subgroup has the
group as its finite part: zero diagonal and orbit-coloured off-diagonal
entries strictly inside (-1.1, -0.9).

Interval choices are deterministic: the t-th of T values needed inside
(lo, hi) sits at lo + (hi - lo) * t / (T + 1), and every value carries a
fresh infinitesimal tag, which keeps the chosen entries rationally
independent and all interval inequalities strict.  When exactly two row
orbits survive, the groups of values aimed at the same interval are placed
on graded grids instead, so that all pairwise gaps in an earlier group
exceed all gaps in a later one (and the reverse on the second row orbit),
as the rank argument for that case requires.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .graphs import ColouredBipartiteGraph, ColouredDigraph
from .matrix import TropMatrix, idempotent_power, is_idempotent
from .permgroups import (
    PairedPermGroup,
    Perm,
    PermGroup,
    coloured_automorphisms,
    coloured_bipartite_automorphisms,
    is_irreducible,
    is_two_closed,
    pair_orbit_colouring,
    parse_cycles,
)
from .semiring import NEG_INF, Value, eps, is_finite, free_basis_check, trop_sum
from .spaces import has_full_rank
from .stabilizer import NotFullRank, NotIdempotent

TENTH = Fraction(1, 10)


class ReducibleInput(ValueError):
    """The bipartite graph has an isolated node or a twin pair."""


class HypothesisViolated(ValueError):
    """Trivial automorphism group with a side of at most two nodes."""


class NotTwoClosed(ValueError):
    """The requested group is not 2-closed, so no idempotent realises it."""


class DependentEntries(ValueError):
    """The supplied entries do not form a free basis."""


@dataclass(frozen=True)
class PlannedValue:
    colour: object
    low: Fraction
    high: Fraction
    value: Value


@dataclass(frozen=True)
class ConstructionPlan:
    """The exact value chosen for every colour, with its target interval."""

    assignments: tuple[PlannedValue, ...]

    def validate(self) -> None:
        for pv in self.assignments:
            if not (pv.low < pv.value.std < pv.high):
                raise AssertionError(
                    f"value {pv.value} not strictly inside ({pv.low}, {pv.high})"
                )
        if not free_basis_check([pv.value for pv in self.assignments]):
            raise AssertionError("chosen values are not a free basis")


class _TagAllocator:
    def __init__(self, start: int):
        self.next_tag = start

    def fresh(self) -> Value:
        tag = self.next_tag
        self.next_tag += 1
        return eps(tag)


def _orbits(n: int, perms: Sequence[Perm]) -> list[list[int]]:
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        orb = [s]
        seen[s] = True
        stack = [s]
        while stack:
            x = stack.pop()
            for p in perms:
                y = p(x)
                if not seen[y]:
                    seen[y] = True
                    orb.append(y)
                    stack.append(y)
        out.append(sorted(orb))
    return out


def _subdivide(lo: Fraction, hi: Fraction, count: int) -> list[Fraction]:
    return [lo + (hi - lo) * t / (count + 1) for t in range(1, count + 1)]


def _graded_grid(center: Fraction, gap: Fraction, count: int) -> list[Fraction]:
    return [center + (Fraction(2 * s - (count - 1), 2)) * gap for s in range(count)]


def construct_from_bipartite(
    d: ColouredBipartiteGraph,
    *,
    tag_start: int = 1,
    with_plan: bool = False,
):
    """A full-rank matrix whose stabilizer is R x Aut(d).

    Requires d irreducible, and Aut(d) non-trivial or both sides larger
    than 2.  Entries realise the graph's orbit-refined colouring with
    exact values chosen inside the intervals that make the rank argument
    work; the resulting finite part is Aut(d) acting on the surviving
    (non-dominated) orbits.
    """
    if not is_irreducible(d):
        raise ReducibleInput("the graph has an isolated node or a twin pair")
    full = d.completed()
    aut = coloured_bipartite_automorphisms(full)
    trivial = aut.order() == 1
    if trivial and not (d.n > 2 and d.m > 2):
        raise HypothesisViolated(
            "a trivial automorphism group needs more than two nodes per side"
        )

    row_orbits = _orbits(d.n, [g for g, _ in aut.generators])
    col_orbits = _orbits(d.m, [h for _, h in aut.generators])
    row_orbit_of = {v: k for k, orb in enumerate(row_orbits) for v in orb}
    col_orbit_of = {v: k for k, orb in enumerate(col_orbits) for v in orb}

    def refined(i: int, j: int):
        return (full.edges[(i, j)], row_orbit_of[i], col_orbit_of[j])

    active_rows = sorted(
        v for orb in row_orbits if trivial or len(orb) > 1 for v in orb
    )
    active_cols = sorted(
        v for orb in col_orbits if trivial or len(orb) > 1 for v in orb
    )

    if not trivial:
        # drop whole orbits whose colour partition is dominated by a node
        # of another orbit, until stable
        def partition_of_row(u):
            cells: dict = {}
            for s in active_cols:
                cells.setdefault(refined(u, s), set()).add(s)
            return sorted(map(frozenset, cells.values()), key=min)

        def partition_of_col(s):
            cells: dict = {}
            for u in active_rows:
                cells.setdefault(refined(u, s), set()).add(u)
            return sorted(map(frozenset, cells.values()), key=min)

        def refines(pa, pb):
            return all(any(cell <= other for other in pb) for cell in pa)

        changed = True
        while changed:
            changed = False
            live_row_orbits = [
                orb for orb in row_orbits if orb[0] in set(active_rows)
            ]
            parts = {u: partition_of_row(u) for u in active_rows}
            for oa, ob in itertools.permutations(live_row_orbits, 2):
                if any(refines(parts[u], parts[v]) for u in oa for v in ob):
                    active_rows = sorted(set(active_rows) - set(ob))
                    changed = True
                    break
            if changed:
                continue
            live_col_orbits = [
                orb for orb in col_orbits if orb[0] in set(active_cols)
            ]
            parts = {s: partition_of_col(s) for s in active_cols}
            for oa, ob in itertools.permutations(live_col_orbits, 2):
                if any(refines(parts[s], parts[t]) for s in oa for t in ob):
                    active_cols = sorted(set(active_cols) - set(ob))
                    changed = True
                    break

    live_row_orbits = [orb for orb in row_orbits if orb[0] in set(active_rows)]
    live_col_orbits = [orb for orb in col_orbits if orb[0] in set(active_cols)]
    k, kp = len(live_row_orbits), len(live_col_orbits)
    if k > kp:
        reversed_graph = ColouredBipartiteGraph(
            d.m, d.n, {(j, i): c for (i, j), c in d.edges.items()}
        )
        result = construct_from_bipartite(
            reversed_graph, tag_start=tag_start, with_plan=with_plan
        )
        if with_plan:
            matrix, plan = result
            return matrix.transpose(), plan
        return result.transpose()

    row_orbit_index = {orb[0]: t + 1 for t, orb in enumerate(live_row_orbits)}
    live_row_of = {
        v: row_orbit_index[orb[0]] for orb in live_row_orbits for v in orb
    }
    col_orbit_index = {orb[0]: t + 1 for t, orb in enumerate(live_col_orbits)}
    live_col_of = {
        v: col_orbit_index[orb[0]] for orb in live_col_orbits for v in orb
    }

    colours: list = []
    colour_group: dict = {}
    for s in active_rows:
        for t in active_cols:
            c = refined(s, t)
            if c not in colour_group:
                colour_group[c] = (live_row_of[s], live_col_of[t])
                colours.append(c)

    value_of: dict = {}
    plan_items: list[PlannedValue] = []
    tags = _TagAllocator(tag_start)

    def place(colour_list, lo, hi, stds):
        for c, std in zip(colour_list, stds):
            v = Value(std) + tags.fresh()
            value_of[c] = v
            plan_items.append(PlannedValue(c, lo, hi, v))

    if k == 2:
        sizes = [
            len([c for c in colours if colour_group[c] == (i, j)])
            for i in (1, 2)
            for j in range(1, kp + 1)
        ]
        max_t = max(sizes + [1])
        q = Fraction(1, max_t + 2)
        for j in range(1, kp + 1):
            group1 = [c for c in colours if colour_group[c] == (1, j)]
            if group1:
                gap = TENTH * q**j
                place(group1, -TENTH, TENTH, _graded_grid(Fraction(0), gap, len(group1)))
            group2 = [c for c in colours if colour_group[c] == (2, j)]
            if group2:
                gap = TENTH * q ** (kp + 1 - j)
                place(
                    group2,
                    Fraction(-j) - TENTH,
                    Fraction(-j) + TENTH,
                    _graded_grid(Fraction(-j), gap, len(group2)),
                )
        _check_gap_inequalities(colours, colour_group, value_of, kp)
    else:
        interval_of: dict = {}
        delta1 = live_row_orbits[0]
        for j, corb in enumerate(live_col_orbits, start=1):
            pj = corb[0]
            cells: dict = {}
            for u in delta1:
                cells.setdefault(refined(u, pj), []).append(u)
            ordered = sorted(cells.items(), key=lambda kv: min(kv[1]))
            acc = 0
            for colour, members in ordered:
                center = Fraction(-acc)
                interval_of[colour] = (center - TENTH, center + TENTH)
                acc += len(members)
        for c in colours:
            i, j = colour_group[c]
            if c in interval_of:
                continue
            if i == 1:
                raise AssertionError("first-orbit colour missed by the cell scan")
            if j == 1:
                center = Fraction(0)
            else:
                center = Fraction((-1) ** (i + j) * (i + j) * len(delta1))
            interval_of[c] = (center - TENTH, center + TENTH)
        by_interval: dict = {}
        for c in colours:
            by_interval.setdefault(interval_of[c], []).append(c)
        for (lo, hi), group in by_interval.items():
            place(group, lo, hi, _subdivide(lo, hi, len(group)))

    plan = ConstructionPlan(tuple(plan_items))
    plan.validate()
    matrix = TropMatrix(
        [[value_of[refined(s, t)] for t in active_cols] for s in active_rows]
    )
    if not has_full_rank(matrix):
        raise AssertionError("constructed matrix is not full rank")
    if with_plan:
        return matrix, plan
    return matrix


def _check_gap_inequalities(colours, colour_group, value_of, kp):
    """The two-row-orbit case needs the pairwise-gap orderings between
    groups aimed at a common interval family."""

    def posdiffs(vals):
        return [x - y for x, y in itertools.permutations(vals, 2) if x > y]

    for row, increasing in ((1, False), (2, True)):
        groups = []
        for j in range(1, kp + 1):
            vals = [value_of[c] for c in colours if colour_group[c] == (row, j)]
            groups.append(posdiffs(vals))
        for ja, jb in itertools.combinations(range(kp), 2):
            da, db = groups[ja], groups[jb]
            if not da or not db:
                continue
            if increasing:
                assert max(da) < min(db)
            else:
                assert min(da) > max(db)


def construct_idempotent(
    target: Union[PermGroup, ColouredDigraph],
    *,
    tag_start: int = 1,
    with_plan: bool = False,
):
    """A full-rank idempotent whose maximal subgroup has the prescribed
    finite part.

    Accepts a 2-closed permutation group (rejected otherwise) or a
    complete coloured digraph (whose automorphism group is always
    2-closed).  Zero diagonal; off-diagonal entries are exact values
    strictly inside (-1.1, -0.9), one per orbit-refined colour.  The
    trivial group on one or two points uses the fixed small idempotents
    [[0]] and [[0, 0], [-inf, 0]].
    """
    if isinstance(target, PermGroup):
        if not is_two_closed(target):
            raise NotTwoClosed(
                "only 2-closed groups arise from idempotents at their degree"
            )
        group = target
        digraph = pair_orbit_colouring(group) if group.degree > 1 else None
    else:
        digraph = target
        group = coloured_automorphisms(digraph)
    n = group.degree

    if group.order() == 1 and n <= 2:
        if n == 1:
            matrix = TropMatrix.from_rows([[0]])
        else:
            matrix = TropMatrix.from_rows([[0, 0], [NEG_INF, 0]])
        plan = ConstructionPlan(())
        if not is_idempotent(matrix) or not has_full_rank(matrix):
            raise AssertionError("small idempotent failed its checks")
        return (matrix, plan) if with_plan else matrix

    orbits = _orbits(n, list(group.generators))
    orbit_of = {v: k for k, orb in enumerate(orbits) for v in orb}

    def refined(i: int, j: int):
        return (digraph.colours[(i, j)], orbit_of[i], orbit_of[j])

    colours: list = []
    seen = set()
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            c = refined(i, j)
            if c not in seen:
                seen.add(c)
                colours.append(c)
    tags = _TagAllocator(tag_start)
    lo, hi = Fraction(-11, 10), Fraction(-9, 10)
    stds = _subdivide(lo, hi, len(colours))
    value_of = {}
    plan_items = []
    for c, std in zip(colours, stds):
        v = Value(std) + tags.fresh()
        value_of[c] = v
        plan_items.append(PlannedValue(c, lo, hi, v))
    plan = ConstructionPlan(tuple(plan_items))
    plan.validate()
    zero = Value(0)
    matrix = TropMatrix(
        [
            [zero if i == j else value_of[refined(i, j)] for j in range(n)]
            for i in range(n)
        ]
    )
    if not is_idempotent(matrix):
        raise AssertionError("constructed matrix is not idempotent")
    if not has_full_rank(matrix):
        raise AssertionError("constructed idempotent is not full rank")
    return (matrix, plan) if with_plan else matrix


def assemble_blocks(
    blocks: Sequence[tuple[TropMatrix, int]], fill
) -> TropMatrix:
    """Block-diagonal assembly with the off-blocks filled by -inf or 0."""
    if fill is not NEG_INF and fill != Value(0):
        raise ValueError("fill must be -inf or 0")
    expanded = []
    for block, mult in blocks:
        if mult < 1:
            raise ValueError("multiplicities must be positive")
        expanded.extend([block] * mult)
    if not expanded:
        raise ValueError("nothing to assemble")
    nrows = sum(b.nrows for b in expanded)
    ncols = sum(b.ncols for b in expanded)
    rows = [[fill] * ncols for _ in range(nrows)]
    r0 = c0 = 0
    for b in expanded:
        for i in range(b.nrows):
            rows[r0 + i][c0 : c0 + b.ncols] = list(b.entries[i])
        r0 += b.nrows
        c0 += b.ncols
    return TropMatrix(rows)


ALT4_GENERATORS = ("(1,2,3)", "(1,2)(3,4)")


def alt4_elements() -> list[Perm]:
    """The 12 even permutations of 4 points, in breadth-first product
    order from the generators (1,2,3) and (1,2)(3,4)."""
    gens = [parse_cycles(g, 4) for g in ALT4_GENERATORS]
    ident = Perm.identity(4)
    out = [ident]
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    out.append(y)
                    nxt.append(y)
        frontier = nxt
    return out


def alt4_column_matrix(a: Value, b: Value, c: Value, d: Value) -> TropMatrix:
    """The 4 x 12 matrix whose columns are the even permutations of
    (a, b, c, d), acting by (g . V)_i = V_{g^{-1}(i)}."""
    vals = (a, b, c, d)
    if not free_basis_check(list(vals)):
        raise DependentEntries("the four entries must form a free basis")
    cols = []
    for g in alt4_elements():
        ginv = g.inverse()
        cols.append([vals[ginv(i)] for i in range(4)])
    return TropMatrix([[col[i] for col in cols] for i in range(4)])


def finite_approximant(e: TropMatrix, m: int) -> TropMatrix:
    """The finite idempotent obtained by replacing each -inf entry with a
    large negative multiple and taking the idempotent power.

    The replacement constant is m * N with N = -(sum of |finite entries|)
    - 1.  The result is verified against its closed form: unchanged on the
    finite entries, and row-max + m*N + column-max elsewhere.
    """
    if m < 1:
        raise ValueError("the approximation index must be a positive integer")
    if not e.is_square() or not is_idempotent(e):
        raise NotIdempotent("approximants are defined for idempotents")
    if not has_full_rank(e):
        raise NotFullRank("approximants are defined for full-rank idempotents")
    total = Value(0)
    for row in e.entries:
        for x in row:
            if is_finite(x):
                total = total + abs(x)
    n_const = -total - Value(1)
    repl = n_const.mul_int(m)
    substituted = TropMatrix(
        [[x if is_finite(x) else repl for x in row] for row in e.entries]
    )
    f = idempotent_power(substituted)
    row_max = [trop_sum(e.row(i)) for i in range(e.nrows)]
    col_max = [trop_sum(e.col(j)) for j in range(e.ncols)]
    for i in range(e.nrows):
        for j in range(e.ncols):
            expected = (
                e.entries[i][j]
                if is_finite(e.entries[i][j])
                else row_max[i] + repl + col_max[j]
            )
            if f.entries[i][j] != expected:
                raise AssertionError("approximant disagrees with its closed form")
    return f


# -- construction specs (JSON) --


def parse_construction_spec(data: dict):
    """Decode a construction request.

    Formats (all indices 1-based):
      {"omega": n, "theta": m, "edges": [[i, j, colour], ...]}
      {"vertices": n, "edges": [[i, j, colour], ...]}
      {"degree": n, "generators": ["(1,2)", ...]}
      {"bidegree": [n, m], "generators": [["(1,2)", "(1,2)"], ...]}

    Returns ("bipartite", graph) or ("idempotent", group-or-digraph).
    """
    if "omega" in data:
        n, m = int(data["omega"]), int(data["theta"])
        edges = {
            (int(i) - 1, int(j) - 1): colour for i, j, colour in data["edges"]
        }
        return "bipartite", ColouredBipartiteGraph(n, m, edges)
    if "vertices" in data:
        n = int(data["vertices"])
        colours = {
            (int(i) - 1, int(j) - 1): colour
            for i, j, colour in data.get("edges", [])
        }
        return "idempotent", ColouredDigraph.from_partial(n, colours)
    if "bidegree" in data:
        n, m = (int(x) for x in data["bidegree"])
        gens = [
            (parse_cycles(g, n), parse_cycles(h, m))
            for g, h in data["generators"]
        ]
        paired = PairedPermGroup((n, m), gens)
        from .permgroups import paired_orbit_colouring

        return "bipartite", paired_orbit_colouring(paired)
    if "degree" in data:
        n = int(data["degree"])
        return "idempotent", PermGroup.from_cycles(n, data.get("generators", []))
    raise ValueError("unrecognised construction spec")
