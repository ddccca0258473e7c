"""Finite permutation groups and 2-closure machinery.

Permutations are 0-indexed internally and 1-indexed in all text I/O
(cycle notation like ``(1,3,2)(5,10,7)``; the identity is ``()``).

A group is 2-closed when it already contains every permutation preserving
its orbits of ordered pairs, i.e. when it is the full automorphism group of
the coloured complete digraph whose colours are those orbits.  The paired
variant colours the product of two vertex sets and closes inside the
product of the two symmetric groups.  Automorphism groups of coloured
graphs are computed by backtracking over a colour-refined partition, one
base point at a time, so only generators and the order are produced (the
group itself is never listed).
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence

from .errors import OrderCapExceeded, SearchBudgetExceeded
from .graphs import ColouredBipartiteGraph, ColouredDigraph

DEFAULT_ORDER_CAP = 10**6
AUT_DEGREE_BOUND = 20


class NotFaithful(ValueError):
    """A paired action where one side does not determine the other."""


class Perm:
    """A permutation of {0, .., n-1}, stored as its image tuple."""

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    def __setattr__(self, name, value):
        raise AttributeError("Perm is immutable")

    @classmethod
    def identity(cls, n: int) -> "Perm":
        return cls(range(n))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Perm") -> "Perm":
        """Apply self first, then other (matches matrix multiplication of
        the corresponding permutation matrices)."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Perm(tuple(other.images[x] for x in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, x in enumerate(self.images):
            inv[x] = i
        return Perm(inv)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def order(self) -> int:
        from math import lcm

        out = 1
        for c in self.cycles():
            out = lcm(out, len(c))
        return out

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles, each rotated to start at its least point,
        sorted by that point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.images[start]
            while x != start:
                seen[x] = True
                cyc.append(x)
                x = self.images[x]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def __eq__(self, other):
        return isinstance(other, Perm) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other: "Perm"):
        return self.images < other.images

    def __repr__(self):
        return f"Perm({format_cycles(self)!r})"


_CYCLE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str, degree: int) -> Perm:
    """Parse 1-indexed cycle notation; the identity is ``()`` or `````` ."""
    s = re.sub(r"\s+", "", text)
    images = list(range(degree))
    pos = 0
    while pos < len(s):
        m = _CYCLE.match(s, pos)
        if m is None:
            raise ValueError(f"cannot parse cycle notation {text!r} at {pos}")
        body = m.group(1)
        if body:
            points = [int(tok) for tok in body.split(",")]
            if any(p < 1 or p > degree for p in points):
                raise ValueError(f"point out of range 1..{degree} in {text!r}")
            if len(set(points)) != len(points):
                raise ValueError(f"repeated point in cycle {text!r}")
            for a, b in zip(points, points[1:] + points[:1]):
                images[a - 1] = b - 1
        pos = m.end()
    return Perm(images)


def format_cycles(p: Perm) -> str:
    cycles = p.cycles()
    if not cycles:
        return "()"
    return "".join("(" + ",".join(str(x + 1) for x in cyc) + ")" for cyc in cycles)


class PermGroup:
    """A finite permutation group given by generators."""

    __slots__ = ("degree", "generators", "_order", "_elements")

    def __init__(
        self,
        degree: int,
        generators: Iterable[Perm] = (),
        *,
        known_order: Optional[int] = None,
    ):
        gens = tuple(g for g in generators if not g.is_identity())
        for g in gens:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_order", [known_order])
        object.__setattr__(self, "_elements", [None])

    def __setattr__(self, name, value):
        raise AttributeError("PermGroup is immutable")

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, ())

    @classmethod
    def from_cycles(cls, degree: int, gens: Iterable[str]) -> "PermGroup":
        return cls(degree, [parse_cycles(g, degree) for g in gens])

    def elements(self, cap: int = DEFAULT_ORDER_CAP) -> frozenset[Perm]:
        """Breadth-first product closure of the generators."""
        if self._elements[0] is not None:
            return self._elements[0]
        ident = Perm.identity(self.degree)
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = x * g
                    if y not in seen:
                        if len(seen) >= cap:
                            raise OrderCapExceeded(
                                f"group order exceeds the cap {cap}"
                            )
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        out = frozenset(seen)
        self._elements[0] = out
        self._order[0] = len(out)
        return out

    def order(self, cap: int = DEFAULT_ORDER_CAP) -> int:
        if self._order[0] is None:
            self.elements(cap)
        return self._order[0]

    def contains(self, p: Perm, cap: int = DEFAULT_ORDER_CAP) -> bool:
        return p in self.elements(cap)

    def is_trivial(self) -> bool:
        return not self.generators

    def __repr__(self):
        gens = ", ".join(format_cycles(g) for g in self.generators) or "()"
        return f"PermGroup(degree={self.degree}, <{gens}>)"


class PairedPermGroup:
    """A group acting on two sets, given by generator pairs (left, right).

    The group is the set of pairs generated componentwise.  Both coordinate
    projections must be faithful."""

    __slots__ = ("degrees", "generators", "_order", "_elements")

    def __init__(
        self,
        degrees: tuple[int, int],
        generators: Iterable[tuple[Perm, Perm]] = (),
        *,
        known_order: Optional[int] = None,
    ):
        gens = tuple(
            (g, h)
            for g, h in generators
            if not (g.is_identity() and h.is_identity())
        )
        for g, h in gens:
            if g.degree != degrees[0] or h.degree != degrees[1]:
                raise ValueError("generator degree mismatch")
        object.__setattr__(self, "degrees", tuple(degrees))
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "_order", [known_order])
        object.__setattr__(self, "_elements", [None])

    def __setattr__(self, name, value):
        raise AttributeError("PairedPermGroup is immutable")

    def elements(self, cap: int = DEFAULT_ORDER_CAP) -> frozenset[tuple[Perm, Perm]]:
        if self._elements[0] is not None:
            return self._elements[0]
        ident = (Perm.identity(self.degrees[0]), Perm.identity(self.degrees[1]))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = (x[0] * g[0], x[1] * g[1])
                    if y not in seen:
                        if len(seen) >= cap:
                            raise OrderCapExceeded(
                                f"group order exceeds the cap {cap}"
                            )
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        for g, h in seen:
            if g.is_identity() != h.is_identity():
                raise NotFaithful(
                    "one-sided kernel element: the paired action is not faithful"
                )
        out = frozenset(seen)
        self._elements[0] = out
        self._order[0] = len(out)
        return out

    def order(self, cap: int = DEFAULT_ORDER_CAP) -> int:
        if self._order[0] is None:
            self.elements(cap)
        return self._order[0]

    def left_group(self) -> PermGroup:
        return PermGroup(self.degrees[0], [g for g, _ in self.generators])

    def right_group(self) -> PermGroup:
        return PermGroup(self.degrees[1], [h for _, h in self.generators])

    def __repr__(self):
        return f"PairedPermGroup(degrees={self.degrees}, ngens={len(self.generators)})"


def group_order(g: PermGroup, cap: int = DEFAULT_ORDER_CAP) -> int:
    return g.order(cap)


# -- orbit colourings --


def pair_orbit_colouring(g: PermGroup) -> ColouredDigraph:
    """Colour each ordered pair (i, j), i != j, by its orbit id under the
    diagonal action.  Orbit ids are numbered by the least pair they
    contain, in lexicographic order."""
    n = g.degree
    colour = {}
    next_id = 0
    for i in range(n):
        for j in range(n):
            if i == j or (i, j) in colour:
                continue
            stack = [(i, j)]
            colour[(i, j)] = next_id
            while stack:
                a, b = stack.pop()
                for p in g.generators:
                    img = (p(a), p(b))
                    if img not in colour:
                        colour[img] = next_id
                        stack.append(img)
            next_id += 1
    return ColouredDigraph(n, colour)


def paired_orbit_colouring(g: PairedPermGroup) -> ColouredBipartiteGraph:
    """Orbit colouring of the full product of the two vertex sets."""
    n, m = g.degrees
    colour = {}
    next_id = 0
    for i in range(n):
        for j in range(m):
            if (i, j) in colour:
                continue
            stack = [(i, j)]
            colour[(i, j)] = next_id
            while stack:
                a, b = stack.pop()
                for p, q in g.generators:
                    img = (p(a), q(b))
                    if img not in colour:
                        colour[img] = next_id
                        stack.append(img)
            next_id += 1
    return ColouredBipartiteGraph(n, m, colour)


# -- coloured-graph automorphisms --


class _AutomorphismSearch:
    """Backtracking automorphism engine over an edge-coloured structure on
    nv vertices.

    ``ecol`` is a dense nv x nv matrix of integer edge colours (any value
    is fine on the diagonal; use a reserved value for absent edges);
    ``init`` is an initial vertex colouring (used to separate the sides of
    a bipartite structure).  Produces a strong generating sequence and the
    exact group order without enumerating the group.
    """

    def __init__(self, nv, ecol, init):
        self.nv = nv
        self.ecol = ecol
        self.colour = self._refine(list(init))

    def _refine(self, colour):
        while True:
            sigs = []
            for v in range(self.nv):
                row = self.ecol[v]
                profile = sorted(
                    (colour[u], row[u], self.ecol[u][v])
                    for u in range(self.nv)
                    if u != v
                )
                sigs.append((colour[v], tuple(profile)))
            ids = {s: k for k, s in enumerate(sorted(set(sigs)))}
            fresh = [ids[s] for s in sigs]
            if fresh == colour:
                return colour
            colour = fresh

    def _compatible(self, v, w, mapping):
        if self.colour[v] != self.colour[w]:
            return False
        ecol = self.ecol
        for u, x in mapping.items():
            if ecol[v][u] != ecol[w][x] or ecol[u][v] != ecol[x][w]:
                return False
        return True

    def _extend(self, mapping, used):
        """Depth-first completion of a partial automorphism; returns a full
        image list or None."""
        if len(mapping) == self.nv:
            return [mapping[v] for v in range(self.nv)]
        best_v, best_cands = None, None
        for v in range(self.nv):
            if v in mapping:
                continue
            cands = [
                w
                for w in range(self.nv)
                if w not in used and self._compatible(v, w, mapping)
            ]
            if not cands:
                return None
            if best_cands is None or len(cands) < len(best_cands):
                best_v, best_cands = v, cands
                if len(cands) == 1:
                    break
        for w in best_cands:
            mapping[best_v] = w
            used.add(w)
            result = self._extend(mapping, used)
            if result is not None:
                return result
            del mapping[best_v]
            used.discard(w)
        return None

    def run(self) -> tuple[list[list[int]], int]:
        """Strong generators and the order of the automorphism group."""
        generators: list[list[int]] = []
        order = 1
        base_prefix: dict[int, int] = {}
        for b in range(self.nv):
            candidates = [
                w
                for w in range(self.nv)
                if w not in base_prefix.values() and self.colour[w] == self.colour[b]
            ]
            orbit = 0
            for w in candidates:
                mapping = dict(base_prefix)
                mapping[b] = w
                used = set(mapping.values())
                if len(used) != len(mapping):
                    continue
                if not self._compatible(b, w, base_prefix):
                    continue
                image = self._extend(mapping, used)
                if image is not None:
                    orbit += 1
                    if w != b:
                        generators.append(image)
            order *= orbit
            base_prefix[b] = b
        return generators, order


def _dense_colour_ids(pairs, lookup):
    """Deterministic integer ids for colours, by first occurrence along the
    lexicographic pair scan.  Absent edges map to -2."""
    ids: dict = {}
    out: dict[tuple[int, int], int] = {}
    for key in pairs:
        c = lookup(key)
        if c is _ABSENT:
            out[key] = -2
            continue
        if c not in ids:
            ids[c] = len(ids)
        out[key] = ids[c]
    return out


_ABSENT = object()


def coloured_automorphisms(d: ColouredDigraph) -> PermGroup:
    """All vertex permutations preserving the edge colours, as generators
    with the exact order attached."""
    if d.n > AUT_DEGREE_BOUND:
        raise SearchBudgetExceeded(
            f"automorphism search is bounded to {AUT_DEGREE_BOUND} vertices"
        )
    n = d.n
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    dense = _dense_colour_ids(pairs, lambda key: d.colours[key])
    ecol = [[-1] * n for _ in range(n)]
    for (i, j), c in dense.items():
        ecol[i][j] = c
    gens, order = _AutomorphismSearch(n, ecol, [0] * n).run()
    return PermGroup(n, [Perm(g) for g in gens], known_order=order)


def coloured_bipartite_automorphisms(g: ColouredBipartiteGraph) -> PairedPermGroup:
    """All side-preserving pair permutations preserving the edge colours."""
    n, m = g.n, g.m
    if max(n, m) > AUT_DEGREE_BOUND:
        raise SearchBudgetExceeded(
            f"automorphism search is bounded to {AUT_DEGREE_BOUND} vertices per side"
        )
    pairs = [(i, j) for i in range(n) for j in range(m)]
    dense = _dense_colour_ids(pairs, lambda key: g.edges.get(key, _ABSENT))
    nv = n + m
    ecol = [[-1] * nv for _ in range(nv)]
    for (i, j), c in dense.items():
        ecol[i][n + j] = c
    gens, order = _AutomorphismSearch(nv, ecol, [0] * n + [1] * m).run()
    pairs_out = [(Perm(img[:n]), Perm([x - n for x in img[n:]])) for img in gens]
    return PairedPermGroup((n, m), pairs_out, known_order=order)


# -- 2-closures --


def two_closure(g: PermGroup) -> PermGroup:
    """The largest group with the same orbits of ordered pairs."""
    if g.degree == 1:
        return PermGroup(1, (), known_order=1)
    return coloured_automorphisms(pair_orbit_colouring(g))


def is_two_closed(g: PermGroup, cap: int = DEFAULT_ORDER_CAP) -> bool:
    return g.order(cap) == two_closure(g).order(cap)


def paired_two_closure(g: PairedPermGroup) -> PairedPermGroup:
    """The largest subgroup of the product of the two symmetric groups
    preserving the orbits on the product set."""
    g.elements()  # validates faithfulness
    return coloured_bipartite_automorphisms(paired_orbit_colouring(g))


def is_paired_two_closed(g: PairedPermGroup, cap: int = DEFAULT_ORDER_CAP) -> bool:
    return g.order(cap) == paired_two_closure(g).order(cap)


# -- irreducibility of coloured bipartite graphs --


def is_irreducible(g: ColouredBipartiteGraph) -> bool:
    """False iff some vertex is isolated or two same-side vertices have
    identical coloured neighbourhoods."""
    out_of = [dict() for _ in range(g.n)]
    into = [dict() for _ in range(g.m)]
    for (i, j), c in g.edges.items():
        out_of[i][j] = c
        into[j][i] = c
    if any(not d for d in out_of) or any(not d for d in into):
        return False
    for i in range(g.n):
        for i2 in range(i + 1, g.n):
            if out_of[i] == out_of[i2]:
                return False
    for j in range(g.m):
        for j2 in range(j + 1, g.m):
            if into[j] == into[j2]:
                return False
    return True


# -- abstract isomorphism of small groups --

ISO_ORDER_CAP = 10**4


def _element_list(g: PermGroup, cap: int) -> list[Perm]:
    return sorted(g.elements(cap))


def _generating_sequence(elements: list[Perm], degree: int) -> list[Perm]:
    """A short generating sequence, grown greedily in canonical order."""
    have = {Perm.identity(degree)}
    gens: list[Perm] = []
    for x in elements:
        if x in have:
            continue
        gens.append(x)
        frontier = list(have)
        have.add(x)
        queue = [x]
        while queue:
            a = queue.pop()
            for b in list(have):
                for c in (a * b, b * a):
                    if c not in have:
                        have.add(c)
                        queue.append(c)
        if len(have) == len(elements):
            break
    return gens


def groups_isomorphic(
    g: PermGroup, h: PermGroup, cap: int = ISO_ORDER_CAP
) -> bool:
    """Exact abstract-group isomorphism for orders up to the cap."""
    ge = _element_list(g, cap)
    he = _element_list(h, cap)
    if len(ge) != len(he):
        return False
    if sorted(x.order() for x in ge) != sorted(x.order() for x in he):
        return False

    def abelian(elems):
        return all(a * b == b * a for a in elems for b in elems)

    if abelian(ge) != abelian(he):
        return False
    if len(ge) == 1:
        return True

    gens = _generating_sequence(ge, g.degree)
    h_by_order: dict[int, list[Perm]] = {}
    for x in he:
        h_by_order.setdefault(x.order(), []).append(x)

    # words expressing every element of G over the generating sequence
    ident = Perm.identity(g.degree)
    word: dict[Perm, tuple] = {ident: ()}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for k, s in enumerate(gens):
                b = a * s
                if b not in word:
                    word[b] = word[a] + (k,)
                    nxt.append(b)
        frontier = nxt
    assert len(word) == len(ge)

    def evaluate(images: Sequence[Perm], w: tuple) -> Perm:
        out = Perm.identity(h.degree)
        for k in w:
            out = out * images[k]
        return out

    def check(images: Sequence[Perm]) -> bool:
        phi = {a: evaluate(images, w) for a, w in word.items()}
        if len(set(phi.values())) != len(phi):
            return False
        for a in ge:
            pa = phi[a]
            for k, s in enumerate(gens):
                if phi[a * s] != pa * images[k]:
                    return False
        return True

    def closure(base: set[Perm], extra: Perm) -> set[Perm]:
        out = set(base)
        out.add(extra)
        queue = [extra]
        while queue:
            a = queue.pop()
            for b in list(out):
                for c in (a * b, b * a):
                    if c not in out:
                        out.add(c)
                        queue.append(c)
        return out

    prefix_sizes = []
    g_span: set[Perm] = {Perm.identity(g.degree)}
    for s in gens:
        g_span = closure(g_span, s)
        prefix_sizes.append(len(g_span))

    def assign(k: int, images: list[Perm], span: set[Perm]) -> bool:
        if k == len(gens):
            return check(images)
        target_order = gens[k].order()
        for cand in h_by_order.get(target_order, ()):
            if cand in span:
                continue
            new_span = closure(span, cand)
            if len(new_span) != prefix_sizes[k]:
                continue
            if assign(k + 1, images + [cand], new_span):
                return True
        return False

    return assign(0, [], {Perm.identity(h.degree)})


# -- a small catalogue of recognisable groups --


def _named_catalogue() -> list[tuple[str, PermGroup]]:
    cat: list[tuple[str, PermGroup]] = [("1", PermGroup.trivial(1))]
    for k in range(2, 13):
        cyc = "(" + ",".join(str(i) for i in range(1, k + 1)) + ")"
        name = "S2" if k == 2 else f"C{k}"
        cat.append((name, PermGroup.from_cycles(k, [cyc])))
    cat.append(("C2xC2", PermGroup.from_cycles(4, ["(1,2)", "(3,4)"])))
    cat.append(("S3", PermGroup.from_cycles(3, ["(1,2,3)", "(1,2)"])))
    cat.append(("D4", PermGroup.from_cycles(4, ["(1,2,3,4)", "(1,3)"])))
    cat.append(("C4xC2", PermGroup.from_cycles(6, ["(1,2,3,4)", "(5,6)"])))
    cat.append(("C2^3", PermGroup.from_cycles(6, ["(1,2)", "(3,4)", "(5,6)"])))
    cat.append(("D5", PermGroup.from_cycles(5, ["(1,2,3,4,5)", "(2,5)(3,4)"])))
    cat.append(("D6", PermGroup.from_cycles(6, ["(1,2,3,4,5,6)", "(2,6)(3,5)"])))
    cat.append(("A4", PermGroup.from_cycles(4, ["(1,2,3)", "(1,2)(3,4)"])))
    cat.append(("S4", PermGroup.from_cycles(4, ["(1,2,3,4)", "(1,2)"])))
    cat.append(
        ("A4xA4", PermGroup.from_cycles(8, ["(1,2,3)", "(1,2)(3,4)", "(5,6,7)", "(5,6)(7,8)"]))
    )
    return cat


_CATALOGUE: Optional[list[tuple[str, PermGroup]]] = None


def identify_group(g: PermGroup) -> Optional[str]:
    """A standard name for the abstract group, if it is in the catalogue."""
    global _CATALOGUE
    if _CATALOGUE is None:
        _CATALOGUE = _named_catalogue()
    try:
        order = g.order(ISO_ORDER_CAP)
    except OrderCapExceeded:
        return None
    for name, h in _CATALOGUE:
        if h.order() == order and groups_isomorphic(g, h):
            return name
    return None
