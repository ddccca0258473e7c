"""Exact scalars for max-plus arithmetic.

A finite scalar is a rational "standard part" plus finitely many rational
multiples of infinitesimal units e1, e2, ...  Scalars are ordered
lexicographically: standard part first, then infinitesimal coordinates in
increasing tag order (absent coordinates count as zero).  The standard part
dominates, so a strict inequality between standard parts can never be
flipped by infinitesimal terms, while fresh tags keep chosen entries
rationally independent.  The value group is divisible: every scalar has an
exact n-th part.

`-inf` is the additive (max) identity and the absorbing element for
multiplication (classical addition).

Text grammar: ``-inf`` | a sum of signed terms, each a rational ``p`` /
``p/q`` or an infinitesimal term ``[coeff]e<tag>``, e.g. ``-1+e3`` or
``9/10-2e1+e2``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence, Union


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


class Value:
    """A finite scalar: rational standard part plus infinitesimal terms.

    Immutable.  ``eps`` is a tuple of (tag, coefficient) pairs, sorted by
    tag, with no zero coefficients stored.
    """

    __slots__ = ("std", "eps", "_hash")

    def __init__(self, std=0, eps: Iterable[tuple[int, Fraction]] = ()):
        object.__setattr__(self, "std", _frac(std))
        items = {}
        for tag, coeff in dict(eps).items():
            if not isinstance(tag, int) or tag < 0:
                raise ValueError(f"infinitesimal tag must be a natural number, got {tag!r}")
            coeff = _frac(coeff)
            if coeff != 0:
                items[tag] = coeff
        object.__setattr__(self, "eps", tuple(sorted(items.items())))
        object.__setattr__(self, "_hash", hash((self.std, self.eps)))

    def __setattr__(self, name, value):
        raise AttributeError("Value is immutable")

    # -- arithmetic (classical, i.e. the tropical product structure) --

    def __add__(self, other: "Value") -> "Value":
        if not isinstance(other, Value):
            return NotImplemented
        coeffs = dict(self.eps)
        for tag, c in other.eps:
            coeffs[tag] = coeffs.get(tag, Fraction(0)) + c
        return Value(self.std + other.std, coeffs)

    def __neg__(self) -> "Value":
        return Value(-self.std, tuple((t, -c) for t, c in self.eps))

    def __sub__(self, other: "Value") -> "Value":
        if not isinstance(other, Value):
            return NotImplemented
        return self + (-other)

    def __abs__(self) -> "Value":
        return -self if self < ZERO else self

    def mul_int(self, k: int) -> "Value":
        return Value(self.std * k, tuple((t, c * k) for t, c in self.eps))

    def div_int(self, k: int) -> "Value":
        if k < 1:
            raise ValueError(f"divisor must be a positive integer, got {k}")
        return Value(self.std / k, tuple((t, c / k) for t, c in self.eps))

    # -- total order: standard part, then eps coordinates by tag --

    def _cmp(self, other: "Value") -> int:
        if self.std != other.std:
            return -1 if self.std < other.std else 1
        a, b = self.eps, other.eps
        i = j = 0
        while i < len(a) or j < len(b):
            ta = a[i][0] if i < len(a) else None
            tb = b[j][0] if j < len(b) else None
            if tb is None or (ta is not None and ta < tb):
                ca, cb = a[i][1], Fraction(0)
                i += 1
            elif ta is None or tb < ta:
                ca, cb = Fraction(0), b[j][1]
                j += 1
            else:
                ca, cb = a[i][1], b[j][1]
                i += 1
                j += 1
            if ca != cb:
                return -1 if ca < cb else 1
        return 0

    def __eq__(self, other) -> bool:
        return isinstance(other, Value) and self.std == other.std and self.eps == other.eps

    def __lt__(self, other) -> bool:
        if isinstance(other, Value):
            return self._cmp(other) < 0
        if other is NEG_INF:
            return False
        return NotImplemented

    def __le__(self, other) -> bool:
        if isinstance(other, Value):
            return self._cmp(other) <= 0
        if other is NEG_INF:
            return False
        return NotImplemented

    def __gt__(self, other) -> bool:
        if isinstance(other, Value):
            return self._cmp(other) > 0
        if other is NEG_INF:
            return True
        return NotImplemented

    def __ge__(self, other) -> bool:
        if isinstance(other, Value):
            return self._cmp(other) >= 0
        if other is NEG_INF:
            return True
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Value({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)


class _NegInf:
    """The semiring zero.  A singleton, below every finite scalar."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        if isinstance(other, Value):
            return True
        if other is self:
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Value) or other is self:
            return True
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, Value) or other is self:
            return False
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, Value):
            return False
        if other is self:
            return True
        return NotImplemented

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __reduce__(self):
        return (_NegInf, ())


NEG_INF = _NegInf()
ZERO = Value(0)

TropScalar = Union[Value, _NegInf]


def is_finite(x: TropScalar) -> bool:
    return isinstance(x, Value)


def val(x) -> Value:
    """Coerce an int, Fraction or string to a finite scalar."""
    if isinstance(x, Value):
        return x
    if isinstance(x, (int, Fraction)):
        return Value(x)
    if isinstance(x, str):
        s = parse_scalar(x)
        if s is NEG_INF:
            raise ValueError("-inf is not a finite scalar")
        return s
    raise TypeError(f"cannot interpret {x!r} as a finite scalar")


def eps(tag: int, coeff=1) -> Value:
    """The infinitesimal unit e<tag>, optionally scaled."""
    return Value(0, ((tag, _frac(coeff)),))


def as_scalar(x) -> TropScalar:
    """Coerce to a scalar; accepts NEG_INF, Value, int, Fraction, str."""
    if x is NEG_INF or isinstance(x, Value):
        return x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, (int, Fraction)):
        return Value(x)
    raise TypeError(f"cannot interpret {x!r} as a tropical scalar")


# -- semiring operations --


def trop_add(a: TropScalar, b: TropScalar) -> TropScalar:
    """Tropical sum: the maximum of the two scalars."""
    if a is NEG_INF:
        return b
    if b is NEG_INF:
        return a
    return a if a._cmp(b) >= 0 else b


def trop_mul(a: TropScalar, b: TropScalar) -> TropScalar:
    """Tropical product: classical addition, absorbed by -inf."""
    if a is NEG_INF or b is NEG_INF:
        return NEG_INF
    return a + b


def trop_sum(items: Iterable[TropScalar]) -> TropScalar:
    acc: TropScalar = NEG_INF
    for x in items:
        acc = trop_add(acc, x)
    return acc


def value_div_int(a: Value, k: int) -> Value:
    """The exact scalar v with k*v = a (the value group is divisible)."""
    return a.div_int(k)


def free_basis_check(vals: Sequence[Value]) -> bool:
    """True iff no nontrivial integer combination of the scalars vanishes.

    With the rational-plus-infinitesimal representation this is linear
    independence over the rationals, decided by exact Gaussian elimination
    on the (standard, infinitesimal-coordinate) vectors.
    """
    vals = list(vals)
    if not vals:
        return True
    tags = sorted({t for v in vals for t, _ in v.eps})
    pos = {t: i + 1 for i, t in enumerate(tags)}
    width = 1 + len(tags)
    rows = []
    for v in vals:
        row = [Fraction(0)] * width
        row[0] = v.std
        for t, c in v.eps:
            row[pos[t]] = c
        rows.append(row)
    rank = 0
    col = 0
    n = len(rows)
    while rank < n and col < width:
        piv = next((r for r in range(rank, n) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, n):
            if rows[r][col] != 0:
                f = rows[r][col] / lead
                for c in range(col, width):
                    rows[r][c] -= f * rows[rank][c]
        rank += 1
        col += 1
    return rank == len(vals)


# -- text format --

_TERM = re.compile(r"([+-]?)(?:(\d+(?:/\d+)?)?e(\d+)|(\d+(?:/\d+)?))")


def parse_scalar(text: str) -> TropScalar:
    """Parse the scalar grammar: ``-inf`` | signed rational and e-terms."""
    s = text.strip()
    if s in ("-inf", "-Inf", "-INF"):
        return NEG_INF
    if not s:
        raise ValueError("empty scalar")
    if any(ch.isspace() for ch in s):
        raise ValueError(f"scalar may not contain whitespace: {text!r}")
    std = Fraction(0)
    coeffs: dict[int, Fraction] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == m.start():
            raise ValueError(f"cannot parse scalar {text!r} at position {pos}")
        sign, ecoeff, etag, rat = m.groups()
        if not first and sign == "":
            raise ValueError(f"missing sign between terms in scalar {text!r}")
        sgn = -1 if sign == "-" else 1
        if etag is not None:
            c = Fraction(ecoeff) if ecoeff else Fraction(1)
            tag = int(etag)
            coeffs[tag] = coeffs.get(tag, Fraction(0)) + sgn * c
        else:
            std += sgn * Fraction(rat)
        pos = m.end()
        first = False
    return Value(std, coeffs)


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: TropScalar) -> str:
    """Canonical text form; round-trips through parse_scalar."""
    if x is NEG_INF:
        return "-inf"
    if not isinstance(x, Value):
        raise TypeError(f"not a tropical scalar: {x!r}")
    parts: list[str] = []
    if x.std != 0 or not x.eps:
        parts.append(_frac_str(x.std))
    for tag, c in x.eps:
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coeff = "" if mag == 1 else _frac_str(mag)
        parts.append(f"{sign}{coeff}e{tag}")
    out = "".join(parts)
    if out.startswith("+"):
        out = out[1:]
    return out
