"""Slopes on a torus, the SL(2,Z) action on them, and the Farey structure.

A slope is an unoriented line through the origin of Z^2, stored as the
primitive vector ``(p, q)`` with ``p > 0`` (or ``(0, 1)`` for infinity).
Its numeric value is ``q/p``, so the meridian ``(1, 0)`` has slope 0 and
the longitude ``(0, 1)`` has slope infinity.

The circle Q u {inf} is oriented by value: *counterclockwise* means
increasing value (passing from +inf to -inf at infinity) and *clockwise*
means decreasing value.  Determinant-one matrices preserve this cyclic
order, which is what makes every construction here SL(2,Z)-equivariant.
"""
from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

from .errors import NotUnimodular, SlopeSyntaxError, ZeroVector

__all__ = [
    "Slope", "GluingMatrix", "Direction", "SlopeArc", "INF", "ZERO",
    "canonical", "apply", "intersection_number", "farey_neighbors",
    "normalize_to", "arc_contains", "parse_slope", "parse_matrix",
    "extended_gcd",
]


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b) >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_x, x = x, old_x - quo * x
        old_y, y = y, old_y - quo * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


@dataclass(frozen=True, order=False)
class Slope:
    """Canonical primitive vector ``(p, q)``; use :func:`canonical` to build."""

    p: int
    q: int

    def __post_init__(self):
        if self.p == 0 and self.q == 0:
            raise ZeroVector("(0, 0) is not a slope")
        if math.gcd(self.p, self.q) != 1 or not (
            self.p > 0 or (self.p == 0 and self.q == 1)
        ):
            raise ValueError(
                f"({self.p}, {self.q}) is not canonical; use canonical()"
            )

    @property
    def is_infinite(self) -> bool:
        return self.p == 0

    @property
    def value(self) -> Optional[Fraction]:
        """``q/p`` as a Fraction, or None for the infinite slope."""
        if self.p == 0:
            return None
        return Fraction(self.q, self.p)

    @property
    def vector(self) -> tuple[int, int]:
        return (self.p, self.q)

    def reciprocal(self) -> "Slope":
        """The slope ``1/s`` (swap coordinates)."""
        return canonical(self.q, self.p)

    def negated(self) -> "Slope":
        """The slope ``-s``; this is how an orientation reversal acts."""
        return canonical(self.p, -self.q)

    def __str__(self) -> str:
        if self.p == 0:
            return "inf"
        if self.p == 1:
            return str(self.q)
        return f"{self.q}/{self.p}"

    def __repr__(self) -> str:
        return f"Slope({self})"


def canonical(p: int, q: int) -> Slope:
    """Canonical primitive representative of the line through ``(p, q)``."""
    if p == 0 and q == 0:
        raise ZeroVector("(0, 0) does not span a line")
    g = math.gcd(p, q)
    p, q = p // g, q // g
    if p < 0 or (p == 0 and q < 0):
        p, q = -p, -q
    return Slope(p, q)


INF = Slope(0, 1)
ZERO = Slope(1, 0)

_SLOPE_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*([+-]?\d+))?\s*$")


def parse_slope(text: str) -> Slope:
    """Parse ``q/p``, an integer ``q``, or ``inf``.

    Denominators may be negative or zero, so ``1/-4`` and ``1/0`` are
    accepted (as -1/4 and inf).
    """
    t = text.strip()
    if t.lower() in ("inf", "+inf", "-inf", "infinity", "∞"):
        return INF
    m = _SLOPE_RE.match(t)
    if not m:
        raise SlopeSyntaxError(f"cannot parse slope {text!r}")
    q = int(m.group(1))
    p = int(m.group(2)) if m.group(2) is not None else 1
    return canonical(p, q)


@dataclass(frozen=True)
class GluingMatrix:
    """A 2x2 integer matrix ``[[a, b], [c, d]]`` of determinant one."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise NotUnimodular(f"{self} has determinant {self.det}, not 1")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "GluingMatrix":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_columns(cls, u, v) -> "GluingMatrix":
        return cls(u[0], v[0], u[1], v[1])

    def inverse(self) -> "GluingMatrix":
        return GluingMatrix(self.d, -self.b, -self.c, self.a)

    def __matmul__(self, other: "GluingMatrix") -> "GluingMatrix":
        return GluingMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "GluingMatrix":
        return GluingMatrix(-self.a, -self.b, -self.c, -self.d)

    def mul_vector(self, p: int, q: int) -> tuple[int, int]:
        return (self.a * p + self.b * q, self.c * p + self.d * q)

    @property
    def first_column(self) -> tuple[int, int]:
        return (self.a, self.c)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


_MATRIX_RE = re.compile(
    r"^\s*\[\s*\[\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\]\s*,"
    r"\s*\[\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\]\s*\]\s*$"
)


def parse_matrix(text: str) -> GluingMatrix:
    m = _MATRIX_RE.match(text)
    if not m:
        raise SlopeSyntaxError(f"cannot parse matrix {text!r}")
    return GluingMatrix(*(int(g) for g in m.groups()))


def apply(A: GluingMatrix, s: Slope) -> Slope:
    return canonical(*A.mul_vector(s.p, s.q))


def intersection_number(s: Slope, t: Slope) -> int:
    """Geometric intersection number of the curve classes ``s`` and ``t``."""
    return abs(s.p * t.q - t.p * s.q)


class Direction(enum.Enum):
    CLOCKWISE = "cw"
    COUNTERCLOCKWISE = "ccw"

    @classmethod
    def parse(cls, text: str) -> "Direction":
        t = text.strip().lower()
        if t in ("cw", "clockwise"):
            return cls.CLOCKWISE
        if t in ("ccw", "counterclockwise", "anticlockwise"):
            return cls.COUNTERCLOCKWISE
        raise SlopeSyntaxError(f"unknown direction {text!r}")

    def reversed(self) -> "Direction":
        if self is Direction.CLOCKWISE:
            return Direction.COUNTERCLOCKWISE
        return Direction.CLOCKWISE


def _cw_rank(s: Slope):
    # Rank increasing in the clockwise (decreasing value) sense, starting
    # at infinity.
    if s.p == 0:
        return (0, Fraction(0))
    return (1, -Fraction(s.q, s.p))


def _cw_offset(start: Slope, s: Slope):
    """Sort key measuring how far clockwise ``s`` lies from ``start``."""
    r0, r = _cw_rank(start), _cw_rank(s)
    return (0, r) if r >= r0 else (1, r)


@dataclass(frozen=True)
class SlopeArc:
    """The arc of the slope circle traced from ``start`` to ``end``."""

    start: Slope
    end: Slope
    direction: Direction = Direction.COUNTERCLOCKWISE

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("an arc needs distinct endpoints")

    def reversed(self) -> "SlopeArc":
        return SlopeArc(self.end, self.start, self.direction.reversed())

    def contains(self, s: Slope, *, closed: bool = True) -> bool:
        if s == self.start or s == self.end:
            return closed
        if self.direction is Direction.CLOCKWISE:
            a, b = self.start, self.end
        else:
            a, b = self.end, self.start
        return _cw_offset(a, s) < _cw_offset(a, b)

    def __str__(self) -> str:
        return f"{self.start} -> {self.end} ({self.direction.value})"


def arc_contains(arc: SlopeArc, s: Slope) -> bool:
    """Closed-arc membership, wrapping through infinity as needed."""
    return arc.contains(s, closed=True)


def farey_neighbors(s: Slope, arc: SlopeArc) -> Iterator[Slope]:
    """Farey neighbors of ``s`` on the open arc, ordered toward ``s``.

    ``arc.end`` must equal ``s``.  The generator is infinite; the
    neighbors accumulate only at ``s``.
    """
    if arc.end != s:
        raise ValueError("farey_neighbors needs an arc ending at s")
    # Columns (t0, s) of determinant one send 0 -> t0 and inf -> s, and the
    # neighbors t0 + k*s to the integers k.
    _, x, y = extended_gcd(s.p, s.q)
    t0 = (y, -x)
    m_inv = GluingMatrix.from_columns(t0, s.vector).inverse()
    f = apply(m_inv, arc.start)
    y_val = Fraction(f.q, f.p)
    if arc.direction is Direction.COUNTERCLOCKWISE:
        ks = itertools.count(math.floor(y_val) + 1)
    else:
        ks = itertools.count(math.ceil(y_val) - 1, -1)
    for k in ks:
        yield canonical(t0[0] + k * s.p, t0[1] + k * s.q)


def normalize_to(s: Slope, target: Slope) -> GluingMatrix:
    """Deterministic ``B`` in SL(2,Z) with ``apply(B, s) == target``.

    Every such ``B`` has the form ``+-(B0 + k * t (x) w)`` for one integer
    parameter ``k``.  The choice minimizes the largest absolute entry,
    then the entry sum, then prefers a nonnegative upper-left entry, then
    ``B s = +target`` over ``-target``, then the smaller ``|k|`` (and
    positive ``k`` on a tie).
    """
    _, x, y = extended_gcd(s.p, s.q)
    m_s = GluingMatrix.from_columns(s.vector, (-y, x))
    _, x2, y2 = extended_gcd(target.p, target.q)
    m_t = GluingMatrix.from_columns(target.vector, (-y2, x2))
    b0 = m_t @ m_s.inverse()
    # Direction of the one-parameter family: t * (-s.q, s.p).
    step = (
        target.p * -s.q, target.p * s.p,
        target.q * -s.q, target.q * s.p,
    )
    base = (b0.a, b0.b, b0.c, b0.d)
    # The cost is convex and piecewise linear in k, so its minimum sits
    # next to a point where two entries agree up to sign or one vanishes.
    lines = list(zip(base, step))
    roots = [Fraction(-e, d) for e, d in lines if d]
    for (e1, d1), (e2, d2) in itertools.combinations(lines, 2):
        for sgn in (1, -1):
            if d1 - sgn * d2:
                roots.append(Fraction(sgn * e2 - e1, d1 - sgn * d2))
    candidates = {0}
    for r in roots:
        for k in (math.floor(r), math.ceil(r)):
            candidates.update((k - 1, k, k + 1))

    def cost(k, sign):
        entries = [sign * (e + k * d) for e, d in zip(base, step)]
        return (
            max(abs(v) for v in entries),
            sum(abs(v) for v in entries),
            entries[0] < 0,
            sign < 0,
            abs(k),
            k < 0,
        )

    best_k, best_sign = min(
        ((k, sign) for k in candidates for sign in (1, -1)),
        key=lambda ks: cost(*ks),
    )
    return GluingMatrix(
        *(best_sign * (e + best_k * d) for e, d in zip(base, step))
    )
