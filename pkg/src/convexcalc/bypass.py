"""State transitions of convex tori: bypasses, stabilization, rounding.

Side convention (fixed here and nowhere else): a bypass on the ``front``
of a torus moves the dividing slope along the counterclockwise
(increasing-value) arc from the ruling slope toward the dividing slope;
``back`` uses the clockwise arc.  With this choice a bypass along a
ruling curve of slope in (-1/m, -1/(m+1)) on a torus of slope 0 lands on
-1/(m+1), and a vertical bypass on slope -1/6 lands on -1/5.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EqualSlopes, NotStandard, OddCount, UnequalCounts
from .farey import (
    INF, Direction, Slope, SlopeArc, canonical, farey_neighbors,
    intersection_number,
)
from .surfaces import Arc, DividingSet, Endpoint, FramedTorus

__all__ = [
    "Side", "BypassMove", "Layer", "attach_bypass_torus",
    "bypass_is_trivial", "twist_number_lemma", "imbalance_bypass",
    "stabilize", "twist_of_standard", "edge_round_shift", "cut_and_round_pants",
    "reachable_slopes", "reachable_slopes_solid",
]


class Side(enum.Enum):
    FRONT = "front"
    BACK = "back"

    @property
    def direction(self) -> Direction:
        return _SIDE_DIRECTION[self]


_SIDE_DIRECTION = {
    Side.FRONT: Direction.COUNTERCLOCKWISE,
    Side.BACK: Direction.CLOCKWISE,
}


@dataclass(frozen=True)
class BypassMove:
    attach_slope: Slope
    side: Side = Side.FRONT
    sign: str = "+"

    def __post_init__(self):
        if self.sign not in ("+", "-"):
            raise ValueError(f"bypass sign must be + or -, got {self.sign!r}")


@dataclass(frozen=True)
class Layer:
    """A toric annulus T^2 x [0,1] between two convex tori.

    ``bypass_sign`` is set for the single-bypass layers produced by
    :func:`stabilize`.
    """

    inner: FramedTorus
    outer: FramedTorus
    bypass_sign: Optional[str] = None

    def __post_init__(self):
        if self.inner.frame != self.outer.frame:
            raise ValueError("layer boundaries must share a frame")

    def annulus(self, curve: Slope) -> DividingSet:
        """Dividing set on the convex annulus ``curve x [0,1]``.

        Only available for single-bypass layers: the boundary on the side
        with more intersections carries the one boundary-parallel arc,
        whose half-disk has the sign of the bypass.
        """
        if self.bypass_sign is None:
            raise ValueError("only single-bypass layers have a known annulus")
        n_in = 2 * self.inner.pairs * intersection_number(self.inner.slope, curve)
        n_out = 2 * self.outer.pairs * intersection_number(self.outer.slope, curve)
        if abs(n_in - n_out) != 2:
            raise ValueError(
                f"curve {curve} does not see exactly one bypass "
                f"({n_in} vs {n_out} intersections)")
        big, small = (2, 1) if n_in > n_out else (1, 2)
        n_small = min(n_in, n_out)
        arcs = [Arc(Endpoint(big, k), Endpoint(small, n_small - 1 - k))
                for k in range(n_small)]
        arcs.append(Arc(Endpoint(big, n_small), Endpoint(big, n_small + 1)))
        return DividingSet("annulus", tuple(arcs), (),
                           {f"{big}:{n_small}": self.bypass_sign})


def _neighbor_arc(t: FramedTorus, m: BypassMove) -> SlopeArc:
    return SlopeArc(m.attach_slope, t.slope, m.side.direction)


def bypass_is_trivial(t: FramedTorus, m: BypassMove) -> bool:
    """The ruling slope already is a Farey neighbor of the dividing slope."""
    return t.pairs == 1 and intersection_number(t.slope, m.attach_slope) == 1


def attach_bypass_torus(t: FramedTorus, m: BypassMove) -> FramedTorus:
    """Push a torus across a bypass attached along a ruling curve."""
    if m.attach_slope == t.slope:
        raise EqualSlopes("the ruling slope equals the dividing slope")
    if t.pairs > 1:
        return t.with_state(pairs=t.pairs - 1)
    if bypass_is_trivial(t, m):
        return t.with_state(slope=m.attach_slope)
    new = next(farey_neighbors(t.slope, _neighbor_arc(t, m)))
    return t.with_state(slope=new)


def _inverse(s: Slope):
    # 1/s on the extended line; None stands for infinity
    if s.q == 0:
        return None
    return Fraction(s.p, s.q)


def twist_number_lemma(n: int, ruling: Slope) -> Optional[int]:
    """Twisting number reachable from a bypass on a ruling curve.

    Returns ``n + 1`` when ``1/r >= n + 1`` (``1/0`` counts as +inf),
    otherwise None.
    """
    inv = _inverse(ruling)
    if inv is None or inv >= n + 1:
        return n + 1
    return None


def imbalance_bypass(count_left: int, count_right: int) -> Optional[str]:
    """Side of a convex annulus that must carry a bypass, if any."""
    for c in (count_left, count_right):
        if c % 2:
            raise OddCount(f"intersection count {c} is odd")
    if count_left == count_right:
        return None
    return "left" if count_left > count_right else "right"


def stabilize(t: FramedTorus, sign: str) -> tuple[FramedTorus, Layer]:
    """Lower the twisting number of a standard neighborhood by one.

    Returns the boundary of the smaller neighborhood and the layer between
    the two, whose single bypass has the given sign.
    """
    if sign not in ("+", "-"):
        raise ValueError(f"sign must be + or -, got {sign!r}")
    n = twist_of_standard(t)
    new = t.with_state(slope=canonical(n - 1, 1))
    return new, Layer(inner=new, outer=t, bypass_sign=sign)


def twist_of_standard(t: FramedTorus) -> int:
    """Twisting number n of a standard neighborhood boundary of slope 1/n."""
    if t.pairs != 1 or t.slope.q not in (1, -1):
        raise NotStandard(f"{t} does not have slope 1/n")
    return t.slope.p * t.slope.q


def edge_round_shift(n: int, k: int) -> Fraction:
    """Height on the second surface joined to the dividing curve z = k/2n."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if not 0 <= k <= 2 * n - 1:
        raise ValueError(f"k must lie in [0, {2 * n - 1}], got {k}")
    return Fraction(k, 2 * n) - Fraction(1, 4 * n)


def cut_and_round_pants(m2: int, m3: int) -> Slope:
    """Slope after cutting along a bypass-free vertical annulus and rounding.

    Expressed in the frame of the cut-and-round torus (identified like the
    reversed boundary of the complement of V_1).
    """
    if m2 > -1 or m3 > -1:
        raise ValueError("twisting numbers must be at most -1")
    if 3 * m2 + 1 != 5 * m3 + 1:
        raise UnequalCounts(
            f"3*m2+1 = {3 * m2 + 1} differs from 5*m3+1 = {5 * m3 + 1}")
    return canonical(3 * m2 + 1, -(m2 + m3 + 1))


def reachable_slopes(boundary_s0: Slope, boundary_s1: Slope) -> SlopeArc:
    """Slopes of convex tori parallel to the boundary of T^2 x [0,1].

    The closed arc [s1, s0], read counterclockwise (so it wraps through
    infinity when s0 < s1).
    """
    return SlopeArc(boundary_s1, boundary_s0, Direction.COUNTERCLOCKWISE)


def reachable_slopes_solid(boundary: Slope, meridian: Slope, *,
                           reversed_frame: bool = False) -> SlopeArc:
    """Slopes of convex tori inside a solid torus, from the boundary slope
    toward (but excluding) the meridian.

    In a frame oriented as the boundary of the solid torus the arc runs
    counterclockwise; in an orientation-reversed frame it runs clockwise.
    """
    if boundary == meridian:
        raise EqualSlopes("boundary slope equals the meridian slope")
    direction = (Direction.CLOCKWISE if reversed_frame
                 else Direction.COUNTERCLOCKWISE)
    return SlopeArc(boundary, meridian, direction)
