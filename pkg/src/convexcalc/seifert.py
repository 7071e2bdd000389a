"""Seifert fibered data: boundary frames, gluing maps, and the Poincare preset.

Each singular fiber neighborhood V_i has two coordinate systems on its
boundary torus:

* ``Inner(i)`` -- the boundary of V_i with meridian (1,0), longitude (0,1);
* ``Outer(i)`` -- the same torus seen from the complement with reversed
  orientation, fiber direction (0,1) and section direction (1,0).

The gluing matrix A_i maps Inner(i) coordinates to Outer(i) coordinates.
``OuterReversed(i)`` is the complement's own boundary orientation, which
negates every slope.  ``CutRoundTorus`` is the torus produced by cutting
along a vertical annulus between V_2 and V_3 and rounding edges; it is
identified like OuterReversed(1).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional

from .errors import ConvexCalcError, UnsupportedFramePair
from .farey import (
    INF, ZERO, GluingMatrix, Slope, apply, canonical, parse_matrix,
)

__all__ = [
    "FrameKind", "FrameId", "SeifertPreset", "poincare_preset",
    "load_preset", "parse_preset", "transport", "framing_change",
    "vertical_pullback", "overtwisted_meridian_check",
    "fiber_boundary_slope", "meridian_in_frame",
]


class FrameKind(enum.Enum):
    INNER = "inner"
    OUTER = "outer"
    OUTER_REVERSED = "outer-reversed"
    CUT_ROUND = "cut-round"


@dataclass(frozen=True)
class FrameId:
    kind: FrameKind
    index: Optional[int] = None

    def __post_init__(self):
        if self.kind is FrameKind.CUT_ROUND:
            if self.index is not None:
                raise ValueError("the cut-and-round torus has no index")
        elif self.index not in (1, 2, 3):
            raise ValueError(f"frame index must be 1, 2 or 3, got {self.index}")

    @classmethod
    def inner(cls, i):
        return cls(FrameKind.INNER, i)

    @classmethod
    def outer(cls, i):
        return cls(FrameKind.OUTER, i)

    @classmethod
    def outer_reversed(cls, i):
        return cls(FrameKind.OUTER_REVERSED, i)

    @classmethod
    def cut_round(cls):
        return cls(FrameKind.CUT_ROUND)

    @property
    def reverses_orientation(self) -> bool:
        """True for frames oriented opposite to the solid torus V_i."""
        return self.kind in (FrameKind.OUTER_REVERSED, FrameKind.CUT_ROUND)

    @classmethod
    def parse(cls, text: str) -> "FrameId":
        """Parse ``inner3``, ``outer1``, ``outer-reversed2``, ``cut-round``."""
        t = text.strip().lower().replace("_", "-")
        if t in ("cut-round", "cutround", "cut-round-torus"):
            return cls.cut_round()
        aliases = {
            "outerreversed": FrameKind.OUTER_REVERSED,
            "outer-reversed": FrameKind.OUTER_REVERSED,
            "reversed": FrameKind.OUTER_REVERSED,
            "outer": FrameKind.OUTER,
            "inner": FrameKind.INNER,
        }
        for prefix, kind in aliases.items():
            if t.startswith(prefix):
                rest = t[len(prefix):].strip("-():")
                if rest in ("1", "2", "3"):
                    return cls(kind, int(rest))
        raise ValueError(f"unknown frame {text!r}")

    def __str__(self) -> str:
        if self.kind is FrameKind.CUT_ROUND:
            return "cut-round"
        return f"{self.kind.value}{self.index}"


@dataclass(frozen=True)
class SeifertPreset:
    """Three singular fibers over S^2, with gluing maps and bundle monodromy."""

    invariants: tuple[Fraction, Fraction, Fraction]
    matrices: tuple[GluingMatrix, GluingMatrix, GluingMatrix]
    monodromy: GluingMatrix
    # Meridional disks of V_1, V_2, V_3 used to build the punctured torus
    # fiber of the complement of V_3.
    fiber_copies: tuple[int, int, int] = (3, 2, 0)
    name: str = field(default="custom", compare=False)

    def __post_init__(self):
        for i, (inv, A) in enumerate(zip(self.invariants, self.matrices), 1):
            alpha, minus_beta = A.first_column
            if alpha <= 0 or Fraction(-minus_beta, alpha) != inv:
                raise ConvexCalcError(
                    f"A{i} = {A} has first column ({alpha},{minus_beta}), "
                    f"inconsistent with invariant {inv}"
                )

    def matrix(self, i: int) -> GluingMatrix:
        if i not in (1, 2, 3):
            raise ValueError(f"fiber index must be 1, 2 or 3, got {i}")
        return self.matrices[i - 1]

    def to_text(self) -> str:
        lines = [f"# Seifert preset: {self.name}"]
        lines.append("invariants " + " ".join(str(v) for v in self.invariants))
        for i, A in enumerate(self.matrices, 1):
            lines.append(f"A{i} {A}")
        lines.append(f"monodromy {self.monodromy}")
        lines.append("fiber_copies " + " ".join(map(str, self.fiber_copies)))
        return "\n".join(lines) + "\n"


def parse_preset(text: str, name: str = "custom") -> SeifertPreset:
    fields = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, rest = line.partition(" ")
        if key in fields:
            raise ConvexCalcError(f"line {lineno}: duplicate field {key}")
        fields[key] = (lineno, rest.strip())
    missing = {"invariants", "A1", "A2", "A3", "monodromy"} - fields.keys()
    if missing:
        raise ConvexCalcError(f"preset is missing {sorted(missing)}")
    invariants = tuple(Fraction(v) for v in fields["invariants"][1].split())
    if len(invariants) != 3:
        raise ConvexCalcError("invariants needs exactly three rationals")
    matrices = tuple(parse_matrix(fields[f"A{i}"][1]) for i in (1, 2, 3))
    copies = (3, 2, 0)
    if "fiber_copies" in fields:
        copies = tuple(int(v) for v in fields["fiber_copies"][1].split())
    return SeifertPreset(
        invariants, matrices, parse_matrix(fields["monodromy"][1]),
        copies, name=name,
    )


def load_preset(path) -> SeifertPreset:
    with open(path, encoding="utf-8") as fh:
        return parse_preset(fh.read(), name=str(path))


def poincare_preset() -> SeifertPreset:
    """The bundled preset for the Poincare homology sphere, reversed."""
    text = resources.files("convexcalc.data").joinpath(
        "poincare.preset").read_text(encoding="utf-8")
    return parse_preset(text, name="poincare")


def transport(preset: SeifertPreset, s: Slope,
              source: FrameId, target: FrameId) -> Slope:
    """Move a slope between two coordinate systems on the same torus.

    Only direct identifications are supported: Inner(i) <-> Outer(i) via
    A_i, Outer(i) <-> OuterReversed(i) by negation, and the cut-and-round
    torus with OuterReversed(1) (identity) or Outer(1) (negation).
    """
    if source == target:
        return s
    pair = (source, target)
    kinds = (source.kind, target.kind)
    same_index = source.index == target.index
    if kinds == (FrameKind.INNER, FrameKind.OUTER) and same_index:
        return apply(preset.matrix(source.index), s)
    if kinds == (FrameKind.OUTER, FrameKind.INNER) and same_index:
        return apply(preset.matrix(source.index).inverse(), s)
    if set(kinds) == {FrameKind.OUTER, FrameKind.OUTER_REVERSED} and same_index:
        return s.negated()
    if FrameKind.CUT_ROUND in kinds:
        other = target if source.kind is FrameKind.CUT_ROUND else source
        if other == FrameId.outer_reversed(1):
            return s
        if other == FrameId.outer(1):
            return s.negated()
    raise UnsupportedFramePair(
        f"no direct identification from {pair[0]} to {pair[1]}"
    )


def _to_inner(preset: SeifertPreset, i: int, s: Slope, frame: FrameId) -> Slope:
    # Walk one or two direct identifications back to Inner(i).
    if frame.kind is FrameKind.CUT_ROUND:
        if i != 1:
            raise UnsupportedFramePair("the cut-and-round torus belongs to V_1")
        frame, s = FrameId.outer_reversed(1), s
    if frame.index != i:
        raise UnsupportedFramePair(f"{frame} is not a frame of torus {i}")
    if frame.kind is FrameKind.OUTER_REVERSED:
        s = transport(preset, s, frame, FrameId.outer(i))
        frame = FrameId.outer(i)
    return transport(preset, s, frame, FrameId.inner(i))


def meridian_in_frame(preset: SeifertPreset, i: int, frame: FrameId) -> Slope:
    """The meridian of V_i expressed in one of its boundary frames."""
    s = ZERO
    if frame.kind is FrameKind.INNER:
        return _check_index(frame, i, s)
    s = transport(preset, s, FrameId.inner(i), FrameId.outer(i))
    if frame.kind is FrameKind.OUTER:
        return _check_index(frame, i, s)
    s = transport(preset, s, FrameId.outer(i), FrameId.outer_reversed(i))
    if frame.kind is FrameKind.CUT_ROUND and i == 1:
        return s
    return _check_index(frame, i, s)


def _check_index(frame, i, s):
    if frame.index != i:
        raise UnsupportedFramePair(f"{frame} is not a frame of torus {i}")
    return s


def framing_change(A: GluingMatrix, m: int) -> GluingMatrix:
    """Postmultiply by the shear [[1, m], [0, 1]] (a change of framing)."""
    return A @ GluingMatrix(1, m, 0, 1)


def vertical_pullback(preset: SeifertPreset, i: int) -> Slope:
    """The fiber direction of Outer(i) seen on Inner(i)."""
    return apply(preset.matrix(i).inverse(), INF)


def overtwisted_meridian_check(preset: SeifertPreset, i: int, s: Slope,
                               frame: FrameId) -> bool:
    """True iff a Legendrian divide of slope ``s`` bounds a meridional disk."""
    return _to_inner(preset, i, s, frame) == ZERO


def fiber_boundary_slope(preset: SeifertPreset) -> tuple[Slope, Slope]:
    """Boundary slope of the punctured torus fiber of M minus V_3.

    The fiber is assembled from ``fiber_copies`` meridional disks of V_1 and
    V_2 glued along horizontal strips.  Every copy must meet the regular
    fiber the same total number of times, and the vertical components
    cancel against the boundary on V_3.  Returns the slope on Outer(3)
    and on Inner(3).
    """
    horizontal = set()
    vertical = 0
    for i in (1, 2):
        copies = preset.fiber_copies[i - 1]
        p, q = preset.matrix(i).first_column
        horizontal.add(copies * p)
        vertical += copies * q
    if len(horizontal) != 1:
        raise ConvexCalcError(
            f"meridional disk copies do not close up: {sorted(horizontal)}"
        )
    outer = canonical(horizontal.pop(), -vertical)
    inner = transport(preset, outer, FrameId.outer(3), FrameId.inner(3))
    return outer, inner
