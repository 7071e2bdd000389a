"""Combinatorial dividing sets on convex surfaces.

A dividing set is stored as a chord diagram: arcs pair up endpoints on
the boundary circles, and closed curves are recorded by a free homotopy
label.  Nothing is embedded geometrically; the region structure is
recovered by face tracing.

Conventions
-----------
Boundary components are numbered from 1.  Endpoint ``b:k`` is the k-th
endpoint on boundary b, counted in the boundary orientation (surface on
the left), so for a planar picture with an outer circle the outer indices
run counterclockwise and the indices on holes run clockwise.  Boundary
segment ``b:k`` runs from endpoint k to endpoint k+1; a boundary with no
endpoints is the single segment ``b``.

An arc ``arc x y`` has a *forward side*: the side containing the segment
that starts at x (and hence the segment ending at y).  When an arc splits
a piece in two, the other boundary cycles of that piece go to the
non-forward side unless listed with ``around``.  An arc flagged
``essential`` on a surface with genus is non-separating.

Closed curves are labelled ``trivial`` (bounds a disk), by the set of
boundary components they enclose (``2`` or ``2,3``; ``core`` is the core
of an annulus), or by a slope on a torus or punctured torus.

Euler characteristics of regions are ``2 - 2g - b`` where b counts the
boundary cycles of the region.  Half-elliptic points sit on region
boundaries, so they do not change the count.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from .errors import BadBoundaryCount, EqualSlopes, InvalidDividingSet
from .farey import Slope, intersection_number, parse_slope

__all__ = [
    "SURFACES", "Endpoint", "Arc", "ClosedCurve", "Region", "DividingSet",
    "FramedTorus", "EulerClass", "parse_dividing_set", "giroux_tight",
    "twist_of_curve", "boundary_parallel_arcs", "classify_pants",
    "euler_eval", "euler_eval_annulus", "euler_linear_extend",
]

# surface kind -> (number of boundary components, genus)
SURFACES = {
    "disk": (1, 0),
    "annulus": (2, 0),
    "pants": (3, 0),
    "punctured-torus": (1, 1),
    "torus": (0, 1),
}


@dataclass(frozen=True, order=True)
class Endpoint:
    boundary: int
    index: int

    @classmethod
    def parse(cls, text: str) -> "Endpoint":
        m = re.fullmatch(r"(\d+):(\d+)", text.strip())
        if not m:
            raise ValueError(f"bad endpoint {text!r}; expected <bdy>:<k>")
        return cls(int(m.group(1)), int(m.group(2)))

    def __str__(self):
        return f"{self.boundary}:{self.index}"


@dataclass(frozen=True)
class Arc:
    start: Endpoint
    end: Endpoint
    around: frozenset = frozenset()
    essential: Optional[Slope] = None

    def to_text(self) -> str:
        parts = ["arc", str(self.start), str(self.end)]
        if self.around:
            parts += ["around", ",".join(map(str, sorted(self.around)))]
        if self.essential is not None:
            parts += ["essential", str(self.essential)]
        return " ".join(parts)


@dataclass(frozen=True)
class ClosedCurve:
    """``encloses`` is a set of boundary ids; ``slope`` marks essential curves."""

    trivial: bool = False
    encloses: frozenset = frozenset()
    slope: Optional[Slope] = None

    @classmethod
    def parse(cls, label: str, surface: str) -> "ClosedCurve":
        label = label.strip()
        if label == "trivial":
            return cls(trivial=True)
        if label == "core":
            if surface != "annulus":
                raise ValueError("'core' only makes sense on an annulus")
            return cls(encloses=frozenset({2}))
        if surface in ("torus", "punctured-torus") and not re.fullmatch(
                r"\d+(,\d+)*", label):
            return cls(slope=parse_slope(label))
        if surface == "torus":
            raise ValueError(f"bad closed curve label {label!r} on a torus")
        try:
            ids = frozenset(int(v) for v in label.split(","))
        except ValueError:
            raise ValueError(f"bad closed curve label {label!r}") from None
        return cls(encloses=ids)

    @property
    def label(self) -> str:
        if self.trivial:
            return "trivial"
        if self.slope is not None:
            return str(self.slope)
        return ",".join(map(str, sorted(self.encloses)))


@dataclass(frozen=True)
class Region:
    """A component of the surface cut along the dividing set."""

    id: str
    sign: str
    genus: int
    cycles: tuple
    members: frozenset

    @property
    def chi(self) -> int:
        return 2 - 2 * self.genus - len(self.cycles)

    @property
    def is_disk(self) -> bool:
        return self.genus == 0 and len(self.cycles) == 1


def _seg(b, k):
    return f"{b}:{k}"


def _edge_key(name: str):
    # Boundary segments first (by boundary, index), then curve sides, then
    # arc sides; used to pick a stable region id.
    m = re.fullmatch(r"(\d+)(?::(\d+))?", name)
    if m:
        return (0, int(m.group(1)), int(m.group(2) or -1), "")
    kind = 1 if name.startswith("c") else 2
    return (kind, int(name[1:-1]), 0, name[-1])


class _Piece:
    __slots__ = ("cycles", "genus", "ids")

    def __init__(self, cycles, genus, ids=None):
        self.cycles = cycles
        self.genus = genus
        # boundary ids visible through each cycle, used for 'around' and
        # for locating closed curves
        self.ids = ids if ids is not None else [_cycle_ids(c) for c in cycles]


def _cycle_ids(cycle):
    out = set()
    for name in cycle:
        m = re.fullmatch(r"(\d+)(?::\d+)?", name)
        if m:
            out.add(int(m.group(1)))
    return frozenset(out)


@dataclass(frozen=True)
class DividingSet:
    """Immutable dividing set; construction validates every invariant."""

    surface: str
    arcs: tuple = ()
    closed_curves: tuple = ()
    region_signs: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.surface not in SURFACES:
            raise InvalidDividingSet(f"unknown surface {self.surface!r}")
        object.__setattr__(self, "arcs", tuple(self.arcs))
        object.__setattr__(self, "closed_curves", tuple(self.closed_curves))
        object.__setattr__(self, "region_signs", dict(self.region_signs))
        counts = self._endpoint_counts()
        pieces = self._decompose(counts)
        regions = self._color(pieces)
        object.__setattr__(self, "_counts", counts)
        object.__setattr__(self, "_regions", regions)

    # -- construction helpers -------------------------------------------

    def _endpoint_counts(self):
        nbdy, _ = SURFACES[self.surface]
        used = {}
        for j, arc in enumerate(self.arcs):
            for e in (arc.start, arc.end):
                if not 1 <= e.boundary <= nbdy:
                    raise InvalidDividingSet(
                        f"arc {j}: boundary {e.boundary} does not exist on "
                        f"a {self.surface}")
                if e in used:
                    raise InvalidDividingSet(
                        f"endpoint {e} is used by arcs {used[e]} and {j}")
                used[e] = j
        counts = {}
        for b in range(1, nbdy + 1):
            idx = sorted(e.index for e in used if e.boundary == b)
            if idx != list(range(len(idx))):
                raise InvalidDividingSet(
                    f"endpoints on boundary {b} must be numbered 0..n-1, "
                    f"got {idx}")
            if len(idx) % 2:
                raise InvalidDividingSet(
                    f"boundary {b} meets the dividing set an odd number "
                    f"({len(idx)}) of times; signs cannot alternate")
            counts[b] = len(idx)
        return counts

    def _decompose(self, counts):
        nbdy, genus = SURFACES[self.surface]
        cycles = []
        for b in range(1, nbdy + 1):
            n = counts[b]
            cycles.append([_seg(b, k) for k in range(n)] if n else [str(b)])
        pieces = [_Piece(cycles, genus)]

        def locate(name):
            for pi, piece in enumerate(pieces):
                for ci, cyc in enumerate(piece.cycles):
                    if name in cyc:
                        return pi, ci
            raise AssertionError(name)

        for j, arc in enumerate(self.arcs):
            e, f = arc.start, arc.end
            se, sf = _seg(e.boundary, e.index), _seg(f.boundary, f.index)
            pe, ce = locate(se)
            pf, cf = locate(sf)
            if pe != pf:
                raise InvalidDividingSet(
                    f"arc {j} ({e}-{f}) crosses an earlier arc")
            piece = pieces[pe]
            if ce == cf:
                cyc = piece.cycles[ce]
                i0 = cyc.index(se)
                cyc = cyc[i0:] + cyc[:i0]
                i1 = cyc.index(sf)
                forward = cyc[:i1] + [f"a{j}-"]
                backward = cyc[i1:] + [f"a{j}+"]
                others = [(c, ids) for k, (c, ids) in
                          enumerate(zip(piece.cycles, piece.ids)) if k != ce]
                if arc.essential is not None and piece.genus > 0:
                    piece.cycles = [c for c, _ in others] + [forward, backward]
                    piece.ids = [ids for _, ids in others] + [
                        _cycle_ids(forward), _cycle_ids(backward)]
                    piece.genus -= 1
                    continue
                if arc.essential is not None:
                    # parallel to an earlier essential arc: the strip between
                    # them is the non-forward side
                    go_forward = [True] * len(others)
                else:
                    available = set().union(*(ids for _, ids in others)) \
                        if others else set()
                    if not arc.around <= available:
                        raise InvalidDividingSet(
                            f"arc {j}: 'around' names boundaries "
                            f"{sorted(arc.around - available)} that are not "
                            f"separate holes of the piece it cuts")
                    go_forward = [bool(ids & arc.around) for _, ids in others]
                fwd = _Piece([forward], 0, [_cycle_ids(forward)])
                bwd = _Piece([backward], piece.genus, [_cycle_ids(backward)])
                for (c, ids), fw in zip(others, go_forward):
                    target = fwd if fw else bwd
                    target.cycles.append(c)
                    target.ids.append(ids)
                pieces[pe:pe + 1] = [fwd, bwd]
            else:
                if arc.around:
                    raise InvalidDividingSet(
                        f"arc {j} joins two boundary cycles and does not "
                        f"separate, so 'around' is meaningless")
                c1, c2 = piece.cycles[ce], piece.cycles[cf]
                i0, i1 = c1.index(se), c2.index(sf)
                merged = (c1[i0:] + c1[:i0] + [f"a{j}+"]
                          + c2[i1:] + c2[:i1] + [f"a{j}-"])
                keep = [(c, ids) for k, (c, ids) in
                        enumerate(zip(piece.cycles, piece.ids))
                        if k not in (ce, cf)]
                piece.cycles = [c for c, _ in keep] + [merged]
                piece.ids = [ids for _, ids in keep] + [
                    piece.ids[ce] | piece.ids[cf]]

        essential_slopes = {a.essential for a in self.arcs
                            if a.essential is not None}
        for j, curve in enumerate(self.closed_curves):
            plus, minus = f"c{j}+", f"c{j}-"
            if curve.trivial:
                host = pieces[0]
                host.cycles.append([minus])
                host.ids.append(frozenset())
                pieces.append(_Piece([[plus]], 0, [frozenset()]))
                continue
            if curve.slope is not None:
                if self.surface not in ("torus", "punctured-torus"):
                    raise InvalidDividingSet(
                        f"closed curve {j}: slopes only label curves on tori")
                essential_slopes.add(curve.slope)
                if len(essential_slopes) > 1:
                    raise InvalidDividingSet(
                        "essential curves of different slopes "
                        f"{sorted(map(str, essential_slopes))} must intersect")
                self._cut_essential(pieces, j, curve.slope)
                continue
            self._cut_enclosing(pieces, j, curve.encloses)
        return pieces

    def _cut_essential(self, pieces, j, slope):
        plus, minus = f"c{j}+", f"c{j}-"
        for piece in pieces:
            if piece.genus > 0:
                piece.genus -= 1
                piece.cycles += [[plus], [minus]]
                piece.ids += [frozenset(), frozenset()]
                return
        # parallel to the previous essential curve: peel off the annulus
        # between them
        prev = max(i for i in range(j) if self.closed_curves[i].slope == slope)
        for piece in pieces:
            for k, cyc in enumerate(piece.cycles):
                if cyc == [f"c{prev}+"]:
                    piece.cycles[k] = [plus]
                    pieces.append(_Piece([[f"c{prev}+"], [minus]], 0,
                                         [frozenset(), frozenset()]))
                    return
        raise InvalidDividingSet(f"closed curve {j} cannot be placed")

    def _cut_enclosing(self, pieces, j, encloses):
        plus, minus = f"c{j}+", f"c{j}-"
        nbdy, _ = SURFACES[self.surface]
        if not encloses or not encloses <= set(range(1, nbdy + 1)):
            raise InvalidDividingSet(
                f"closed curve {j}: cannot enclose {sorted(encloses)} on a "
                f"{self.surface}")
        for pi in range(len(pieces) - 1, -1, -1):
            piece = pieces[pi]
            inside = [k for k, ids in enumerate(piece.ids)
                      if ids and ids <= encloses]
            got = set().union(*(piece.ids[k] for k in inside)) if inside \
                else set()
            if got == encloses:
                if len(inside) == len(piece.cycles) and piece.genus == 0:
                    raise InvalidDividingSet(
                        f"closed curve {j} would enclose every boundary of "
                        f"its piece; label it by the complement instead")
                inner = _Piece([piece.cycles[k] for k in inside] + [[plus]], 0,
                               [piece.ids[k] for k in inside] + [frozenset()])
                rest = [k for k in range(len(piece.cycles)) if k not in inside]
                outer = _Piece([piece.cycles[k] for k in rest] + [[minus]],
                               piece.genus,
                               [piece.ids[k] for k in rest]
                               + [frozenset(encloses)])
                pieces[pi:pi + 1] = [inner, outer]
                return
        raise InvalidDividingSet(
            f"closed curve {j}: boundaries {sorted(encloses)} do not lie in "
            f"one region, so the curve would cross an arc")

    def _color(self, pieces):
        owner = {}
        for pi, piece in enumerate(pieces):
            for cyc in piece.cycles:
                for name in cyc:
                    owner[name] = pi
        adjacency = {pi: [] for pi in range(len(pieces))}
        sides = [(f"a{j}+", f"a{j}-", f"arc {j}") for j in range(len(self.arcs))]
        sides += [(f"c{j}+", f"c{j}-", f"closed curve {j}")
                  for j in range(len(self.closed_curves))]
        for a, b, what in sides:
            pa, pb = owner[a], owner[b]
            if pa == pb:
                raise InvalidDividingSet(
                    f"two-colorability fails: the region on both sides of "
                    f"{what} is the same")
            adjacency[pa].append(pb)
            adjacency[pb].append(pa)

        ids = []
        for piece in pieces:
            names = [n for cyc in piece.cycles for n in cyc]
            ids.append(min(names, key=_edge_key))
        by_name = dict(owner)
        for pi, rid in enumerate(ids):
            by_name[rid] = pi

        given = {}
        for name, sign in self.region_signs.items():
            if sign not in ("+", "-"):
                raise InvalidDividingSet(f"region sign must be + or -, got {sign!r}")
            if name not in by_name:
                raise InvalidDividingSet(f"unknown region {name!r}")
            pi = by_name[name]
            if given.get(pi, sign) != sign:
                raise InvalidDividingSet(f"conflicting signs for region {ids[pi]}")
            given[pi] = sign

        signs = {}
        order = sorted(range(len(pieces)), key=lambda p: _edge_key(ids[p]))
        seeds = [p for p in order if p in given] + order
        for seed in seeds:
            if seed in signs:
                continue
            signs[seed] = given.get(seed, "+")
            queue = deque([seed])
            while queue:
                cur = queue.popleft()
                flip = "-" if signs[cur] == "+" else "+"
                for nb in adjacency[cur]:
                    if nb not in signs:
                        signs[nb] = flip
                        queue.append(nb)
                    elif signs[nb] != flip:
                        raise InvalidDividingSet(
                            "two-colorability fails: odd cycle of regions")
        for pi, sign in given.items():
            if signs[pi] != sign:
                raise InvalidDividingSet(
                    f"region signs do not alternate across the dividing set "
                    f"(region {ids[pi]})")

        regions = []
        for pi in order:
            piece = pieces[pi]
            members = frozenset(n for cyc in piece.cycles for n in cyc)
            regions.append(Region(ids[pi], signs[pi], piece.genus,
                                  tuple(tuple(c) for c in piece.cycles),
                                  members))
        return tuple(regions)

    # -- accessors ------------------------------------------------------

    @property
    def regions(self) -> tuple:
        return self._regions

    @property
    def endpoint_counts(self) -> dict:
        return dict(self._counts)

    def region_of(self, name: str) -> Region:
        for r in self._regions:
            if name == r.id or name in r.members:
                return r
        raise KeyError(name)

    def sign_counts(self) -> tuple[int, int]:
        pos = sum(1 for r in self._regions if r.sign == "+")
        return pos, len(self._regions) - pos

    def to_text(self) -> str:
        lines = [f"surface {self.surface}"]
        lines += [a.to_text() for a in self.arcs]
        lines += [f"closed {c.label}" for c in self.closed_curves]
        lines += [f"region {r.id} {r.sign}" for r in self._regions]
        return "\n".join(lines) + "\n"


def parse_dividing_set(text: str) -> DividingSet:
    """Read the line-oriented dividing set format.

    ``surface <kind>``, ``arc <b>:<k> <b>:<l> [around <ids>] [essential
    <slope>]``, ``closed <label>``, ``region <id> <+|->``, and the shorthand
    ``torus <pairs> <slope>`` for 2n parallel curves on a torus.
    """
    surface = None
    arcs, curves, signs = [], [], {}
    pending = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "surface":
                if surface is not None or len(words) != 2:
                    raise ValueError("expected one 'surface <kind>' line")
                surface = words[1]
            elif words[0] == "torus":
                if surface not in (None, "torus") or len(words) != 3:
                    raise ValueError("expected 'torus <pairs> <slope>'")
                surface = "torus"
                pairs = int(words[1])
                if pairs < 1:
                    raise ValueError("a torus needs at least one pair")
                pending += [words[2]] * (2 * pairs)
            elif words[0] == "arc":
                arcs.append(_parse_arc(words))
            elif words[0] == "closed":
                if len(words) != 2:
                    raise ValueError("expected 'closed <label>'")
                pending.append(words[1])
            elif words[0] == "region":
                if len(words) != 3:
                    raise ValueError("expected 'region <id> <+|->'")
                signs[words[1]] = words[2]
            else:
                raise ValueError(f"unknown directive {words[0]!r}")
        except ValueError as exc:
            raise InvalidDividingSet(f"line {lineno}: {exc}") from None
    if surface is None:
        raise InvalidDividingSet("missing 'surface <kind>' line")
    try:
        curves = [ClosedCurve.parse(label, surface) for label in pending]
    except ValueError as exc:
        raise InvalidDividingSet(str(exc)) from None
    return DividingSet(surface, tuple(arcs), tuple(curves), signs)


def _parse_arc(words):
    if len(words) < 3:
        raise ValueError("expected 'arc <b>:<k> <b>:<l>'")
    around, essential = frozenset(), None
    rest = words[3:]
    while rest:
        key = rest.pop(0)
        if not rest:
            raise ValueError(f"'{key}' needs a value")
        val = rest.pop(0)
        if key == "around":
            around = frozenset(int(v) for v in val.split(","))
        elif key == "essential":
            essential = parse_slope(val)
        else:
            raise ValueError(f"unknown arc option {key!r}")
    return Arc(Endpoint.parse(words[1]), Endpoint.parse(words[2]),
               around, essential)


# -- operations ------------------------------------------------------------

def giroux_tight(ds: DividingSet) -> bool:
    """No homotopically trivial closed dividing curve (and, on a disk, at
    least one arc and nothing else)."""
    if ds.surface == "disk" and (ds.closed_curves or not ds.arcs):
        return False
    for r in ds.regions:
        if r.is_disk and len(r.cycles[0]) == 1 and r.cycles[0][0][0] == "c":
            return False
    return True


def boundary_parallel_arcs(ds: DividingSet) -> list[int]:
    """Indices of arcs that cut off a half-disk with no other endpoints.

    The lone arc on a disk is the standard tight disk, not a bypass, and
    is not reported.
    """
    if ds.surface == "disk" and len(ds.arcs) == 1:
        return []
    found = set()
    for r in ds.regions:
        if not r.is_disk or len(r.cycles[0]) != 2:
            continue
        kinds = sorted(n[0] for n in r.cycles[0])
        if kinds[1] == "a" and kinds[0].isdigit():
            arc_name = max(r.cycles[0], key=lambda n: n[0] == "a")
            found.add(int(arc_name[1:-1]))
    return sorted(found)


def classify_pants(ds: DividingSet) -> str:
    """Configuration letter of a pants dividing set with two endpoints per
    boundary.

    A: every boundary is joined to another.  B: one boundary is joined to
    itself and the other two to each other.  C and D: every arc returns to
    its own boundary; D when all three arcs are boundary-parallel, C when
    one of them separates the other two boundaries.
    """
    if ds.surface != "pants":
        raise BadBoundaryCount(f"expected a pants dividing set, got {ds.surface}")
    counts = ds.endpoint_counts
    bad = {b: n for b, n in counts.items() if n != 2}
    if bad:
        raise BadBoundaryCount(
            f"each boundary must meet the dividing set exactly twice: {bad}")
    parent = {1: 1, 2: 2, 3: 3}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for arc in ds.arcs:
        parent[find(arc.start.boundary)] = find(arc.end.boundary)
    blocks = len({find(b) for b in (1, 2, 3)})
    if blocks == 1:
        return "A"
    if blocks == 2:
        return "B"
    return "D" if len(boundary_parallel_arcs(ds)) == 3 else "C"


def euler_eval(ds: DividingSet) -> int:
    """chi(positive regions) - chi(negative regions)."""
    return sum(r.chi if r.sign == "+" else -r.chi for r in ds.regions)


def euler_eval_annulus(ds: DividingSet) -> int:
    """Relative Euler class on a convex annulus from its dividing set."""
    if ds.surface != "annulus":
        raise InvalidDividingSet(f"expected an annulus, got {ds.surface}")
    return euler_eval(ds)


@dataclass(frozen=True)
class FramedTorus:
    """Convex torus with 2n parallel dividing curves of one slope."""

    frame: object
    pairs: int
    slope: Slope
    ruling: Optional[Slope] = None

    def __post_init__(self):
        if self.pairs < 1:
            raise InvalidDividingSet(
                "a torus in a tight manifold has at least one pair of "
                "essential dividing curves")
        if self.ruling is not None and self.ruling == self.slope:
            raise EqualSlopes("ruling curves cannot be parallel to the "
                              "dividing curves")

    def with_state(self, pairs=None, slope=None) -> "FramedTorus":
        return FramedTorus(self.frame,
                           self.pairs if pairs is None else pairs,
                           self.slope if slope is None else slope)

    def dividing_set(self) -> DividingSet:
        return DividingSet("torus", (), tuple(
            ClosedCurve(slope=self.slope) for _ in range(2 * self.pairs)))

    def __str__(self):
        frame = f"{self.frame} " if self.frame is not None else ""
        return f"{frame}torus: {self.pairs} pair(s) of slope {self.slope}"


def twist_of_curve(t: FramedTorus, c: Slope) -> int:
    """Twisting of a Legendrian curve of class c relative to the torus."""
    if c == t.slope:
        raise EqualSlopes(f"curve {c} is parallel to the dividing curves")
    return -t.pairs * intersection_number(t.slope, c)


@dataclass(frozen=True)
class EulerClass:
    """Relative Euler class of a toric annulus on the basis (mu, lambda)."""

    on_mu: int
    on_lambda: int

    @classmethod
    def from_values(cls, values: Iterable[tuple[tuple[int, int], int]]):
        """Solve for the class from its values on two independent classes."""
        (u, eu), (v, ev) = list(values)
        det = u[0] * v[1] - u[1] * v[0]
        if det == 0:
            raise ValueError("classes must be linearly independent")
        mu_num = eu * v[1] - ev * u[1]
        lam_num = ev * u[0] - eu * v[0]
        if mu_num % det or lam_num % det:
            raise ValueError("values are not those of an integral class")
        return cls(mu_num // det, lam_num // det)


def euler_linear_extend(e: EulerClass, c: Sequence[int]) -> int:
    """Value on ``c[0]*mu + c[1]*lambda``."""
    return c[0] * e.on_mu + c[1] * e.on_lambda
