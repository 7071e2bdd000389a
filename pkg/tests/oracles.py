"""Independent reference computations used by the tests.

None of these call into the engine's algorithms; they only share the
``Slope`` value type where convenient.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction


# -- slopes ---------------------------------------------------------------

def box_slopes(n):
    """All slopes (p, q), p >= 0 canonical, with |p|, |q| <= n."""
    out = []
    for p in range(0, n + 1):
        for q in range(-n, n + 1):
            if math.gcd(p, q) != 1:
                continue
            if p == 0 and q != 1:
                continue
            out.append((p, q))
    return out


def angle(v):
    """Position of a slope on the circle as an angle in [0, pi)."""
    p, q = v
    a = math.atan2(q, p)  # p >= 0, so a in (-pi/2, pi/2]
    return a % math.pi


def ccw_offset(start, v):
    """How far counterclockwise (increasing value) v lies from start."""
    return (angle(v) - angle(start)) % math.pi


def det(u, v):
    return u[0] * v[1] - u[1] * v[0]


def first_neighbor_in_box(s, start, direction, n):
    """The Farey neighbor of s closest to ``start`` on the open arc from
    start to s, among slopes in the box, by brute force."""
    total = ccw_offset(start, s)
    best = None
    for v in box_slopes(n):
        if abs(det(v, s)) != 1 or v == start:
            continue
        off = ccw_offset(start, v)
        if direction == "cw":
            off = (-off) % math.pi
        limit = total if direction == "ccw" else (-total) % math.pi
        if 0 < off < limit and (best is None or off < best[0]):
            best = (off, v)
    return None if best is None else best[1]


# -- normalized bypass theorem --------------------------------------------

def normalized_bypass(x, side):
    """Bypass on a torus of slope 0 along a ruling of slope x.

    ``x`` is a Fraction or None for infinity.  A front bypass lands on
    -1/k with k = ceil(-1/x) (the next reciprocal integer reached while
    increasing from x); a back bypass uses floor.  Returns (p, q).
    """
    if x is None:
        return (0, 1)
    inv = -1 / x
    k = math.ceil(inv) if side == "front" else math.floor(inv)
    if k == 0:
        return (0, 1)
    p, q = k, -1
    if p < 0:
        p, q = -p, -q
    return (p, q)


# -- annulus raster -------------------------------------------------------

def _catalan_matchings(points):
    """Non-crossing perfect matchings of a list of positions on a line."""
    if not points:
        yield []
        return
    first = points[0]
    for k in range(1, len(points), 2):
        inner, outer = points[1:k], points[k + 1:]
        for a in _catalan_matchings(inner):
            for b in _catalan_matchings(outer):
                yield [(first, points[k])] + a + b


def _circle_matchings(points):
    """Non-crossing matchings of points on a circle, each chord given as an
    interval (a, b) read in increasing position, plus every choice of
    which gap holds the hole."""
    n = len(points)
    for m in _catalan_matchings(points):
        for g in range(n):
            # cut the circle at the gap after points[g]; each chord spans
            # the interval that avoids the cut
            order = points[g + 1:] + points[:g + 1]
            rank = {x: i for i, x in enumerate(order)}
            chords = []
            for a, b in m:
                if rank[a] > rank[b]:
                    a, b = b, a
                chords.append((a, b))
            yield chords


class AnnulusConfig:
    """A drawn annulus dividing set on a cylinder grid.

    Columns wrap around (the angle); row 0 is next to the inner boundary
    (boundary 2) and row H-1 next to the outer boundary (boundary 1).
    """

    H = 40

    def __init__(self, width, crossing, top_caps, bottom_caps, cores):
        self.W = width
        self.crossing = crossing          # columns of radial arcs
        self.top_caps = top_caps          # (xa, xb): ccw from xa to xb
        self.bottom_caps = bottom_caps
        self.cores = cores                # number of core-parallel curves
        self.top = sorted([*crossing, *(x for c in top_caps for x in c)])
        self.bottom = sorted([*crossing, *(x for c in bottom_caps for x in c)],
                             reverse=True)

    # engine text ----------------------------------------------------------
    def to_text(self):
        ti = {x: i for i, x in enumerate(self.top)}
        bi = {x: i for i, x in enumerate(self.bottom)}
        lines = ["surface annulus"]
        for x in self.crossing:
            lines.append(f"arc 1:{ti[x]} 2:{bi[x]}")
        for a, b in self.top_caps:
            lines.append(f"arc 1:{ti[a]} 1:{ti[b]}")
        for a, b in self.bottom_caps:
            lines.append(f"arc 2:{bi[b]} 2:{bi[a]}")
        lines += ["closed core"] * self.cores
        lines.append("region 1:0 +" if self.top else "region 1 +")
        return "\n".join(lines) + "\n"

    # raster ---------------------------------------------------------------
    def _span(self, a, b):
        x = a
        cols = [x]
        while x != b:
            x = (x + 1) % self.W
            cols.append(x)
        return cols

    def _heights(self, caps):
        # nesting height: caps containing others sit deeper
        def inside(c, d):
            cols = set(self._span(*c))
            return d != c and d[0] in cols and d[1] in cols
        memo = {}

        def h(c):
            if c not in memo:
                memo[c] = 1 + max((h(d) for d in caps if inside(c, d)),
                                  default=0)
            return memo[c]
        return {c: h(c) for c in caps}

    def walls(self):
        H, W = self.H, self.W
        wall = [[False] * W for _ in range(H)]
        for x in self.crossing:
            for y in range(H):
                wall[y][x] = True
        for caps, top in ((self.top_caps, True), (self.bottom_caps, False)):
            for (a, b), h in self._heights(caps).items():
                d = 3 * h
                rows = range(H - 1 - d, H) if top else range(0, d + 1)
                y = H - 1 - d if top else d
                for yy in rows:
                    wall[yy][a] = wall[yy][b] = True
                for x in self._span(a, b):
                    wall[y][x] = True
        mid = H // 2
        for k in range(self.cores):
            y = mid - 2 * (self.cores - 1) + 4 * k
            for x in range(W):
                wall[y][x] = True
        return wall

    def regions(self):
        """[(sign, chi, cells)] by flood fill and complement counting."""
        H, W = self.H, self.W
        wall = self.walls()
        label = [[-1] * W for _ in range(H)]
        cells = []
        for y in range(H):
            for x in range(W):
                if wall[y][x] or label[y][x] >= 0:
                    continue
                k = len(cells)
                comp = []
                q = deque([(y, x)])
                label[y][x] = k
                while q:
                    cy, cx = q.popleft()
                    comp.append((cy, cx))
                    for ny, nx in ((cy + 1, cx), (cy - 1, cx),
                                   (cy, (cx + 1) % W), (cy, (cx - 1) % W)):
                        if 0 <= ny < H and not wall[ny][nx] and label[ny][nx] < 0:
                            label[ny][nx] = k
                            q.append((ny, nx))
                cells.append(comp)
        chis = [2 - self._complement_components(label, k) for k in range(len(cells))]
        signs = self._signs(label, wall, len(cells))
        return [(signs[k], chis[k], cells[k]) for k in range(len(cells))]

    def _complement_components(self, label, k):
        # rows -1 (the hole) and H (outside) are complement rows
        H, W = self.H, self.W

        def comp(y, x):
            return y in (-1, H) or label[y][x] != k
        seen = set()
        count = 0
        for y in range(-1, H + 1):
            for x in range(W):
                if (y, x) in seen or not comp(y, x):
                    continue
                count += 1
                q = deque([(y, x)])
                seen.add((y, x))
                while q:
                    cy, cx = q.popleft()
                    for dy in (-1, 0, 1):
                        for dx in (-1, 0, 1):
                            ny, nx = cy + dy, (cx + dx) % W
                            if -1 <= ny <= H and (ny, nx) not in seen \
                                    and comp(ny, nx):
                                seen.add((ny, nx))
                                q.append((ny, nx))
        return count

    def _signs(self, label, wall, n):
        H, W = self.H, self.W
        adj = {k: set() for k in range(n)}
        for y in range(H):
            for x in range(W):
                if not wall[y][x]:
                    continue
                pairs = [((y, (x - 1) % W), (y, (x + 1) % W))]
                if 0 < y < H - 1:
                    pairs.append(((y - 1, x), (y + 1, x)))
                for (ay, ax), (by, bx) in pairs:
                    la, lb = label[ay][ax], label[by][bx]
                    if la >= 0 and lb >= 0 and la != lb:
                        adj[la].add(lb)
                        adj[lb].add(la)
        # seed: the region just counterclockwise of outer endpoint 0
        if self.top:
            seed = label[self.H - 1][(self.top[0] + 1) % W]
        else:
            seed = label[self.H - 1][0]
        sign = {seed: 1}
        q = deque([seed])
        while q:
            cur = q.popleft()
            for nb in adj[cur]:
                if nb not in sign:
                    sign[nb] = -sign[cur]
                    q.append(nb)
                elif sign[nb] == sign[cur]:
                    raise AssertionError("raster regions are not two-colorable")
        if len(sign) != n:
            raise AssertionError("raster region graph is disconnected")
        return [sign[k] for k in range(n)]

    def euler(self):
        return sum(s * chi for s, chi, _ in self.regions())


def _layout(counts_top, counts_bottom):
    """Column positions for sectors with given cap-endpoint counts."""
    cols_cross, tops, bottoms = [], [], []
    x = 0
    for t, b in zip(counts_top, counts_bottom):
        cols_cross.append(x)
        tops.append([x + 2 + 2 * i for i in range(t)])
        bottoms.append([x + 2 + 2 * i for i in range(b)])
        x += 2 * max(t, b, 1) + 2
    return x, cols_cross, tops, bottoms


def enumerate_annulus_configs(max_endpoints=8):
    """Every annulus dividing set (arcs and core-parallel curves) with at
    most ``max_endpoints`` endpoints, up to relabeling."""
    seen = set()
    # with radial arcs: c sectors, caps confined to sectors
    for c in range(2, max_endpoints // 2 + 1, 2):
        budget = (max_endpoints - 2 * c) // 2  # pairs of cap endpoints left
        for split in itertools.product(range(budget + 1), repeat=2 * c):
            if sum(split) > budget:
                continue
            top_pairs, bottom_pairs = split[:c], split[c:]
            width, cross, tops, bottoms = _layout(
                [2 * a for a in top_pairs], [2 * b for b in bottom_pairs])
            top_choices = [list(_catalan_matchings(t)) for t in tops]
            bottom_choices = [list(_catalan_matchings(b)) for b in bottoms]
            for tm in itertools.product(*top_choices):
                for bm in itertools.product(*bottom_choices):
                    cfg = AnnulusConfig(width, cross,
                                        [ch for m in tm for ch in m],
                                        [ch for m in bm for ch in m], 0)
                    key = cfg.to_text()
                    if key not in seen:
                        seen.add(key)
                        yield cfg
    # no radial arcs: caps on each side choose a hole face; core curves
    for a in range(0, max_endpoints // 2 + 1):
        for b in range(0, max_endpoints // 2 + 1 - a):
            na, nb = 2 * a, 2 * b
            width = 2 * max(na, nb, 1) + 2
            top_pts = [2 + 2 * i for i in range(na)]
            bot_pts = [2 + 2 * i for i in range(nb)]
            tops = list(_circle_matchings(top_pts)) if na else [[]]
            bots = list(_circle_matchings(bot_pts)) if nb else [[]]
            for tm in tops:
                for bm in bots:
                    for cores in range(3):
                        if not na and not nb and not cores:
                            continue
                        cfg = AnnulusConfig(width, [], tm, bm, cores)
                        key = cfg.to_text()
                        if key not in seen:
                            seen.add(key)
                            yield cfg
