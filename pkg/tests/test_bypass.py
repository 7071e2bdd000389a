from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from convexcalc.bypass import (
    BypassMove, Layer, Side, attach_bypass_torus, bypass_is_trivial,
    cut_and_round_pants, edge_round_shift, imbalance_bypass,
    reachable_slopes, reachable_slopes_solid, stabilize, twist_number_lemma,
    twist_of_standard,
)
from convexcalc.errors import EqualSlopes, NotStandard, OddCount, UnequalCounts
from convexcalc.farey import (
    INF, ZERO, GluingMatrix, Slope, apply, canonical, normalize_to,
    parse_slope,
)
from convexcalc.surfaces import FramedTorus, euler_eval_annulus, twist_of_curve

from oracles import box_slopes, normalized_bypass


def torus(slope, pairs=1):
    return FramedTorus(None, pairs, parse_slope(slope) if isinstance(slope, str)
                       else slope)


def bypass(slope, ruling, side="front", pairs=1):
    return attach_bypass_torus(torus(slope, pairs),
                               BypassMove(parse_slope(ruling), Side(side)))


# anchors

def test_bypass_anchor_cases():
    assert bypass("0", "-2/5").slope == parse_slope("-1/3")
    assert bypass("-1/6", "inf").slope == parse_slope("-1/5")
    t = bypass("-1/6", "inf", pairs=4)
    assert (t.pairs, t.slope) == (3, parse_slope("-1/6"))


@pytest.mark.parametrize("m", range(1, 20))
def test_bypass_normalized_family(m):
    r = canonical(2 * m * (m + 1), -(2 * m + 1))  # strictly between -1/m and -1/(m+1)
    out = attach_bypass_torus(torus(ZERO), BypassMove(r))
    assert out.slope == canonical(m + 1, -1)


def test_trivial_bypass_returns_ruling():
    t = torus("-1/2")
    m = BypassMove(INF)
    assert not bypass_is_trivial(t, m)
    assert bypass("-1", "inf").slope == INF
    assert bypass_is_trivial(torus("-1"), m)


def test_bypass_equal_slopes_rejected():
    with pytest.raises(EqualSlopes):
        bypass("0", "0")


def test_thickening_counts():
    def count(start):
        t, n = torus(start), 0
        while t.slope != INF:
            t = attach_bypass_torus(t, BypassMove(INF))
            n += 1
        return n
    assert count("-1/2") == 2
    assert count("-1/4") == 4
    assert count("0") == 1


def test_bypass_against_normalized_theorem():
    box = [Slope(*v) for v in box_slopes(12)]
    assert len(box) ** 2 >= 10_000
    for s in box:
        b = normalize_to(s, ZERO)
        back = b.inverse()
        for r in box:
            if r == s:
                continue
            x = apply(b, r)
            xv = None if x.is_infinite else Fraction(x.q, x.p)
            for side in Side:
                expect = apply(back, canonical(*normalized_bypass(xv, side.value)))
                got = attach_bypass_torus(FramedTorus(None, 1, s),
                                          BypassMove(r, side)).slope
                assert got == expect, (s, r, side)


@st.composite
def matrices(draw):
    gens = [GluingMatrix(1, 1, 0, 1), GluingMatrix(1, 0, 1, 1),
            GluingMatrix(0, -1, 1, 0)]
    m = GluingMatrix.identity()
    for g in draw(st.lists(st.sampled_from(gens + [g.inverse() for g in gens]),
                           max_size=10)):
        n = m @ g
        if max(map(abs, (n.a, n.b, n.c, n.d))) > 20:
            break
        m = n
    return m


small = st.tuples(st.integers(-30, 30), st.integers(-30, 30)).filter(
    lambda v: v != (0, 0)).map(lambda v: canonical(*v))


@settings(max_examples=300)
@given(matrices(), small, small, st.sampled_from(list(Side)), st.integers(1, 3))
def test_bypass_equivariant(m, s, r, side, pairs):
    if s == r:
        return
    out = attach_bypass_torus(FramedTorus(None, pairs, s), BypassMove(r, side))
    moved = attach_bypass_torus(FramedTorus(None, pairs, apply(m, s)),
                                BypassMove(apply(m, r), side))
    assert moved.slope == apply(m, out.slope)
    assert moved.pairs == out.pairs


@given(small, small)
def test_bypass_result_is_neighbor_on_arc(s, r):
    if s == r:
        return
    for side in Side:
        out = attach_bypass_torus(FramedTorus(None, 1, s), BypassMove(r, side)).slope
        assert abs(out.p * s.q - out.q * s.p) == 1


# twist number lemma

def test_twist_lemma_examples():
    assert twist_number_lemma(-2, parse_slope("-3")) == -1
    assert twist_number_lemma(-1, parse_slope("-3")) is None
    assert twist_number_lemma(-1, parse_slope("2")) == 0
    assert twist_number_lemma(0, parse_slope("2")) is None
    # 1/r for r = inf is 0; for r = 0 it is +inf
    assert twist_number_lemma(-1, INF) == 0
    assert twist_number_lemma(0, INF) is None
    assert twist_number_lemma(5, ZERO) == 6


def test_twist_lemma_thresholds():
    for m in range(-12, 1):
        for ruling in ("-3", "-5"):
            assert (twist_number_lemma(m, parse_slope(ruling)) is not None) == (m < -1)
        assert (twist_number_lemma(m, parse_slope("2")) is not None) == (m < 0)


# imbalance

def test_imbalance_examples():
    assert imbalance_bypass(4, 8) == "right"
    assert imbalance_bypass(8, 4) == "left"
    assert imbalance_bypass(6, 6) is None
    for m in range(1, 10):
        assert imbalance_bypass(0, 2 * m) == "right"
    with pytest.raises(OddCount):
        imbalance_bypass(3, 4)


@given(st.integers(0, 100), st.integers(0, 100))
def test_imbalance_antisymmetric(a, b):
    a, b = 2 * a, 2 * b
    flip = {"left": "right", "right": "left", None: None}
    assert imbalance_bypass(b, a) == flip[imbalance_bypass(a, b)]


# stabilization and layers

def test_stabilize_examples():
    t, layer = stabilize(torus(INF), "-")
    assert t.slope == parse_slope("-1")
    t2, layer2 = stabilize(torus("-1"), "-")
    assert t2.slope == parse_slope("-1/2")
    assert twist_of_standard(t2) == -2
    assert layer2.bypass_sign == "-"


def test_stabilize_drops_meridian_twist():
    for n in range(-6, 4):
        t = torus(canonical(n, 1))
        new, _ = stabilize(t, "+")
        assert twist_of_standard(new) == twist_of_standard(t) - 1
        # the twist of a longitude ruling is unchanged; the slope moves one
        # Farey step toward the meridian
        assert abs(new.slope.p * t.slope.q - new.slope.q * t.slope.p) == 1


def test_stabilization_layer_euler_sign():
    for sign, expect in (("+", 1), ("-", -1)):
        _, layer = stabilize(torus(INF), sign)
        assert euler_eval_annulus(layer.annulus(INF)) == expect


def test_stabilize_needs_standard_torus():
    with pytest.raises(NotStandard):
        stabilize(torus("2/3"), "+")
    with pytest.raises(ValueError):
        stabilize(torus("-1"), "0")


def test_layer_requires_one_bypass():
    _, layer = stabilize(torus("-1"), "+")
    with pytest.raises(ValueError):
        layer.annulus(ZERO)
    with pytest.raises(ValueError):
        Layer(torus("-1"), torus("-1")).annulus(INF)


# edge rounding

def test_edge_round_examples():
    assert edge_round_shift(1, 0) == Fraction(-1, 4)
    assert edge_round_shift(1, 1) == Fraction(1, 4)
    assert edge_round_shift(3, 5) == Fraction(3, 4)
    with pytest.raises(ValueError):
        edge_round_shift(2, 4)


@given(st.integers(1, 50), st.data())
def test_edge_round_spacing(n, data):
    k = data.draw(st.integers(0, 2 * n - 2))
    assert edge_round_shift(n, k + 1) - edge_round_shift(n, k) == Fraction(1, 2 * n)


def test_cut_and_round():
    assert cut_and_round_pants(-5, -3) == parse_slope("-1/2")
    assert cut_and_round_pants(-10, -6) == parse_slope("-15/29")
    for m2 in range(-200, -5):
        if (3 * m2) % 5:
            continue
        m3 = 3 * m2 // 5
        s = cut_and_round_pants(m2, m3)
        closed = -(Fraction(8, 5) * m2 + 1) / (3 * m2 + 1)
        assert s.value == closed
        assert s.value < Fraction(-1, 2)
    with pytest.raises(UnequalCounts):
        cut_and_round_pants(-4, -3)


# reachable slopes

def test_reachable_examples():
    arc = reachable_slopes(ZERO, INF)
    for v in ("-1", "-1/2", "-100", "-1/100"):
        assert arc.contains(parse_slope(v))
    assert not arc.contains(parse_slope("1"))
    assert reachable_slopes(parse_slope("-1"), INF).contains(parse_slope("-5"))


def test_reachable_solid_radial_twist():
    meridian = parse_slope("-1/2")  # meridian of V1 on the cut-and-round torus
    for m2 in range(-200, -5):
        if (3 * m2) % 5:
            continue
        s = cut_and_round_pants(m2, 3 * m2 // 5)
        arc = reachable_slopes_solid(s, meridian, reversed_frame=True)
        assert arc.contains(INF)
    with pytest.raises(EqualSlopes):
        reachable_slopes_solid(meridian, meridian)
