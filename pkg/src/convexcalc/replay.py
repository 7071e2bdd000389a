"""Scenario files: declarative proof steps and the interpreter that checks them.

A scenario is line oriented::

    # comment
    SetPreset poincare
    SetTwist 2 -5
    CutAndRound -5 -3 expect=-1/2 [slope of the cut-and-round torus]
    Branch twisted
      CheckOvertwisted 1 -1/2 cut-round expect=true [meridian]
    EndBranch

Each line is ``Kind args... [expect=<literal>] [citation]``.  Every step
recomputes its claim from the engine; the expectation is only compared,
never fed forward, so a wrong literal fails exactly its own step.
``Axiom`` steps record geometric existence claims and compute nothing.
``Branch`` blocks run on a copy of the state and leave the main line
untouched.
"""
from __future__ import annotations

import copy
import datetime
import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Optional

from . import bypass, farey, seifert, surfaces
from .errors import ConvexCalcError, ScenarioParseError
from .farey import INF, Slope, intersection_number, parse_slope
from .seifert import FrameId, FrameKind

__all__ = [
    "Step", "StepRecord", "Trace", "State", "parse_scenario",
    "load_scenario", "builtin_poincare", "builtin_scenario_text", "run",
    "lint", "STEP_KINDS",
]


@dataclass
class Step:
    kind: str
    args: tuple = ()
    expect: Optional[str] = None
    citation: Optional[str] = None
    lineno: int = 0
    body: list = field(default_factory=list)  # Branch steps only

    def to_text(self) -> str:
        parts = [self.kind, *self.args]
        if self.expect is not None:
            parts.append(f"expect={self.expect}")
        if self.citation:
            parts.append(f"[{self.citation}]")
        return " ".join(parts)


@dataclass
class StepRecord:
    number: str
    kind: str
    inputs: str
    computed: Optional[str]
    expected: Optional[str]
    status: str  # pass, fail, axiom
    citation: Optional[str]
    lineno: int
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "step": self.number, "kind": self.kind, "inputs": self.inputs,
            "computed": self.computed, "expected": self.expected,
            "status": self.status, "citation": self.citation,
            "line": self.lineno, "note": self.note,
        }


@dataclass
class Trace:
    records: list
    source: str = "<scenario>"

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.records)

    @property
    def failures(self) -> list:
        return [r for r in self.records if r.status == "fail"]

    def count(self, status: str) -> int:
        return sum(1 for r in self.records if r.status == status)

    @property
    def checks(self) -> int:
        """Steps whose expectation was recomputed and compared."""
        return sum(1 for r in self.records if r.expected is not None)

    def overtwisted_step(self) -> Optional[StepRecord]:
        last = self.records[-1] if self.records else None
        if (last is not None and last.kind == "CheckOvertwisted"
                and last.status == "pass" and last.computed == "true"):
            return last
        return None

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        line = (f"{verdict}: {self.checks} checks, {self.count('fail')} "
                f"failed, {self.count('axiom')} axioms")
        ot = self.overtwisted_step()
        if ot is not None and self.passed:
            line += (f"; overtwisted disk found at step {ot.number} "
                     f"({ot.inputs})")
        return line

    def to_json(self, header: bool = True) -> str:
        doc = {
            "source": self.source,
            "passed": self.passed,
            "checks": self.checks,
            "failed": self.count("fail"),
            "axioms": self.count("axiom"),
            "steps": [r.as_dict() for r in self.records],
        }
        if header:
            doc["generated"] = _timestamp()
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"

    def to_table(self, header: bool = True, color: bool = False) -> str:
        rows = [("#", "kind", "inputs", "computed", "expected", "status")]
        for r in self.records:
            rows.append((r.number, r.kind, r.inputs, r.computed or "",
                         r.expected or "", r.status))
        widths = [min(max(len(row[i]) for row in rows), 48)
                  for i in range(len(rows[0]))]
        out = []
        if header:
            out.append(f"# convexcalc replay of {self.source} at {_timestamp()}")
        for k, row in enumerate(rows):
            cells = [c.ljust(w) for c, w in zip(row, widths)]
            if color and k:
                cells[-1] = _paint(row[-1], cells[-1])
            out.append("  ".join(cells).rstrip())
        out.append(self.summary())
        return "\n".join(out) + "\n"


_COLORS = {"pass": "32", "fail": "31", "axiom": "36"}


def _paint(status, text):
    code = _COLORS.get(status)
    return f"\x1b[{code}m{text}\x1b[0m" if code else text


def _timestamp():
    return datetime.datetime.now(datetime.timezone.utc).isoformat(
        timespec="seconds")


# -- state ---------------------------------------------------------------

@dataclass
class State:
    preset: Optional[seifert.SeifertPreset] = None
    twists: dict = field(default_factory=dict)
    # current boundary torus of each V_i, kept in the Outer(i) frame
    outer: dict = field(default_factory=dict)
    cut_round: Optional[surfaces.FramedTorus] = None
    layers: dict = field(default_factory=dict)
    vertical_legendrian: bool = False

    def need_preset(self):
        if self.preset is None:
            raise ConvexCalcError("no preset loaded; start with SetPreset")
        return self.preset

    def twist(self, i):
        if i not in self.twists:
            raise ConvexCalcError(f"twisting number m{i} has not been set")
        return self.twists[i]

    def set_twist(self, i, m):
        preset = self.need_preset()
        self.twists[i] = m
        inner = farey.canonical(m, 1)
        slope = seifert.transport(preset, inner, FrameId.inner(i),
                                  FrameId.outer(i))
        self.outer[i] = surfaces.FramedTorus(FrameId.outer(i), 1, slope)

    def standard_torus(self, i):
        return surfaces.FramedTorus(FrameId.inner(i), 1,
                                    farey.canonical(self.twist(i), 1))

    def torus_in(self, frame: FrameId) -> surfaces.FramedTorus:
        preset = self.need_preset()
        if frame.kind is FrameKind.CUT_ROUND:
            if self.cut_round is None:
                raise ConvexCalcError("no cut-and-round torus yet")
            return self.cut_round
        if frame.index not in self.outer:
            raise ConvexCalcError(f"torus {frame.index} has no state yet")
        t = self.outer[frame.index]
        slope = _to_frame(preset, t.slope, frame)
        return surfaces.FramedTorus(frame, t.pairs, slope)

    def store(self, t: surfaces.FramedTorus):
        frame = t.frame
        if frame.kind is FrameKind.CUT_ROUND:
            self.cut_round = t
            return
        slope = _from_frame(self.need_preset(), t.slope, frame)
        self.outer[frame.index] = surfaces.FramedTorus(
            FrameId.outer(frame.index), t.pairs, slope)


def _to_frame(preset, s, frame):
    i = frame.index
    if frame.kind is FrameKind.OUTER:
        return s
    if frame.kind is FrameKind.INNER:
        return seifert.transport(preset, s, FrameId.outer(i), frame)
    return seifert.transport(preset, s, FrameId.outer(i), frame)


def _from_frame(preset, s, frame):
    if frame.kind is FrameKind.OUTER:
        return s
    return seifert.transport(preset, s, frame, FrameId.outer(frame.index))


# -- step handlers ---------------------------------------------------------
#
# Each handler takes (state, args) and returns (computed, inputs) where
# computed is the value compared with the expectation (or None for pure
# state changes).

def _int(text):
    try:
        return int(text)
    except ValueError:
        raise ConvexCalcError(f"expected an integer, got {text!r}") from None


def _index(text):
    i = _int(text)
    if i not in (1, 2, 3):
        raise ConvexCalcError(f"torus index must be 1, 2 or 3, got {i}")
    return i


def _vector(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise ConvexCalcError(f"expected a class a,b, got {text!r}")
    return (_int(parts[0]), _int(parts[1]))


def _fixture(name) -> surfaces.DividingSet:
    if "/" in name or name.endswith(".ds"):
        text = Path(name).read_text(encoding="utf-8")
    else:
        text = resources.files("convexcalc.data").joinpath(
            "fixtures", f"{name}.ds").read_text(encoding="utf-8")
    return surfaces.parse_dividing_set(text)


def _kwargs(args):
    pos, kw = [], {}
    for a in args:
        if re.fullmatch(r"[a-z_]+=\S+", a):
            k, v = a.split("=", 1)
            kw[k] = v
        else:
            pos.append(a)
    return pos, kw


def _nargs(args, n, usage):
    if len(args) != n:
        raise ConvexCalcError(f"usage: {usage}")


def h_set_preset(state, args):
    _nargs(args, 1, "SetPreset <poincare|path>")
    name = args[0]
    state.preset = (seifert.poincare_preset() if name == "poincare"
                    else seifert.load_preset(name))
    return None, name


def h_set_twist(state, args):
    _nargs(args, 2, "SetTwist <i> <m>")
    i, m = _index(args[0]), _int(args[1])
    state.set_twist(i, m)
    return None, f"m{i} = {m}"


def h_assert_twist_number(state, args):
    _nargs(args, 1, "AssertTwistNumber <i>")
    i = _index(args[0])
    return state.twist(i), f"m{i}"


def h_assert_outer_slope(state, args):
    _nargs(args, 1, "AssertOuterSlope <i>")
    i = _index(args[0])
    t = state.torus_in(FrameId.outer(i))
    return t.slope, f"slope on outer{i}"


def h_assert_transport(state, args):
    _nargs(args, 3, "AssertTransport <slope> <from> <to>")
    s = parse_slope(args[0])
    src, dst = FrameId.parse(args[1]), FrameId.parse(args[2])
    out = seifert.transport(state.need_preset(), s, src, dst)
    return out, f"{s} from {src} to {dst}"


def _vertical_count(state, side):
    if side == "vertical":
        return 0
    t = state.torus_in(FrameId.outer(_index(side)))
    return 2 * t.pairs * intersection_number(t.slope, INF)


def h_imbalance(state, args):
    _nargs(args, 2, "ImbalanceAnnulus <i|vertical> <j>")
    left, right = args
    cl, cr = _vertical_count(state, left), _vertical_count(state, right)
    side = bypass.imbalance_bypass(cl, cr)
    inputs = (f"vertical annulus {left}|{right}: {cl} vs {cr} intersections "
              f"({cl // 2} vs {cr // 2} per pair)")
    if side is None:
        return "none", inputs
    return (left if side == "left" else right), inputs


def h_twist_lemma(state, args):
    pos, kw = _kwargs(args)
    _nargs(pos, 1, "ApplyTwistLemma <i> [ruling=<slope>]")
    i = _index(pos[0])
    if "ruling" in kw:
        ruling = parse_slope(kw["ruling"])
    else:
        ruling = seifert.vertical_pullback(state.need_preset(), i)
    m = state.twist(i)
    new = bypass.twist_number_lemma(m, ruling)
    if new is not None:
        state.set_twist(i, new)
    return ("none" if new is None else new), f"m{i} = {m}, ruling {ruling}"


def h_cut_and_round(state, args):
    _nargs(args, 2, "CutAndRound <m2> <m3>")
    m2, m3 = _int(args[0]), _int(args[1])
    s = bypass.cut_and_round_pants(m2, m3)
    state.cut_round = surfaces.FramedTorus(FrameId.cut_round(), 1, s)
    return s, f"m2 = {m2}, m3 = {m3}"


def h_check_overtwisted(state, args):
    _nargs(args, 3, "CheckOvertwisted <i> <slope> <frame>")
    i, s, frame = _index(args[0]), parse_slope(args[1]), FrameId.parse(args[2])
    ok = seifert.overtwisted_meridian_check(state.need_preset(), i, s, frame)
    return ok, f"divide of slope {s} on {frame} vs meridian of V{i}"


def h_radial_twist(state, args):
    _nargs(args, 3, "RadialTwist <i> <frame> <boundary-slope>")
    i, frame, s = _index(args[0]), FrameId.parse(args[1]), parse_slope(args[2])
    meridian = seifert.meridian_in_frame(state.need_preset(), i, frame)
    arc = bypass.reachable_slopes_solid(
        s, meridian, reversed_frame=frame.reverses_orientation)
    found = arc.contains(INF) and meridian != INF
    if found:
        state.vertical_legendrian = True
    return found, f"arc {arc} contains inf (meridian {meridian})"


def h_two_layer(state, args):
    _nargs(args, 4, "TwoLayerTwist <i> <s0> <s1> <s2>")
    i = _index(args[0])
    s0, s1, s2 = (parse_slope(a) for a in args[1:])
    preset = state.need_preset()
    meridian = seifert.meridian_in_frame(preset, i, FrameId.outer(i))
    l1 = bypass.reachable_slopes(s0, s1)
    l2 = bypass.reachable_slopes(s1, s2)
    covered = l1.contains(meridian) or l2.contains(meridian)
    ok = covered and seifert.overtwisted_meridian_check(
        preset, i, meridian, FrameId.outer(i))
    return ok, f"layers [{l1}] and [{l2}] vs meridian {meridian}"


def h_thicken_vertical(state, args):
    _nargs(args, 1, "ThickenToVertical <i>")
    i = _index(args[0])
    t = state.torus_in(FrameId.outer(i))
    path = [str(t.slope)]
    count = 0
    while t.slope != INF or t.pairs > 1:
        t = bypass.attach_bypass_torus(t, bypass.BypassMove(INF))
        path.append(str(t.slope))
        count += 1
        if count > 10_000:
            raise ConvexCalcError("vertical thickening does not terminate")
    state.store(t)
    return count, "outer%d: %s" % (i, " -> ".join(path))


def h_attach(state, args):
    _nargs(args, 3, "AttachBypass <frame> <ruling> <front|back>")
    frame, ruling = FrameId.parse(args[0]), parse_slope(args[1])
    side = bypass.Side(args[2])
    t = state.torus_in(frame)
    move = bypass.BypassMove(ruling, side)
    new = bypass.attach_bypass_torus(t, move)
    state.store(new)
    note = " (ruling is a Farey neighbor: trivial bypass)" \
        if bypass.bypass_is_trivial(t, move) else ""
    return new.slope, f"{t.slope} on {frame}, ruling {ruling}, {side.value}{note}"


def h_stabilize(state, args):
    _nargs(args, 2, "Stabilize <i> <+|->")
    i, sign = _index(args[0]), args[1]
    t = state.standard_torus(i)
    new, layer = bypass.stabilize(t, sign)
    state.layers[i] = layer
    state.set_twist(i, bypass.twist_of_standard(new))
    return new.slope, f"V{i} twist {bypass.twist_of_standard(t)}, {sign} bypass"


def h_assert_twist(state, args):
    _nargs(args, 2, "AssertTwist <i> <curve>")
    i, c = _index(args[0]), parse_slope(args[1])
    t = state.standard_torus(i)
    return surfaces.twist_of_curve(t, c), f"curve {c} on {t}"


def h_assert_euler(state, args):
    _nargs(args, 1, "AssertEuler <fixture>")
    ds = _fixture(args[0])
    return surfaces.euler_eval(ds), f"{args[0]} ({ds.surface})"


def h_assert_euler_class(state, args):
    _nargs(args, 3, "AssertEulerClass <a,b>=<v> <a,b>=<v> <a,b>")
    values = []
    for a in args[:2]:
        cls, _, val = a.partition("=")
        values.append((_vector(cls), _int(val)))
    e = surfaces.EulerClass.from_values(values)
    c = _vector(args[2])
    return (surfaces.euler_linear_extend(e, c),
            f"e(mu) = {e.on_mu}, e(lambda) = {e.on_lambda}, class {args[2]}")


def h_region_signs(state, args):
    _nargs(args, 1, "AssertRegionSigns <fixture>")
    ds = _fixture(args[0])
    pos, neg = ds.sign_counts()
    return f"+{pos},-{neg}", args[0]


def h_pants_class(state, args):
    _nargs(args, 1, "AssertPantsClass <fixture>")
    return surfaces.classify_pants(_fixture(args[0])), args[0]


def h_bypass_arcs(state, args):
    _nargs(args, 1, "AssertBypassArcs <fixture>")
    arcs = surfaces.boundary_parallel_arcs(_fixture(args[0]))
    return len(arcs), f"{args[0]}: arcs {arcs}"


def h_fiber(state, args):
    _nargs(args, 0, "AssertFiber")
    outer, inner = seifert.fiber_boundary_slope(state.need_preset())
    return outer, f"fiber boundary: {outer} on outer3, {inner} on inner3"


def h_reachable(state, args):
    _nargs(args, 3, "AssertReachable <s0> <s1> <slope>")
    s0, s1, s = (parse_slope(a) for a in args)
    arc = bypass.reachable_slopes(s0, s1)
    return farey.arc_contains(arc, s), f"{s} in [{arc}]"


def h_denominator_scan(state, args):
    _nargs(args, 3, "DenominatorScan <d> <lo> <hi>")
    d, lo, hi = (_int(a) for a in args)
    hits = [m for m in range(lo, hi + 1) if abs(3 * m + 1) == d]
    return (not hits), f"|3m+1| = {d} for m in [{lo},{hi}]: {hits or 'never'}"


def h_axiom(state, args):
    return None, " ".join(args)


# kind -> (handler, expectation type)
STEP_KINDS: dict[str, tuple[Callable, Optional[str]]] = {
    "SetPreset": (h_set_preset, None),
    "SetTwist": (h_set_twist, None),
    "AssertTwistNumber": (h_assert_twist_number, "int"),
    "AssertOuterSlope": (h_assert_outer_slope, "slope"),
    "AssertTransport": (h_assert_transport, "slope"),
    "ImbalanceAnnulus": (h_imbalance, "word"),
    "ApplyTwistLemma": (h_twist_lemma, "int"),
    "CutAndRound": (h_cut_and_round, "slope"),
    "CheckOvertwisted": (h_check_overtwisted, "bool"),
    "RadialTwist": (h_radial_twist, "bool"),
    "TwoLayerTwist": (h_two_layer, "bool"),
    "ThickenToVertical": (h_thicken_vertical, "int"),
    "AttachBypass": (h_attach, "slope"),
    "Stabilize": (h_stabilize, "slope"),
    "AssertTwist": (h_assert_twist, "int"),
    "AssertEuler": (h_assert_euler, "int"),
    "AssertEulerClass": (h_assert_euler_class, "int"),
    "AssertRegionSigns": (h_region_signs, "word"),
    "AssertPantsClass": (h_pants_class, "word"),
    "AssertBypassArcs": (h_bypass_arcs, "int"),
    "AssertFiber": (h_fiber, "slope"),
    "AssertReachable": (h_reachable, "bool"),
    "DenominatorScan": (h_denominator_scan, "bool"),
    "Axiom": (h_axiom, None),
}


def _normalize(kind_type, literal):
    if kind_type == "slope":
        return str(parse_slope(literal))
    if kind_type == "int":
        return literal.strip().lower() if literal.strip().lower() == "none" \
            else str(int(literal))
    if kind_type == "bool":
        v = literal.strip().lower()
        if v not in ("true", "false"):
            raise ValueError(f"expected true or false, got {literal!r}")
        return v
    return literal.strip()


def _render(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


# -- parsing ---------------------------------------------------------------

_CITATION_RE = re.compile(r"\s*\[([^\[\]]*)\]\s*$")


def parse_scenario(text: str) -> list:
    """Parse scenario text into a list of :class:`Step`."""
    root: list = []
    stack = [root]
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        citation = None
        m = _CITATION_RE.search(line)
        if m:
            citation = m.group(1).strip()
            line = line[:m.start()].strip()
        if "[" in line or "]" in line:
            raise ScenarioParseError(lineno, "unbalanced citation brackets")
        words = line.split()
        kind = words[0]
        if kind == "EndBranch":
            if len(stack) == 1:
                raise ScenarioParseError(lineno, "EndBranch without Branch")
            stack.pop()
            continue
        if kind == "Branch":
            if len(words) != 2:
                raise ScenarioParseError(lineno, "usage: Branch <name>")
            step = Step("Branch", (words[1],), None, citation, lineno)
            stack[-1].append(step)
            stack.append(step.body)
            continue
        if kind not in STEP_KINDS:
            raise ScenarioParseError(lineno, f"unknown step kind {kind!r}")
        expect = None
        args = []
        for w in words[1:]:
            if w.startswith("expect="):
                if expect is not None:
                    raise ScenarioParseError(lineno, "duplicate expect=")
                expect = w[len("expect="):]
            else:
                args.append(w)
        etype = STEP_KINDS[kind][1]
        if expect is not None:
            if etype is None:
                raise ScenarioParseError(
                    lineno, f"{kind} does not take an expectation")
            try:
                _normalize(etype, expect)
            except (ValueError, ConvexCalcError) as exc:
                raise ScenarioParseError(lineno, f"bad expectation: {exc}")
        if kind == "Axiom" and not citation:
            raise ScenarioParseError(lineno, "Axiom steps need a citation")
        stack[-1].append(Step(kind, tuple(args), expect, citation, lineno))
    if len(stack) != 1:
        raise ScenarioParseError(len(text.splitlines()), "unclosed Branch")
    if not root or root[0].kind != "SetPreset":
        raise ScenarioParseError(
            root[0].lineno if root else 1, "a scenario must begin with SetPreset")
    return root


def load_scenario(path) -> list:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def builtin_scenario_text() -> str:
    return resources.files("convexcalc.data").joinpath(
        "poincare.scn").read_text(encoding="utf-8")


def builtin_poincare() -> list:
    """The shipped scenario replaying the overtwisted-disk argument on the
    Poincare homology sphere with reversed orientation."""
    return parse_scenario(builtin_scenario_text())


def lint(scenario: list) -> list:
    """Problems that make a scenario unfit for shipping (empty when clean)."""
    problems = []
    for step in _walk(scenario):
        if step.expect is not None and not step.citation:
            problems.append(
                f"line {step.lineno}: {step.kind} has an expectation "
                f"without a citation")
        if step.kind == "Axiom" and not step.citation:
            problems.append(f"line {step.lineno}: Axiom without a citation")
    return problems


def _walk(steps):
    for s in steps:
        yield s
        if s.kind == "Branch":
            yield from _walk(s.body)


# -- interpreter -----------------------------------------------------------

def run(scenario: list, source: str = "<scenario>") -> Trace:
    """Execute every step in order, recomputing each claim."""
    records: list = []
    _run_into(scenario, State(), records, prefix="")
    return Trace(records, source)


def _run_into(steps, state, records, prefix):
    for k, step in enumerate(steps, 1):
        number = f"{prefix}{k}"
        if step.kind == "Branch":
            records.append(StepRecord(number, "Branch", step.args[0], None,
                                      None, "pass", step.citation,
                                      step.lineno, "sub-scenario on a copy"))
            _run_into(step.body, copy.deepcopy(state), records,
                      prefix=f"{number}.")
            continue
        handler, etype = STEP_KINDS[step.kind]
        if step.kind == "Axiom":
            records.append(StepRecord(number, "Axiom", " ".join(step.args),
                                      None, None, "axiom", step.citation,
                                      step.lineno))
            continue
        try:
            value, inputs = handler(state, step.args)
        except (ConvexCalcError, ValueError, OSError, KeyError) as exc:
            records.append(StepRecord(
                number, step.kind, " ".join(step.args), None, step.expect,
                "fail", step.citation, step.lineno,
                f"{type(exc).__name__}: {exc}"))
            continue
        computed = None if value is None else _render(value)
        status = "pass"
        note = ""
        if step.expect is not None:
            expected = _normalize(etype, step.expect)
            got = _normalize(etype, computed) if computed is not None else None
            if got != expected:
                status = "fail"
                note = f"expected {expected}, computed {computed}"
        records.append(StepRecord(number, step.kind, inputs, computed,
                                  step.expect, status, step.citation,
                                  step.lineno, note))
