"""Command-line front end.

Exit codes: 0 success (or a passing scenario), 1 a scenario step failed,
2 usage, parse or file errors.
"""
from __future__ import annotations

import argparse
import itertools
import os
import re
import sys

from . import bypass, replay, seifert, surfaces, svg
from .errors import ConvexCalcError
from .farey import (
    Direction, SlopeArc, apply, farey_neighbors, intersection_number,
    parse_matrix, parse_slope,
)
from .seifert import FrameId

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Treats slopes such as ``-1/2`` as positional values, not flags."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(
            r"^-\d+(/[+-]?\d+)?$|^-\d*\.\d+$")


def _use_color(stream) -> bool:
    mode = os.environ.get("CONVEXCALC_COLOR", "auto").strip().lower()
    if mode == "always":
        return True
    if mode == "never":
        return False
    if mode == "auto":
        return hasattr(stream, "isatty") and stream.isatty()
    raise UsageError(
        f"CONVEXCALC_COLOR must be auto, always or never, not {mode!r}")


def _preset(args):
    if getattr(args, "preset", None):
        return seifert.load_preset(args.preset)
    return seifert.poincare_preset()


# -- slope -------------------------------------------------------------------

def cmd_slope(args, out):
    if args.action == "apply":
        print(apply(parse_matrix(args.matrix), parse_slope(args.slope)), file=out)
    elif args.action == "int":
        print(intersection_number(parse_slope(args.s), parse_slope(args.t)),
              file=out)
    else:
        s = parse_slope(args.s)
        start, direction = args.arc
        arc = SlopeArc(parse_slope(start), s, Direction.parse(direction))
        for t in itertools.islice(farey_neighbors(s, arc), args.limit):
            print(t, file=out)
    return EXIT_OK


# -- bypass ------------------------------------------------------------------

def cmd_bypass(args, out):
    t = surfaces.FramedTorus(None, args.pairs, parse_slope(args.slope))
    move = bypass.BypassMove(parse_slope(args.ruling), bypass.Side(args.side))
    target = parse_slope(args.until) if args.until else None
    steps = 0
    while True:
        t = bypass.attach_bypass_torus(t, move)
        steps += 1
        if args.pairs > 1:
            print(f"{t.pairs} {t.slope}", file=out)
        else:
            print(t.slope, file=out)
        if target is None or (t.slope == target and t.pairs == 1):
            break
        if steps >= args.max_steps:
            raise ConvexCalcError(f"{target} not reached in {steps} bypasses")
    return EXIT_OK


# -- seifert -----------------------------------------------------------------

def cmd_seifert(args, out):
    preset = _preset(args)
    if args.action == "transport":
        s = seifert.transport(preset, parse_slope(args.slope),
                              FrameId.parse(args.source),
                              FrameId.parse(args.target))
        print(s, file=out)
    elif args.action == "pullback":
        print(seifert.vertical_pullback(preset, args.index), file=out)
    elif args.action == "overtwisted":
        ok = seifert.overtwisted_meridian_check(
            preset, args.index, parse_slope(args.slope), FrameId.parse(args.frame))
        print("true" if ok else "false", file=out)
    elif args.action == "fiber":
        outer, inner = seifert.fiber_boundary_slope(preset)
        print(f"outer3 {outer}", file=out)
        print(f"inner3 {inner}", file=out)
    else:
        out.write(preset.to_text())
    return EXIT_OK


# -- replay ------------------------------------------------------------------

def cmd_replay(args, out):
    if args.builtin == bool(args.file):
        raise UsageError("replay needs exactly one of --builtin or a file")
    if args.builtin:
        steps, source = replay.builtin_poincare(), "builtin:poincare"
    else:
        steps, source = replay.load_scenario(args.file), args.file
    trace = replay.run(steps, source)
    out.write(trace.to_table(header=not args.no_header, color=_use_color(out)))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(trace.to_json(header=not args.no_header))
    for r in trace.failures:
        print(f"step {r.number} (line {r.lineno}) failed: {r.kind} "
              f"{r.note}".rstrip(), file=sys.stderr)
    return EXIT_OK if trace.passed else EXIT_FAIL


# -- diagram -----------------------------------------------------------------

def cmd_diagram(args, out):
    with open(args.file, encoding="utf-8") as fh:
        ds = surfaces.parse_dividing_set(fh.read())
    doc = svg.render_dividing_set(ds)
    if args.out == "-":
        out.write(doc)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(doc)
        print(f"wrote {args.out}: {len(ds.regions)} regions", file=out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="convexcalc",
        description="Slope, bypass and Seifert calculators, and a replay "
                    "checker for convex-surface arguments.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("slope", help="SL(2,Z) action and Farey neighbors")
    ssub = sp.add_subparsers(dest="action", required=True)
    a = ssub.add_parser("apply", help="apply a matrix to a slope")
    a.add_argument("matrix", help="[[a,b],[c,d]] with determinant 1")
    a.add_argument("slope")
    a = ssub.add_parser("int", help="geometric intersection number")
    a.add_argument("s")
    a.add_argument("t")
    a = ssub.add_parser("neighbors", help="Farey neighbors of s on an arc")
    a.add_argument("s")
    a.add_argument("--arc", nargs=2, metavar=("FROM", "DIR"), required=True,
                   help="arc start and direction (cw or ccw) ending at s")
    a.add_argument("--limit", type=int, default=5)
    sp.set_defaults(func=cmd_slope)

    bp = sub.add_parser("bypass", help="attach bypasses to a convex torus")
    bp.add_argument("slope", help="dividing slope")
    bp.add_argument("--ruling", required=True, help="slope of the attaching ruling")
    bp.add_argument("--side", choices=["front", "back"], default="front")
    bp.add_argument("--pairs", type=int, default=1)
    bp.add_argument("--until", help="repeat until this slope is reached")
    bp.add_argument("--max-steps", type=int, default=1000)
    bp.set_defaults(func=cmd_bypass)

    se = sub.add_parser("seifert", help="frames of the Seifert fibered preset")
    se.add_argument("--preset", help="preset file (default: bundled Poincare)")
    ssub = se.add_subparsers(dest="action", required=True)
    a = ssub.add_parser("transport", help="move a slope between frames")
    a.add_argument("slope")
    a.add_argument("source", help="inner<i>, outer<i>, outer-reversed<i>, cut-round")
    a.add_argument("target")
    a = ssub.add_parser("pullback", help="fiber direction on Inner(i)")
    a.add_argument("index", type=int, choices=[1, 2, 3])
    a = ssub.add_parser("overtwisted", help="does a divide bound a meridian disk")
    a.add_argument("index", type=int, choices=[1, 2, 3])
    a.add_argument("slope")
    a.add_argument("frame")
    ssub.add_parser("fiber", help="boundary slope of the punctured torus fiber")
    ssub.add_parser("preset", help="print the preset")
    se.set_defaults(func=cmd_seifert)

    rp = sub.add_parser("replay", help="check a scenario file")
    rp.add_argument("file", nargs="?")
    rp.add_argument("--builtin", action="store_true",
                    help="run the bundled Poincare scenario")
    rp.add_argument("--json", metavar="PATH", help="also write the trace as JSON")
    rp.add_argument("--no-header", action="store_true",
                    help="omit the timestamped header")
    rp.set_defaults(func=cmd_replay)

    dp = sub.add_parser("diagram", help="draw a dividing set as SVG")
    dp.add_argument("file", help="dividing set file")
    dp.add_argument("--out", required=True, help="SVG path, or - for stdout")
    dp.set_defaults(func=cmd_diagram)
    return p


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"convexcalc: error: {exc}", file=sys.stderr)
    except (ConvexCalcError, ValueError, OSError) as exc:
        print(f"convexcalc: error: {type(exc).__name__}: {exc}", file=sys.stderr)
    return EXIT_USAGE


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
