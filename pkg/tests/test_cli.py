import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET
from importlib import resources

import pytest

from convexcalc.cli import main
from convexcalc.farey import parse_slope
from convexcalc.replay import builtin_scenario_text
from convexcalc.surfaces import euler_eval, parse_dividing_set

SVG = "{http://www.w3.org/2000/svg}"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def fixture_path(name):
    return str(resources.files("convexcalc.data").joinpath("fixtures", f"{name}.ds"))


# slope

def test_slope_apply_examples():
    assert run("slope", "apply", "[[3,1],[-1,0]]", "1/-1") == (0, "-1/2\n")
    assert run("slope", "apply", "[[5,1],[-1,0]]", "1/-1") == (0, "-1/4\n")


def test_slope_int():
    assert run("slope", "int", "inf", "0") == (0, "1\n")
    assert run("slope", "int", "-1/2", "-1/2") == (0, "0\n")


def test_slope_neighbors():
    code, out = run("slope", "neighbors", "-1/6", "--arc", "inf", "ccw", "--limit", "3")
    assert code == 0
    assert out.split() == ["-1/5", "-2/11", "-3/17"]
    for line in out.split():
        assert str(parse_slope(line)) == line


def test_slope_errors_exit_2(capsys):
    assert run("slope", "int", "0/0", "1")[0] == 2
    assert run("slope", "apply", "[[2,0],[0,1]]", "1")[0] == 2
    assert run("slope", "frob")[0] == 2
    assert run("slope", "int", "1", "2", "--bogus")[0] == 2
    assert run()[0] == 2
    assert "usage" in capsys.readouterr().err


# bypass and seifert

def test_bypass_command():
    assert run("bypass", "-1/6", "--ruling", "inf") == (0, "-1/5\n")
    code, out = run("bypass", "-1/4", "--ruling", "inf", "--until", "inf")
    assert out.split() == ["-1/3", "-1/2", "-1", "inf"]
    assert run("bypass", "0", "--ruling", "-2/5")[1] == "-1/3\n"
    assert run("bypass", "-1/6", "--ruling", "inf", "--pairs", "3")[1] == "2 -1/6\n"
    assert run("bypass", "0", "--ruling", "0")[0] == 2


def test_seifert_commands():
    assert run("seifert", "transport", "-1/6", "outer3", "inner3") == (0, "1\n")
    assert run("seifert", "pullback", "1") == (0, "2\n")
    assert run("seifert", "overtwisted", "3", "-1/5", "outer3") == (0, "true\n")
    assert run("seifert", "overtwisted", "3", "-1/6", "outer3") == (0, "false\n")
    assert run("seifert", "fiber") == (0, "outer3 -1/6\ninner3 1\n")
    assert "A2 [[3,1],[-1,0]]" in run("seifert", "preset")[1]
    assert run("seifert", "transport", "0", "inner1", "outer2")[0] == 2


# replay

def test_replay_builtin(monkeypatch):
    monkeypatch.setenv("CONVEXCALC_COLOR", "never")
    code, out = run("replay", "--builtin")
    assert code == 0
    last = out.strip().splitlines()[-1]
    assert last.startswith("PASS") and "overtwisted disk found" in last
    assert "\x1b[" not in out


def test_replay_no_header_stable(monkeypatch):
    monkeypatch.setenv("CONVEXCALC_COLOR", "never")
    a = run("replay", "--builtin", "--no-header")[1]
    b = run("replay", "--builtin", "--no-header")[1]
    assert a == b
    assert "convexcalc replay of" not in a


def test_replay_json(tmp_path):
    path = tmp_path / "t.json"
    code, _ = run("replay", "--builtin", "--json", str(path))
    assert code == 0
    doc = json.loads(path.read_text())
    assert doc["passed"] and len(doc["steps"]) == doc["checks"] + sum(
        1 for s in doc["steps"] if s["expected"] is None)


def test_replay_broken_file(tmp_path, capsys):
    text = builtin_scenario_text().replace(
        "CutAndRound -10 -6 expect=-15/29", "CutAndRound -10 -6 expect=-14/29")
    path = tmp_path / "broken.scn"
    path.write_text(text)
    code, out = run("replay", str(path))
    assert code == 1
    lineno = text.splitlines().index(
        next(l for l in text.splitlines() if "expect=-14/29" in l)) + 1
    err = capsys.readouterr().err
    assert f"(line {lineno}) failed: CutAndRound" in err
    assert out.strip().splitlines()[-1].startswith("FAIL")


def test_replay_file_errors(tmp_path):
    assert run("replay", str(tmp_path / "missing.scn"))[0] == 2
    bad = tmp_path / "bad.scn"
    bad.write_text("SetPreset poincare\nNope\n")
    assert run("replay", str(bad))[0] == 2
    assert run("replay")[0] == 2
    assert run("replay", "--builtin", str(bad))[0] == 2


def test_color_env(monkeypatch):
    monkeypatch.setenv("CONVEXCALC_COLOR", "always")
    assert "\x1b[32m" in run("replay", "--builtin")[1]
    monkeypatch.setenv("CONVEXCALC_COLOR", "auto")
    assert "\x1b[" not in run("replay", "--builtin")[1]  # StringIO is not a tty
    monkeypatch.setenv("CONVEXCALC_COLOR", "sometimes")
    assert run("replay", "--builtin")[0] == 2


# diagram

def svg_of(path):
    code, out = run("diagram", path, "--out", "-")
    assert code == 0
    return ET.fromstring(out)


def curves(root):
    return [p for p in root.iter(f"{SVG}path") if p.get("class") == "dividing-curve"]


def test_diagram_pants_a():
    root = svg_of(fixture_path("pants_a"))
    paths = curves(root)
    assert len(paths) == 3
    assert all(p.get("data-arc") is not None for p in paths)
    assert all(p.get("stroke-dasharray") for p in paths)


def test_diagram_torus(tmp_path):
    f = tmp_path / "t.ds"
    f.write_text("torus 1 -1/6\n")
    root = svg_of(str(f))
    paths = curves(root)
    assert len(paths) == 2
    labels = [t.text for t in root.iter(f"{SVG}text") if t.get("class") == "slope-label"]
    assert labels == ["-1/6", "-1/6"]


def test_diagram_regions_match_euler():
    for name in ("figure5a", "figure5b", "d2prime", "pants_c"):
        root = svg_of(fixture_path(name))
        regions = [t for t in root.iter(f"{SVG}text") if t.get("class") == "region"]
        total = sum(int(t.get("data-chi")) * (1 if t.get("data-sign") == "+" else -1)
                    for t in regions)
        ds = parse_dividing_set(open(fixture_path(name)).read())
        assert total == euler_eval(ds)
        assert len(curves(root)) == len(ds.arcs) + len(ds.closed_curves)
    root = svg_of(fixture_path("figure5a"))
    assert sum(int(t.get("data-chi")) * (1 if t.get("data-sign") == "+" else -1)
               for t in root.iter(f"{SVG}text") if t.get("class") == "region") == 1


def test_diagram_closed_curves(tmp_path):
    f = tmp_path / "c.ds"
    f.write_text("surface annulus\nclosed core\nclosed core\n")
    assert len(curves(svg_of(str(f)))) == 2


def test_diagram_writes_file(tmp_path):
    out = tmp_path / "x.svg"
    code, msg = run("diagram", fixture_path("d2prime"), "--out", str(out))
    assert code == 0 and "4 regions" in msg
    ET.parse(out)


def test_diagram_invalid_names_invariant(tmp_path, capsys):
    f = tmp_path / "bad.ds"
    f.write_text("surface annulus\narc 1:0 2:0\n")
    assert run("diagram", str(f), "--out", "-")[0] == 2
    assert "odd" in capsys.readouterr().err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "convexcalc", "slope", "int", "inf", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout == "1\n"
    proc = subprocess.run([sys.executable, "-m", "convexcalc", "replay", "--builtin",
                           "--no-header"], capture_output=True, text=True,
                          env={"CONVEXCALC_COLOR": "never", "PATH": ""})
    assert proc.returncode == 0
