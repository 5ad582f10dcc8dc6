from __future__ import annotations

import io
import subprocess
import sys

import pytest

from shrinkwedge import corpus
from shrinkwedge.cli import main
from shrinkwedge.summands import format_config, load_config
from shrinkwedge.transfinite import format_expr, parse_expr
from shrinkwedge.whisker import format_theta, in_theta_image, load_theta


def run(*argv, stdin=None, monkeypatch=None):
    out = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(list(argv), out)
    return code, out.getvalue()


def test_reduce_example():
    assert run("reduce", "1:1 1:-1") == (0, "e\n")


def test_reduce_from_stdin(monkeypatch):
    code, out = run("reduce", stdin="1:1 1:2\n# comment\n\n2:1 2:-1\n", monkeypatch=monkeypatch)
    assert (code, out) == (0, "1:3\ne\n")


def test_word_arithmetic():
    assert run("mul", "1:1 2:1", "2:-1 3:1") == (0, "1:1 3:1\n")
    assert run("inv", "1:1 2:1") == (0, "2:-1 1:-1\n")
    assert run("project", "--level", "3", "omega[diag 1 1 const 1]") == (0, "1:1 2:1 3:1\n")
    assert run("decompose", "--summand", "2", "1:1 2:1") == (0, "prefix 1:1\ntail 2:1\n")


def test_stabilize_example():
    code, out = run("stabilize", "--summand", "2", "--upto", "8", "( 2:1 5:1 )")
    assert code == 0
    assert out.splitlines()[-1] == "stable 2:-1 at 5"


def test_stabilize_uncertified_is_inconclusive(capsys):
    code, out = run("stabilize", "--summand", "2", "--upto", "4", "( 2:1 5:1 )")
    assert code == 2 and "uncertified" in out
    assert "inconclusive" in capsys.readouterr().err


def test_stabilize_terminal_word_is_an_input_error(capsys):
    assert run("stabilize", "--summand", "5", "--upto", "8", "( 2:1 5:1 )")[0] == 1
    assert "ends in a letter of summand 5" in capsys.readouterr().err


def test_equal_verdicts():
    a, b = "omega[diag 1 1 const 1]", "( 1:1 omega[diag 2 1 const 1] )"
    assert run("equal", "--upto", "6", a, a) == (0, "identical\n")
    assert run("equal", "--upto", "6", a, b) == (2, "agree-through-6\n")
    assert run("equal", "--upto", "5", "3:1", "e") == (0, "first-difference-at 3\n")


def test_nt_enum_and_atlas(tmp_path):
    cfg = tmp_path / "c2.cfg"
    cfg.write_text("default cyclic 2\n")
    code, out = run("--config", str(cfg), "nt-enum", "--level", "2", "--summand", "1", "--maxlen", "2")
    assert (code, out) == (0, "e\n2:1\n1:1 2:1\n")
    dot = tmp_path / "atlas.dot"
    code, out = run("--config", str(cfg), "atlas", "--level", "2", "--maxlen", "2", "--dot", str(dot))
    assert code == 0
    assert sum(line.startswith("copy ") for line in out.splitlines()) == 6
    assert sum(line.startswith("attach ") for line in out.splitlines()) == 5
    assert dot.read_text().startswith("graph atlas_level_2 {")


def test_atlas_alphabet_for_integer_summands():
    code, out = run("nt-enum", "--level", "1", "--summand", "1", "--maxlen", "1")
    assert code == 1
    code, out = run("atlas", "--level", "2", "--maxlen", "1", "--alphabet", "1:1;-1", "--alphabet", "2:1")
    assert code == 0 and "copy 2 1:-1 beta e" in out


@pytest.mark.parametrize(
    "argv, message",
    [
        (["reduce", "1:1 x:2"], "line 1, col 5"),
        (["project", "--level", "0", "1:1"], "--level must be a positive integer"),
        (["project", "--level", "2", "( 1:1"], "unclosed"),
        (["equal", "--upto", "3", "1:1"], "needs exactly 2"),
        (["--config", "/nonexistent.cfg", "reduce", "e"], "error:"),
        (["atlas", "--level", "2", "--maxlen", "1", "--alphabet", "x"], "bad --alphabet"),
    ],
)
def test_input_errors(argv, message, capsys):
    assert main(argv, io.StringIO()) == 1
    assert message in capsys.readouterr().err


@pytest.mark.parametrize("name", corpus.NAMES)
def test_corpus_fixtures(name, tmp_path):
    code, out = run("corpus", name, "--out", str(tmp_path))
    assert code == 0 and len(out.splitlines()) == 4
    cfg = load_config(tmp_path / f"{name}.cfg")
    assert load_config(tmp_path / f"{name}.cfg") == cfg
    assert format_config(cfg) == (tmp_path / f"{name}.cfg").read_text()
    for line in (tmp_path / f"{name}.words").read_text().splitlines():
        assert format_expr(parse_expr(line)) == line
    inside = load_theta(tmp_path / f"{name}-in.theta")
    outside = load_theta(tmp_path / f"{name}-out.theta")
    assert in_theta_image(inside).status == "in-image"
    assert in_theta_image(outside).status == "not-in-image"
    for path in (f"{name}-in.theta", f"{name}-out.theta"):
        assert format_theta(load_theta(tmp_path / path)) == (tmp_path / path).read_text()
    assert run("--config", str(tmp_path / f"{name}.cfg"), "theta-check", str(tmp_path / f"{name}-in.theta")) == (0, "in-image\n")


def test_corpus_configs():
    assert corpus.files("earring")["earring.cfg"] == "default integer\n"
    assert corpus.files("rp-wedge")["rp-wedge.cfg"] == "default cyclic 2\n"
    assert corpus.files("tori-wedge")["tori-wedge.cfg"] == "default product 2\n"
    with pytest.raises(ValueError):
        corpus.files("klein")


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "shrinkwedge", "stabilize", "--summand", "2", "--upto", "10", "( 2:1 5:1 2:1 7:1 )"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second
    assert first.decode().splitlines()[-1] == "stable 2:-2 at 7"
