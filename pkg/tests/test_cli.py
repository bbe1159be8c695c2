import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from censtab import Groupoid, StabilityCategory, free_module, validate
from censtab.cli import (ConfigError, format_expression, load_module, main, parse_config, parse_expression,
                         parse_presentation, run_config, save_module)
from censtab.exact import QQ, GF

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
SYM = StabilityCategory(Groupoid.symmetric())


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_expression_round_trip():
    text = '(dsum (coker (free 1)) (tensor (free 0) (present "a.pres")) (shift (zero)))'
    tree = parse_expression(text)
    assert tree[0] == "dsum" and tree[1] == ("coker", ("free", 1))
    assert format_expression(tree) == text


@pytest.mark.parametrize("value,col,msg", [
    ("(free x)", 11, "nonnegative integer"),
    ("(frees 1)", 11, "unknown operation"),
    ("(free 1", 11, "missing ')'"),
    ("(tensor (free 1))", 11, "takes 2"),
    ("(free 1) (free 2)", 19, "trailing input"),
])
def test_expression_errors_carry_position(tmp_path, value, col, msg):
    p = write(tmp_path, "bad.cfg", f"ring = Q\nmodule = {value}\n")
    with pytest.raises(ConfigError) as exc:
        parse_config(p)
    text = str(exc.value)
    assert f"bad.cfg:2:{col}:" in text and msg in text


def test_config_errors(tmp_path):
    cases = [("module = (free 1)\nn_max = six\n", ":2:"), ("module = (free 1)\ntasks = homology nope\n", "unknown task"),
             ("module = (free 1)\nmodule = (free 2)\n", "duplicate key"), ("n_max = 3\n", "missing 'module'"),
             ("module = (free 1)\ncolour = red\n", "unknown key")]
    for text, frag in cases:
        with pytest.raises(ConfigError, match=frag.replace("(", r"\(")):
            parse_config(write(tmp_path, "c.cfg", text))


def test_comments_inside_quotes(tmp_path):
    p = write(tmp_path, "c.cfg", 'module = (load "a#b.json")  # trailing\n')
    assert parse_config(p).module == ("load", "a#b.json")


def test_presentation_file_parses_to_standard_module():
    P = parse_presentation(CONFIGS / "standard.pres", SYM, QQ)
    assert P.gen_ranks == [2] and P.rel_ranks == [2, 3]
    from censtab import present
    V = present(SYM, P, 5)
    assert list(V.dims) == [0, 0, 1, 2, 3, 4]


def test_presentation_ring_mismatch(tmp_path):
    p = write(tmp_path, "x.pres", "ring F2\ngenerators 1\n")
    with pytest.raises(ConfigError, match="differs"):
        parse_presentation(p, SYM, QQ)


def test_module_file_round_trip(tmp_path):
    V = free_module(SYM, 1, 4, GF(3))
    p = write(tmp_path, "m.json", save_module(V))
    W = load_module(p, SYM, GF(3), 4)
    assert W.dims == V.dims and W.actions == V.actions and W.transitions == V.transitions
    assert validate(W)["passed"]


def _run(cfg, out, **kw):
    return run_config(cfg, out=str(out), **kw)


def test_free0_config(tmp_path):
    assert _run(CONFIGS / "free0_homology.cfg", tmp_path) == 0
    rows = (tmp_path / "homology.csv").read_text().splitlines()
    assert rows[0] == "task,i,n,value,torsion,window_note"
    assert json.loads((tmp_path / "h3.json").read_text())["passed"] is True
    assert {"task", "seconds"} <= set(json.loads((tmp_path / "manifest.json").read_text())["tasks"][0])


def test_standard_config(tmp_path):
    assert _run(CONFIGS / "standard.cfg", tmp_path) == 0


def test_stability_config(tmp_path):
    assert _run(CONFIGS / "stability_f2.cfg", tmp_path) == 0


def test_inconsistent_module_fails_with_location(tmp_path):
    assert _run(CONFIGS / "inconsistent.cfg", tmp_path) == 1
    rep = json.loads((tmp_path / "validate.json").read_text())
    f = rep["report"]["failure"]
    assert (f["kind"], f["m"], f["n"], f["g"]) == ("consistency", 1, 3, "2,1")


def test_reports_are_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert _run(CONFIGS / "standard.cfg", a) == 0
    assert _run(CONFIGS / "standard.cfg", b) == 0
    for f in sorted(a.iterdir()):
        if f.name != "manifest.json":
            assert f.read_bytes() == (b / f.name).read_bytes(), f.name


def test_budget_exceeded_exits_two(tmp_path, capsys):
    assert _run(CONFIGS / "free0_homology.cfg", tmp_path, budget=3) == 2


def test_parse_error_exits_two(tmp_path, capsys):
    cfg = write(tmp_path, "bad.cfg", "ring = Q\nmodule = (free x)\n")
    assert main(["run", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "bad.cfg:2:11:" in capsys.readouterr().err


def test_command_line_overrides(tmp_path):
    assert main(["run", str(CONFIGS / "free0_homology.cfg"), "--ring", "F2", "--nmax", "4",
                 "--out", str(tmp_path)]) == 0
    eff = json.loads((tmp_path / "manifest.json").read_text())["effective"]
    assert eff["ring"] == "F2" and eff["n_max"] == 4


def test_dump_hom(tmp_path, capsys):
    assert main(["dump-hom", "0", "2"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [len(data["levels"][k]) for k in ("-1", "0", "1")] == [1, 2, 2]
    assert all(len(f) == 2 for f in data["faces"]["1"])
    out = tmp_path / "k.json"
    assert main(["dump-hom", "1", "2", "--groupoid", "wreath 2", "--out", str(out)]) == 0
    assert json.loads(out.read_text())["levels"]["-1"]


def test_dump_hom_bad_groupoid(capsys):
    assert main(["dump-hom", "0", "2", "--groupoid", "wreath"]) == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "censtab", "dump-hom", "0", "1"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["levels"]["0"]


def test_ses_task_small(tmp_path):
    cfg = write(tmp_path, "s.cfg", "groupoid = wreath 2\nring = F2\nmodule = (free 0)\nn_max = 2\n"
                                   "tasks = ses validate\nses.n_max = 2\nses.degree = 1\n")
    assert run_config(cfg, out=str(tmp_path / "o")) == 0
    assert json.loads((tmp_path / "o" / "ses.json").read_text())["passed"] is True
