import io
import json
import os
import subprocess
import sys

import pytest

from helpers import MODELS
from synid.cli import main
from synid.formats import parse_signature


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def no_color(monkeypatch):
    monkeypatch.setenv("SYNID_COLOR", "0")


BD, FD, EX51, BOW = (MODELS / f for f in ("backdoor.admg", "frontdoor.admg", "ex51.admg", "bow.admg"))


def test_identify_backdoor():
    assert run("identify", "--do", "X", "--effect", "Y", BD) == (0, "u: 1 -> U\ny: X U -> Y\n")


def test_identify_frontdoor():
    assert run("identify", "--do", "X", "--effect", "Y", FD) == (0, "z: X -> Z\nq: Z -> Y\n")


def test_identify_ex51():
    code, text = run("identify", "--do", "X2", "--effect", "X4", EX51)
    assert code == 0
    assert text == "x1: 1 -> X1^2\nx3: X1 X2 -> X3\nq: X1 X3 -> X4\n"


def test_identify_bow(capsys):
    code, text = run("identify", "--do", "X", "--effect", "Y", BOW)
    assert code == 2 and text == ""
    assert "district {Y}" in capsys.readouterr().err


def test_identify_json():
    code, text = run("identify", "--do", "X", "--effect", "Y", FD, "--json")
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "identified"
    assert doc["signature"]["text"] == ["z: X -> Z", "q: Z -> Y"]
    code, text = run("identify", "--do", "X", "--effect", "Y", BOW, "--json")
    assert code == 2 and json.loads(text)["district"] == ["Y"]


def test_identify_explain():
    code, text = run("identify", "--do", "X", "--effect", "Y", FD, "--explain")
    assert code == 0
    assert text.startswith("z: X -> Z\nq: Z -> Y\n\nquery: Y | do(X)\n")
    assert "Hide_X ∘ Fix_Z" in text


def test_output_reparses():
    _, text = run("identify", "--do", "X2", "--effect", "X4", EX51)
    assert parse_signature(text).lines() == text.splitlines()


def test_byte_identical_runs():
    for argv in (("identify", "--do", "X", "--effect", "Y", FD, "--json", "--explain"),
                 ("eval", "--do", "X", "--effect", "Y", FD, "--seed", "3"),
                 ("check", "--do", "X", "--effect", "Y", FD, "--trials", "3")):
        assert run(*argv) == run(*argv)


def test_usage_errors(capsys):
    assert run("identify", "--do", "X", BD)[0] == 1
    assert run("identify", "--do", "X", "--effect", "X", BD)[0] == 1
    assert run("identify", "--do", "X", "--effect", "W", BD)[0] == 1
    assert run("identify", "--do", "X", "--effect", "Y", MODELS / "missing.admg")[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1
    err = capsys.readouterr().err
    assert "synid: error:" in err


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.admg"
    bad.write_text("node A\nedge A => B\n")
    assert run("identify", "--do", "A", "--effect", "B", bad)[0] == 1
    assert "line 2" in capsys.readouterr().err


def test_eval_frontdoor_seed0():
    code, text = run("eval", "--do", "X", "--effect", "Y", FD, "--seed", 0, "--value", "X=0")
    assert code == 0
    rows = [l.split() for l in text.splitlines()[2:]]
    probs = [float(p) for _, p in rows]
    assert len(probs) == 2 and abs(sum(probs) - 1) < 1e-6


def test_eval_frontdoor_matches_oracle():
    from synid import CausalQuery
    from synid.semantics import oracle_interventional, synthesize_latent_dag
    from synid.formats import parse_admg

    code, text = run("eval", "--do", "X", "--effect", "Y", FD, "--seed", 0, "--value", "X=0", "--json")
    doc = json.loads(text)
    m = synthesize_latent_dag(parse_admg(FD.read_text()), 2, 0)
    ref = oracle_interventional(m, CausalQuery({"Y"}, {"X"}), {"X": "0"})
    for row in doc["results"][0]["table"]:
        assert abs(row["result"] - ref[row["value"]]) < 1e-9


def test_eval_all_values_and_given_tables():
    code, text = run("eval", "--do", "X", "--effect", "Y", MODELS / "frontdoor_cpt.admg")
    assert code == 0
    assert "p(Y | do(X=lo))" in text and "p(Y | do(X=hi))" in text
    assert "yes  0.537000" in text


def test_eval_det_single_value_rows():
    code, text = run("eval", "--do", "X", "--effect", "Y", MODELS / "mediator_det.admg", "--interp", "det")
    assert code == 0
    blocks = text.strip().split("\n\n")
    assert len(blocks) == 2
    assert all(len(b.splitlines()) == 3 for b in blocks)
    assert blocks[0].splitlines()[2] == "high"


def test_eval_det_rejects_random_tables(capsys):
    code, _ = run("eval", "--do", "X", "--effect", "Y", FD, "--interp", "det")
    assert code == 1
    assert "not a function" in capsys.readouterr().err


def test_eval_minplus_min_zero():
    code, text = run("eval", "--do", "X", "--effect", "Y", FD, "--interp", "minplus", "--json")
    doc = json.loads(text)
    for res in doc["results"]:
        assert min(r["result"] for r in res["table"]) == 0


def test_eval_bad_value(capsys):
    assert run("eval", "--do", "X", "--effect", "Y", FD, "--value", "Q=1")[0] == 1
    assert run("eval", "--do", "X", "--effect", "Y", FD, "--value", "X=9")[0] == 1
    assert run("eval", "--do", "X", "--effect", "Y", BOW)[0] == 2


def test_check_pass():
    code, text = run("check", "--do", "X", "--effect", "Y", FD, "--trials", 20, "--seed", 0)
    assert code == 0 and text.startswith("PASS Y | do(X)")
    dev = float(text.split("max deviation ")[1].split()[0])
    assert dev < 1e-9


def test_check_skip_bow():
    code, text = run("check", "--do", "X", "--effect", "Y", BOW)
    assert code == 2 and text.startswith("SKIP")


def test_check_unconfounded_dag(tmp_path):
    m = tmp_path / "dag.admg"
    m.write_text("edge A -> B\nedge B -> C\nedge A -> C\n")
    for do, eff in (("A", "C"), ("B", "C"), ("A", "B"), ("C", "A")):
        assert run("check", "--do", do, "--effect", eff, m, "--trials", 3)[0] == 0


def test_check_json_minplus():
    code, text = run("check", "--do", "X2", "--effect", "X4", EX51, "--interp", "minplus", "--json", "--trials", 3)
    doc = json.loads(text)
    assert code == 0 and doc["status"] == "pass" and doc["max_deviation"] == 0.0


def test_render_signature_file():
    code, text = run("render", MODELS / "fig1.sig")
    assert code == 0 and text.count("shape=box") == 3 and '"copy:X1"' in text
    code, text = run("render", MODELS / "fig1.sig", "--exterior")
    assert text.count("shape=box") == 1 and '"out:X3"' in text


def test_render_identified():
    code, text = run("render", FD, "--do", "X", "--effect", "Y", "--exterior")
    assert code == 0 and '"m:z" -> "m:q" [label="Z"];' in text
    code, text = run("render", FD, "--do", "X", "--effect", "Y")
    assert text.count("shape=box") == 3
    assert run("render", BOW, "--do", "X", "--effect", "Y")[0] == 2


def test_render_model_signature():
    code, text = run("render", BD)
    assert code == 0 and text.count("shape=box") == 3


def test_stdin(monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO(BD.read_text()))
    assert run("identify", "--do", "X", "--effect", "Y", "-")[0] == 0


def test_console_script():
    env = dict(os.environ, SYNID_COLOR="0")
    p = subprocess.run([sys.executable, "-m", "synid.cli", "identify", "--do", "X", "--effect", "Y", str(BD)],
                       capture_output=True, text=True, env=env)
    assert p.returncode == 0 and p.stdout == "u: 1 -> U\ny: X U -> Y\n"
    p = subprocess.run([sys.executable, "-m", "synid.cli", "--version"], capture_output=True, text=True)
    assert p.returncode == 0 and "0.1.0" in p.stdout
