from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from dimquot import cli
from dimquot.cli import EXIT_FAIL, EXIT_INTERNAL, EXIT_PASS, EXIT_USAGE, main
from dimquot.crossed import finite_ideals, cube_from_ideal_tuple
from dimquot.groupring import IdealTuple, integers
from dimquot.parsing import cube_to_json

S3_TEXT = "gen a = (1 2 3)\ngen b = (1 2)\n"


@pytest.fixture
def s3_file(tmp_path):
    p = tmp_path / "s3.grp"
    p.write_text(S3_TEXT)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bd_s3_both_sides_order_3(capsys, s3_file, tmp_path):
    out = tmp_path / "bd.json"
    code, _, _ = run(capsys, "bd", "--group", s3_file, "--R", "a", "--S", "a,b", "--json", str(out))
    assert code == EXIT_PASS
    rec = json.loads(out.read_text())["records"][0]
    assert rec["verdict"] == "pass" and rec["d_order"] == rec["norm_order"] == 3


def test_exp2_and_modg(capsys):
    code, out, _ = run(capsys, "exp2", "--group", "builtin:Q8", "--R", "i", "--S", "j", "--T", "i j")
    assert code == EXIT_PASS and "pass" in out
    code, _, _ = run(capsys, "modg", "--group", "builtin:S3", "--R", "a", "--S", "a,b", "--T", "1")
    assert code == EXIT_PASS


def test_incl(capsys, tmp_path):
    out = tmp_path / "incl.json"
    args = ["--sub", "a", "--sub", "b", "--sub", "a,b", "--json", str(out)]
    code, _, _ = run(capsys, "incl", "--group", "builtin:D4", "--n", "3", *args)
    assert code == EXIT_PASS and json.loads(out.read_text())["records"][0]["check"] == "incl3"


def test_gamma_agreement(capsys):
    code, out, _ = run(capsys, "gamma", "--invariants", "3")
    assert code == EXIT_PASS and "agreement: yes" in out
    code, out, _ = run(capsys, "gamma", "--invariants", "2,2", "--method", "closed")
    assert code == EXIT_PASS and "2" in out


def test_good_exit_codes(capsys):
    code, out, _ = run(capsys, "good", "--ring", "int", "--ideals", "[2];[3];[4]")
    assert code == EXIT_PASS
    code, out, _ = run(capsys, "good", "--ring", "zero", "2", "--ideals", "[1,0];[0,1];[1,1]")
    assert code == EXIT_FAIL and "witness" in out.lower()


def test_cube_command(capsys):
    code, out, _ = run(capsys, "cube", "--ring", "int", "--tuple", "[2];[3]")
    assert code == EXIT_PASS


def test_crossed_file(capsys, tmp_path):
    z = integers()
    two = next(i for i in finite_ideals(z, 8) if i.lattice.basis == ((2,),))
    p = tmp_path / "cube.json"
    p.write_text(json.dumps(cube_to_json(cube_from_ideal_tuple(IdealTuple(z, (two,)), 8))))
    code, out, _ = run(capsys, "crossed", "--file", str(p))
    assert code == EXIT_PASS


def test_usage_errors(capsys, tmp_path, s3_file):
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "bd", "--group", s3_file)[0] == EXIT_USAGE
    assert run(capsys, "bd", "--group", s3_file, "--R", "z", "--S", "a")[0] == EXIT_USAGE
    bad = tmp_path / "bad.grp"
    bad.write_text("gen a = (1 1 2)\n")
    code, _, err = run(capsys, "bd", "--group", str(bad), "--R", "a", "--S", "a")
    assert code == EXIT_USAGE and "repeated point" in err
    assert run(capsys, "batch", "--corpus", "builtin", "--groups", "Nope", "--report", str(tmp_path / "r.json"))[0] == EXIT_USAGE
    assert run(capsys, "--cap", "5", "bd", "--group", s3_file, "--R", "a", "--S", "b")[0] == EXIT_USAGE


def test_internal_error(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("boom")

    monkeypatch.setattr(cli, "check_bd", boom)
    code, _, err = run(capsys, "bd", "--group", "builtin:S3", "--R", "a", "--S", "b")
    assert code == EXIT_INTERNAL and "boom" in err


def test_batch_empty_report(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(capsys, "batch", "--corpus", "builtin", "--groups", "", "--report", str(report))
    assert code == EXIT_PASS
    doc = json.loads(report.read_text())
    assert doc["records"] == [] and doc["summary"] == {"pass": 0, "fail": 0, "inapplicable": 0}


def test_batch_deterministic_is_byte_identical(capsys, tmp_path):
    outs = []
    for k in range(2):
        report = tmp_path / f"r{k}.json"
        csv = tmp_path / f"r{k}.csv"
        args = ["batch", "--corpus", "builtin", "--groups", "S3,Q8", "--checks", "bd,exp2", "--max-triples", "10"]
        code, _, _ = run(capsys, *args, "--report", str(report), "--csv", str(csv), "--deterministic")
        assert code == EXIT_PASS
        outs.append((report.read_bytes(), csv.read_bytes()))
    assert outs[0] == outs[1]
    assert json.loads(outs[0][0])["summary"]["fail"] == 0


def test_probe_free(capsys, tmp_path):
    report = tmp_path / "p.json"
    code, out, _ = run(capsys, "probe-free", "--target", "builtin:C2xC2", "--sweep", "--report", str(report), "--deterministic")
    assert code == EXIT_PASS
    doc = json.loads(report.read_text())
    assert doc["summary"]["fail"] == 0 and "statistics" in doc


@pytest.mark.skipif(shutil.which("dimquot") is None, reason="console script not installed")
def test_console_script(s3_file):
    proc = subprocess.run(["dimquot", "bd", "--group", s3_file, "--R", "a", "--S", "a,b"], capture_output=True, text=True)
    assert proc.returncode == 0
    proc = subprocess.run([sys.executable, "-m", "dimquot", "gamma", "--invariants", "2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "agreement: yes" in proc.stdout
