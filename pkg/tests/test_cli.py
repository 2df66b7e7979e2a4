import json
import os
import subprocess
import sys

import pytest

from wreathkit import formats
from wreathkit.cli import EXIT, build_parser, main, run
from wreathkit.groups import GroupError, Token, make_group
from wreathkit.hardness import compile_formula, reduce_qbf2

DATA = os.path.join(os.path.dirname(__file__), "..", "data")


def data(name):
    return os.path.join(DATA, name)


def test_powerwp_trivial_exit_zero(capsys):
    assert main(["powerwp", "--group", "W(1,1)", "--input", data("trivial.pw")]) == 0
    assert "verdict: trivial" in capsys.readouterr().out


def test_powerwp_nontrivial_and_oracle(tmp_path):
    f = tmp_path / "n.pw"
    f.write_text("group: W(1,1)\n(g1.1 g0.1) ^ 3\n")
    assert main(["powerwp", "--input", str(f)]) == 1
    assert main(["powerwp", "--input", str(f), "--oracle"]) == 1


def test_parse_error_has_position(tmp_path, capsys):
    f = tmp_path / "bad.pw"
    f.write_text("group: W(1,1)\n(g0.1) ^ 2\n(g0.1 g7.1) ^ 1\n")
    assert main(["powerwp", "--input", str(f)]) == 2
    err = capsys.readouterr().err
    assert "line 3" in err and "column 6" in err


def test_knapsack_diagonal(capsys):
    assert main(["knapsack", "--input", data("diag4.kn"), "--box", "5"]) == 0
    out = capsys.readouterr().out
    assert out.count("witness:") == 6
    assert "warning: box 5" in out


def test_knapsack_certify_round_trip(capsys):
    assert main(["knapsack", "--input", data("diag4.kn"), "--box", "3", "--certify", "--format", "json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert len(rep["witness"]) == 4 and len(rep["details"]) == 4
    E = formats.read_knapsack(open(data("diag4.kn")).read())
    from wreathkit.knapsack import normalize_expression, parse_certificate, verify_certificate

    En, y = normalize_expression(E)
    for sol, text in zip(rep["witness"], rep["details"]):
        assert verify_certificate(En, {**sol, y: 1}, parse_certificate(En, text))


def test_knapsack_unsat(tmp_path):
    f = tmp_path / "u.kn"
    f.write_text("group: W(1,1)\nvars: x\n(g1.1) (g0.1)^x\n")
    assert main(["knapsack", "--input", str(f), "--box", "3"]) == 1


def test_periodic_command(tmp_path):
    assert main(["periodic", "--group", "UT3", "--input", data("ut3.per"), "--T", "1000"]) == 0
    f = tmp_path / "c.per"
    f.write_text("1, 0, 0\n")
    assert main(["periodic", "--group", "Cyc(12)", "--input", str(f), "--T", "2"]) == 1


def test_powerpp_command(tmp_path, capsys):
    f = tmp_path / "v.pw"
    f.write_text("group: W(1,1)\n(g0.1) ^ 1152921504606846976\n")
    assert main(["powerpp", "--input", str(f), "--base", "g0.1", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["witness"] == {"z": 2**60}
    assert main(["powerpp", "--input", str(f), "--base", "g1.1"]) == 1


def test_reduce_commands(tmp_path):
    out = tmp_path / "inst.kn"
    assert main(["reduce", "qbf2", "--formula", data("example.dnf"), "--out", str(out)]) == 0
    E = formats.read_knapsack(out.read_text())
    R = reduce_qbf2(compile_formula(formats.read_dnf(open(data("example.dnf")).read())))
    assert E == R.expression
    pw_out = tmp_path / "inst.pw"
    assert main(["reduce", "forall", "--program", data("example.gp"), "--out", str(pw_out)]) == 0
    assert main(["powerwp", "--input", str(pw_out)]) == 0
    assert main(["reduce", "forall", "--program", data("example.gp")]) == 0
    assert main(["reduce", "qbf2"]) == 2


def test_sweep_is_deterministic(capsys):
    args = ["sweep", "--suite", "powerwp", "--n", "100", "--seed", "7"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first


@pytest.mark.parametrize("suite", ["periodic", "knapsack", "hardness"])
def test_other_sweeps(suite):
    assert run(["sweep", "--suite", suite, "--n", "20"]).exit_code == 0


def test_timeout_is_distinct_verdict(tmp_path):
    f = tmp_path / "slow.pw"
    f.write_text("group: W(1,1)\n(g1.1 g0.1) ^ 200000\n(g0.1^-1 g1.1^-1) ^ 200000\n")
    rep = run(["powerwp", "--input", str(f), "--oracle", "--timeout-ms", "50"])
    assert rep.verdict == "timeout" and rep.exit_code == 2


def test_guard_is_an_error(tmp_path):
    f = tmp_path / "huge.pw"
    f.write_text("group: W(1,1)\n(g1.1 g0.1) ^ 5000000\n")
    rep = run(["powerwp", "--input", str(f), "--oracle"])
    assert rep.verdict == "error" and "guard" in rep.warnings[0]


def test_exit_code_table():
    assert EXIT["trivial"] == EXIT["sat"] == 0
    assert EXIT["nontrivial"] == EXIT["unsat"] == 1
    assert EXIT["error"] == 2


def test_help_documents_grammar():
    text = build_parser().format_help()
    for piece in ("group: <descriptor>", "vars:", "exists:", "<var> <a-element> <b-element>"):
        assert piece in text


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "wreathkit", "powerwp", "--input", data("trivial.pw")], capture_output=True, text=True)
    assert r.returncode == 0 and "trivial" in r.stdout


# ---------------------------------------------------------------- formats

def test_powerword_round_trip():
    g, pw = formats.read_powerword(open(data("trivial.pw")).read())
    g2, pw2 = formats.read_powerword(formats.write_powerword(g, pw))
    assert g2 == g and pw2 == pw


def test_knapsack_round_trip_and_undeclared_var():
    E = formats.read_knapsack(open(data("diag4.kn")).read())
    assert formats.read_knapsack(formats.write_knapsack(E)) == E
    with pytest.raises(GroupError, match="line 3"):
        formats.read_knapsack("group: W(1,1)\nvars: x\n(g0.1)^y\n")


def test_missing_header():
    with pytest.raises(GroupError):
        formats.read_powerword("(g0.1) ^ 1\n")


def test_dnf_and_program_round_trip():
    F = formats.read_dnf(open(data("example.dnf")).read())
    assert formats.read_dnf(formats.write_dnf(F)) == F
    P = formats.read_gprogram(open(data("example.gp")).read())
    assert formats.read_gprogram(formats.write_gprogram(P)) == P
    with pytest.raises(GroupError, match="no quantifier"):
        formats.read_dnf("exists: X\nX Z\n")
    with pytest.raises(GroupError):
        formats.read_gprogram("forall: Y\nY (12)\n")


def test_periodic_round_trip():
    G = make_group("UT3")
    fs = formats.read_periodic(open(data("ut3.per")).read(), G)
    assert formats.read_periodic(formats.write_periodic(G, fs), G) == fs
