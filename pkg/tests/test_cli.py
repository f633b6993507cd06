import math
import os
import subprocess
import sys
from pathlib import Path

import pytest

from hereditary_growth.cli import build_parser, main

GOLDEN = Path(__file__).parent / "golden"
COMMANDS = ("tcount", "validate", "construct", "plot", "verify-lemmas", "language", "avoid", "compare")


def cli(*argv):
    env = dict(os.environ, COLUMNS="80")
    proc = subprocess.run(
        [sys.executable, "-m", "hereditary_growth.cli", *map(str, argv)],
        capture_output=True, text=True, env=env,
    )
    return proc.returncode, proc.stdout, proc.stderr


def help_text(command=None):
    argv = [command, "--help"] if command else ["--help"]
    return cli(*argv)[1]


@pytest.mark.parametrize("command", (None,) + COMMANDS)
def test_help_matches_golden(command):
    name = f"{command or 'main'}.txt"
    assert help_text(command) == (GOLDEN / name).read_text()


@pytest.mark.parametrize("command", COMMANDS)
def test_help_lists_every_flag(command):
    text = help_text(command)
    sub = build_parser()._subparsers._group_actions[0].choices[command]
    for action in sub._actions:
        for flag in action.option_strings:
            assert flag in text, flag


def test_tcount():
    assert cli("tcount", "--d", 1, "--n", 5)[:2] == (0, "13\n")
    code, out, _ = cli("tcount", "--d", 3, "--n", 5, "--log")
    assert code == 0 and abs(float(out) - math.log(7)) < 1e-12


def test_tcount_huge_is_decimal():
    code, out, _ = cli("tcount", "--d", 1, "--n", 30000)
    assert code == 0 and len(out.strip()) > 6000


def test_config_echo_on_stderr():
    _, out, err = cli("tcount", "--d", 1, "--n", 5)
    assert err.startswith("# tcount ") and "d=1" in err and out == "13\n"


def test_validate_codes(tmp_path):
    assert cli("validate", "--family", "minimal", "--nmax", 100)[0] == 0
    bad = tmp_path / "bad.csv"
    bad.write_text("n,f\n0,1\n1,2\n2,3\n3,10\n4,11\n5,12\n6,13\n")
    code, out, _ = cli("validate", "--input", bad, "--nmax", 3)
    assert code == 1 and "condition1=FAIL(n=2,m=3)" in out
    assert cli("validate", "--family", "nonsense", "--nmax", 3)[0] == 2
    assert cli("validate", "--nmax", 3)[0] == 2


def test_unknown_flag_rejected():
    assert cli("tcount", "--d", 1, "--n", 5, "--bogus")[0] == 2


def test_avoid(tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("")
    code, out, _ = cli("avoid", "count", "--forbidden", empty, "--alphabet", "xy", "--nmax", 3)
    assert code == 0 and out == "n,g\n0,1\n1,2\n2,4\n3,8\n"
    yx = tmp_path / "yx.txt"
    yx.write_text("yx\n")
    assert cli("avoid", "classify", "--forbidden", yx)[1] == "polynomial 1\n"
    assert cli("avoid", "count", "--forbidden", yx, "--nmax", 20, "--check")[0] == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("xz\n")
    assert cli("avoid", "count", "--forbidden", bad)[0] == 2


def test_construct_and_follow_ups(tmp_path):
    trace = tmp_path / "t.csv"
    plot = tmp_path / "p.csv"
    code, _, err = cli("construct", "--family", "minimal", "--N", 4, "--nmax", 64,
                       "--out", trace, "--check", "--domination", "--plot-out", plot)
    assert code == 0 and "check: 0 violations" in err and "C=1" in err
    assert trace.read_text().splitlines()[0] == "n,d,e,in_x,in_y,a,A,F"
    lines = plot.read_text().splitlines()
    assert lines[0] == "n,A,F,ratio_log" and all(line.endswith(",0") for line in lines[1:])
    code, out, _ = cli("language", "count", "--trace", trace, "--n", 8)
    assert code == 0 and out.splitlines()[7] == "6,7,7"
    assert cli("language", "check-hereditary", "--trace", trace, "--n", 8)[0] == 0
    code, out, _ = cli("language", "enumerate", "--trace", trace, "--n", 2)
    assert out.split() == ["xx", "xy", "yx"]
    assert cli("plot", "--trace", trace, "--family", "minimal")[0] == 0
    assert cli("plot", "--trace", trace, "--family", "exponential")[0] == 2


def test_plot_empty_trace(tmp_path):
    trace = tmp_path / "t.csv"
    trace.write_text("n,d,e,in_x,in_y,a,A,F\n")
    code, out, _ = cli("plot", "--trace", trace, "--family", "minimal")
    assert code == 0 and out == "n,A,F,ratio_log\n"


def test_construct_refuses_invalid(tmp_path):
    assert cli("construct", "--family", "power:4", "--nmax", 64, "--out", tmp_path / "t.csv")[0] == 2
    code, _, _ = cli("construct", "--family", "power:4", "--normalize", "--nmax", 64, "--out", tmp_path / "t.csv")
    assert code == 0


def test_construct_checkpoint_resume(tmp_path):
    ck = tmp_path / "ck.csv"
    first = tmp_path / "a.csv"
    second = tmp_path / "b.csv"
    assert cli("construct", "--family", "power:3", "--nmax", 80, "--checkpoint", ck, "--out", first)[0] == 0
    assert cli("construct", "--family", "power:3", "--nmax", 160, "--checkpoint", ck, "--out", second)[0] == 0
    straight = tmp_path / "c.csv"
    cli("construct", "--family", "power:3", "--nmax", 160, "--out", straight)
    assert second.read_bytes() == straight.read_bytes()
    assert cli("construct", "--family", "minimal", "--nmax", 160, "--checkpoint", ck, "--out", second)[0] == 2


def test_verify_lemmas(tmp_path):
    report = tmp_path / "r.csv"
    code, out, _ = cli("verify-lemmas", "--lemma", "3.2", "--grid", "d=0:9;n=2:20", "--out", report, "--cells", "all")
    assert code == 0 and out.startswith("lemma 3.2: PASS")
    lines = report.read_text().splitlines()
    assert lines[0] == "lemma,cell,lhs,rhs,pass,log_margin" and len(lines) > 100
    bad = tmp_path / "bad.csv"
    bad.write_text("n,f\n" + "".join(f"{n},{v}\n" for n, v in enumerate([1, 2, 3, 10] + list(range(11, 40)))))
    assert cli("verify-lemmas", "--lemma", "remark", "--grid", "p=1:4;j=0:2", "--input", bad)[0] == 1
    assert cli("verify-lemmas", "--lemma", "remark", "--grid", "p=1:4;j=0:2")[0] == 2
    assert cli("verify-lemmas", "--lemma", "3.2", "--grid", "z=1")[0] == 2


def test_compare(tmp_path):
    lin = tmp_path / "lin.csv"
    exp = tmp_path / "exp.csv"
    lin.write_text("n,f\n" + "".join(f"{n},{n + 1}\n" for n in range(20)))
    exp.write_text("n,f\n" + "".join(f"{n},{2 ** n}\n" for n in range(20)))
    assert cli("compare", "--f", exp, "--g", lin, "--C", 1, "--nmax", 10)[0] == 0
    code, out, _ = cli("compare", "--f", lin, "--g", exp, "--C", 1, "--nmax", 10)
    assert code == 1 and "first_failure=2" in out


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# defaults\nd=1\nn=5\n")
    assert main(["tcount", "--config", str(cfg)]) == 0
    assert capsys.readouterr().out == "13\n"
    assert main(["tcount", "--config", str(cfg), "--n", "6"]) == 0
    assert capsys.readouterr().out == "21\n"
    cfg.write_text("family=exponential\nnmax=10\n")
    assert main(["validate", "--config", str(cfg), "--family", "minimal"]) == 0
    assert "builtin(minimal)" in capsys.readouterr().out


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("frobnicate=1\n")
    assert cli("tcount", "--d", 1, "--n", 2, "--config", cfg)[0] == 2
    assert cli("tcount", "--d", 1, "--n", 2, "--config", tmp_path / "missing.cfg")[0] == 2


def test_outputs_are_byte_identical(tmp_path):
    outputs = []
    for k in range(2):
        trace = tmp_path / f"t{k}.csv"
        report = tmp_path / f"r{k}.csv"
        cli("construct", "--family", "intermediate:1/2", "--nmax", 200, "--out", trace)
        cli("verify-lemmas", "--lemma", "3.3", "--grid", "d=0:70;n=64:80", "--out", report, "--cells", "all")
        outputs.append((trace.read_bytes(), report.read_bytes()))
    assert outputs[0] == outputs[1]
