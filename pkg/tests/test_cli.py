import subprocess
import sys

import numpy as np
import pytest

from skewseries.cli import main, parse_ring_spec, run_command
from skewseries.ring import PresentationError, Ring, preset
from skewseries.text import ParseError, print_canonical

FLAGSHIP = "case=B p=3 n=3 precision=12 order=lex delta[3][2]=x1^2\n"


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, text in {
        "yxp2.ring": FLAGSHIP,
        "zpx.ring": "# Z_3[[x]]\ncase = B\np = 3\nn = 2\nprecision = 6\n",
        "delta.ring": "case=A p=5 n=2 precision=10 order=deglex delta[2][1]=x1^2\n",
        "bad.ring": "case=A p=5 n=2 precision=10 delta[2][1]=x1\n",
        "syntax.ring": "case=A p=5\nn = two\n",
    }.items():
        path = tmp_path / name
        path.write_text(text)
        paths[name] = str(path)
    return paths


def test_parse_ring_spec_flagship():
    P = parse_ring_spec(FLAGSHIP)
    assert P.case == "B" and P.n == 3 and P.precision == 12
    R = Ring(P)
    assert print_canonical(R.mul(R.var(3), R.var(2))) == "T(1)*x2^1*x3^1 + T(1)*x1^2"


def test_parse_ring_spec_delta_and_errors():
    P = parse_ring_spec("case=A p=5 n=2 precision=10 order=deglex delta[2][1]=x1^2")
    assert P.order == "deglex" and list(P.delta) == [(2, 1)]
    with pytest.raises(PresentationError):
        parse_ring_spec("case=A p=5 n=2 delta[2][1]=x1")
    with pytest.raises(ParseError) as exc:
        parse_ring_spec("case=A p=5\nn = two\n")
    assert exc.value.line == 2
    with pytest.raises(ParseError):
        parse_ring_spec("case=A p=5 n=2 colour=red")
    with pytest.raises(ParseError) as exc:
        parse_ring_spec("case=A p=5 n=2 delta[2][1]=x1^2 + x2*x1")
    assert exc.value.col > 20
    P = parse_ring_spec("preset = qcomm(3)  precision = 8")
    assert P.precision == 8 and P.sigma[(2, 1)]


def test_mul_golden(files):
    res = run_command(["mul", "--ring", files["yxp2.ring"], "x3", "x2"])
    assert res.status == 0 and res.output == "T(1)*x2^1*x3^1 + T(1)*x1^2\n"


def test_member_exit_codes(files):
    yes = run_command(["member", "--ring", files["yxp2.ring"], "--ideal", "x1", "x3*x2 - x2*x3"])
    assert yes.status == 0 and yes.output == "yes\n"
    no = run_command(["member", "--ring", files["yxp2.ring"], "--ideal", "x1", "x2"])
    assert no.status == 1 and no.output.startswith("no remainder = T(1)*x2^1")


def test_weierstrass_golden(files):
    res = run_command(["weierstrass", "--ring", files["zpx.ring"], "2*x2"])
    lines = res.output.splitlines()
    assert res.status == 0
    assert lines[0].startswith("u = T(2) + ")
    assert lines[1] == "F = T(1)*x2^1"


def test_validate_and_errors(files):
    assert run_command(["validate", "--ring", files["delta.ring"]]).status == 0
    bad = run_command(["validate", "--ring", files["bad.ring"]])
    assert bad.status == 1 and "locality" in bad.output
    assert run_command(["mul", "--ring", files["bad.ring"], "x1", "x2"]).status == 2
    err = run_command(["mul", "--ring", files["syntax.ring"], "x1", "x2"])
    assert err.status == 2 and "line 2" in err.output
    assert run_command(["mul", "--ring", files["delta.ring"], "--bogus", "x1"]).status == 2
    assert run_command(["frobnicate"]).status == 2
    dec = run_command(["normalize", "--ring", files["delta.ring"], "x2*x1"])
    assert dec.status == 2 and "mul" in dec.output


def test_other_commands(files):
    d = files["delta.ring"]
    assert run_command(["normalize", "--ring", d, "7*x1*x2"]).output == "T(2)*x1^1*x2^1\n"
    assert run_command(["add", "--ring", d, "x1 + x2", "4*x1"]).output == "T(1)*x2^1\n"
    assert run_command(["spair", "--ring", d, "x2", "x1"]).output == "T(4)*x1^2\n"
    div = run_command(["divide", "--preset", "delta-x2", "x2", "x2 + x1^2"])
    assert div.output.splitlines()[:2] == ["q1 = T(1)", "r = T(4)*x1^2"]
    gb = run_command(["groebner", "--preset", "delta-x2", "x2", "x1"])
    assert gb.output.splitlines()[:2] == ["g1 = T(1)*x2^1", "g2 = T(1)*x1^1"]
    demo = run_command(["prime-demo", "--ring", files["yxp2.ring"], "x2^3"])
    assert demo.status == 0 and demo.output.splitlines()[-1] == "terminal unit"
    lad = run_command(["ladder", "--preset", "delta-x2", "x2"])
    assert lad.status == 1 and "failures=" in lad.output
    wit = run_command(["witness", "--preset", "delta-x2", "x1", "x2"])
    assert wit.status == 0
    bad = run_command(["ladder", "--preset", "delta-x2", "x2", "x1"])
    assert bad.status == 2


def test_input_file(files, tmp_path):
    inp = tmp_path / "elems.txt"
    inp.write_text("# two generators\nx3\nx2\n")
    res = run_command(["mul", "--ring", files["yxp2.ring"], "--in", str(inp)])
    assert res.output == "T(1)*x2^1*x3^1 + T(1)*x1^2\n"


def test_determinism(files):
    argv = ["witness", "--preset", "qcomm(2)", "--seed", "3", "--closure", "--J", "x2^3", "x1*x2"]
    assert run_command(argv).output == run_command(argv).output


def test_main_and_module_entry(files, capsys):
    assert main(["mul", "--ring", files["yxp2.ring"], "x3", "x2"]) == 0
    assert capsys.readouterr().out == "T(1)*x2^1*x3^1 + T(1)*x1^2\n"
    out = subprocess.run([sys.executable, "-m", "skewseries.cli", "spair", "--preset", "delta-x2", "x2", "x1"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout == "T(4)*x1^2\n"


@pytest.mark.parametrize("name", ["qcomm(2)", "delta-x2", "yx-p2"])
def test_round_trip_through_cli(name):
    R = Ring(preset(name))
    rng = np.random.default_rng(5)
    for _ in range(20):
        e = R.random_element(rng, density=0.2)
        res = run_command(["normalize", "--preset", name, print_canonical(e)])
        assert res.output.strip() == print_canonical(e)
