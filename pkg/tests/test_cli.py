import io
import json
import os

import pytest

from casct.cli import parse_word, run

DOCS = os.path.join(os.path.dirname(__file__), "..", "docs")


def doc(name):
    return os.path.join(DOCS, name)


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_observe_greek():
    assert call("observe", doc("paper-g.des"), "--s", "β η α", "--greek") == (0, "{β, βα, βαα}\n")


def test_observe_theta_ascii():
    code, text = call("observe", doc("paper-g.des"), "--s", "βηα", "--theta")
    assert code == 0 and text == "{beta eta, beta eta alpha, beta eta alpha alpha}\n"


@pytest.mark.parametrize("t, expected", [("β", "{2,3,4}"), ("β α", "{4}"), ("beta alpha mu beta", "{7}"), ("", "{1}")])
def test_estimate(t, expected):
    assert call("estimate", doc("paper-g.des"), "--h", "--t", t) == (0, expected + "\n")


def test_check_case1_violation(capsys):
    code, text = call("check", doc("case1.des"))
    assert code == 1
    assert "controllability: VIOLATION s=eps sigma=beta reason=attacked-controllable-in-K" in text


def test_check_case2_holds():
    assert call("check", doc("case2.des")) == (0, "controllability: HOLDS\nobservability: HOLDS\n")


def test_check_classic_case1():
    assert call("check", doc("case1.des"), "--classic")[0] == 0


def test_no_ansi_when_disabled(monkeypatch):
    monkeypatch.setenv("CASCT_COLOR", "0")
    assert "\x1b[" not in call("check", doc("case1.des"))[1]


def test_synth_then_small_matches_oracle(tmp_path):
    code, sup = call("synth", doc("case2.des"))
    assert code == 0 and "control: {1} beta\n" in sup
    path = tmp_path / "sp.sup"
    path.write_text(sup)
    a = call("small", doc("case2.des"), "--supervisor", str(path), "--depth", "5")
    b = call("oracle", "small", doc("case2.des"), "--supervisor", str(path), "--depth", "5")
    assert a[0] == b[0] == 0 and a[1] == b[1]
    assert a[1].splitlines()[-1] == "beta eta alpha mu beta"


def test_small_conventional_example2():
    code, text = call("small", doc("example2.des"), "--conventional", "--depth", "7", "--greek")
    assert code == 0 and text.split() == ["ε", "β", "βη", "βηα"]


def test_large_and_lna_print_models():
    code, text = call("large", doc("case2.des"))
    assert code == 0 and text.startswith("alphabet:")
    code, text = call("lna", doc("paper-g.des"), "--depth", "3")
    assert (code, text) == (0, "eps\n")


def test_infimal():
    code, text = call("infimal", doc("case2.des"), "--depth", "2")
    assert (code, text.split("\n")) == (0, ["eps", "beta", "beta eta", ""])


def test_observer_dot_stages():
    for stage, needle in (("expanded", '"0#A"'), ("erased", "ε"), ("observer", "doublecircle")):
        code, text = call("observer", doc("paper-g.des"), "--h", "--stage", stage)
        assert code == 0 and text.startswith("digraph") and needle in text


def test_simulate_jsonl_deterministic():
    args = ("simulate", doc("paper-g.des"), "--seed", "5", "--steps", "6", "--jsonl")
    first, second = call(*args), call(*args)
    assert first == second and first[0] == 0
    for line in first[1].splitlines():
        json.loads(line)


def test_oracle_estimate_and_observable():
    assert call("oracle", "estimate", doc("paper-g.des"), "--t", "beta") == (0, "{2,3,4}\n")
    code, text = call("oracle", "observable", doc("case2.des"), "--depth", "6")
    assert code == 0 and "HOLDS" in text


@pytest.mark.parametrize(
    "argv",
    [
        ("observe", "missing.des", "--s", "beta"),
        ("observe", "PAPER", "--s", "omega"),
        ("estimate", "PAPER", "--t", "beta beta"),
        ("frobnicate",),
        ("observe", "PAPER"),
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    argv = [doc("paper-g.des") if a == "PAPER" else a for a in argv]
    assert run(argv, out=io.StringIO()) == 2
    assert capsys.readouterr().err


def test_model_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.des"
    bad.write_text("alphabet: a\nstates: 0\ninitial: 0\nattackable-controllable: a\ncontrollable:\n")
    assert run(["check", str(bad)], out=io.StringIO()) == 2
    assert "E_AC_NOT_C" in capsys.readouterr().err


def test_parse_word_aliases():
    assert parse_word("βα mu", ("alpha", "beta", "mu")) == ("beta", "alpha", "mu")
    assert parse_word("eps", ("a",)) == ()
