import os

import pytest
from hypothesis import given, settings

from casct.automata import language_equal
from casct.fixtures import model_text
from casct.modelfile import ModelFileError, format_model, format_supervisor, parse_model, parse_supervisor
from casct.synthesis import synthesize_sp

from strategies import instances

DOCS = os.path.join(os.path.dirname(__file__), "..", "docs")

BASE = "alphabet: a b\nstates: 0 1\ninitial: 0\ntrans: 0 a 1\n"


def code_of(text):
    with pytest.raises(ModelFileError) as info:
        parse_model(text)
    return info.value


def test_golden_fixture_file(ex1):
    with open(os.path.join(DOCS, "paper-g.des"), encoding="utf-8") as fh:
        m = parse_model(fh.read())
    assert m.automaton == ex1.automaton
    assert m.classification == ex1.classification
    assert m.spec == ex1.spec
    assert m.witness.kept_states == {"1", "2", "3", "4", "6", "7"}
    assert m.classification.sigma_uo == {"eta"}


@pytest.mark.parametrize(
    "text, code, line",
    [
        ("", "E_EMPTY", 0),
        ("# only a comment\n", "E_EMPTY", 0),
        (BASE + "colour: red\n", "E_UNKNOWN_SECTION", 5),
        (BASE + "states: 1\n", "E_DUP_STATE", 5),
        (BASE + "trans: 1 z 0\n", "E_UNDEF_SYMBOL", 5),
        (BASE + "trans: 1 a 9\n", "E_UNDEF_STATE", 5),
        (BASE + "controllable: a\nattackable-controllable: b\n", "E_AC_NOT_C", 6),
        (BASE + "observable: a\nattackable-observable: b\n", "E_AO_NOT_O", 6),
        (BASE + "attack: 0 a 1 { eps }\n", "E_ATTACK_NOT_ATTACKABLE", 5),
        (BASE + "attackable-observable: a\nattack: 0 a 0 { eps }\n", "E_ATTACK_NO_TRANSITION", 6),
        (BASE + "trans: 0\n", "E_SYNTAX", 5),
        (BASE + "trans: 0 a 0\n", "E_NONDET", 5),
        ("alphabet: a\nstates: 0\n", "E_NO_INITIAL", 0),
        (BASE + "attackable-observable: a\nattack: 0 a 1 @missing.des\n", "E_ATTACK_FILE", 6),
    ],
)
def test_error_codes(text, code, line):
    err = code_of(text)
    assert err.code == code and err.line == line


def test_ac_not_c_column():
    err = code_of("alphabet: a eta\nstates: 0\ninitial: 0\ncontrollable: a\nattackable-controllable: eta\n")
    assert (err.code, err.line, err.col) == ("E_AC_NOT_C", 5, 26)


def test_comments_and_hash_inside_names():
    m = parse_model("alphabet: a   # events\nstates: 0#A 1\n# full line\ninitial: 0#A\ntrans: 0#A a 1\n")
    assert m.automaton.states == ("0#A", "1")


def test_defaults_are_controllable_and_observable():
    m = parse_model(BASE)
    assert m.classification.sigma_c == {"a", "b"} and m.classification.sigma_o == {"a", "b"}


def test_directive_order_does_not_matter():
    m = parse_model("controllable: a\n" + BASE)
    assert m.classification.sigma_c == {"a"}


def test_regular_attack_file(tmp_path):
    (tmp_path / "star.des").write_text("alphabet: a\nstates: u\ninitial: u\nmarked: u\ntrans: u a u\n")
    text = BASE + "attackable-observable: a\nattack: 0 a 1 @star.des\n"
    m = parse_model(text, base_dir=str(tmp_path))
    lang = m.spec.language(("0", "a", "1"))
    assert not lang.is_finite and lang.accepts(("a", "a"))


@pytest.mark.parametrize("name", ["example1", "example2", "case1", "case2"])
def test_fixture_round_trip(name):
    m = parse_model(model_text(name))
    again = parse_model(format_model(m.automaton, m.classification, m.spec, m.witness))
    assert again.automaton == m.automaton and again.spec == m.spec
    assert again.witness.kept_states == m.witness.kept_states


def test_supervisor_round_trip(ex1):
    sup = synthesize_sp(ex1.witness, ex1.automaton, ex1.spec)
    text = format_supervisor(sup, order=ex1.classification.order)
    back = parse_supervisor(text, events=ex1.classification.sigma)
    assert back.observation_automaton == sup.observation_automaton
    assert back.control == sup.control and back.default_pattern == sup.default_pattern
    assert format_supervisor(back, order=ex1.classification.order) == text


def test_supervisor_rejects_unknown_control_event():
    with pytest.raises(ModelFileError) as info:
        parse_supervisor("alphabet: a\nstates: x\ninitial: x\ncontrol: x zz\n", events=("a",))
    assert info.value.code == "E_UNDEF_SYMBOL"


@settings(max_examples=100)
@given(instances)
def test_random_round_trip(inst):
    text = format_model(inst.plant, inst.classification, inst.spec, inst.sub)
    m = parse_model(text)
    assert m.automaton == inst.plant
    assert m.classification == inst.classification
    assert m.spec == inst.spec
    assert language_equal(m.witness.automaton, inst.sub.automaton)
    assert format_model(m.automaton, m.classification, m.spec, m.witness) == text


from hypothesis import strategies as st

LINES = st.sampled_from([
    "alphabet: a b", "states: 0 1", "initial: 0", "initial: 1", "marked: 1", "trans: 0 a 1",
    "trans: 1 b 0", "trans: 0 a", "controllable: a", "observable: b", "attackable-observable: b",
    "attackable-controllable: a", "attack: 1 b 0 { eps, b b }", "attack: 1 b 0 { }", "spec-states: 0",
    "# c", "x: y", "trans: 0 eps 1", "alphabet: eps", "attack: 0 a 1 @nowhere",
])


@settings(max_examples=300)
@given(st.lists(st.one_of(LINES, st.text(max_size=12)), max_size=12))
def test_parser_is_total(lines):
    try:
        parse_model("\n".join(lines))
    except ModelFileError as err:
        assert err.code.startswith("E_")
