import pytest
from hypothesis import given, settings

from casct.attack import (
    AttackLanguage,
    AttackSpec,
    control_always,
    control_sometimes,
    enumerate_attacked_patterns,
    phi,
    project,
    theta,
)
from casct.automata import EPS, Automaton, EventClassification
from casct.errors import CapacityError, DomainError, ModelError, UnsupportedError
from casct.oracle import enumerate_language

from conftest import w
from strategies import instances


def test_theta_and_phi_on_worked_string(ex1):
    g, spec = ex1.automaton, ex1.spec
    s = w("beta eta alpha")
    assert theta(s, g, spec).enumerate() == {w("beta eta"), w("beta eta alpha"), w("beta eta alpha alpha")}
    assert phi(s, g, spec).enumerate() == {w("beta"), w("beta alpha"), w("beta alpha alpha")}


def test_phi_of_unattacked_string_is_projection(ex1):
    assert phi(w("beta eta"), ex1.automaton, ex1.spec).enumerate() == {w("beta")}


def test_theta_rejects_string_outside_plant(ex1):
    with pytest.raises(DomainError, match="beta beta"):
        theta(w("beta beta"), ex1.automaton, ex1.spec)


def test_project(ex1):
    assert project(w("beta eta alpha"), ex1.classification) == w("beta alpha")


def test_trie_names(ex1):
    f = ex1.spec.language(("3", "alpha", "4")).as_automaton()
    assert f.states == ("A", "B", "C")
    assert f.marked == {"A", "B", "C"}
    assert f.transitions == {("A", "alpha", "B"), ("B", "alpha", "C")}


def test_implicit_singleton_for_unlisted_attackable_transition():
    cls = EventClassification.full(("a",), sigma_ao=frozenset({"a"}))
    g = Automaton(("0", "1", "2"), ("a",), frozenset({("0", "a", "1"), ("1", "a", "2")}), "0", frozenset())
    spec = AttackSpec(cls, {("0", "a", "1"): AttackLanguage.finite([(), ("a", "a")])})
    assert spec.language(("1", "a", "2")).words == {("a",)}
    assert phi(("a", "a"), g, spec).enumerate() == {("a",), ("a", "a", "a")}


def test_attack_entry_must_be_attackable():
    cls = EventClassification.full(("a",))
    with pytest.raises(ModelError):
        AttackSpec(cls, {("0", "a", "1"): AttackLanguage.finite([()])})


def test_attack_words_must_be_observable():
    cls = EventClassification.full(("a", "b"), sigma_o=frozenset({"a"}), sigma_ao=frozenset({"a"}))
    with pytest.raises(ModelError):
        AttackSpec(cls, {("0", "a", "1"): AttackLanguage.finite([("b",)])})


def test_regular_language_enumeration_and_cycles():
    acyclic = Automaton(("p", "q"), ("a",), frozenset({("p", "a", "q"), ("p", EPS, "q")}), "p", frozenset({"q"}))
    assert AttackLanguage.regular(acyclic).enumerate() == {(), ("a",)}
    loop = Automaton(("p",), ("a",), frozenset({("p", "a", "p")}), "p", frozenset({"p"}))
    lang = AttackLanguage.regular(loop)
    assert lang.has_cycles() and lang.accepts(("a", "a", "a"))
    with pytest.raises(UnsupportedError):
        lang.enumerate()


def test_all_out_attack_makes_phi_regular():
    cls = EventClassification.full(("a", "b"), sigma_ao=frozenset({"a"}))
    g = Automaton(("0", "1"), ("a", "b"), frozenset({("0", "a", "1")}), "0", frozenset())
    star = Automaton(("u",), ("a", "b"), frozenset({("u", "a", "u"), ("u", "b", "u")}), "u", frozenset({"u"}))
    spec = AttackSpec(cls, {("0", "a", "1"): AttackLanguage.regular(star)})
    obs = phi(("a",), g, spec)
    assert not obs.is_finite and obs.accepts(("b", "a", "b")) and obs.accepts(())


def test_pattern_examples():
    cls = EventClassification.full(("alpha", "beta"), sigma_ac=frozenset({"beta"}))
    assert enumerate_attacked_patterns(frozenset(), cls) == {frozenset(), frozenset({"beta"})}
    assert control_always({"alpha", "beta"}, cls) == {"alpha"}
    assert control_sometimes({"alpha"}, cls) == {"alpha", "beta"}


def test_pattern_guard():
    names = tuple(f"e{i}" for i in range(17))
    cls = EventClassification.full(names, sigma_ac=frozenset(names))
    with pytest.raises(CapacityError):
        enumerate_attacked_patterns(frozenset(), cls)


def test_closed_form_pattern_enumeration_matches_pairs():
    names = tuple(f"e{i}" for i in range(9))
    cls = EventClassification.full(names + ("x",), sigma_ac=frozenset(names))
    pats = enumerate_attacked_patterns({"x", "e0"}, cls)
    assert len(pats) == 2 ** 9 and all("x" in p for p in pats)


@settings(max_examples=80)
@given(instances)
def test_phi_is_projection_of_theta(inst):
    g, spec = inst.plant, inst.spec
    for s in enumerate_language(g, 4):
        raw = theta(s, g, spec).enumerate()
        assert phi(s, g, spec).enumerate() == {project(x, inst.classification) for x in raw}


@settings(max_examples=80)
@given(instances)
def test_pattern_bounds(inst):
    cls = inst.classification
    for gamma in (frozenset(), frozenset(cls.sigma), frozenset(cls.sigma[:1])):
        pats = enumerate_attacked_patterns(gamma, cls)
        assert control_always(gamma, cls) == frozenset.intersection(*pats)
        assert control_sometimes(gamma, cls) == frozenset.union(*pats)
        assert control_always(gamma, cls) <= gamma <= control_sometimes(gamma, cls)


@settings(max_examples=50)
@given(instances)
def test_no_sensor_attacks_means_identity(inst):
    g = inst.plant
    spec = inst.spec.without_sensor_attacks()
    for s in enumerate_language(g, 4):
        assert theta(s, g, spec).enumerate() == {s}
