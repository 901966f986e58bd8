import pytest
from hypothesis import given, settings

from casct.automata import EPS, Automaton, EventClassification
from casct.attack import AttackLanguage, AttackSpec
from casct.errors import ObservationError
from casct.observer import OUTSIDE, advance, ca_observer, erase_unobservable, expand_attacks, state_estimate
from casct.oracle import brute_state_estimate, enumerate_language, observations

from conftest import w
from strategies import instances


def test_expansion_of_worked_plant(ex1):
    h = ex1.witness.automaton
    exp = expand_attacks(h, ex1.spec.restrict(h))
    assert exp.inserted_states == {"0#A", "0#B", "0#C"}
    assert exp.automaton.marked == set(h.states)
    t = exp.automaton.transitions
    assert ("3", "alpha", "4") not in t
    assert {("3", EPS, "0#A"), ("0#A", "alpha", "0#B"), ("0#B", "alpha", "0#C")} <= t
    assert {("0#A", EPS, "4"), ("0#B", EPS, "4"), ("0#C", EPS, "4")} <= t


def test_erasure_relabels_eta(ex1):
    h = ex1.witness.automaton
    erased = erase_unobservable(expand_attacks(h, ex1.spec.restrict(h)), ex1.classification)
    assert ("2", EPS, "3") in erased.automaton.transitions
    assert "eta" not in erased.automaton.alphabet


# Membership of inserted states in observer states is not asserted beyond what
# the chain-shaped attack automaton implies; only the estimates are frozen.
TABLE = {
    "": {"1"},
    "beta": {"2", "3", "4"},
    "beta alpha": {"4"},
    "beta alpha mu": {"6"},
    "beta alpha alpha": {"4"},
    "beta alpha alpha mu": {"6"},
    "beta alpha mu beta": {"7"},
    "beta alpha alpha mu beta": {"7"},
}


@pytest.mark.parametrize("t", list(TABLE))
def test_spec_estimates(ex1, t):
    obs = ca_observer(ex1.witness.automaton, ex1.spec)
    assert state_estimate(obs, w(t)) == TABLE[t]


def test_observer_marks_states_meeting_plant(ex1):
    obs = ca_observer(ex1.witness.automaton, ex1.spec)
    assert obs.automaton.marked == set(obs.automaton.states)
    assert obs.automaton.is_deterministic


def test_inconsistent_observation(ex1):
    obs = ca_observer(ex1.witness.automaton, ex1.spec)
    with pytest.raises(ObservationError):
        state_estimate(obs, w("beta beta"))


def test_advance_outside_is_absorbing(ex1):
    obs = ca_observer(ex1.witness.automaton, ex1.spec)
    ys = advance(obs.automaton, {obs.automaton.initial}, AttackLanguage.singleton("mu"))
    assert ys == {OUTSIDE}
    assert advance(obs.automaton, ys, AttackLanguage.singleton("beta")) == {OUTSIDE}


def test_epsilon_cycle_from_deletions():
    cls = EventClassification.full(("a",), sigma_ao=frozenset({"a"}))
    g = Automaton(("0",), ("a",), frozenset({("0", "a", "0")}), "0", frozenset({"0"}))
    spec = AttackSpec(cls, {("0", "a", "0"): AttackLanguage.finite([()])})
    obs = ca_observer(g, spec)
    assert state_estimate(obs, ()) == {"0"}
    with pytest.raises(ObservationError):
        state_estimate(obs, ("a",))


def test_regular_attack_language_in_observer():
    cls = EventClassification.full(("a", "b"), sigma_ao=frozenset({"a"}))
    g = Automaton(("0", "1", "2"), ("a", "b"), frozenset({("0", "a", "1"), ("1", "b", "2")}), "0", frozenset())
    star = Automaton(("u",), ("b",), frozenset({("u", "b", "u")}), "u", frozenset({"u"}))
    obs = ca_observer(g, AttackSpec(cls, {("0", "a", "1"): AttackLanguage.regular(star)}))
    assert state_estimate(obs, ("b", "b", "b")) == {"1", "2"}
    assert state_estimate(obs, ()) == {"0", "1"}


@settings(max_examples=100)
@given(instances)
def test_estimate_matches_definition(inst):
    g, spec = inst.plant, inst.spec
    obs = ca_observer(g, spec)
    seen = set()
    for s in enumerate_language(g, 4):
        seen |= observations(s, g, spec)
    for t in seen:
        assert state_estimate(obs, t) == brute_state_estimate(t, g, spec)
