"""Seeded random plants, classifications, attack specs and sub-automata."""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from casct.attack import AttackLanguage, AttackSpec
from casct.automata import Automaton, EventClassification, SubautomatonWitness, accessible_part

EVENTS = ("a", "b", "c", "d")


@dataclass(frozen=True)
class GeneratorConfig:
    max_states: int = 5
    max_events: int = 4
    max_attacks: int = 2
    max_words: int = 3
    max_word_len: int = 2
    edge_probability: float = 0.45
    p_controllable: float = 0.7
    p_observable: float = 0.75
    p_attackable_observable: float = 0.5
    p_attackable_controllable: float = 0.3
    p_keep_state: float = 0.7


@dataclass(frozen=True, eq=False)
class Instance:
    seed: int
    plant: Automaton
    classification: EventClassification
    spec: AttackSpec
    sub: SubautomatonWitness = field(default=None)


def _plant(rng, cfg, events):
    n = rng.randint(1, cfg.max_states)
    states = tuple(str(i) for i in range(n))
    transitions = set()
    for q in states:
        for e in events:
            if rng.random() < cfg.edge_probability:
                transitions.add((q, e, rng.choice(states)))
    a = Automaton(states, events, frozenset(transitions), "0", frozenset(states))
    return accessible_part(a)


def _classification(rng, cfg, events):
    c = {e for e in events if rng.random() < cfg.p_controllable}
    o = {e for e in events if rng.random() < cfg.p_observable}
    ao = {e for e in sorted(o) if rng.random() < cfg.p_attackable_observable}
    ac = {e for e in sorted(c) if rng.random() < cfg.p_attackable_controllable}
    return EventClassification(events, frozenset(c), frozenset(o), frozenset(ao), frozenset(ac))


def _spec(rng, cfg, plant, cls):
    candidates = sorted(t for t in plant.transitions if t[1] in cls.sigma_ao)
    rng.shuffle(candidates)
    observable = cls.observable_order
    entries = {}
    for tr in candidates[: rng.randint(0, cfg.max_attacks)]:
        words = set()
        for _ in range(rng.randint(1, cfg.max_words)):
            length = rng.randint(0, cfg.max_word_len)
            words.add(tuple(rng.choice(observable) for _ in range(length)))
        entries[tr] = AttackLanguage.finite(words)
    return AttackSpec(cls, entries)


def random_sub(rng: random.Random, plant: Automaton, p_keep: float = 0.7) -> SubautomatonWitness:
    kept = {plant.initial} | {q for q in plant.states if rng.random() < p_keep}
    return SubautomatonWitness(plant, frozenset(kept))


def random_instance(seed: int, cfg: GeneratorConfig = GeneratorConfig()) -> Instance:
    rng = random.Random(seed)
    events = EVENTS[: rng.randint(1, cfg.max_events)]
    plant = _plant(rng, cfg, events)
    cls = _classification(rng, cfg, events)
    spec = _spec(rng, cfg, plant, cls)
    return Instance(seed, plant, cls, spec, random_sub(rng, plant, cfg.p_keep_state))


# smaller specifications and fewer controllable events make forcing common
INFIMAL_CONFIG = GeneratorConfig(p_keep_state=0.35, p_controllable=0.5)


def random_supervisor(rng: random.Random, plant: Automaton, spec: AttackSpec):
    """Random patterns on the plant's CA-observer; the default pattern is random too."""
    from casct.observer import ca_observer
    from casct.synthesis import SupervisorRealization

    obs = ca_observer(plant, spec)
    events = spec.classification.sigma

    def pattern():
        return frozenset(e for e in events if rng.random() < 0.6)

    return SupervisorRealization(obs.automaton, {x: pattern() for x in obs.automaton.states}, pattern())
