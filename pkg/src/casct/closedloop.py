"""Small and large languages of an attacked closed loop, and closed-loop simulation."""
from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from casct.attack import AttackLanguage, AttackSpec, format_word
from casct.automata import EPS, Automaton, epsilon_closure, render_set
from casct.errors import PolicyError
from casct.observer import OUTSIDE, _live_states, advance
from casct.synthesis import SupervisorRealization

SMALL = "small"
LARGE = "large"


@dataclass(frozen=True, eq=False)
class ClosedLoopProduct:
    """Product of plant and supervisor-state sets.

    ``diagnostics`` lists access strings after which some corrupted
    observation left the supervisor's automaton (default pattern in force).
    """

    automaton: Automaton
    mode: str
    diagnostics: tuple = ()


def closed_loop(g: Automaton, spec: AttackSpec, sup: SupervisorRealization, mode: str = SMALL) -> ClosedLoopProduct:
    if mode not in (SMALL, LARGE):
        raise ValueError(f"unknown mode {mode!r}")
    spec.validate(g)
    cls = spec.classification
    uc, ac = cls.sigma_uc, cls.sigma_ac
    obs_aut = sup.observation_automaton

    def keep(ys, e):
        if e in uc:
            return True
        if mode == SMALL:
            return e not in ac and all(e in sup.pattern_at(y) for y in ys)
        return e in ac or any(e in sup.pattern_at(y) for y in ys)

    name = lambda node: f"({node[0]}|{render_set(node[1])})"
    start = (g.initial, frozenset({obs_aut.initial}))
    access = {start: ()}
    order = [start]
    queue = deque([start])
    transitions = set()
    diagnostics = []
    while queue:
        node = queue.popleft()
        q, ys = node
        if OUTSIDE in ys:
            diagnostics.append(access[node])
        for e in g.alphabet:
            q2 = g.step(q, e)
            if q2 is None or not keep(ys, e):
                continue
            nxt = (q2, advance(obs_aut, ys, spec.observation((q, e, q2))))
            if nxt not in access:
                access[nxt] = access[node] + (e,)
                order.append(nxt)
                queue.append(nxt)
            transitions.add((name(node), e, name(nxt)))
    states = tuple(name(n) for n in order)
    aut = Automaton(states, g.alphabet, frozenset(transitions), name(start), frozenset(states))
    return ClosedLoopProduct(aut, mode, tuple(diagnostics))


def small_language(g: Automaton, spec: AttackSpec, sup: SupervisorRealization) -> Automaton:
    """Strings generated under every sensor and actuator attack (lower bound)."""
    return closed_loop(g, spec, sup, SMALL).automaton


def large_language(g: Automaton, spec: AttackSpec, sup: SupervisorRealization) -> Automaton:
    """Strings generated under some sensor and actuator attack (upper bound)."""
    return closed_loop(g, spec, sup, LARGE).automaton


# ---------------------------------------------------------------------------
# simulation


@dataclass(frozen=True)
class TraceStep:
    fired: str
    observed: tuple
    pattern: frozenset


@dataclass
class Trace:
    steps: list = field(default_factory=list)
    deadlock: bool = False

    @property
    def fired(self) -> tuple:
        return tuple(s.fired for s in self.steps)

    def lines(self, order=None) -> list:
        key = (lambda es: sorted(es)) if order is None else order
        return [
            f"fired={s.fired} observed={format_word(s.observed)} pattern={{{','.join(key(s.pattern))}}}"
            for s in self.steps
        ] + (["deadlock"] if self.deadlock else [])

    def jsonl(self, order=None) -> list:
        key = (lambda es: sorted(es)) if order is None else order
        return [
            json.dumps({"fired": s.fired, "observed": list(s.observed), "pattern": list(key(s.pattern))})
            for s in self.steps
        ]


class AttackerPolicy:
    """Chooses the nondeterministic outcomes of one closed-loop step.

    ``actuator`` returns ``(removed, added)`` subsets of the attackable
    controllable events, ``event`` picks the plant event (``None`` stops the
    run) and ``observation`` picks the word reported for an attacked transition.
    """

    def actuator(self, step, gamma, attackable):
        return frozenset(), frozenset()

    def event(self, step, permitted):
        raise NotImplementedError

    def observation(self, step, tr, language: AttackLanguage):
        raise NotImplementedError


def _shortest_word(lang: AttackLanguage, own_event=None, start=None):
    """The event itself when the language allows it, else a shortest word."""
    if lang.is_finite:
        if (own_event,) in lang.words:
            return (own_event,)
        return min(lang.words, key=lambda w: (len(w), w))
    if own_event is not None and lang.accepts((own_event,)):
        return (own_event,)
    f = lang.automaton
    start = epsilon_closure({f.initial if start is None else start}, f)
    seen = {start: ()}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        if x & f.marked:
            return seen[x]
        for e in f.alphabet:
            moved = set()
            for r in x:
                moved |= f.successors(r, e)
            if moved:
                y = epsilon_closure(moved, f)
                if y not in seen:
                    seen[y] = seen[x] + (e,)
                    queue.append(y)
    raise PolicyError(-1, "attack language is empty")


def _sample_word(rng: random.Random, lang: AttackLanguage, max_len=8):
    if lang.is_finite:
        return rng.choice(sorted(lang.words))
    f = lang.automaton
    live = _live_states(f)
    r = f.initial
    word = ()
    while True:
        moves = [(l, d) for s, l, d in sorted(f.transitions, key=str) if s == r and d in live]
        if r in f.marked and (not moves or rng.random() < 0.5 or len(word) >= max_len):
            return word
        if not moves or len(word) >= max_len:
            return word + _shortest_word(lang, start=r)
        label, r = rng.choice(moves)
        if label is not EPS:
            word += (label,)


def _random_subset(rng, items):
    return frozenset(e for e in sorted(items) if rng.random() < 0.5)


class RandomPolicy(AttackerPolicy):
    def __init__(self, seed):
        self.seed = seed
        self.rng = random.Random(seed)

    def actuator(self, step, gamma, attackable):
        return _random_subset(self.rng, attackable), _random_subset(self.rng, attackable)

    def event(self, step, permitted):
        return self.rng.choice(permitted)

    def observation(self, step, tr, language):
        return _sample_word(self.rng, language)


class AdversarialPolicy(RandomPolicy):
    """Actuator attacks fixed by an objective; other choices seeded-random.

    ``"restrict"`` disables every attackable controllable event, ``"permit"``
    enables all of them.
    """

    def __init__(self, objective="restrict", seed=0):
        if objective not in ("restrict", "permit"):
            raise ValueError(f"unknown objective {objective!r}")
        super().__init__(seed)
        self.objective = objective

    def actuator(self, step, gamma, attackable):
        if self.objective == "restrict":
            return frozenset(attackable), frozenset()
        return frozenset(), frozenset(attackable)


class ScriptedPolicy(AttackerPolicy):
    """Replays fixed choices; missing entries mean "no corruption".

    ``observations`` and ``actuators`` map step numbers (0-based) to a word
    and to a ``(removed, added)`` pair.  The run stops when ``events`` is exhausted.
    """

    def __init__(self, events: Sequence, observations=None, actuators=None):
        self.events = list(events)
        self.observations = dict(observations or {})
        self.actuators = dict(actuators or {})

    def actuator(self, step, gamma, attackable):
        removed, added = self.actuators.get(step, ((), ()))
        return frozenset(removed), frozenset(added)

    def event(self, step, permitted):
        return self.events[step] if step < len(self.events) else None

    def observation(self, step, tr, language):
        if step in self.observations:
            return tuple(self.observations[step])
        return _shortest_word(language, tr[1])


def simulate_trace(
    g: Automaton, spec: AttackSpec, sup: SupervisorRealization, policy: AttackerPolicy, max_steps: int
) -> Trace:
    """Run the attacked loop for at most ``max_steps`` plant events."""
    if max_steps < 0:
        raise ValueError("max_steps must be non-negative")
    cls = spec.classification
    trace = Trace()
    q = g.initial
    y = sup.initial
    for step in range(max_steps):
        gamma = sup.pattern_at(y)
        removed, added = policy.actuator(step, gamma, cls.sigma_ac)
        if not (removed <= cls.sigma_ac and added <= cls.sigma_ac):
            raise PolicyError(step, "actuator attack touches events outside the attackable controllable set")
        delivered = (gamma - removed) | added
        permitted = [e for e in g.enabled(q) if e in delivered or e in cls.sigma_uc]
        if not permitted:
            trace.deadlock = True
            break
        e = policy.event(step, permitted)
        if e is None:
            break
        if e not in permitted:
            raise PolicyError(step, f"event {e} is not permitted")
        q2 = g.step(q, e)
        tr = (q, e, q2)
        lang = spec.observation(tr)
        if lang is None:
            word = ()
        elif spec.language(tr) is None:
            word = (e,)
        else:
            word = tuple(policy.observation(step, tr, lang))
            if not lang.accepts(word):
                raise PolicyError(step, f"observation {format_word(word)} is not in the attack language of {tr}")
        if y is not OUTSIDE:
            y = sup.observation_automaton.run(word, start=y)
        trace.steps.append(TraceStep(e, word, delivered))
        q = q2
    return trace
