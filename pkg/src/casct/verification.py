"""Decision procedures for CA-S-controllability and CA-S-observability of ``K = L(H)``.

Observability is decided on a tracker automaton whose states pair a state
of ``H`` with the set of ``H``-observer states reachable under every
corrupted observation of the access string.  The existential witness
condition is evaluated through the observer's state estimates.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from casct.attack import AttackSpec, format_word
from casct.automata import Automaton, EventClassification, SubautomatonWitness, _as_dfa
from casct.errors import ModelError
from casct.observer import OUTSIDE, advance, ca_observer

UNCONTROLLABLE_ESCAPE = "uncontrollable-escape"
ATTACKED_CONTROLLABLE = "attacked-controllable-in-K"
OBSERVATION_FORCED = "observation-forced"


@dataclass(frozen=True)
class Counterexample:
    s: tuple
    sigma: str
    reason: str


@dataclass(frozen=True)
class Verdict:
    holds: bool
    counterexample: Optional[Counterexample] = None

    def __post_init__(self):
        if not self.holds and self.counterexample is None:
            raise ValueError("a failing verdict needs a counterexample")

    def __bool__(self):
        return self.holds

    def report(self) -> str:
        if self.holds:
            return "HOLDS"
        c = self.counterexample
        return f"VIOLATION s={format_word(c.s)} sigma={c.sigma} reason={c.reason}"


@dataclass(frozen=True)
class TrackerState:
    plant_state: str
    estimate_set: frozenset


def _require_parent(h: SubautomatonWitness, g: Automaton):
    if h.parent is not g and h.parent != g:
        raise ModelError("h is not a sub-automaton of g")
    if not g.is_deterministic:
        raise ModelError("the plant must be deterministic")


def _access_strings(h: SubautomatonWitness):
    """Kept states with their shortlex-least access strings, in BFS order."""
    g = h.parent
    access = {g.initial: ()}
    queue = deque([g.initial])
    while queue:
        q = queue.popleft()
        yield q, access[q]
        for e in g.alphabet:
            if h.keeps(q, e):
                nxt = g.step(q, e)
                if nxt not in access:
                    access[nxt] = access[q] + (e,)
                    queue.append(nxt)


def _controllability(h, g, classification, attacked: bool) -> Verdict:
    _require_parent(h, g)
    uc = classification.sigma_uc
    for q, s in _access_strings(h):
        for e in g.alphabet:
            kept = h.keeps(q, e)
            if e in uc and not kept and g.step(q, e) is not None:
                return Verdict(False, Counterexample(s, e, UNCONTROLLABLE_ESCAPE))
            if attacked and kept and e in classification.sigma_ac:
                return Verdict(False, Counterexample(s, e, ATTACKED_CONTROLLABLE))
    return Verdict(True)


def check_ca_s_controllable(h: SubautomatonWitness, g: Automaton, classification: EventClassification) -> Verdict:
    """``K Σ_uc ∩ L(G) ⊆ K`` and ``K ⊆ (Σ - Σ^a_c)*``, checked on reachable states of ``H``."""
    return _controllability(h, g, classification, attacked=True)


def check_classic_controllable(h: SubautomatonWitness, g: Automaton, classification: EventClassification) -> Verdict:
    return _controllability(h, g, classification, attacked=False)


def tracker_states(h: SubautomatonWitness, g: Automaton, spec: AttackSpec):
    """BFS over the observability tracker of ``H``.

    Yields ``(state, access_string, observer)`` where ``state`` is a
    ``TrackerState`` of ``H``-state and observer-state set.
    """
    hs = h.automaton
    obs = ca_observer(hs, spec)
    start = TrackerState(g.initial, frozenset({obs.automaton.initial}))
    access = {start: ()}
    queue = deque([start])
    while queue:
        ts = queue.popleft()
        yield ts, access[ts], obs
        q = ts.plant_state
        for e in g.alphabet:
            if not h.keeps(q, e):
                continue
            q2 = g.step(q, e)
            ys = advance(obs.automaton, ts.estimate_set, spec.observation((q, e, q2)))
            nxt = TrackerState(q2, ys)
            if nxt not in access:
                access[nxt] = access[ts] + (e,)
                queue.append(nxt)


def witness_exists(obs, h: SubautomatonWitness, y, event) -> bool:
    """Some ``s'`` with observer state ``y`` has ``s' event`` inside ``K``."""
    if y is OUTSIDE:
        return False
    return any(h.keeps(q, event) for q in obs.estimate[y])


def check_ca_s_observable(h: SubautomatonWitness, g: Automaton, spec: AttackSpec) -> Verdict:
    """Attack-aware observability of ``L(h)``; counterexamples are shortest found by BFS.

    A pair ``(s, σ)`` violates the property when ``sσ ∈ L(G) - K`` although
    every corrupted observation ``t`` of ``s`` is shared by some ``s' ∈ K``
    with ``s'σ ∈ K``.  Pairs with ``sσ ∉ L(G)`` are vacuous.
    """
    _require_parent(h, g)
    spec.validate(g)
    for ts, s, obs in tracker_states(h, g, spec):
        q = ts.plant_state
        for e in g.alphabet:
            if g.step(q, e) is None or h.keeps(q, e):
                continue
            if all(witness_exists(obs, h, y, e) for y in ts.estimate_set):
                return Verdict(False, Counterexample(s, e, OBSERVATION_FORCED))
    return Verdict(True)


def check_classic_observable(h: SubautomatonWitness, g: Automaton, classification: EventClassification) -> Verdict:
    """Observability without sensor attacks (the attack-aware check with an empty spec)."""
    return check_ca_s_observable(h, g, AttackSpec(classification).without_sensor_attacks())


@dataclass(frozen=True, eq=False)
class Embedding:
    """A language ``M ⊆ L(G)`` as a sub-automaton of a refinement of ``G``."""

    plant: Automaton
    spec: AttackSpec
    witness: SubautomatonWitness
    origin: dict


DEAD = "⊥"


def embed_language(m: Automaton, g: Automaton, spec: AttackSpec) -> Embedding:
    """Refine ``G`` by ``m`` so that ``M ∩ L(G)`` is generated by a sub-automaton.

    The refined plant pairs each ``G`` state with a state of ``m`` (or a
    dead marker once the string left ``M``); it generates exactly ``L(G)``
    and inherits every attack language from the underlying transition, so
    observations are unchanged.
    """
    m = _as_dfa(m)
    name = lambda q, d: f"({q}|{d})"
    start = (g.initial, m.initial)
    order = [start]
    seen = {start}
    transitions = set()
    queue = deque([start])
    while queue:
        q, d = pair = queue.popleft()
        for e in g.alphabet:
            q2 = g.step(q, e)
            if q2 is None:
                continue
            d2 = None if d == DEAD else m.step(d, e)
            d2 = DEAD if d2 is None else d2
            nxt = (q2, d2)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
            transitions.add((name(*pair), e, name(*nxt)))
    plant = Automaton(
        tuple(name(*p) for p in order), g.alphabet, frozenset(transitions), name(*start),
        frozenset(name(*p) for p in order if p[0] in g.marked),
    )
    origin = {name(*p): p[0] for p in order}
    kept = frozenset(name(*p) for p in order if p[1] != DEAD)
    return Embedding(plant, spec.lift(plant, origin.__getitem__), SubautomatonWitness(plant, kept), origin)
