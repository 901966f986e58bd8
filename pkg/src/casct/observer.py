"""Attack-aware observer: expansion of attacked transitions, epsilon erasure and determinization.

The observer's runs give state estimates that account for every observation
the attacked sensor channel can deliver.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, Optional

from casct.attack import AttackLanguage, AttackSpec
from casct.automata import (
    EPS,
    Automaton,
    EventClassification,
    epsilon_closure,
    state_key,
    subset_construction,
)
from casct.errors import ObservationError

# Member of an estimate set standing for "observation left the automaton's domain".
OUTSIDE = None


@dataclass(frozen=True)
class ExpandedAutomaton:
    automaton: Automaton
    original_states: frozenset
    inserted_states: frozenset


@dataclass(frozen=True, eq=False)
class CaObserver:
    """Deterministic observer over the observable events.

    ``estimate[x]`` is the set of plant states in observer state ``x`` and
    ``members[x]`` the full underlying set (plant and inserted states).
    """

    automaton: Automaton
    estimate: Mapping
    members: Mapping

    def run(self, t):
        return self.automaton.run(tuple(t))


def _tr_sort_key(plant: Automaton):
    order = {e: i for i, e in enumerate(plant.alphabet)}
    return lambda tr: (state_key(tr[0]), order.get(tr[1], len(order)), state_key(tr[2]))


def expand_attacks(plant: Automaton, spec: AttackSpec) -> ExpandedAutomaton:
    """Replace every attacked transition ``(q, σ, q')`` by a fresh copy of ``F_tr``.

    The copy is entered from ``q`` by an epsilon move and left towards ``q'``
    by epsilon moves from each of its marked states.  Inserted states are
    named ``"<index>#<F_tr state>"``, indexing attacked transitions in sorted order.
    """
    spec.validate(plant)
    attacked = sorted(spec.entries, key=_tr_sort_key(plant))
    states = list(plant.states)
    alphabet = list(plant.alphabet)
    transitions = set(plant.transitions) - set(attacked)
    inserted = []
    for idx, tr in enumerate(attacked):
        q, _, q2 = tr
        f = spec.entries[tr].as_automaton()
        rename = {s: f"{idx}#{s}" for s in f.states}
        for s in f.states:
            states.append(rename[s])
            inserted.append(rename[s])
        for e in f.alphabet:
            if e not in alphabet:
                alphabet.append(e)
        transitions |= {(rename[a], l, rename[b]) for a, l, b in f.transitions}
        transitions.add((q, EPS, rename[f.initial]))
        transitions |= {(rename[m], EPS, q2) for m in f.marked}
    automaton = Automaton(tuple(states), tuple(alphabet), frozenset(transitions), plant.initial, frozenset(plant.states))
    return ExpandedAutomaton(automaton, frozenset(plant.states), frozenset(inserted))


def erase_unobservable(g: ExpandedAutomaton, classification: EventClassification) -> ExpandedAutomaton:
    a = g.automaton
    relabelled = frozenset(
        (x, EPS if l is EPS or l not in classification.sigma_o else l, y) for x, l, y in a.transitions
    )
    alphabet = tuple(e for e in classification.observable_order)
    extra = tuple(e for e in a.alphabet if e in classification.sigma_o and e not in alphabet)
    automaton = Automaton(a.states, alphabet + extra, relabelled, a.initial, a.marked)
    return ExpandedAutomaton(automaton, g.original_states, g.inserted_states)


def build_observer(g_eps: ExpandedAutomaton) -> CaObserver:
    original = g_eps.original_states
    dfa, members = subset_construction(g_eps.automaton, is_marked=lambda x: bool(x & original))
    estimate = {name: frozenset(x & original) for name, x in members.items()}
    return CaObserver(dfa, estimate, members)


def ca_observer(plant: Automaton, spec: AttackSpec) -> CaObserver:
    """Observer of ``plant`` under ``spec`` (attack entries outside ``plant`` are ignored)."""
    spec = spec.restrict(plant)
    return build_observer(erase_unobservable(expand_attacks(plant, spec), spec.classification))


def state_estimate(obs: CaObserver, t) -> frozenset:
    x = obs.run(t)
    if x is None:
        raise ObservationError(f"observation {' '.join(t) or 'eps'} is inconsistent with model and attacks")
    return obs.estimate[x]


def _live_states(f: Automaton) -> set:
    pred = {q: set() for q in f.states}
    for src, _, dst in f.transitions:
        pred[dst].add(src)
    live = set(f.marked)
    stack = list(live)
    while stack:
        q = stack.pop()
        for p in pred[q]:
            if p not in live:
                live.add(p)
                stack.append(p)
    return live


def advance(aut: Automaton, ys, observation: Optional[AttackLanguage]) -> frozenset:
    """Image of the state set ``ys`` of the deterministic ``aut`` under every word of ``observation``.

    ``None`` for ``observation`` means nothing was observed.  Words that run
    off ``aut`` contribute ``OUTSIDE``, which is absorbing.
    """
    ys = frozenset(ys)
    if observation is None:
        return ys
    out = set()
    if OUTSIDE in ys:
        out.add(OUTSIDE)
    if observation.is_finite:
        for y in ys:
            if y is OUTSIDE:
                continue
            for w in observation.words:
                out.add(aut.run(w, start=y))
        return frozenset(out)
    f = observation.automaton
    live = _live_states(f)
    start = [(y, r) for y in ys if y is not OUTSIDE for r in epsilon_closure({f.initial}, f)]
    seen = set(start)
    queue = deque(start)
    while queue:
        y, r = queue.popleft()
        if r in f.marked:
            out.add(y)
        for e in f.alphabet:
            nxt_f = f.successors(r, e)
            if not nxt_f:
                continue
            closure = epsilon_closure(nxt_f, f)
            y2 = aut.step(y, e)
            if y2 is None:
                if closure & live:
                    out.add(OUTSIDE)
                continue
            for r2 in closure:
                if (y2, r2) not in seen:
                    seen.add((y2, r2))
                    queue.append((y2, r2))
    return frozenset(out)
