"""Supervisor synthesis: the state-estimate supervisor, L_na and the infimal superlanguage."""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from casct.attack import AttackSpec, format_word
from casct.automata import (
    Automaton,
    EventClassification,
    SubautomatonWitness,
    accessible_part,
    language_contains,
    star_restrict,
)
from casct.errors import DomainError, ModelError
from casct.observer import OUTSIDE, advance, ca_observer
from casct.verification import embed_language

log = logging.getLogger(__name__)

DEFAULT_MAX_ROUNDS = 32


@dataclass(frozen=True, eq=False)
class SupervisorRealization:
    """A supervisor given by a deterministic observation automaton and per-state patterns.

    Observations that leave ``observation_automaton`` get ``default_pattern``.
    Patterns are stored literally; ``effective_pattern`` adds the
    uncontrollable events, which can never be disabled.
    """

    observation_automaton: Automaton
    control: Mapping
    default_pattern: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "control", {k: frozenset(v) for k, v in self.control.items()})
        object.__setattr__(self, "default_pattern", frozenset(self.default_pattern))
        missing = [x for x in self.observation_automaton.states if x not in self.control]
        if missing:
            raise ModelError(f"no control pattern for supervisor states {missing}")
        if not self.observation_automaton.is_deterministic:
            raise ModelError("supervisor observation automaton must be deterministic")

    @property
    def initial(self):
        return self.observation_automaton.initial

    def state_after(self, t):
        return self.observation_automaton.run(tuple(t))

    def pattern_at(self, y) -> frozenset:
        return self.default_pattern if y is OUTSIDE else self.control[y]

    def pattern(self, t) -> frozenset:
        return self.pattern_at(self.state_after(t))

    def effective_pattern(self, t, classification: EventClassification) -> frozenset:
        return self.pattern(t) | classification.sigma_uc


def synthesize_sp(h: SubautomatonWitness, g: Automaton, spec: AttackSpec) -> SupervisorRealization:
    """State-estimate supervisor: enable σ iff some estimated ``H``-state continues with σ inside ``H``."""
    if h.parent is not g and h.parent != g:
        raise ModelError("h is not a sub-automaton of g")
    spec.validate(g)
    obs = ca_observer(h.automaton, spec)
    control = {
        x: frozenset(e for e in g.alphabet if any(h.keeps(q, e) for q in obs.estimate[x]))
        for x in obs.automaton.states
    }
    return SupervisorRealization(obs.automaton, control, frozenset())


def least_restrictive_supervisor(classification: EventClassification) -> SupervisorRealization:
    events = classification.observable_order
    aut = Automaton(("x0",), events, frozenset(("x0", e, "x0") for e in events), "x0", {"x0"})
    everything = frozenset(classification.sigma)
    return SupervisorRealization(aut, {"x0": everything}, everything)


def compute_l_na(g: Automaton, classification: EventClassification) -> Automaton:
    """Automaton for ``L(G) ∩ (Σ - Σ^a_c)*``, the largest achievable small language."""
    return star_restrict(g, frozenset(classification.sigma) - classification.sigma_ac)


# ---------------------------------------------------------------------------
# infimal CA-S-controllable and CA-S-observable superlanguage


def minimize_generated(a: Automaton) -> Automaton:
    """Merge states of a deterministic automaton with equal generated futures.

    States of the result are named ``m0, m1, ...`` in BFS order.
    """
    a = accessible_part(a)
    events = a.alphabet
    block = {q: 0 for q in a.states}
    n_blocks = 1
    while True:
        signature = {
            q: (block[q],) + tuple(block.get(a.step(q, e), -1) if a.step(q, e) is not None else -1 for e in events)
            for q in a.states
        }
        ids = {}
        new_block = {q: ids.setdefault(signature[q], len(ids)) for q in a.states}
        if len(ids) == n_blocks:
            break
        block, n_blocks = new_block, len(ids)
    names = {}
    queue = deque([block[a.initial]])
    names[block[a.initial]] = "m0"
    rep = {}
    for q in a.states:
        rep.setdefault(block[q], q)
    transitions = set()
    while queue:
        b = queue.popleft()
        q = rep[b]
        for e in events:
            nxt = a.step(q, e)
            if nxt is None:
                continue
            nb = block[nxt]
            if nb not in names:
                names[nb] = f"m{len(names)}"
                queue.append(nb)
            transitions.add((names[b], e, names[nb]))
    ordered = sorted(names.values(), key=lambda n: int(n[1:]))
    return Automaton(tuple(ordered), events, frozenset(transitions), "m0", frozenset(ordered))


@dataclass(frozen=True, eq=False)
class InfimalResult:
    """Outcome of the forcing fixpoint; ``automaton`` is the last iterate."""

    converged: bool
    automaton: Automaton
    rounds: int


OUT = "+"


def forcing_round(current: Automaton, g: Automaton, spec: AttackSpec):
    """One forcing round; returns ``(next_iterate, added_any)``.

    Strings of the current iterate ``M`` are kept.  A continuation ``sσ ∈ L(G)``
    is added when σ is uncontrollable, or when every corrupted observation
    of ``s`` is shared by some ``s' ∈ M`` with ``s'σ ∈ M``.  Added strings
    are explored further in the same round; witnesses always come from ``M``.
    """
    emb = embed_language(current, g, spec)
    m_aut = emb.witness.automaton
    obs = ca_observer(m_aut, emb.spec)
    uc = spec.classification.sigma_uc

    def witnessed(ys, e):
        if OUTSIDE in ys:
            return False
        return all(any(emb.witness.keeps(p, e) for p in obs.estimate[y]) for y in ys)

    start = (g.initial, current.initial, frozenset({obs.automaton.initial}))
    index = {start: 0}
    queue = deque([start])
    transitions = set()
    added = False
    while queue:
        node = queue.popleft()
        q, d, ys = node
        for e in g.alphabet:
            q2 = g.step(q, e)
            if q2 is None:
                continue
            d2 = current.step(d, e) if d != OUT else None
            if d2 is None:
                if not (e in uc or witnessed(ys, e)):
                    continue
                d2 = OUT
                added = True
            ys2 = advance(obs.automaton, ys, spec.observation((q, e, q2)))
            nxt = (q2, d2, ys2)
            if nxt not in index:
                index[nxt] = len(index)
                queue.append(nxt)
            transitions.add((f"t{index[node]}", e, f"t{index[nxt]}"))
    names = tuple(f"t{i}" for i in range(len(index)))
    iterate = Automaton(names, g.alphabet, frozenset(transitions), "t0", frozenset(names))
    return minimize_generated(iterate), added


def infimal_caco(
    k_r: SubautomatonWitness, g: Automaton, spec: AttackSpec, max_rounds: int = DEFAULT_MAX_ROUNDS
) -> InfimalResult:
    """Least CA-S-controllable, CA-S-observable closed superlanguage of ``L(k_r)``.

    Requires ``L(k_r) ⊆ L_na(G)``.  Returns the fixpoint of the forcing rounds,
    or the last iterate with ``converged=False`` after ``max_rounds`` rounds.
    """
    if max_rounds < 1:
        raise ValueError("max_rounds must be positive")
    if k_r.parent is not g and k_r.parent != g:
        raise ModelError("k_r is not a sub-automaton of g")
    spec.validate(g)
    inside = language_contains(compute_l_na(g, spec.classification), k_r.automaton)
    if not inside:
        raise DomainError(f"K_r not inside L_na: witness {format_word(inside.witness)}")
    current = minimize_generated(k_r.automaton)
    for rounds in range(max_rounds):
        nxt, _ = forcing_round(current, g, spec)
        if language_contains(current, nxt):
            return InfimalResult(True, current, rounds)
        log.debug("round %d: iterate grew to %d states", rounds + 1, len(nxt.states))
        current = nxt
    log.info("forcing fixpoint not reached after %d rounds", max_rounds)
    return InfimalResult(False, current, max_rounds)
