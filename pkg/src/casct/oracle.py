"""Brute-force, depth-bounded transcriptions of the definitions, used as ground truth.

Everything here quantifies over explicit strings.  Nothing is shared with
the observer/tracker machinery except the attack primitives ``phi`` and
``enumerate_attacked_patterns``.  Only finite attack languages are accepted.
"""
from __future__ import annotations

from collections import deque

from casct.attack import AttackSpec, enumerate_attacked_patterns, phi, project
from casct.automata import Automaton, SubautomatonWitness, epsilon_closure
from casct.errors import CapacityError, UnsupportedError
from casct.verification import OBSERVATION_FORCED, Counterexample, Verdict

MAX_DEPTH = 10
MAX_EVENTS = 8


def _guard(depth, alphabet):
    if depth < 0 or depth > MAX_DEPTH:
        raise CapacityError(f"depth {depth} outside 0..{MAX_DEPTH}")
    if len(alphabet) > MAX_EVENTS:
        raise CapacityError(f"{len(alphabet)} events exceed the oracle limit of {MAX_EVENTS}")


def _require_finite(spec: AttackSpec):
    if not spec.has_finite_languages():
        raise UnsupportedError("oracles need finite attack languages")


def shortlex(words, alphabet):
    idx = {e: i for i, e in enumerate(alphabet)}
    return sorted(words, key=lambda w: (len(w), [idx[e] for e in w]))


def enumerate_language(a: Automaton, depth: int) -> set:
    """All strings of length at most ``depth`` generated by ``a`` (DFA or epsilon-NFA)."""
    _guard(depth, a.alphabet)
    out = {()}
    frontier = [((), epsilon_closure({a.initial}, a))]
    for _ in range(depth):
        nxt = []
        for word, x in frontier:
            for e in a.alphabet:
                moved = set()
                for q in x:
                    moved |= a.successors(q, e)
                if moved:
                    w = word + (e,)
                    out.add(w)
                    nxt.append((w, epsilon_closure(moved, a)))
        frontier = nxt
    return out


def observations(s, g, spec) -> frozenset:
    return phi(s, g, spec).enumerate()


def observation_states(t, plant: Automaton, spec: AttackSpec, within: SubautomatonWitness = None) -> frozenset:
    """End states of all ``s' ∈ L(within)`` with ``t ∈ Φ(s')``.

    Strings ``s'`` are explored letter by letter, tracking which prefixes of
    ``t`` belong to ``Φ(s')``.  Two strings reaching the same state with the
    same set of matched prefixes have identical futures, so only the first
    is extended; this makes the search finite without bounding ``|s'|``.
    """
    _require_finite(spec)
    t = tuple(t)
    keep = (lambda q, e: plant.step(q, e) is not None) if within is None else within.keeps
    start = (plant.initial, frozenset({0}))
    seen = {start}
    queue = deque([start])
    found = set()
    while queue:
        q, matched = queue.popleft()
        if len(t) in matched:
            found.add(q)
        for e in plant.alphabet:
            if not keep(q, e):
                continue
            q2 = plant.step(q, e)
            lang = spec.observation((q, e, q2))
            if lang is None:
                matched2 = matched
            else:
                words = lang.enumerate()
                matched2 = frozenset(i + len(w) for i in matched for w in words if t[i : i + len(w)] == w)
            if not matched2:
                continue
            node = (q2, matched2)
            if node not in seen:
                seen.add(node)
                queue.append(node)
    return frozenset(found)


def brute_state_estimate(t, g: Automaton, spec: AttackSpec) -> frozenset:
    """``{δ(q0, s) : s ∈ L(G), t ∈ Φ(s)}``."""
    return observation_states(t, g, spec)


def _brute_closed_loop(g, spec, sup, depth, every: bool) -> set:
    _guard(depth, g.alphabet)
    _require_finite(spec)
    cls = spec.classification
    lang = {()}
    frontier = [()]
    for _ in range(depth):
        nxt = []
        for s in frontier:
            ts = observations(s, g, spec)
            received = [gamma_a for t in ts for gamma_a in enumerate_attacked_patterns(sup.pattern(t), cls)]
            for e in g.alphabet:
                if g.run(s + (e,)) is None:
                    continue
                test = all if every else any
                if e in cls.sigma_uc or test(e in gamma_a for gamma_a in received):
                    lang.add(s + (e,))
                    nxt.append(s + (e,))
        frontier = nxt
    return lang


def brute_small_language(g: Automaton, spec: AttackSpec, sup, depth: int) -> set:
    """Recursive definition of the small language, enabled in all situations."""
    return _brute_closed_loop(g, spec, sup, depth, every=True)


def brute_large_language(g: Automaton, spec: AttackSpec, sup, depth: int) -> set:
    """Recursive definition of the large language, enabled in some situation."""
    return _brute_closed_loop(g, spec, sup, depth, every=False)


def brute_violation_at(s, event, h: SubautomatonWitness, g: Automaton, spec: AttackSpec) -> bool:
    """Does ``(s, event)`` falsify attack-aware observability of ``L(h)``?"""
    s = tuple(s)
    k = h.automaton
    if k.run(s) is None or g.run(s + (event,)) is None or k.run(s + (event,)) is not None:
        return False
    return all(
        any(h.keeps(q, event) for q in observation_states(t, g, spec, within=h))
        for t in observations(s, g, spec)
    )


def brute_check_ca_s_observable(h: SubautomatonWitness, g: Automaton, spec: AttackSpec, depth: int) -> Verdict:
    """Literal check over ``s ∈ K`` with ``|sσ| ≤ depth``; complete only up to ``depth``."""
    _guard(depth, g.alphabet)
    _require_finite(spec)
    for s in shortlex(enumerate_language(h.automaton, max(depth - 1, 0)), g.alphabet):
        if len(s) >= depth:
            continue
        for e in g.alphabet:
            if brute_violation_at(s, e, h, g, spec):
                return Verdict(False, Counterexample(s, e, OBSERVATION_FORCED))
    return Verdict(True)


def brute_check_classic_observable(h: SubautomatonWitness, g: Automaton, classification, depth: int) -> bool:
    """Pairwise definition: equal projections and ``s'σ ∈ K`` force ``sσ ∈ K``."""
    k = h.automaton
    words = enumerate_language(k, max(depth - 1, 0))
    by_projection = {}
    for w in words:
        by_projection.setdefault(project(w, classification), []).append(w)
    for s in words:
        for e in g.alphabet:
            if g.run(s + (e,)) is None or k.run(s + (e,)) is not None:
                continue
            if any(k.run(s2 + (e,)) is not None for s2 in by_projection[project(s, classification)]):
                return False
    return True


def brute_infimal_closure(k_r: SubautomatonWitness, g: Automaton, spec: AttackSpec, depth: int) -> set:
    """Least set of strings (length ≤ depth) containing ``K_r`` and closed under both forcing rules.

    Witnesses ``s'`` are drawn from the strings collected so far, so the
    result under-approximates the true closure when witnesses need to be
    longer than ``depth``.
    """
    _guard(depth, g.alphabet)
    _require_finite(spec)
    uc = spec.classification.sigma_uc
    m = enumerate_language(k_r.automaton, depth)
    obs_cache = {}

    def obs(s):
        if s not in obs_cache:
            obs_cache[s] = observations(s, g, spec)
        return obs_cache[s]

    changed = True
    while changed:
        changed = False
        sharing = {}
        for s2 in m:
            for t in obs(s2):
                sharing.setdefault(t, []).append(s2)
        for s in shortlex(m, g.alphabet):
            if len(s) >= depth:
                continue
            for e in g.alphabet:
                se = s + (e,)
                if se in m or g.run(se) is None:
                    continue
                if e in uc or all(
                    any(s2 + (e,) in m for s2 in sharing.get(t, ())) for t in obs(s)
                ):
                    m.add(se)
                    changed = True
    return m
