"""Finite automata substrate: deterministic and epsilon-NFA automata over named events.

States are opaque strings, events are strings and words are tuples of events.
Epsilon transitions carry the label ``EPS`` (``None``).  All objects are
immutable; every operation returns a new automaton.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Optional

from casct.errors import ModelError

EPS = None
RESERVED = "eps"

_DIGITS = re.compile(r"(\d+)")


def state_key(name):
    """Natural sort key so that "2" < "10" and "x2" < "x10"."""
    if name is None:
        return ((2, ""),)
    parts = _DIGITS.split(str(name))
    return tuple((0, int(p)) if p.isdigit() else (1, p) for p in parts if p != "")


def render_set(items) -> str:
    return "{" + ",".join("⊥" if i is None else str(i) for i in sorted(items, key=state_key)) + "}"


def check_symbol(name):
    if not isinstance(name, str) or not name or name == RESERVED:
        raise ModelError(f"invalid event name {name!r}")
    if ":" in name or any(c.isspace() for c in name):
        raise ModelError(f"invalid event name {name!r}: no whitespace or ':' allowed")


def _unique(items):
    seen = {}
    for i in items:
        seen.setdefault(i, None)
    return tuple(seen)


@dataclass(frozen=True)
class Automaton:
    """A finite automaton ``(states, alphabet, transitions, initial, marked)``.

    ``transitions`` is a set of ``(source, label, target)`` triples where the
    label is an event of ``alphabet`` or ``EPS``.  ``states`` and ``alphabet``
    keep their declaration order, which fixes tie-breaking everywhere.
    """

    states: tuple
    alphabet: tuple
    transitions: frozenset
    initial: str
    marked: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "states", _unique(self.states))
        object.__setattr__(self, "alphabet", _unique(self.alphabet))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "marked", frozenset(self.marked))
        known = set(self.states)
        if self.initial not in known:
            raise ModelError(f"initial state {self.initial!r} is not a state")
        if not self.marked <= known:
            raise ModelError(f"marked states {render_set(self.marked - known)} are not states")
        for e in self.alphabet:
            check_symbol(e)
        events = set(self.alphabet)
        for src, label, dst in self.transitions:
            if src not in known or dst not in known:
                raise ModelError(f"transition ({src}, {label}, {dst}) has an unknown endpoint")
            if label is not EPS and label not in events:
                raise ModelError(f"transition ({src}, {label}, {dst}) uses an event outside the alphabet")

    @cached_property
    def _out(self):
        out = {q: {} for q in self.states}
        for src, label, dst in self.transitions:
            out[src].setdefault(label, set()).add(dst)
        return {q: {l: frozenset(t) for l, t in d.items()} for q, d in out.items()}

    @cached_property
    def _event_index(self):
        return {e: i for i, e in enumerate(self.alphabet)}

    @cached_property
    def is_deterministic(self) -> bool:
        return all(
            label is not EPS and len(targets) == 1
            for d in self._out.values()
            for label, targets in d.items()
        )

    def successors(self, q, label) -> frozenset:
        return self._out[q].get(label, frozenset())

    def step(self, q, event):
        """Deterministic successor of ``q`` under ``event`` or ``None``."""
        targets = self._out[q].get(event)
        if not targets:
            return None
        if len(targets) > 1:
            raise ModelError(f"state {q} has {len(targets)} {event}-successors")
        return next(iter(targets))

    def enabled(self, q) -> list:
        """Events (not epsilon) with at least one transition out of ``q``, in alphabet order."""
        labels = self._out[q]
        return [e for e in self.alphabet if e in labels]

    def run(self, word, start=None):
        q = self.initial if start is None else start
        for event in word:
            q = self.step(q, event)
            if q is None:
                return None
        return q

    def generates(self, word) -> bool:
        if self.is_deterministic:
            return self.run(word) is not None
        current = epsilon_closure({self.initial}, self)
        for event in word:
            nxt = set()
            for q in current:
                nxt |= self.successors(q, event)
            if not nxt:
                return False
            current = epsilon_closure(nxt, self)
        return True

    def event_order(self, events: Iterable) -> list:
        idx = self._event_index
        return sorted(events, key=lambda e: idx.get(e, len(idx)))


@dataclass(frozen=True)
class EventClassification:
    """Partition data for the event set: controllable, observable and attackable subsets."""

    sigma: tuple
    sigma_c: frozenset
    sigma_o: frozenset
    sigma_ao: frozenset = field(default_factory=frozenset)
    sigma_ac: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "sigma", _unique(self.sigma))
        for name in ("sigma_c", "sigma_o", "sigma_ao", "sigma_ac"):
            object.__setattr__(self, name, frozenset(getattr(self, name)))
        for e in self.sigma:
            check_symbol(e)
        full = set(self.sigma)
        if not self.sigma_c <= full:
            raise ModelError(f"controllable events {sorted(self.sigma_c - full)} not in alphabet")
        if not self.sigma_o <= full:
            raise ModelError(f"observable events {sorted(self.sigma_o - full)} not in alphabet")
        if not self.sigma_ao <= self.sigma_o:
            raise ModelError(f"attackable-observable events {sorted(self.sigma_ao - self.sigma_o)} are not observable")
        if not self.sigma_ac <= self.sigma_c:
            raise ModelError(f"attackable-controllable events {sorted(self.sigma_ac - self.sigma_c)} are not controllable")

    @classmethod
    def full(cls, sigma, **kw):
        """All events controllable and observable unless overridden."""
        sigma = tuple(sigma)
        kw.setdefault("sigma_c", sigma)
        kw.setdefault("sigma_o", sigma)
        return cls(sigma=sigma, **kw)

    @property
    def sigma_uc(self) -> frozenset:
        return frozenset(self.sigma) - self.sigma_c

    @property
    def sigma_uo(self) -> frozenset:
        return frozenset(self.sigma) - self.sigma_o

    @property
    def observable_order(self) -> tuple:
        return tuple(e for e in self.sigma if e in self.sigma_o)

    def order(self, events) -> list:
        idx = {e: i for i, e in enumerate(self.sigma)}
        return sorted(events, key=lambda e: idx.get(e, len(idx)))


@dataclass(frozen=True)
class SubautomatonWitness:
    """``H ⊑ G`` given by the kept states; kept transitions are induced by them."""

    parent: Automaton
    kept_states: frozenset

    def __post_init__(self):
        object.__setattr__(self, "kept_states", frozenset(self.kept_states))
        unknown = self.kept_states - set(self.parent.states)
        if unknown:
            raise ModelError(f"kept states {render_set(unknown)} are not states of the parent")
        if self.parent.initial not in self.kept_states:
            raise ModelError("a sub-automaton must keep the initial state")

    @classmethod
    def from_automaton(cls, h: Automaton, g: Automaton) -> "SubautomatonWitness":
        witness = cls(g, frozenset(h.states)) if set(h.states) <= set(g.states) else None
        if witness is None or h.initial != g.initial or h.transitions != witness.kept_transitions:
            raise ModelError("h is not a sub-automaton of g")
        return witness

    @cached_property
    def kept_transitions(self) -> frozenset:
        k = self.kept_states
        return frozenset(t for t in self.parent.transitions if t[0] in k and t[2] in k)

    @cached_property
    def automaton(self) -> Automaton:
        p = self.parent
        return Automaton(
            states=tuple(q for q in p.states if q in self.kept_states),
            alphabet=p.alphabet,
            transitions=self.kept_transitions,
            initial=p.initial,
            marked=p.marked & self.kept_states,
        )

    def keeps(self, q, event) -> bool:
        """True iff ``δ_H(q, event)`` is defined (and hence lands in the kept states)."""
        if q not in self.kept_states:
            return False
        nxt = self.parent.step(q, event)
        return nxt is not None and nxt in self.kept_states


# ---------------------------------------------------------------------------
# Operations


def _reachable(a: Automaton):
    seen = {a.initial}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        for targets in a._out[q].values():
            for r in targets:
                if r not in seen:
                    seen.add(r)
                    queue.append(r)
    return seen


def accessible_part(a: Automaton) -> Automaton:
    keep = _reachable(a)
    if len(keep) == len(a.states):
        return a
    return Automaton(
        states=tuple(q for q in a.states if q in keep),
        alphabet=a.alphabet,
        transitions=frozenset(t for t in a.transitions if t[0] in keep),
        initial=a.initial,
        marked=a.marked & keep,
    )


def epsilon_closure(x: Iterable, a: Automaton) -> frozenset:
    """Unobservable reach: smallest superset of ``x`` closed under epsilon moves."""
    closure = set(x)
    unknown = [q for q in closure if q not in a._out]
    if unknown:
        raise ModelError(f"unknown states {render_set(unknown)}")
    stack = list(closure)
    while stack:
        q = stack.pop()
        for r in a._out[q].get(EPS, ()):
            if r not in closure:
                closure.add(r)
                stack.append(r)
    return frozenset(closure)


def subset_construction(
    a: Automaton,
    is_marked: Optional[Callable[[frozenset], bool]] = None,
    alphabet: Optional[Iterable] = None,
):
    """Determinize ``a``; returns ``(dfa, members)`` with ``members[name]`` the state set.

    Only accessible subset-states are materialized.  State names are the
    naturally sorted member lists, e.g. ``"{1,3,0#A}"``.
    """
    events = tuple(alphabet) if alphabet is not None else a.alphabet
    if is_marked is None:
        is_marked = lambda members: bool(members & a.marked)
    start = epsilon_closure({a.initial}, a)
    members = {render_set(start): start}
    order = [render_set(start)]
    transitions = set()
    queue = deque([start])
    while queue:
        x = queue.popleft()
        src = render_set(x)
        for e in events:
            moved = set()
            for q in x:
                moved |= a.successors(q, e)
            if not moved:
                continue
            y = epsilon_closure(moved, a)
            dst = render_set(y)
            if dst not in members:
                members[dst] = y
                order.append(dst)
                queue.append(y)
            transitions.add((src, e, dst))
    dfa = Automaton(
        states=tuple(order),
        alphabet=events,
        transitions=frozenset(transitions),
        initial=order[0],
        marked=frozenset(n for n in order if is_marked(members[n])),
    )
    return dfa, members


def determinize(a: Automaton, is_marked=None) -> Automaton:
    return subset_construction(a, is_marked)[0]


def _as_dfa(a: Automaton) -> Automaton:
    return a if a.is_deterministic else determinize(a)


def product(a: Automaton, b: Automaton) -> Automaton:
    """Synchronous product of two deterministic automata over the same alphabet."""
    if set(a.alphabet) != set(b.alphabet):
        raise ModelError("product requires identical alphabets")
    if not (a.is_deterministic and b.is_deterministic):
        raise ModelError("product requires deterministic operands")
    name = lambda p: f"({p[0]}|{p[1]})"
    start = (a.initial, b.initial)
    seen = {start}
    order = [start]
    transitions = set()
    queue = deque([start])
    while queue:
        pa, pb = pair = queue.popleft()
        for e in a.alphabet:
            na, nb = a.step(pa, e), b.step(pb, e)
            if na is None or nb is None:
                continue
            nxt = (na, nb)
            if nxt not in seen:
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
            transitions.add((name(pair), e, name(nxt)))
    return Automaton(
        states=tuple(name(p) for p in order),
        alphabet=a.alphabet,
        transitions=frozenset(transitions),
        initial=name(start),
        marked=frozenset(name(p) for p in order if p[0] in a.marked and p[1] in b.marked),
    )


@dataclass(frozen=True)
class Inclusion:
    """Outcome of a generated-language inclusion test."""

    holds: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.holds


def language_contains(a: Automaton, b: Automaton) -> Inclusion:
    """Decide ``L(a) ⊇ L(b)``; on failure return a shortest word of ``L(b) - L(a)``."""
    if set(a.alphabet) != set(b.alphabet):
        raise ModelError("language comparison requires identical alphabets")
    a, b = _as_dfa(a), _as_dfa(b)
    start = (a.initial, b.initial)
    parent = {start: None}
    queue = deque([start])
    while queue:
        pair = queue.popleft()
        qa, qb = pair
        for e in b.alphabet:
            nb = b.step(qb, e)
            if nb is None:
                continue
            na = a.step(qa, e)
            if na is None:
                word = [e]
                cur = pair
                while parent[cur] is not None:
                    cur, ev = parent[cur]
                    word.append(ev)
                return Inclusion(False, tuple(reversed(word)))
            nxt = (na, nb)
            if nxt not in parent:
                parent[nxt] = (pair, e)
                queue.append(nxt)
    return Inclusion(True)


def language_equal(a: Automaton, b: Automaton) -> bool:
    return bool(language_contains(a, b)) and bool(language_contains(b, a))


def star_restrict(a: Automaton, keep: Iterable) -> Automaton:
    """Automaton generating ``L(a) ∩ keep*``."""
    keep = frozenset(keep)
    trimmed = Automaton(
        states=a.states,
        alphabet=a.alphabet,
        transitions=frozenset(t for t in a.transitions if t[1] is EPS or t[1] in keep),
        initial=a.initial,
        marked=a.marked,
    )
    return accessible_part(trimmed)


def universal(alphabet, name="u") -> Automaton:
    """One-state automaton generating ``alphabet*``."""
    return Automaton((name,), tuple(alphabet), frozenset((name, e, name) for e in alphabet), name, {name})


def _dot_quote(s) -> str:
    return '"' + str(s).replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(a: Automaton, name="G", node_label: Optional[Callable] = None) -> str:
    """Graphviz rendering: doubled circles for marked states, ``ε`` for epsilon edges."""
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=LR;", '  "__start" [shape=point];']
    for q in a.states:
        shape = "doublecircle" if q in a.marked else "circle"
        label = node_label(q) if node_label else q
        lines.append(f"  {_dot_quote(q)} [shape={shape}, label={_dot_quote(label)}];")
    lines.append(f'  "__start" -> {_dot_quote(a.initial)};')
    index = {q: i for i, q in enumerate(a.states)}
    order = {e: i for i, e in enumerate(a.alphabet)}
    for src, label, dst in sorted(
        a.transitions, key=lambda t: (index[t[0]], -1 if t[1] is EPS else order[t[1]], index[t[2]])
    ):
        text = "ε" if label is EPS else label
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label={_dot_quote(text)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
