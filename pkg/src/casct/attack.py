"""Sensor attacks (ALTER replacement model) and actuator attacks on control patterns.

A sensor attack replaces the observation of an attackable transition by any
word of that transition's attack language.  An actuator attack may remove or
add any attackable controllable event to the pattern the supervisor issues.
Control patterns are plain ``frozenset`` objects of event names.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from itertools import chain, combinations, product as iproduct
from typing import Mapping, Optional

from casct.automata import EPS, Automaton, EventClassification, accessible_part, epsilon_closure, render_set
from casct.errors import CapacityError, DomainError, ModelError, UnsupportedError

PATTERN_GUARD = 16


def _trie_name(i):
    return chr(ord("A") + i) if i < 26 else f"S{i}"


def format_word(word) -> str:
    return " ".join(word) if word else "eps"


@dataclass(frozen=True)
class AttackLanguage:
    """A set of replacement words, given either explicitly or by an automaton.

    Exactly one of ``words`` (finite form) and ``automaton`` (regular form,
    the language being the marked language of ``automaton``) is set.
    """

    words: Optional[frozenset] = None
    automaton: Optional[Automaton] = None

    def __post_init__(self):
        if (self.words is None) == (self.automaton is None):
            raise ModelError("an attack language is either finite or regular, not both")
        if self.words is not None:
            object.__setattr__(self, "words", frozenset(tuple(w) for w in self.words))
            if not self.words:
                raise ModelError("an attack language must not be empty")
        elif not self.automaton.marked:
            raise ModelError("a regular attack language must mark at least one state")

    @classmethod
    def finite(cls, words):
        return cls(words=frozenset(tuple(w) for w in words))

    @classmethod
    def regular(cls, automaton: Automaton):
        return cls(automaton=automaton)

    @classmethod
    def singleton(cls, event):
        return cls(words=frozenset({(event,)}))

    @property
    def is_finite(self) -> bool:
        return self.words is not None

    def symbols(self) -> set:
        if self.words is not None:
            return {e for w in self.words for e in w}
        return {t[1] for t in self.automaton.transitions if t[1] is not EPS}

    def as_automaton(self) -> Automaton:
        """``F_tr`` with ``L_m(F_tr)`` equal to this language (a trie for finite sets)."""
        if self.automaton is not None:
            return self.automaton
        prefixes = {w[:i] for w in self.words for i in range(len(w) + 1)}
        ordered = sorted(prefixes, key=lambda p: (len(p), p))
        names = {p: _trie_name(i) for i, p in enumerate(ordered)}
        alphabet = []
        for p in ordered:
            if p and p[-1] not in alphabet:
                alphabet.append(p[-1])
        return Automaton(
            states=tuple(names[p] for p in ordered),
            alphabet=tuple(alphabet),
            transitions=frozenset((names[p[:-1]], p[-1], names[p]) for p in ordered if p),
            initial=names[()],
            marked=frozenset(names[w] for w in self.words),
        )

    def _useful(self) -> Automaton:
        a = accessible_part(self.automaton)
        pred = {q: set() for q in a.states}
        for src, _, dst in a.transitions:
            pred[dst].add(src)
        live = set(a.marked)
        stack = list(live)
        while stack:
            q = stack.pop()
            for p in pred[q]:
                if p not in live:
                    live.add(p)
                    stack.append(p)
        return live, a

    def has_cycles(self) -> bool:
        if self.words is not None:
            return False
        live, a = self._useful()
        colour = {}

        def visit(q):
            colour[q] = 1
            for src, _, dst in a.transitions:
                if src != q or dst not in live:
                    continue
                if colour.get(dst) == 1:
                    return True
                if dst not in colour and visit(dst):
                    return True
            colour[q] = 2
            return False

        return any(q not in colour and visit(q) for q in a.states if q in live)

    def enumerate(self) -> frozenset:
        """All words; raises ``UnsupportedError`` when the language is infinite."""
        if self.words is not None:
            return self.words
        if self.has_cycles():
            raise UnsupportedError("attack language has cycles and cannot be enumerated")
        live, a = self._useful()
        out = set()

        def walk(q, word):
            if q in a.marked:
                out.add(word)
            for src, label, dst in a.transitions:
                if src == q and dst in live:
                    walk(dst, word if label is EPS else word + (label,))

        if a.initial in live:
            walk(a.initial, ())
        return frozenset(out)

    def accepts(self, word) -> bool:
        word = tuple(word)
        if self.words is not None:
            return word in self.words
        f = self.automaton
        current = epsilon_closure({f.initial}, f)
        for e in word:
            nxt = set()
            for q in current:
                nxt |= f.successors(q, e)
            if not nxt:
                return False
            current = epsilon_closure(nxt, f)
        return bool(current & f.marked)

    def __str__(self):
        if self.words is not None:
            ws = sorted(self.words, key=lambda w: (len(w), w))
            return "{" + ", ".join(format_word(w) for w in ws) + "}"
        return f"L_m({render_set(self.automaton.states)})"


@dataclass(frozen=True)
class AttackSpec:
    """The mapping from attackable transitions to attack languages.

    Transitions labelled by an attackable observable event but absent from
    ``entries`` are attacked by the singleton language of their own event.
    """

    classification: EventClassification
    entries: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entries", dict(self.entries))
        for tr, lang in self.entries.items():
            if tr[1] not in self.classification.sigma_ao:
                raise ModelError(f"attack entry on {tr} but {tr[1]} is not attackable-observable")
            bad = lang.symbols() - self.classification.sigma_o
            if bad:
                raise ModelError(f"attack language on {tr} uses unobservable events {sorted(bad)}")

    def validate(self, plant: Automaton) -> "AttackSpec":
        for tr in self.entries:
            if tr not in plant.transitions:
                raise ModelError(f"attack entry on nonexistent transition {tr}")
        missing = set(plant.alphabet) - set(self.classification.sigma)
        if missing:
            raise ModelError(f"plant events {sorted(missing)} are not classified")
        return self

    def language(self, tr) -> Optional[AttackLanguage]:
        if tr in self.entries:
            return self.entries[tr]
        if tr[1] in self.classification.sigma_ao:
            return AttackLanguage.singleton(tr[1])
        return None

    def observation(self, tr) -> Optional[AttackLanguage]:
        """Possible observations of firing ``tr``; ``None`` when nothing is observed."""
        lang = self.language(tr)
        if lang is not None:
            return lang
        if tr[1] in self.classification.sigma_o:
            return AttackLanguage.singleton(tr[1])
        return None

    def restrict(self, plant: Automaton) -> "AttackSpec":
        return AttackSpec(self.classification, {t: l for t, l in self.entries.items() if t in plant.transitions})

    def lift(self, plant: Automaton, origin) -> "AttackSpec":
        """Carry entries onto ``plant`` whose states map to ours through ``origin``."""
        entries = {}
        for src, e, dst in plant.transitions:
            base = (origin(src), e, origin(dst))
            if base in self.entries:
                entries[(src, e, dst)] = self.entries[base]
        return AttackSpec(self.classification, entries)

    def without_sensor_attacks(self) -> "AttackSpec":
        return AttackSpec(replace(self.classification, sigma_ao=frozenset()), {})

    def has_finite_languages(self) -> bool:
        return all(not l.has_cycles() for l in self.entries.values())


def _path(s, plant: Automaton):
    q = plant.initial
    path = []
    for i, e in enumerate(s):
        nxt = plant.step(q, e)
        if nxt is None:
            raise DomainError(f"string not generated by the plant; first undefined prefix: {format_word(tuple(s[: i + 1]))}")
        path.append((q, e, nxt))
        q = nxt
    return path


def _concat_automaton(parts) -> Automaton:
    states, transitions, marked = [], set(), set()
    alphabet = []
    prev_exits = None
    initial = None
    for k, part in enumerate(parts):
        f = part.as_automaton()
        rename = {q: f"{k}.{q}" for q in f.states}
        states.extend(rename.values())
        for e in f.alphabet:
            if e not in alphabet:
                alphabet.append(e)
        transitions |= {(rename[a], l, rename[b]) for a, l, b in f.transitions}
        if prev_exits is None:
            initial = rename[f.initial]
        else:
            transitions |= {(x, EPS, rename[f.initial]) for x in prev_exits}
        prev_exits = [rename[q] for q in f.marked]
    marked = set(prev_exits)
    return Automaton(tuple(states), tuple(alphabet), frozenset(transitions), initial, frozenset(marked))


def theta(s, plant: Automaton, spec: AttackSpec) -> AttackLanguage:
    """All strings the attacked sensor channel may report for ``s`` (before projection)."""
    s = tuple(s)
    factors = []
    for tr in _path(s, plant):
        lang = spec.language(tr)
        factors.append(lang if lang is not None else AttackLanguage.singleton(tr[1]))
    if not factors:
        return AttackLanguage.finite({()})
    if all(f.is_finite for f in factors):
        words = {()}
        for f in factors:
            words = {w + x for w in words for x in f.words}
        return AttackLanguage.finite(words)
    return AttackLanguage.regular(_concat_automaton(factors))


def project(s, classification: EventClassification) -> tuple:
    """Natural projection onto the observable events."""
    out = []
    known = set(classification.sigma)
    for e in s:
        if e not in known:
            raise ModelError(f"event {e!r} is not in the alphabet")
        if e in classification.sigma_o:
            out.append(e)
    return tuple(out)


def phi(s, plant: Automaton, spec: AttackSpec) -> AttackLanguage:
    """Observations the supervisor may receive after ``s``: projection of ``theta(s)``."""
    raw = theta(s, plant, spec)
    cls = spec.classification
    if raw.is_finite:
        return AttackLanguage.finite({project(w, cls) for w in raw.words})
    a = raw.automaton
    erased = frozenset((x, EPS if l is EPS or l not in cls.sigma_o else l, y) for x, l, y in a.transitions)
    return AttackLanguage.regular(
        Automaton(a.states, tuple(e for e in a.alphabet if e in cls.sigma_o), erased, a.initial, a.marked)
    )


def control_always(gamma, classification: EventClassification) -> frozenset:
    """Events enabled under every actuator-attacked variant of ``gamma``."""
    return frozenset(gamma) - classification.sigma_ac


def control_sometimes(gamma, classification: EventClassification) -> frozenset:
    """Events enabled under at least one actuator-attacked variant of ``gamma``."""
    return frozenset(gamma) | classification.sigma_ac


def _subsets(items):
    items = sorted(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


def enumerate_attacked_patterns(gamma, classification: EventClassification) -> frozenset:
    """``{(gamma - g1) | g2 : g1, g2 ⊆ Σ^a_c}`` as a set of frozensets."""
    attackable = classification.sigma_ac
    if len(attackable) > PATTERN_GUARD:
        raise CapacityError(
            f"{len(attackable)} attackable controllable events exceed the enumeration guard "
            f"of {PATTERN_GUARD}; use control_always/control_sometimes instead"
        )
    gamma = frozenset(gamma)
    if len(attackable) > 8:
        # pairs (g1, g2) collapse to (gamma - Σ^a_c) | X for X ⊆ Σ^a_c
        base = gamma - attackable
        return frozenset(base | frozenset(x) for x in _subsets(attackable))
    return frozenset(
        (gamma - frozenset(g1)) | frozenset(g2) for g1, g2 in iproduct(_subsets(attackable), _subsets(attackable))
    )
