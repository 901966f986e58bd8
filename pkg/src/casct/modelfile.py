"""Text formats for models (plant, classification, attacks, spec) and supervisors.

One directive per line, ``key: values``; ``#`` at the start of a token
begins a comment.  See README for the grammar.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional

from casct.attack import AttackLanguage, AttackSpec, format_word
from casct.automata import RESERVED, Automaton, EventClassification, SubautomatonWitness
from casct.errors import CasctError, ModelError
from casct.synthesis import SupervisorRealization

MODEL_KEYS = (
    "alphabet",
    "controllable",
    "observable",
    "attackable-observable",
    "attackable-controllable",
    "states",
    "initial",
    "marked",
    "trans",
    "attack",
    "spec-states",
)
SUPERVISOR_KEYS = ("alphabet", "states", "initial", "marked", "trans", "control", "default-control")


class ModelFileError(ModelError):
    def __init__(self, code, message, line=0, col=0):
        where = f"line {line}, col {col}: " if line else ""
        super().__init__(f"{code}: {where}{message}")
        self.code = code
        self.line = line
        self.col = col


@dataclass(frozen=True, eq=False)
class ModelFile:
    automaton: Automaton
    classification: EventClassification
    spec: AttackSpec
    witness: Optional[SubautomatonWitness] = None


def _strip_comment(line: str) -> str:
    for i, c in enumerate(line):
        if c == "#" and (i == 0 or line[i - 1].isspace()):
            return line[:i]
    return line


def _directives(text, allowed):
    """Yield ``(lineno, key, rest, raw_line)`` for every non-blank line."""
    for n, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        key = key.strip()
        if not sep or key not in allowed:
            raise ModelFileError("E_UNKNOWN_SECTION", f"unknown directive {key!r}", n, 1)
        yield n, key, rest.strip(), raw


def _col(raw, token):
    i = raw.find(token)
    return i + 1 if i >= 0 else 1


class _Builder:
    def __init__(self):
        self.alphabet = []
        self.states = []
        self.initial = None
        self.marked = []
        self.trans = []

    def add_symbols(self, n, raw, tokens):
        for tok in tokens:
            if tok == RESERVED or ":" in tok:
                raise ModelFileError("E_BAD_SYMBOL", f"{tok!r} cannot be an event name", n, _col(raw, tok))
            if tok in self.alphabet:
                raise ModelFileError("E_DUP_SYMBOL", f"duplicate event {tok}", n, _col(raw, tok))
            self.alphabet.append(tok)

    def add_states(self, n, raw, tokens):
        for tok in tokens:
            if tok in self.states:
                raise ModelFileError("E_DUP_STATE", f"duplicate state {tok}", n, _col(raw, tok))
            self.states.append(tok)

    def symbols(self, n, raw, tokens):
        for tok in tokens:
            if tok not in self.alphabet:
                raise ModelFileError("E_UNDEF_SYMBOL", f"undefined event {tok}", n, _col(raw, tok))
        return tokens

    def state(self, n, raw, tok):
        if tok not in self.states:
            raise ModelFileError("E_UNDEF_STATE", f"undefined state {tok}", n, _col(raw, tok))
        return tok

    def handle(self, n, key, rest, raw):
        tokens = rest.split()
        if key == "alphabet":
            self.add_symbols(n, raw, tokens)
        elif key == "states":
            self.add_states(n, raw, tokens)
        elif key == "initial":
            if len(tokens) != 1:
                raise ModelFileError("E_SYNTAX", "initial takes exactly one state", n, 1)
            if self.initial is not None:
                raise ModelFileError("E_DUP_INITIAL", "initial state given twice", n, 1)
            self.initial = self.state(n, raw, tokens[0])
        elif key == "marked":
            self.marked.extend(self.state(n, raw, t) for t in tokens)
        elif key == "trans":
            if len(tokens) != 3:
                raise ModelFileError("E_SYNTAX", "trans takes <state> <event> <state>", n, 1)
            src, e, dst = tokens
            self.state(n, raw, src)
            self.state(n, raw, dst)
            label = None if e == RESERVED else self.symbols(n, raw, [e])[0]
            self.trans.append((n, raw, (src, label, dst)))
        else:
            return False
        return True

    def automaton(self, deterministic):
        if not self.alphabet and not self.states:
            raise ModelFileError("E_EMPTY", "no alphabet or states declared")
        if self.initial is None:
            raise ModelFileError("E_NO_INITIAL", "no initial state declared")
        seen = {}
        for n, raw, (src, label, dst) in self.trans:
            if deterministic:
                if label is None:
                    raise ModelFileError("E_NONDET", "epsilon transition in a deterministic model", n, 1)
                prev = seen.setdefault((src, label), dst)
                if prev != dst:
                    raise ModelFileError("E_NONDET", f"two {label}-transitions leave {src}", n, _col(raw, label))
        return Automaton(
            tuple(self.states), tuple(self.alphabet), frozenset(t for _, _, t in self.trans),
            self.initial, frozenset(self.marked),
        )


def _parse_words(n, raw, body, builder):
    body = body.strip()
    if not (body.startswith("{") and body.endswith("}")):
        raise ModelFileError("E_SYNTAX", "attack language must be { word, ... } or @file", n, _col(raw, body))
    words = set()
    for chunk in body[1:-1].split(","):
        tokens = chunk.split()
        if not tokens:
            raise ModelFileError("E_SYNTAX", "empty word in attack language (write eps)", n, _col(raw, body))
        if tokens == [RESERVED]:
            words.add(())
        else:
            words.add(tuple(builder.symbols(n, raw, tokens)))
    return AttackLanguage.finite(words)


def parse_model(text: str, base_dir: str = ".", deterministic: bool = True) -> ModelFile:
    """Parse a model file; every failure is a ``ModelFileError`` carrying a code."""
    try:
        return _parse_model(text, base_dir, deterministic)
    except ModelFileError:
        raise
    except CasctError as exc:
        raise ModelFileError("E_MODEL", str(exc)) from exc
    except (ValueError, TypeError, KeyError, IndexError) as exc:
        raise ModelFileError("E_INTERNAL", f"unexpected parse failure: {exc}") from exc


def _parse_model(text, base_dir, deterministic):
    b = _Builder()
    classes = {}
    attacks = []
    spec_states = None
    for n, key, rest, raw in _directives(text, MODEL_KEYS):
        if b.handle(n, key, rest, raw):
            continue
        if key in ("controllable", "observable", "attackable-observable", "attackable-controllable"):
            classes.setdefault(key, []).append((n, raw, rest.split()))
        elif key == "attack":
            parts = rest.split(None, 3)
            if len(parts) != 4:
                raise ModelFileError("E_SYNTAX", "attack takes <state> <event> <state> {words} | @file", n, 1)
            attacks.append((n, raw, tuple(parts[:3]), parts[3]))
        elif key == "spec-states":
            spec_states = (n, raw, rest.split())
    if not b.alphabet and not b.states and not b.trans:
        raise ModelFileError("E_EMPTY", "empty model")
    g = b.automaton(deterministic)

    def cls_set(key, default):
        if key not in classes:
            return frozenset(default)
        return frozenset(e for n, raw, toks in classes[key] for e in b.symbols(n, raw, toks))

    def blame(key, bad):
        for n, raw, toks in classes[key]:
            if bad in toks:
                return n, _col(raw, bad)
        return 0, 0

    sigma_c = cls_set("controllable", b.alphabet)
    sigma_o = cls_set("observable", b.alphabet)
    sigma_ao = cls_set("attackable-observable", ())
    sigma_ac = cls_set("attackable-controllable", ())
    if not sigma_ac <= sigma_c:
        bad = sorted(sigma_ac - sigma_c)[0]
        raise ModelFileError("E_AC_NOT_C", f"attackable-controllable event {bad} is not controllable", *blame("attackable-controllable", bad))
    if not sigma_ao <= sigma_o:
        bad = sorted(sigma_ao - sigma_o)[0]
        raise ModelFileError("E_AO_NOT_O", f"attackable-observable event {bad} is not observable", *blame("attackable-observable", bad))
    classification = EventClassification(tuple(b.alphabet), sigma_c, sigma_o, sigma_ao, sigma_ac)

    entries = {}
    for n, raw, (src, e, dst), body in attacks:
        b.state(n, raw, src)
        b.state(n, raw, dst)
        b.symbols(n, raw, [e])
        tr = (src, e, dst)
        if tr not in g.transitions:
            raise ModelFileError("E_ATTACK_NO_TRANSITION", f"no transition {src} {e} {dst}", n, 1)
        if e not in sigma_ao:
            raise ModelFileError("E_ATTACK_NOT_ATTACKABLE", f"{e} is not attackable-observable", n, _col(raw, e))
        if tr in entries:
            raise ModelFileError("E_ATTACK_DUP", f"second attack entry for {src} {e} {dst}", n, 1)
        body = body.strip()
        if body.startswith("@"):
            path = os.path.join(base_dir, body[1:].strip())
            try:
                with open(path, encoding="utf-8") as fh:
                    sub = parse_model(fh.read(), os.path.dirname(path), deterministic=False)
            except OSError as exc:
                raise ModelFileError("E_ATTACK_FILE", f"cannot read {path}: {exc.strerror}", n, _col(raw, "@")) from exc
            if not sub.automaton.marked:
                raise ModelFileError("E_ATTACK_FILE", f"{path} marks no state", n, _col(raw, "@"))
            lang = AttackLanguage.regular(sub.automaton)
        else:
            lang = _parse_words(n, raw, body, b)
        bad = lang.symbols() - sigma_o
        if bad:
            raise ModelFileError("E_ATTACK_UNOBSERVABLE", f"attack language uses unobservable {sorted(bad)}", n, 1)
        entries[tr] = lang
    spec = AttackSpec(classification, entries)

    witness = None
    if spec_states is not None:
        n, raw, tokens = spec_states
        for t in tokens:
            b.state(n, raw, t)
        if g.initial not in tokens:
            raise ModelFileError("E_SPEC_STATES", "spec-states must include the initial state", n, 1)
        witness = SubautomatonWitness(g, frozenset(tokens))
    return ModelFile(g, classification, spec, witness)


def format_model(
    a: Automaton,
    classification: Optional[EventClassification] = None,
    spec: Optional[AttackSpec] = None,
    witness: Optional[SubautomatonWitness] = None,
) -> str:
    """Render in the model grammar; regular attack languages are not inlined."""
    lines = [f"alphabet: {' '.join(a.alphabet)}"]
    if classification is not None:
        order = classification.order
        lines.append(f"controllable: {' '.join(order(classification.sigma_c))}".rstrip())
        lines.append(f"observable: {' '.join(order(classification.sigma_o))}".rstrip())
        if classification.sigma_ao:
            lines.append(f"attackable-observable: {' '.join(order(classification.sigma_ao))}")
        if classification.sigma_ac:
            lines.append(f"attackable-controllable: {' '.join(order(classification.sigma_ac))}")
    lines.append(f"states: {' '.join(a.states)}")
    lines.append(f"initial: {a.initial}")
    if a.marked:
        lines.append(f"marked: {' '.join(q for q in a.states if q in a.marked)}")
    index = {q: i for i, q in enumerate(a.states)}
    events = {e: i for i, e in enumerate(a.alphabet)}
    for src, e, dst in sorted(a.transitions, key=lambda t: (index[t[0]], -1 if t[1] is None else events[t[1]], index[t[2]])):
        lines.append(f"trans: {src} {RESERVED if e is None else e} {dst}")
    if spec is not None:
        for tr in sorted(spec.entries, key=lambda t: (index[t[0]], events[t[1]], index[t[2]])):
            lang = spec.entries[tr]
            if not lang.is_finite:
                raise ModelError("regular attack languages must be written to their own file")
            words = sorted(lang.words, key=lambda w: (len(w), w))
            lines.append(f"attack: {tr[0]} {tr[1]} {tr[2]} {{ {', '.join(format_word(w) for w in words)} }}")
    if witness is not None:
        lines.append(f"spec-states: {' '.join(q for q in a.states if q in witness.kept_states)}")
    return "\n".join(lines) + "\n"


def parse_supervisor(text: str, events=None) -> SupervisorRealization:
    """Parse a supervisor file; ``events`` (if given) bounds the control symbols."""
    try:
        b = _Builder()
        control = {}
        default = frozenset()
        for n, key, rest, raw in _directives(text, SUPERVISOR_KEYS):
            if b.handle(n, key, rest, raw):
                continue
            tokens = rest.split()
            if key == "control":
                if not tokens:
                    raise ModelFileError("E_SYNTAX", "control needs a state", n, 1)
                state = b.state(n, raw, tokens[0])
                syms = tokens[1:]
            else:
                state, syms = None, tokens
            if events is not None:
                for s in syms:
                    if s not in events:
                        raise ModelFileError("E_UNDEF_SYMBOL", f"undefined event {s}", n, _col(raw, s))
            if state is None:
                default = frozenset(syms)
            else:
                control[state] = frozenset(control.get(state, ())) | frozenset(syms)
        aut = b.automaton(deterministic=True)
        for q in aut.states:
            control.setdefault(q, frozenset())
        return SupervisorRealization(aut, control, default)
    except ModelFileError:
        raise
    except CasctError as exc:
        raise ModelFileError("E_MODEL", str(exc)) from exc


def format_supervisor(sup: SupervisorRealization, order=None) -> str:
    key = order or sorted
    text = format_model(sup.observation_automaton)
    lines = [text.rstrip("\n")]
    for q in sup.observation_automaton.states:
        lines.append(f"control: {q} {' '.join(key(sup.control[q]))}".rstrip())
    lines.append(f"default-control: {' '.join(key(sup.default_pattern))}".rstrip())
    return "\n".join(lines) + "\n"
