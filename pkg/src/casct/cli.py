"""Command-line front end.  Exit codes: 0 success, 1 property violation, 2 usage or model error."""
from __future__ import annotations

import argparse
import logging
import os
import sys

from casct import oracle
from casct.attack import phi, theta
from casct.automata import render_set, to_dot
from casct.closedloop import AdversarialPolicy, RandomPolicy, large_language, simulate_trace, small_language
from casct.errors import CasctError
from casct.modelfile import format_model, format_supervisor, parse_model, parse_supervisor
from casct.observer import ca_observer, erase_unobservable, expand_attacks, state_estimate
from casct.synthesis import compute_l_na, infimal_caco, least_restrictive_supervisor, synthesize_sp
from casct.verification import (
    check_ca_s_controllable,
    check_ca_s_observable,
    check_classic_controllable,
    check_classic_observable,
)

GREEK = {
    "α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "ε": "epsilon", "η": "eta",
    "θ": "theta", "κ": "kappa", "λ": "lambda", "μ": "mu", "ν": "nu", "ρ": "rho", "τ": "tau",
}
ASCII_TO_GREEK = {v: k for k, v in GREEK.items()}

OK, VIOLATION, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _color(text, code):
    if os.environ.get("CASCT_COLOR", "1") == "0" or not sys.stdout.isatty():
        return text
    return f"\x1b[{code}m{text}\x1b[0m"


def parse_word(text, alphabet):
    """Whitespace-separated events; a token made only of Greek letters expands letter by letter."""
    word = []
    for tok in (text or "").split():
        if tok == "eps":
            continue
        if tok in alphabet:
            word.append(tok)
        elif all(c in GREEK for c in tok):
            word.extend(GREEK[c] for c in tok)
        else:
            raise UsageError(f"unknown event {tok!r}")
    for e in word:
        if e not in alphabet:
            raise UsageError(f"unknown event {e!r}")
    return tuple(word)


def show_word(word, greek=False):
    if not word:
        return "ε" if greek else "eps"
    if greek and all(e in ASCII_TO_GREEK for e in word):
        return "".join(ASCII_TO_GREEK[e] for e in word)
    return " ".join(word)


def show_words(words, alphabet, greek=False):
    return "{" + ", ".join(show_word(w, greek) for w in oracle.shortlex(words, alphabet)) + "}"


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_model(text, os.path.dirname(os.path.abspath(path)))


def _sub(model, required=True):
    if model.witness is None and required:
        raise UsageError("model has no spec-states line")
    return model.witness


def _supervisor(args, model):
    if getattr(args, "supervisor", None):
        with open(args.supervisor, encoding="utf-8") as fh:
            return parse_supervisor(fh.read(), events=model.classification.sigma)
    if getattr(args, "least_restrictive", False):
        return least_restrictive_supervisor(model.classification)
    spec = model.spec.without_sensor_attacks() if getattr(args, "conventional", False) else model.spec
    return synthesize_sp(_sub(model), model.automaton, spec)


def _emit_language(aut, model, depth, greek):
    if depth is None:
        return format_model(aut)
    words = oracle.enumerate_language(aut, depth)
    return "\n".join(show_word(w, greek) for w in oracle.shortlex(words, model.automaton.alphabet)) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_observe(args, out):
    m = _load(args.model)
    s = parse_word(args.s, m.automaton.alphabet)
    lang = (theta if args.theta else phi)(s, m.automaton, m.spec)
    out.write(show_words(lang.enumerate(), m.automaton.alphabet, args.greek) + "\n")
    return OK


def cmd_estimate(args, out):
    m = _load(args.model)
    plant = _sub(m).automaton if args.h else m.automaton
    t = parse_word(args.t, m.automaton.alphabet)
    out.write(render_set(state_estimate(ca_observer(plant, m.spec), t)) + "\n")
    return OK


def cmd_observer(args, out):
    m = _load(args.model)
    plant = _sub(m).automaton if args.h else m.automaton
    spec = m.spec.restrict(plant)
    expanded = expand_attacks(plant, spec)
    if args.stage == "expanded":
        out.write(to_dot(expanded.automaton, "G_diamond"))
    elif args.stage == "erased":
        out.write(to_dot(erase_unobservable(expanded, m.classification).automaton, "G_diamond_eps"))
    else:
        obs = ca_observer(plant, m.spec)
        label = (lambda x: f"{x}\nSE={render_set(obs.estimate[x])}") if args.estimates else None
        out.write(to_dot(obs.automaton, "G_obs", node_label=label))
    return OK


def cmd_check(args, out):
    m = _load(args.model)
    h, g = _sub(m), m.automaton
    if args.classic:
        verdicts = [
            ("controllability", check_classic_controllable(h, g, m.classification)),
            ("observability", check_classic_observable(h, g, m.classification)),
        ]
    else:
        verdicts = [
            ("controllability", check_ca_s_controllable(h, g, m.classification)),
            ("observability", check_ca_s_observable(h, g, m.spec)),
        ]
    for name, v in verdicts:
        out.write(f"{name}: {_color(v.report(), '32' if v else '31')}\n")
    return OK if all(v for _, v in verdicts) else VIOLATION


def cmd_synth(args, out):
    m = _load(args.model)
    spec = m.spec.without_sensor_attacks() if args.conventional else m.spec
    sup = synthesize_sp(_sub(m), m.automaton, spec)
    out.write(format_supervisor(sup, order=m.classification.order))
    return OK


def _cmd_loop(builder):
    def run(args, out):
        m = _load(args.model)
        aut = builder(m.automaton, m.spec, _supervisor(args, m))
        out.write(_emit_language(aut, m, args.depth, args.greek))
        return OK

    return run


def cmd_lna(args, out):
    m = _load(args.model)
    out.write(_emit_language(compute_l_na(m.automaton, m.classification), m, args.depth, args.greek))
    return OK


def cmd_infimal(args, out):
    m = _load(args.model)
    result = infimal_caco(_sub(m), m.automaton, m.spec, max_rounds=args.max_rounds)
    out.write(_emit_language(result.automaton, m, args.depth, args.greek))
    if not result.converged:
        print(f"not converged after {result.rounds} rounds; last iterate shown", file=sys.stderr)
        return VIOLATION
    return OK


def cmd_simulate(args, out):
    m = _load(args.model)
    sup = _supervisor(args, m)
    if args.policy == "random":
        policy = RandomPolicy(args.seed)
    else:
        policy = AdversarialPolicy(args.policy, args.seed)
    trace = simulate_trace(m.automaton, m.spec, sup, policy, args.steps)
    lines = trace.jsonl(m.classification.order) if args.jsonl else trace.lines(m.classification.order)
    for line in lines:
        out.write(line + "\n")
    if args.jsonl and trace.deadlock:
        out.write('{"deadlock": true}\n')
    return OK


def cmd_oracle(args, out):
    m = _load(args.model)
    g, spec = m.automaton, m.spec
    if args.op == "estimate":
        t = parse_word(args.t, g.alphabet)
        out.write(render_set(oracle.brute_state_estimate(t, g, spec)) + "\n")
        return OK
    if args.op in ("small", "large"):
        fn = oracle.brute_small_language if args.op == "small" else oracle.brute_large_language
        words = fn(g, spec, _supervisor(args, m), args.depth)
    elif args.op == "infimal":
        words = oracle.brute_infimal_closure(_sub(m), g, spec, args.depth)
    else:
        v = oracle.brute_check_ca_s_observable(_sub(m), g, spec, args.depth)
        out.write(f"observability (depth {args.depth}): {v.report()}\n")
        return OK if v else VIOLATION
    for w in oracle.shortlex(words, g.alphabet):
        out.write(show_word(w, args.greek) + "\n")
    return OK


# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="casct", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, model=True):
        sp = sub.add_parser(name, help=help_text)
        if model:
            sp.add_argument("model", help="model file")
        sp.add_argument("--greek", action="store_true", help="print Greek letters for alpha, beta, ...")
        sp.set_defaults(fn=fn)
        return sp

    def supervisor_flags(sp):
        grp = sp.add_mutually_exclusive_group()
        grp.add_argument("--supervisor", help="supervisor file (default: synthesize from spec-states)")
        grp.add_argument("--least-restrictive", action="store_true", help="enable every event always")
        grp.add_argument("--conventional", action="store_true", help="synthesize ignoring sensor attacks")

    sp = add("observe", cmd_observe, "corrupted observations of a plant string")
    sp.add_argument("--s", required=True, help="plant string, e.g. 'beta eta alpha'")
    sp.add_argument("--theta", action="store_true", help="print raw attacked strings instead")

    sp = add("estimate", cmd_estimate, "attack-aware state estimate")
    sp.add_argument("--t", required=True, help="observed string")
    sp.add_argument("--h", action="store_true", help="estimate on the spec-states sub-automaton")

    sp = add("observer", cmd_observer, "DOT export of the attack-aware observer")
    sp.add_argument("--h", action="store_true")
    sp.add_argument("--stage", choices=("expanded", "erased", "observer"), default="observer")
    sp.add_argument("--estimates", action="store_true", help="label observer states with estimates")

    sp = add("check", cmd_check, "controllability and observability of the spec-states language")
    sp.add_argument("--classic", action="store_true", help="attack-free notions")

    sp = add("synth", cmd_synth, "export the state-estimate supervisor")
    sp.add_argument("--conventional", action="store_true")

    for name, builder, text in (("small", small_language, "small closed-loop language"),
                                ("large", large_language, "large closed-loop language")):
        sp = add(name, _cmd_loop(builder), text)
        supervisor_flags(sp)
        sp.add_argument("--depth", type=int, help="list strings up to this length instead of the automaton")

    sp = add("lna", cmd_lna, "L(G) restricted to non-attackable controllable events")
    sp.add_argument("--depth", type=int)

    sp = add("infimal", cmd_infimal, "least superlanguage of spec-states passing both checks")
    sp.add_argument("--max-rounds", type=int, default=32)
    sp.add_argument("--depth", type=int)

    sp = add("simulate", cmd_simulate, "run the attacked closed loop")
    supervisor_flags(sp)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--steps", type=int, default=20)
    sp.add_argument("--policy", choices=("random", "restrict", "permit"), default="random")
    sp.add_argument("--jsonl", action="store_true")

    sp = sub.add_parser("oracle", help="brute-force oracles (slow, bounded)")
    sp.add_argument("op", choices=("estimate", "small", "large", "observable", "infimal"))
    sp.add_argument("model")
    sp.add_argument("--t", default="")
    sp.add_argument("--depth", type=int, default=5)
    sp.add_argument("--greek", action="store_true")
    supervisor_flags(sp)
    sp.set_defaults(fn=cmd_oracle)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.fn(args, out)
    except (UsageError, CasctError, ValueError) as exc:
        print(f"casct {args.command}: {exc}", file=sys.stderr)
        return USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
