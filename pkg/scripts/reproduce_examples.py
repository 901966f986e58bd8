#!/usr/bin/env python3
"""Print the worked seven-state example: attacked observations, estimates, supervisor and both cases."""
import argparse

from casct.attack import phi, theta
from casct.automata import language_equal, render_set
from casct.cli import show_word, show_words
from casct.closedloop import ScriptedPolicy, simulate_trace, small_language
from casct.fixtures import scenario
from casct.observer import ca_observer, state_estimate
from casct.oracle import enumerate_language
from casct.synthesis import synthesize_sp
from casct.verification import check_ca_s_controllable, check_ca_s_observable

OBSERVED = ["", "beta", "beta alpha", "beta alpha mu", "beta alpha alpha",
            "beta alpha alpha mu", "beta alpha mu beta", "beta alpha alpha mu beta"]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--ascii", action="store_true", help="print event names instead of Greek letters")
    args = ap.parse_args()
    greek = not args.ascii

    m = scenario("example1")
    g, spec = m.automaton, m.spec
    s = ("beta", "eta", "alpha")
    print("attacked strings  :", show_words(theta(s, g, spec).enumerate(), g.alphabet, greek))
    print("observations      :", show_words(phi(s, g, spec).enumerate(), g.alphabet, greek))

    obs = ca_observer(m.witness.automaton, spec)
    sup = synthesize_sp(m.witness, g, spec)
    print(f"\n{'t':<12} {'observer state':<16} {'estimate':<10} pattern")
    for text in OBSERVED:
        t = tuple(text.split())
        print(f"{show_word(t, greek):<12} {obs.run(t):<16} {render_set(state_estimate(obs, t)):<10} "
              f"{{{','.join(show_word((e,), greek) for e in m.classification.order(sup.pattern(t)))}}}")

    for name in ("case1", "case2"):
        c = scenario(name)
        ctrl = check_ca_s_controllable(c.witness, c.automaton, c.classification)
        obsv = check_ca_s_observable(c.witness, c.automaton, c.spec)
        sp = synthesize_sp(c.witness, c.automaton, c.spec)
        achieved = language_equal(small_language(c.automaton, c.spec, sp), c.witness.automaton)
        print(f"\n{name}: controllability {ctrl.report()}\n{name}: observability {obsv.report()}"
              f"\n{name}: small language equals spec: {achieved}")

    e = scenario("example2")
    conv = synthesize_sp(e.witness, e.automaton, e.spec.without_sensor_attacks())
    sm = small_language(e.automaton, e.spec, conv)
    print("\nconventional supervisor, small language:",
          show_words(enumerate_language(sm, 7), e.automaton.alphabet, greek))
    trace = simulate_trace(e.automaton, e.spec, conv,
                           ScriptedPolicy(("beta", "eta", "alpha"), {2: ()}, {3: (("mu",), ())}), 10)
    print("scripted attack run:")
    for line in trace.lines(e.classification.order):
        print("  " + line)


if __name__ == "__main__":
    main()
