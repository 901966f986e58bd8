#!/usr/bin/env python3
"""Convergence statistics of the infimal-superlanguage fixpoint on seeded random models."""
import argparse
import collections
import csv
import sys
import time

from casct.automata import language_contains, language_equal
from casct.randgen import INFIMAL_CONFIG, GeneratorConfig, random_instance
from casct.synthesis import compute_l_na, infimal_caco


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--instances", type=int, default=500)
    ap.add_argument("--max-rounds", type=int, default=32)
    ap.add_argument("--max-states", type=int, default=5)
    ap.add_argument("--keep", type=float, default=INFIMAL_CONFIG.p_keep_state, help="state keep probability for K_r")
    ap.add_argument("--csv", help="write per-instance rows here")
    args = ap.parse_args()
    cfg = GeneratorConfig(max_states=args.max_states, p_keep_state=args.keep,
                          p_controllable=INFIMAL_CONFIG.p_controllable)

    rows = []
    seed = 0
    t0 = time.perf_counter()
    while len(rows) < args.instances:
        inst = random_instance(seed, cfg)
        seed += 1
        if not language_contains(compute_l_na(inst.plant, inst.classification), inst.sub.automaton):
            continue
        start = time.perf_counter()
        r = infimal_caco(inst.sub, inst.plant, inst.spec, max_rounds=args.max_rounds)
        rows.append({
            "seed": inst.seed,
            "converged": r.converged,
            "rounds": r.rounds,
            "grew": not language_equal(r.automaton, inst.sub.automaton),
            "states": len(r.automaton.states),
            "ms": round(1000 * (time.perf_counter() - start), 3),
        })
    elapsed = time.perf_counter() - t0

    converged = sum(r["converged"] for r in rows)
    print(f"instances {len(rows)} (scanned {seed} seeds) in {elapsed:.2f}s")
    print(f"converged {converged}/{len(rows)}, grew {sum(r['grew'] for r in rows)}")
    hist = collections.Counter(r["rounds"] for r in rows)
    print("rounds histogram:", dict(sorted(hist.items())))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    return 0 if converged == len(rows) else 1


if __name__ == "__main__":
    sys.exit(main())
