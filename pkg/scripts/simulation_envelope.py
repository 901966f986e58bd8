#!/usr/bin/env python3
"""Seeded attacked closed-loop runs: how often each policy stays inside the small language."""
import argparse
import random

from casct.closedloop import AdversarialPolicy, RandomPolicy, large_language, simulate_trace, small_language
from casct.randgen import random_instance, random_supervisor
from casct.synthesis import synthesize_sp


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--models", type=int, default=100)
    ap.add_argument("--runs", type=int, default=20, help="runs per model and policy")
    ap.add_argument("--steps", type=int, default=10)
    args = ap.parse_args()

    stats = {}
    for seed in range(args.models):
        inst = random_instance(seed)
        g, spec = inst.plant, inst.spec
        sup = synthesize_sp(inst.sub, g, spec) if seed % 2 == 0 else random_supervisor(random.Random(seed), g, spec)
        small, large = small_language(g, spec, sup), large_language(g, spec, sup)
        for name in ("random", "restrict", "permit"):
            row = stats.setdefault(name, {"runs": 0, "in_small": 0, "outside_large": 0, "deadlock": 0})
            for k in range(args.runs):
                run_seed = seed * 1000 + k
                policy = RandomPolicy(run_seed) if name == "random" else AdversarialPolicy(name, run_seed)
                trace = simulate_trace(g, spec, sup, policy, args.steps)
                row["runs"] += 1
                row["in_small"] += small.generates(trace.fired)
                row["outside_large"] += not large.generates(trace.fired)
                row["deadlock"] += trace.deadlock
    print(f"{'policy':<10} {'runs':>6} {'in small':>9} {'outside large':>14} {'deadlock':>9}")
    for name, row in stats.items():
        print(f"{name:<10} {row['runs']:>6} {row['in_small']:>9} {row['outside_large']:>14} {row['deadlock']:>9}")


if __name__ == "__main__":
    main()
