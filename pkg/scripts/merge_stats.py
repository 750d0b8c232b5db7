#!/usr/bin/env python3
"""Measure how often random bit strings shingle without any merges.

Sweeps shingle lengths around the Lambert-W sizing rule and reports, per
length, the fraction of trials whose ordered shingling streams through the
decider with zero merges, plus the merge-count distribution.  This is the
experiment behind the sizing-rule calibration note in the README: the rule
controls the expected recurrence of a single gram, not birthday collisions
between all gram pairs, so its lengths sit well below the zero-merge knee.
"""

import argparse
import random
import statistics

from shinglesync import TokenDecider, recommend_shingle_len, shingle_sequence


def zero_merge_stats(n: int, l: int, trials: int, seed: int, bias: float) -> tuple[float, list[int]]:
    rng = random.Random(seed)
    counts = []
    for _ in range(trials):
        word = "".join("0" if rng.random() < bias else "1" for _ in range(n))
        decider = TokenDecider(l, track_undo=True)
        merges = 0
        for s in shingle_sequence(word, l):
            merges += decider.push_or_merge(s).merges
        counts.append(merges)
    zero = sum(1 for c in counts if c == 0)
    return zero / trials, counts


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=4096, help="bits per trial string")
    parser.add_argument("--p", type=float, default=0.6, help="bit bias fed to the sizing rule")
    parser.add_argument("--trials", type=int, default=30)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--spread", type=int, default=10, help="lengths above the rule to sweep")
    args = parser.parse_args()

    l_rule = recommend_shingle_len(args.n, args.p)
    print(f"sizing rule: n={args.n} p={args.p} -> l={l_rule}")
    print(f"{'l':>4} {'zero-merge':>11} {'median merges':>14} {'max merges':>11}")
    for l in range(l_rule, l_rule + args.spread + 1):
        frac, counts = zero_merge_stats(args.n, l, args.trials, args.seed + l, args.p)
        print(f"{l:>4} {frac:>11.2f} {int(statistics.median(counts)):>14} {max(counts):>11}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
