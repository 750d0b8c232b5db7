#!/usr/bin/env python3
"""Decider throughput at n and 2n, on random streams and on a live UD stream.

Random streams over a sizable alphabet stop being uniquely decodable almost
immediately, so most pushes exercise the absorbed fast path; the single-symbol
run keeps the decider live the whole way.  Both rows should scale linearly.
"""

import argparse
import random
import statistics
import time

from shinglesync import Alphabet, UdDecider


def timed(alphabet: Alphabet, ids: list[int], trials: int) -> float:
    times = []
    for _ in range(trials):
        decider = UdDecider(alphabet)
        start = time.perf_counter()
        decider.feed_ids(ids)
        times.append(time.perf_counter() - start)
        assert decider.slot_count() == len(alphabet)
    return statistics.median(times)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1_000_000)
    parser.add_argument("--sigma", type=int, default=16)
    parser.add_argument("--trials", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    alphabet = Alphabet("".join(chr(ord("a") + i) for i in range(args.sigma)))
    for label, make in [
        ("random", lambda n: [rng.randrange(args.sigma) for _ in range(n)]),
        ("single-symbol", lambda n: [0] * n),
    ]:
        medians = []
        for n in (args.n, 2 * args.n):
            med = timed(alphabet, make(n), args.trials)
            medians.append(med)
            print(f"{label:>14} n={n} median_s={med:.4f} per_char_ns={med / n * 1e9:.0f}")
        print(f"{label:>14} ratio={medians[1] / medians[0]:.2f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
