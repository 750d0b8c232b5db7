#!/usr/bin/env python3
"""Run in-process reconciliation sessions over a sweep of edit counts.

Prints each session's report so the per-step bit accounting is easy to eyeball
against the edit count and shingle length.
"""

import argparse
import random
from concurrent.futures import ThreadPoolExecutor

from shinglesync import (
    MODE_FIXED,
    MODE_RATELESS,
    ReconConfig,
    channel_pair,
    random_edits,
    recommend_shingle_len,
    run_protocol,
)


def run_session(word_a: str, word_b: str, config: ReconConfig, alpha: int):
    a, b = channel_pair()
    with ThreadPoolExecutor(2) as pool:
        fut_a = pool.submit(run_protocol, word_a, a, "initiator", config, alpha)
        fut_b = pool.submit(run_protocol, word_b, b, "responder", config, alpha)
        recovered_a, report_a = fut_a.result()
        recovered_b, report_b = fut_b.result()
    assert recovered_a == word_b and recovered_b == word_a
    return report_a, report_b


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1024)
    parser.add_argument("--alphas", type=int, nargs="+", default=[1, 4, 16])
    parser.add_argument("--mode", choices=[MODE_RATELESS, MODE_FIXED], default=MODE_RATELESS)
    parser.add_argument("--m-hat", type=int, default=256)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    l = recommend_shingle_len(args.n, 0.6)
    for alpha in args.alphas:
        word_a = "".join(rng.choice("01") for _ in range(args.n))
        word_b = random_edits(word_a, alpha, rng, "01")
        config = ReconConfig(l=l, mode=args.mode, m_hat=args.m_hat, seed=rng.randrange(2**32))
        report_a, _report_b = run_session(word_a, word_b, config, alpha)
        print(f"# alpha={alpha}")
        print(report_a.to_text())
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
