"""Command-line interface.

Input strings are taken as raw argument bytes; an argument of the form
`@path` reads the file at `path` instead (bytes are mapped to characters
one-to-one).  The delimiter byte '$' is reserved and rejected in inputs.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time
import random

from . import __version__
from .alphabet import Alphabet
from .decider import TokenDecider, UdDecider
from .errors import ShingleSyncError
from .oracle import decoding_count, find_obstruction, rotation_pair, transposition_pair
from .shinglelen import recommend_shingle_len
from .shingles import ShingleMultiset, shingle_sequence, shingling
from .stringrecon import MODE_FIXED, MODE_RATELESS, ReconConfig, run_protocol
from .transport import Listener, connect


def _read_input(arg: str) -> str:
    if arg.startswith("@"):
        with open(arg[1:], "rb") as fh:
            return fh.read().decode("latin-1")
    return arg


def cmd_check(args) -> int:
    word = _read_input(args.string)
    alphabet = Alphabet(_read_input(args.alphabet)) if args.alphabet else Alphabet.from_text(word)
    if args.q == 2:
        decider = UdDecider(alphabet)
        verdict = None
        for ch in word:
            verdict = decider.push(ch)
            if not verdict.ok:
                break
        verdict = verdict if verdict is not None else decider.verdict
    else:
        decider = TokenDecider(args.q)
        verdict = decider.verdict
        for s in shingle_sequence(word, args.q):
            verdict = decider.push_shingle(s)
            if not verdict.ok:
                break
    if verdict.ok:
        print("UD")
        return 0
    print(f"NOT-UD {verdict.reason.value} at index {verdict.position}")
    return 1


def cmd_shingle(args) -> int:
    word = _read_input(args.string)
    sys.stdout.write(shingling(word, args.l).to_text())
    return 0


def cmd_decode(args) -> int:
    with open(args.multiset_file, "r", encoding="utf-8") as fh:
        ms = ShingleMultiset.from_text(fh.read())
    l = args.l or ms.min_len()
    result = decoding_count(ms, cap=args.count_cap, l=l)
    if result.count == 1:
        print(result.witnesses[0])
        return 0
    if result.count == 0:
        print("INCONSISTENT no decoding exists")
        return 2
    suffix = "+" if result.saturated else ""
    print(f"AMBIGUOUS count={result.count}{suffix} witnesses: " + " ".join(result.witnesses))
    return 1


def cmd_obstruct(args) -> int:
    word = _read_input(args.string)
    witness = find_obstruction(word)
    if witness is None:
        print("NO-OBSTRUCTION")
        return 0
    x, a, b = witness
    print(f"OBSTRUCTION x={x} a={a} b={b}")
    return 1


def _parse_mode(text: str) -> tuple[str, int]:
    if text == MODE_RATELESS:
        return MODE_RATELESS, 0
    if text.startswith("fixed:"):
        return MODE_FIXED, int(text.split(":", 1)[1])
    raise argparse.ArgumentTypeError(f"mode must be 'rateless' or 'fixed:<m>', got {text!r}")


def cmd_reconcile(args) -> int:
    word = _read_input(args.input)
    mode, m_hat = args.mode
    l = args.l or recommend_shingle_len(max(2, len(word)), 0.6)
    config = ReconConfig(l=l, mode=mode, m_hat=m_hat or 64, k=args.k, seed=args.seed)
    host, _, port = args.addr.rpartition(":")
    if args.action == "serve":
        listener = Listener(host or "127.0.0.1", int(port))
        print(f"listening on {listener.host}:{listener.port}", file=sys.stderr)
        endpoint = listener.accept()
        role = "responder"
    else:
        endpoint = connect(host or "127.0.0.1", int(port))
        role = "initiator"
    try:
        remote_word, report = run_protocol(word, endpoint, role, config)
    finally:
        endpoint.close()
        if args.action == "serve":
            listener.close()
    sys.stdout.write(report.to_text())
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(remote_word.encode("latin-1"))
    return 0


def cmd_bench_ud(args) -> int:
    rng = random.Random(args.seed)
    symbols = "".join(chr(ord("a") + i) for i in range(args.sigma))
    alphabet = Alphabet(symbols)
    sizes = [args.n, 2 * args.n]
    medians = []
    for n in sizes:
        times = []
        for _ in range(args.trials):
            ids = [rng.randrange(args.sigma) for _ in range(n)]
            decider = UdDecider(alphabet)
            t0 = time.perf_counter()
            decider.feed_ids(ids)
            times.append(time.perf_counter() - t0)
            assert decider.slot_count() == args.sigma
        med = statistics.median(times)
        medians.append(med)
        print(f"n={n} trials={args.trials} median_s={med:.4f} per_char_ns={med / n * 1e9:.0f}")
    print(f"ratio={medians[1] / medians[0]:.2f}")
    return 0


def cmd_gen_pevzner(args) -> int:
    rng = random.Random(args.seed)
    symbols = "abcd"
    q = args.q

    def block(lo, hi):
        return "".join(rng.choice(symbols) for _ in range(rng.randrange(lo, hi + 1)))

    gram = lambda: "".join(rng.choice(symbols) for _ in range(q - 1))
    if args.kind == "transpose":
        x, xp = transposition_pair(
            block(0, 3), gram(), block(1, 4), gram(), block(0, 3), block(1, 4), block(0, 3), q
        )
    else:
        z = gram()
        x, xp = rotation_pair(block(1, 4), z, block(1, 4), z, q)
    print(x)
    print(xp)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="shinglesync",
        description="unique-decodability testing and shingle-based string reconciliation",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="test a string for unique decodability")
    p.add_argument("string")
    p.add_argument("--alphabet", help="explicit alphabet (string or @file)")
    p.add_argument("--q", type=int, default=2, help="window length (default 2)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("shingle", help="print the shingle multiset of a string")
    p.add_argument("string")
    p.add_argument("--l", type=int, default=2, help="shingle length (default 2)")
    p.set_defaults(func=cmd_shingle)

    p = sub.add_parser("decode", help="decode a shingle-multiset file")
    p.add_argument("multiset_file")
    p.add_argument("--l", type=int, help="shingle length (default: shortest entry)")
    p.add_argument("--count-cap", type=int, default=2, help="stop counting decodings here")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("obstruct", help="scan a string for an obstruction pattern")
    p.add_argument("string")
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("reconcile", help="reconcile a string with a remote peer")
    p.add_argument("action", choices=["serve", "connect"])
    p.add_argument("addr", help="host:port")
    p.add_argument("--input", required=True, help="local string (or @file)")
    p.add_argument("--output", help="write the recovered remote string here")
    p.add_argument("--l", type=int, help="shingle length (default: sized from input)")
    p.add_argument("--mode", type=_parse_mode, default=(MODE_RATELESS, 0), help="rateless or fixed:<m>")
    p.add_argument("--k", type=int, default=8, help="verification points")
    p.add_argument("--seed", type=int, default=1, help="session seed")
    p.set_defaults(func=cmd_reconcile)

    p = sub.add_parser("bench", help="performance checks")
    bench_sub = p.add_subparsers(dest="bench_target", required=True)
    b = bench_sub.add_parser("ud", help="decider throughput at n and 2n")
    b.add_argument("--n", type=int, default=1_000_000)
    b.add_argument("--sigma", type=int, default=16)
    b.add_argument("--trials", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_bench_ud)

    p = sub.add_parser("gen", help="generators")
    gen_sub = p.add_subparsers(dest="gen_target", required=True)
    g = gen_sub.add_parser("pevzner", help="emit a pair of words with equal window multisets")
    g.add_argument("--kind", choices=["transpose", "rotate"], default="transpose")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--q", type=int, default=2)
    g.set_defaults(func=cmd_gen_pevzner)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ShingleSyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
