"""Command-line front end.

Exit codes: 0 = YES (or success for ``gen``), 1 = NO, 2 = error.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass
from pathlib import Path

from kcycle import __version__
from kcycle.compress import compress, deserialize, evaluate_compressed, serialize
from kcycle.errors import KCycleError
from kcycle.graph import Graph, format_instance, read_instance, reduce_terminals
from kcycle.oracle import brute_kcycle
from kcycle.solver import Verdict, default_threads, random_seed, solve

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

FAMILIES = ("gnp", "cycle", "bowtie", "two-triangles", "grid")


@dataclass
class RunConfig:
    seed: int
    algorithm: str = "auto"
    threads: int = 1


def _parse_seed(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _resolve_seed(arg: int | None) -> int:
    if arg is not None:
        return arg
    env = os.environ.get("KCYCLE_SEED")
    if env:
        return _parse_seed(env)
    return random_seed()


def _report(v: Verdict) -> str:
    bound = v.false_negative_bound
    return "\n".join([
        v.label,
        f"algorithm: {v.algorithm.name}",
        f"determinants: {v.determinant_evaluations}",
        f"seed: {v.seed:#018x}",
        f"false_negative_bound: {bound.numerator}/{bound.denominator}"
        f" (~{float(bound):.3g})",
    ])


def cmd_solve(args, cfg: RunConfig) -> int:
    g, terminals = read_instance(args.instance)
    v = solve(g, terminals, cfg.algorithm, cfg.seed, cfg.threads)
    print(_report(v))
    return EXIT_YES if v.answer else EXIT_NO


def cmd_compress(args, cfg: RunConfig) -> int:
    g, terminals = read_instance(args.instance)
    if len(terminals) < 2:
        raise KCycleError("compression needs at least two terminals; use 'solve' for k <= 1")
    data = serialize(compress(reduce_terminals(g, terminals), cfg.seed))
    Path(args.out).write_bytes(data)
    print(f"wrote {args.out}")
    print(f"size: {len(data)} bytes")
    print(f"seed: {cfg.seed:#018x}")
    return 0


def cmd_eval(args, cfg: RunConfig) -> int:
    c = deserialize(Path(args.compressed).read_bytes())
    v = evaluate_compressed(c, cfg.threads)
    print(_report(v))
    return EXIT_YES if v.answer else EXIT_NO


def cmd_oracle(args, cfg: RunConfig) -> int:
    g, terminals = read_instance(args.instance)
    if g.n > 16:
        print(f"warning: brute force on n={g.n} may be very slow", file=sys.stderr)
    answer = brute_kcycle(g, terminals)
    print("YES" if answer else "NO")
    print("algorithm: BRUTE_FORCE")
    return EXIT_YES if answer else EXIT_NO


def generate(family: str, n: int, p: float, k: int, seed: int) -> tuple[Graph, tuple[int, ...]]:
    """Random or structured instance; deterministic given ``seed``."""
    rnd = random.Random(seed)
    if family == "bowtie":
        g = Graph.from_edges(5, [(1, 2), (2, 3), (1, 3), (3, 4), (4, 5), (3, 5)])
        return g, (1, 4)
    if family == "two-triangles":
        g = Graph.from_edges(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        return g, (1, 4)
    if family == "cycle":
        if n < 3:
            raise KCycleError("cycle family needs n >= 3")
        g = Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)])
    elif family == "grid":
        rows = max(1, int(n ** 0.5))
        cols = max(1, n // rows)
        n = rows * cols
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c + 1
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        g = Graph.from_edges(n, edges)
    elif family == "gnp":
        edges = [(u, v) for u in range(1, n + 1) for v in range(u + 1, n + 1) if rnd.random() < p]
        g = Graph.from_edges(n, edges)
    else:
        raise KCycleError(f"unknown family {family!r}")
    if not 0 <= k <= n:
        raise KCycleError(f"k={k} out of range for n={n}")
    return g, tuple(sorted(rnd.sample(range(1, n + 1), k)))


def cmd_gen(args, cfg: RunConfig) -> int:
    g, terminals = generate(args.family, args.n, args.p, args.k, cfg.seed)
    if args.family in ("bowtie", "two-triangles"):
        comment = f"family={args.family}"
    else:
        comment = f"family={args.family} n={args.n} p={args.p} k={args.k} seed={cfg.seed:#018x}"
    text = format_instance(g, terminals, comment)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(f"wrote {args.out}")
        print(f"seed: {cfg.seed:#018x}")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_parse_seed, default=None,
                        help="64-bit seed (decimal or 0x-hex); falls back to $KCYCLE_SEED, then OS entropy")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: available CPUs)")

    parser = argparse.ArgumentParser(prog="kcycle", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="decide a K-Cycle instance")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=("2k", "4k", "auto"), default="auto")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("compress", parents=[common], help="write a compressed instance")
    p.add_argument("instance")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("eval", parents=[common], help="decide a compressed instance")
    p.add_argument("compressed")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gen", parents=[common], help="generate an instance file")
    p.add_argument("--family", choices=FAMILIES, default="gnp")
    p.add_argument("-n", type=int, default=10)
    p.add_argument("-p", type=float, default=0.3)
    p.add_argument("-k", type=int, default=3)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", parents=[common], help="decide by brute force (small n)")
    p.add_argument("instance")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else 0
    try:
        cfg = RunConfig(
            seed=_resolve_seed(args.seed),
            algorithm=getattr(args, "algorithm", "auto"),
            threads=args.threads if args.threads is not None else default_threads(),
        )
        if cfg.threads < 1:
            raise KCycleError("--threads must be positive")
        return args.func(args, cfg)
    except (KCycleError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
