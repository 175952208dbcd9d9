"""Compare the compiled GF(2^64) kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--sizes 20 40 124] [--repeat 5]

Rows: determinant time per backend and size, then one full 2k solve.
"""

import argparse
import statistics
import time

from kcycle import _backend, field
from kcycle.graph import Graph
from kcycle.solver import solve


def timeit(fn, repeat):
    best = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best.append(time.perf_counter() - t)
    return statistics.median(best)


def backends():
    out = [("python", _backend.pure, None)]
    c = _backend.compiled
    if c is not None:
        out.append(("compiled/portable", c, False))
        if c.hardware_clmul_available():
            out.append(("compiled/pclmul", c, True))
    return out


def bench_det(sizes, repeat, python_max):
    rng = field.make_rng(1)
    print(f"{'backend':<20}{'n':>6}{'det ms':>12}")
    for n in sizes:
        m = field.random_elements(rng, (n, n))
        ref = None
        for name, mod, clmul in backends():
            if mod is _backend.pure and n > python_max:
                print(f"{name:<20}{n:>6}{'skipped':>12}")
                continue
            if clmul is not None:
                mod.set_hardware_clmul(clmul)
            val = mod.det(m)
            assert ref is None or val == ref, "backends disagree"
            ref = val
            r = 1 if mod is _backend.pure else repeat
            print(f"{name:<20}{n:>6}{timeit(lambda: mod.det(m), r) * 1e3:>12.3f}")
    if _backend.compiled is not None:
        _backend.compiled.set_hardware_clmul(_backend.compiled.hardware_clmul_available())


def bench_solve(n, k, threads):
    g = Graph.from_edges(n, [(i, i % n + 1) for i in range(1, n + 1)] + [(i, (i + 7) % n + 1) for i in range(1, n + 1, 3)])
    terms = tuple(range(1, n + 1, n // k))[:k]
    t = time.perf_counter()
    v = solve(g, terms, "2k", seed=1, threads=threads)
    dt = time.perf_counter() - t
    print(f"\nsolve 2k n={n} k={k} threads={threads} backend={_backend.NAME}: "
          f"{v.label}, {v.determinant_evaluations} dets in {dt:.2f} s")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[20, 40, 80, 124])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--python-max", type=int, default=40, help="largest n timed on the pure backend")
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    bench_det(args.sizes, args.repeat, args.python_max)
    bench_solve(100, 12, args.threads)


if __name__ == "__main__":
    main()
