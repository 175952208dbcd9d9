"""Decision algorithms for K-Cycle.

``detect_4k`` extracts the terminal-edge monomials of the encoded
determinant by inclusion-exclusion over the 2k terminal edges; ``detect_2k``
sums the determinant over the 2^(k-1) orientations of terminals 2..k. Both
evaluate the edge variables at one random point, so a YES answer is always
correct and a NO answer is wrong with probability at most n / (2^64 - 1).
"""

from __future__ import annotations

import enum
import operator
import os
import secrets
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Sequence, TypeVar

from kcycle import field, graph as graphmod
from kcycle.encode import (
    EncodedMatrix,
    TargetSet,
    apply_evaluation,
    build_matrix,
    instantiate,
)
from kcycle.graph import Graph
from kcycle.linalg import determinant

T = TypeVar("T")


class Algorithm(enum.Enum):
    SPECIAL = "special"
    DET4K = "4k"
    DET2K = "2k"
    COMPRESSED = "compressed"


@dataclass(frozen=True)
class Verdict:
    answer: bool
    algorithm: Algorithm
    seed: int | None
    false_negative_bound: Fraction
    determinant_evaluations: int

    @property
    def label(self) -> str:
        return "YES" if self.answer else "NO"


def false_negative_bound(n: int) -> Fraction:
    """Schwartz-Zippel bound for a degree-n polynomial over the nonzero field elements."""
    return Fraction(n, field.ORDER - 1)


def gray_code(bits: int) -> Iterable[int]:
    for i in range(1 << bits):
        yield i ^ (i >> 1)


def parallel_sum(terms: Sequence[T], evaluate: Callable[[T], int], threads: int = 1) -> int:
    """XOR of ``evaluate(t)`` over ``terms``, fanned out to ``threads`` workers.

    Characteristic-two addition is associative and commutative, so the
    result does not depend on how the work is split.
    """
    threads = max(1, min(threads, len(terms)))
    if threads == 1:
        acc = 0
        for t in terms:
            acc ^= evaluate(t)
        return acc

    def chunk_sum(chunk):
        acc = 0
        for t in chunk:
            acc ^= evaluate(t)
        return acc

    step = -(-len(terms) // threads)
    chunks = [terms[i:i + step] for i in range(0, len(terms), step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return reduce(operator.xor, pool.map(chunk_sum, chunks), 0)


def subset_zero_sum(evaluate: Callable[[frozenset], T], targets: Iterable,
                    add: Callable[[T, T], T] = operator.xor, threads: int = 1) -> T:
    """Sum of ``evaluate(I)`` over all subsets ``I`` of ``targets``.

    Subsets are visited in Gray-code order. ``add`` is the field addition
    (XOR for field elements; pass ``operator.add`` for polynomial objects).
    """
    targets = list(targets)
    subsets = [frozenset(t for b, t in enumerate(targets) if code >> b & 1)
               for code in gray_code(len(targets))]
    if add is operator.xor:
        return parallel_sum(subsets, evaluate, threads)
    return reduce(add, (evaluate(s) for s in subsets))


def orientation_assignments(terminals: Sequence[int]) -> list[dict[int, int]]:
    return [{t: code >> b & 1 for b, t in enumerate(terminals)} for code in gray_code(len(terminals))]


def detect_4k(m: EncodedMatrix, targets: TargetSet, threads: int = 1) -> Verdict:
    """Inclusion-exclusion over the 2k terminal edges; orientation tags ignored."""
    if len(targets) != 2 * m.k:
        raise ValueError(f"expected {2 * m.k} target variables, got {len(targets)}")
    total = subset_zero_sum(lambda zero: determinant(instantiate(m, None, zero)),
                            targets, threads=threads)
    return Verdict(total != 0, Algorithm.DET4K, m.seed, false_negative_bound(m.n), 1 << len(targets))


def detect_2k(m: EncodedMatrix, threads: int = 1) -> Verdict:
    """Sum of determinants over all orientations of terminals 2..k."""
    terminals = list(range(2, m.k + 1))
    configs = orientation_assignments(terminals)
    total = parallel_sum(configs, lambda a: determinant(instantiate(m, a)), threads)
    return Verdict(total != 0, Algorithm.DET2K, m.seed, false_negative_bound(m.n), len(configs))


def random_seed() -> int:
    return secrets.randbits(64)


def default_threads() -> int:
    return os.cpu_count() or 1


def solve(g: Graph, terminals: Sequence[int], algorithm: str = "auto",
          seed: int | None = None, threads: int = 1) -> Verdict:
    """Decide whether ``g`` has a simple cycle through every terminal.

    ``algorithm`` is ``"auto"`` or ``"2k"`` (orientation sum) or ``"4k"``
    (inclusion-exclusion). With fewer than two terminals the answer is
    computed exactly by graph search. ``seed`` defaults to OS entropy.
    """
    if algorithm not in ("auto", "2k", "4k"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if seed is None:
        seed = random_seed()
    terminals = tuple(terminals)
    k = len(terminals)
    if k <= 1:
        if k == 0:
            answer = graphmod.has_any_cycle(g)
        else:
            answer = graphmod.on_some_cycle(g, terminals[0])
        return Verdict(answer, Algorithm.SPECIAL, seed, Fraction(0), 0)

    reduced = graphmod.reduce_terminals(g, terminals)
    m, targets = build_matrix(reduced)
    m = apply_evaluation(m, seed)
    if algorithm == "4k":
        return detect_4k(m, targets, threads)
    return detect_2k(m, threads)
