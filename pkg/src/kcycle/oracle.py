"""Brute-force references, independent of the algebraic code paths.

Nothing here calls into the kernel backend: field products use the
bit-serial :func:`kcycle.field.mul_reference`, and graph questions are
answered by exhaustive search.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from kcycle.field import mul_reference
from kcycle.graph import Graph


def brute_kcycle(g: Graph, terminals: Sequence[int]) -> bool:
    """Exhaustive search for a simple cycle (length >= 3) through all terminals.

    Paths are grown from the lowest-numbered terminal by DFS. A branch is cut
    when some uncovered terminal is unreachable from the path end without
    reusing path vertices, and (path end, visited set) states already shown
    to fail are memoised.
    """
    if not terminals:
        return _brute_any_cycle(g)
    adj = [0] * (g.n + 1)
    for u, v in g.edges:
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    start = min(terminals)
    need = 0
    for t in terminals:
        need |= 1 << t
    start_bit = 1 << start
    failed: set[tuple[int, int]] = set()

    def reachable(src: int, blocked: int) -> int:
        seen = 1 << src
        frontier = seen
        while frontier:
            nxt = 0
            bits = frontier
            while bits:
                low = bits & -bits
                nxt |= adj[low.bit_length() - 1]
                bits ^= low
            nxt &= ~(seen | blocked)
            seen |= nxt
            frontier = nxt
        return seen

    def dfs(v: int, visited: int, length: int) -> bool:
        if length >= 3 and adj[v] & start_bit and visited & need == need:
            return True
        state = (v, visited)
        if state in failed:
            return False
        missing = need & ~visited
        if missing:
            # the path must still return to start, so start is not blocked
            if missing & ~reachable(v, visited & ~start_bit & ~(1 << v)):
                failed.add(state)
                return False
        cand = adj[v] & ~visited
        while cand:
            low = cand & -cand
            cand ^= low
            if dfs(low.bit_length() - 1, visited | low, length + 1):
                return True
        failed.add(state)
        return False

    return dfs(start, start_bit, 1)


def _brute_any_cycle(g: Graph) -> bool:
    # a cycle exists iff some vertex lies on one; try each as the start
    return any(brute_kcycle(g, [v]) for v in range(1, g.n + 1))


def brute_matching(g: Graph) -> bool:
    """True iff ``g`` has a perfect matching, by recursive pairing."""
    if g.n % 2:
        return False
    full = (1 << (g.n + 1)) - 2

    @lru_cache(maxsize=None)
    def match(used: int) -> bool:
        if used == full:
            return True
        free = ~used & full
        v = (free & -free).bit_length() - 1
        for u in g.neighbors(v):
            if not used >> u & 1:
                if match(used | 1 << v | 1 << u):
                    return True
        return False

    return match(0)


def cofactor_det(m) -> int:
    """Determinant by Laplace expansion along the first row (no signs)."""
    rows = [[int(x) for x in row] for row in m]
    n = len(rows)

    @lru_cache(maxsize=None)
    def expand(row: int, cols: int) -> int:
        if row == n:
            return 1
        acc = 0
        for c in range(n):
            if cols >> c & 1 and rows[row][c]:
                minor = expand(row + 1, cols & ~(1 << c))
                if minor:
                    acc ^= mul_reference(rows[row][c], minor)
        return acc

    return expand(0, (1 << n) - 1)


# --- small symbolic polynomials ------------------------------------------------

Monomial = tuple[int, ...]


class SmallPolynomial:
    """Sparse polynomial over GF(2^64) in a fixed number of variables.

    ``terms`` maps exponent tuples to nonzero coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Monomial, int] | None = None):
        self.nvars = nvars
        self.terms: dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError("exponent vector length mismatch")
            if coeff:
                self.terms[tuple(mono)] = coeff

    @classmethod
    def variable(cls, nvars: int, i: int) -> SmallPolynomial:
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def constant(cls, nvars: int, c: int) -> SmallPolynomial:
        return cls(nvars, {(0,) * nvars: c})

    def __add__(self, other: SmallPolynomial) -> SmallPolynomial:
        out = dict(self.terms)
        for mono, c in other.terms.items():
            v = out.get(mono, 0) ^ c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return SmallPolynomial(self.nvars, out)

    def __mul__(self, other: SmallPolynomial) -> SmallPolynomial:
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, 0) ^ mul_reference(c1, c2)
        return SmallPolynomial(self.nvars, out)

    def __eq__(self, other):
        if not isinstance(other, SmallPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __repr__(self):
        return f"SmallPolynomial({self.nvars}, {self.terms!r})"

    def zero_out(self, variables: Iterable[int]) -> SmallPolynomial:
        """Substitute 0 for every variable in ``variables``."""
        zeroed = list(variables)
        return SmallPolynomial(
            self.nvars,
            {m: c for m, c in self.terms.items() if all(m[i] == 0 for i in zeroed)},
        )

    def evaluate(self, point: Sequence[int]) -> int:
        acc = 0
        for mono, c in self.terms.items():
            term = c
            for x, e in zip(point, mono):
                for _ in range(e):
                    term = mul_reference(term, x)
            acc ^= term
        return acc


def lemma_polypie_check(p: SmallPolynomial, targets: Iterable[int]) -> bool:
    """Check that summing ``p`` with each subset of ``targets`` zeroed keeps
    exactly the monomials divisible by the product of the targets, with
    their coefficients unchanged, and cancels everything else."""
    targets = sorted(set(targets))
    q = SmallPolynomial(p.nvars)
    for r in range(len(targets) + 1):
        for subset in itertools.combinations(targets, r):
            q = q + p.zero_out(subset)
    expected = {m: c for m, c in p.terms.items() if all(m[i] >= 1 for i in targets)}
    return q.terms == expected
