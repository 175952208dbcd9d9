"""Dense exact linear algebra over GF(2^64).

Matrices are square ``numpy.uint64`` arrays. In characteristic two the
determinant equals the permanent, so elimination never tracks signs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from kcycle import field
from kcycle._backend import core

DenseMatrix = np.ndarray


def as_matrix(rows) -> DenseMatrix:
    m = np.array(rows, dtype=np.uint64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    return m


def identity(n: int) -> DenseMatrix:
    return np.eye(n, dtype=np.uint64)


def determinant(m: DenseMatrix) -> int:
    """Exact determinant by Gaussian elimination; 1 for the 0x0 matrix."""
    return core.det(m)


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    """Field matrix product. Slow and simple; for tests and small sizes."""
    n, inner = a.shape
    _, p = b.shape
    out = np.zeros((n, p), dtype=np.uint64)
    for i in range(n):
        for j in range(p):
            acc = 0
            for t in range(inner):
                x, y = int(a[i, t]), int(b[t, j])
                if x and y:
                    acc ^= field.mul(x, y)
            out[i, j] = acc
    return out


@dataclass(frozen=True)
class AffineEntry:
    """Value ``c0 + c1 * a_var``; ``var`` is 0 when the entry is constant."""

    var: int
    c1: int
    c0: int

    def value(self, assignment: Mapping[int, int]) -> int:
        if self.var and assignment[self.var]:
            return self.c0 ^ self.c1
        return self.c0


class AffineMatrix:
    """Square matrix whose entries are affine in one orientation variable each.

    ``c0`` and ``c1`` are uint64 arrays; ``var`` holds the variable index per
    cell (0 = none). Cells with ``var == 0`` must have ``c1 == 0``.
    """

    def __init__(self, c0: np.ndarray, c1: np.ndarray, var: np.ndarray):
        self.c0 = np.ascontiguousarray(c0, dtype=np.uint64)
        self.c1 = np.ascontiguousarray(c1, dtype=np.uint64)
        self.var = np.ascontiguousarray(var, dtype=np.int32)
        if not (self.c0.shape == self.c1.shape == self.var.shape) or self.c0.ndim != 2:
            raise ValueError("c0, c1, var must share a square 2-D shape")
        if self.c0.shape[0] != self.c0.shape[1]:
            raise ValueError("affine matrix must be square")
        if np.any(self.c1[self.var == 0]):
            raise ValueError("constant cells must have c1 == 0")

    @property
    def n(self) -> int:
        return self.c0.shape[0]

    def entry(self, i: int, j: int) -> AffineEntry:
        return AffineEntry(int(self.var[i, j]), int(self.c1[i, j]), int(self.c0[i, j]))

    def variables(self) -> list[int]:
        return sorted(int(v) for v in np.unique(self.var) if v)

    def instantiate(self, assignment: Mapping[int, int]) -> DenseMatrix:
        """Concrete matrix for a 0/1 assignment of the orientation variables."""
        out = self.c0.copy()
        for v in self.variables():
            if assignment[v]:
                mask = self.var == v
                out[mask] ^= self.c1[mask]
        return out

    def scale_row(self, i: int, factor: int) -> None:
        for arr in (self.c0, self.c1):
            arr[i] = [field.mul(int(x), factor) if x else 0 for x in arr[i]]

    def __eq__(self, other):
        if not isinstance(other, AffineMatrix):
            return NotImplemented
        return (
            np.array_equal(self.c0, other.c0)
            and np.array_equal(self.c1, other.c1)
            and np.array_equal(self.var, other.var)
        )

    def copy(self) -> AffineMatrix:
        return AffineMatrix(self.c0.copy(), self.c1.copy(), self.var.copy())


def block_eliminate(m: AffineMatrix, s: int) -> tuple[AffineMatrix, int]:
    """Reduce ``m`` to block-diagonal form around split ``s``.

    All symbolic cells must lie in the leading ``s x s`` block. Returns the
    transformed leading block ``A`` and ``det C`` of the trailing block with
    ``det(m) == det(A) * det C`` under every orientation assignment.
    Raises SingularBlockError if the trailing block is singular.

    Pivots come only from the trailing block, whose rows are concrete, so
    every update adds a constant to a leading-block cell and each cell keeps
    its single-variable affine form; ``var`` and ``c1`` pass through unchanged.
    """
    n = m.n
    if not 0 <= s <= n:
        raise ValueError("split index out of range")
    outside = np.ones((n, n), dtype=bool)
    outside[:s, :s] = False
    if np.any(m.var[outside]):
        raise ValueError("symbolic entries outside the leading block")
    top, detc = core.schur_eliminate(m.c0, s)
    return AffineMatrix(top, m.c1[:s, :s].copy(), m.var[:s, :s].copy()), detc
