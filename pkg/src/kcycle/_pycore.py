"""Pure-Python twin of the compiled kernels in ``_core.pyx``.

Same function names and results, bit for bit. Used when the extension is not
built or when ``KCYCLE_PURE_PYTHON=1`` is set.
"""

from __future__ import annotations

import numpy as np

from kcycle.errors import SingularBlockError

NAME = "python"

MASK64 = (1 << 64) - 1


def hardware_clmul_available() -> bool:
    return False


def using_hardware_clmul() -> bool:
    return False


def set_hardware_clmul(on: bool) -> bool:
    return not on


def _reduce(hi: int, lo: int) -> int:
    t = hi ^ (hi >> 63) ^ (hi >> 61) ^ (hi >> 60)
    return (lo ^ t ^ (t << 1) ^ (t << 3) ^ (t << 4)) & MASK64


def mul(a: int, b: int) -> int:
    if a.bit_count() < b.bit_count():
        a, b = b, a
    acc = 0
    while b:
        low = b & -b
        acc ^= a << (low.bit_length() - 1)
        b ^= low
    return _reduce(acc >> 64, acc & MASK64)


mul_portable = mul


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(2^64)")
    result, base = 1, mul(a, a)
    for _ in range(63):
        result = mul(result, base)
        base = mul(base, base)
    return result


def _axpy(dst: list[int], src: list[int], f: int, start: int, stop: int) -> None:
    for j in range(start, stop):
        s = src[j]
        if s:
            dst[j] ^= mul(f, s)


def _rows(mat) -> list[list[int]]:
    arr = np.asarray(mat, dtype=np.uint64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("matrix must be square")
    return [[int(v) for v in row] for row in arr]


def det(mat) -> int:
    m = _rows(mat)
    n = len(m)
    result = 1
    for p in range(n):
        r = p
        while r < n and m[r][p] == 0:
            r += 1
        if r == n:
            return 0
        m[p], m[r] = m[r], m[p]
        result = mul(result, m[p][p])
        if p + 1 == n:
            break
        piv_inv = inv(m[p][p])
        for r in range(p + 1, n):
            if m[r][p]:
                _axpy(m[r], m[p], mul(m[r][p], piv_inv), p + 1, n)
    return result


def schur_eliminate(mat, s: int):
    m = _rows(mat)
    n = len(m)
    if not 0 <= s <= n:
        raise ValueError("split index out of range")
    detc = 1
    for p in range(s, n):
        r = p
        while r < n and m[r][p] == 0:
            r += 1
        if r == n:
            raise SingularBlockError(f"trailing block has no pivot in column {p}")
        m[p], m[r] = m[r], m[p]
        detc = mul(detc, m[p][p])
        piv_inv = inv(m[p][p])
        for r in range(n):
            if r != p and m[r][p]:
                f = mul(m[r][p], piv_inv)
                _axpy(m[r], m[p], f, 0, s)
                _axpy(m[r], m[p], f, p, n)
    top = np.array([row[:s] for row in m[:s]], dtype=np.uint64).reshape(s, s)
    return top, detc
