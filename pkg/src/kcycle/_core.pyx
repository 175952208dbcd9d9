# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled GF(2^64) kernels: scalar ops, determinant, Schur elimination."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t
from libc.string cimport memcpy

from kcycle.errors import SingularBlockError

cnp.import_array()

cdef extern from "gf64.h" nogil:
    uint64_t gf64_mul(uint64_t a, uint64_t b)
    uint64_t gf64_mul_portable(uint64_t a, uint64_t b)
    uint64_t gf64_inv(uint64_t a)
    void gf64_axpy(uint64_t *dst, const uint64_t *src, uint64_t f, Py_ssize_t n)
    int gf64_have_clmul()
    int gf64_use_clmul()
    int gf64_set_clmul(int on)

NAME = "compiled"

# Probe once at import so worker threads never race on the lazy init.
gf64_use_clmul()


def hardware_clmul_available():
    return bool(gf64_have_clmul())


def using_hardware_clmul():
    return bool(gf64_use_clmul())


def set_hardware_clmul(bint on):
    """Toggle the PCLMULQDQ path. Returns False if the CPU lacks it."""
    return bool(gf64_set_clmul(on))


def mul(uint64_t a, uint64_t b):
    return gf64_mul(a, b)


def mul_portable(uint64_t a, uint64_t b):
    return gf64_mul_portable(a, b)


def inv(uint64_t a):
    if a == 0:
        raise ZeroDivisionError("zero has no inverse in GF(2^64)")
    return gf64_inv(a)


cdef uint64_t _det_inplace(uint64_t[:, ::1] m) noexcept nogil:
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p, r, j
    cdef uint64_t det = 1, piv_inv, f, tmp
    for p in range(n):
        r = p
        while r < n and m[r, p] == 0:
            r += 1
        if r == n:
            return 0
        if r != p:
            for j in range(p, n):
                tmp = m[p, j]
                m[p, j] = m[r, j]
                m[r, j] = tmp
        det = gf64_mul(det, m[p, p])
        if p + 1 == n:
            break
        piv_inv = gf64_inv(m[p, p])
        for r in range(p + 1, n):
            if m[r, p] != 0:
                f = gf64_mul(m[r, p], piv_inv)
                gf64_axpy(&m[r, p + 1], &m[p, p + 1], f, n - p - 1)
    return det


def det(cnp.ndarray mat):
    """Determinant of a square uint64 matrix. The input is not modified."""
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] work = np.array(mat, dtype=np.uint64, order="C", copy=True)
    if work.shape[0] != work.shape[1]:
        raise ValueError("matrix must be square")
    if work.shape[0] == 0:
        return 1
    cdef uint64_t[:, ::1] view = work
    cdef uint64_t result
    with nogil:
        result = _det_inplace(view)
    return result


cdef Py_ssize_t _schur_inplace(uint64_t[:, ::1] m, Py_ssize_t s, uint64_t *det_out) noexcept nogil:
    # Gauss-Jordan over the trailing block, pivoting only on rows/cols >= s.
    # Returns -1 on success, else the column lacking a pivot.
    cdef Py_ssize_t n = m.shape[0]
    cdef Py_ssize_t p, r, j
    cdef uint64_t det = 1, piv_inv, f, tmp
    for p in range(s, n):
        r = p
        while r < n and m[r, p] == 0:
            r += 1
        if r == n:
            return p
        if r != p:
            for j in range(n):
                tmp = m[p, j]
                m[p, j] = m[r, j]
                m[r, j] = tmp
        det = gf64_mul(det, m[p, p])
        piv_inv = gf64_inv(m[p, p])
        for r in range(n):
            if r != p and m[r, p] != 0:
                f = gf64_mul(m[r, p], piv_inv)
                # columns s..p-1 of the pivot row are already zero
                gf64_axpy(&m[r, 0], &m[p, 0], f, s)
                gf64_axpy(&m[r, p], &m[p, p], f, n - p)
    det_out[0] = det
    return -1


def schur_eliminate(cnp.ndarray mat, Py_ssize_t s):
    """Eliminate the trailing block of ``mat`` (rows/cols >= s).

    Returns ``(top_left, det_trailing)`` where ``top_left`` is the s-by-s
    Schur complement. Raises SingularBlockError if the trailing block is
    singular.
    """
    cdef cnp.ndarray[cnp.uint64_t, ndim=2, mode="c"] work = np.array(mat, dtype=np.uint64, order="C", copy=True)
    if work.shape[0] != work.shape[1]:
        raise ValueError("matrix must be square")
    if not 0 <= s <= work.shape[0]:
        raise ValueError("split index out of range")
    cdef uint64_t[:, ::1] view = work
    cdef uint64_t detc = 1
    cdef Py_ssize_t bad
    with nogil:
        bad = _schur_inplace(view, s, &detc)
    if bad >= 0:
        raise SingularBlockError(f"trailing block has no pivot in column {bad}")
    return np.ascontiguousarray(work[:s, :s]), detc
