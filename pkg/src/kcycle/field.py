"""Arithmetic in GF(2^64) modulo x^64 + x^4 + x^3 + x + 1.

Field elements are plain Python ints in ``[0, 2**64)``. Addition is XOR.
Multiplication goes through the active kernel backend (hardware carryless
multiply when available); :func:`mul_reference` is a bit-serial
shift-and-reduce implementation kept as an independent check.
"""

from __future__ import annotations

import numpy as np

from kcycle._backend import core

BITS = 64
ORDER = 1 << BITS
MASK = ORDER - 1
#: low part of the modulus; the full modulus is x^64 + MODULUS_LOW
MODULUS_LOW = 0x1B
MODULUS = ORDER | MODULUS_LOW

FieldElement = int

ZERO = 0
ONE = 1


def add(a: int, b: int) -> int:
    return a ^ b


sub = add


def mul(a: int, b: int) -> int:
    return core.mul(a, b)


def mul_reference(a: int, b: int) -> int:
    """Shift-and-reduce multiplication, one bit of ``b`` at a time."""
    result = 0
    for _ in range(BITS):
        if b & 1:
            result ^= a
        b >>= 1
        carry = a >> 63
        a = (a << 1) & MASK
        if carry:
            a ^= MODULUS_LOW
    return result


def square(a: int) -> int:
    return mul(a, a)


def power(a: int, e: int) -> int:
    result = ONE
    while e:
        if e & 1:
            result = mul(result, a)
        a = mul(a, a)
        e >>= 1
    return result


def inv(a: int) -> int:
    """Multiplicative inverse. Raises ZeroDivisionError for 0."""
    return core.inv(a)


def div(a: int, b: int) -> int:
    return mul(a, inv(b))


def to_hex(a: int) -> str:
    return f"{a:016x}"


def from_hex(text: str) -> int:
    """Parse exactly 16 hex digits (case-insensitive)."""
    if len(text) != 16:
        raise ValueError(f"expected 16 hex digits, got {len(text)}: {text!r}")
    try:
        return int(text, 16)
    except ValueError:
        raise ValueError(f"invalid hex digits: {text!r}") from None


# --- randomness -----------------------------------------------------------


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by ``(seed, stream)``."""
    if not 0 <= seed < ORDER:
        raise ValueError("seed must be a 64-bit unsigned integer")
    key = seed | (stream << 64)
    return np.random.Generator(np.random.Philox(key=key))


def random_elements(rng: np.random.Generator, size: int) -> np.ndarray:
    return rng.bit_generator.random_raw(size).astype(np.uint64, copy=False)


def random_nonzero_elements(rng: np.random.Generator, size: int) -> np.ndarray:
    out = random_elements(rng, size)
    zeros = np.flatnonzero(out == 0)
    while zeros.size:
        out[zeros] = random_elements(rng, zeros.size)
        zeros = zeros[out[zeros] == 0]
    return out


def random(rng: np.random.Generator) -> int:
    return int(rng.bit_generator.random_raw())


def random_nonzero(rng: np.random.Generator) -> int:
    while True:
        value = int(rng.bit_generator.random_raw())
        if value:
            return value


def derive_seed(seed: int, attempt: int) -> int:
    """Seed for retry ``attempt``; attempt 0 is ``seed`` itself."""
    if attempt == 0:
        return seed
    return int(make_rng(seed, stream=attempt).bit_generator.random_raw())
