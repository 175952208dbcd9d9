"""Randomized polynomial compression to a 3k x 3k affine matrix.

The edge variables are evaluated at a random point, the concrete trailing
block (vertices beyond the closed terminal neighbourhood) is eliminated, and
its determinant is folded into the first row. What remains is a matrix whose
entries are ``c0 + c1 * a_i`` in at most one orientation variable each and
whose determinant equals that of the evaluated full matrix for every
orientation. Its size depends on k only.

Text format, one header line, 3k matrix rows, one checksum line::

    KCYC v1 k=<k> n=<n> ell=64 mod=0x1B seed=<16 hex> detc=folded
    <entry> <entry> ...
    crc32=<8 hex>

An entry is ``<i>:<c1>:<c0>`` for a cell in variable ``a_i`` or ``-:<c0>``
for a constant cell (the long form ``-:<c1>:<c0>`` with zero ``c1`` is also
accepted). Coefficients are 16 lowercase hex digits. ``n`` is written as 20
zero-padded decimal digits so the whole file length is a function of k. The
checksum is CRC-32 of every preceding byte.
"""

from __future__ import annotations

import logging
import re
import zlib
from dataclasses import dataclass

import numpy as np

from kcycle import field
from kcycle.encode import apply_evaluation, build_matrix, to_affine
from kcycle.errors import FormatError, RetriesExhaustedError, SingularBlockError
from kcycle.graph import ReducedInstance
from kcycle.linalg import AffineEntry, AffineMatrix, block_eliminate, determinant
from kcycle.solver import Algorithm, Verdict, orientation_assignments, false_negative_bound, parallel_sum

__all__ = [
    "AffineEntry",
    "AffineMatrix",
    "CompressedInstance",
    "MAX_ATTEMPTS",
    "compress",
    "deserialize",
    "evaluate_compressed",
    "serialize",
]

log = logging.getLogger(__name__)

MAX_ATTEMPTS = 16
VERSION = "v1"

_HEADER = re.compile(
    r"KCYC (?P<version>\S+) k=(?P<k>\d+) n=(?P<n>\d+) ell=(?P<ell>\d+) "
    r"mod=(?P<mod>0x[0-9A-Fa-f]+) seed=(?P<seed>[0-9a-f]{16}) detc=(?P<detc>\S+)"
)
_HEX16 = re.compile(r"[0-9a-f]{16}")


@dataclass(eq=False)
class CompressedInstance:
    k: int
    n: int
    seed: int
    matrix: AffineMatrix
    detc_folded: bool = True

    @property
    def dimension(self) -> int:
        return self.matrix.n

    def entry(self, i: int, j: int) -> AffineEntry:
        return self.matrix.entry(i, j)

    def instantiate(self, assignment) -> np.ndarray:
        return self.matrix.instantiate(assignment)

    def __eq__(self, other):
        if not isinstance(other, CompressedInstance):
            return NotImplemented
        return (
            (self.k, self.n, self.seed, self.detc_folded)
            == (other.k, other.n, other.seed, other.detc_folded)
            and self.matrix == other.matrix
        )


def compress(r: ReducedInstance, seed: int) -> CompressedInstance:
    """Compress a reduced instance (k >= 2) using randomness from ``seed``.

    If the trailing block comes out singular the evaluation is redrawn from a
    derived seed, up to MAX_ATTEMPTS times; the seed actually used is the one
    recorded in the result.
    """
    m, _ = build_matrix(r)
    s = 3 * r.k
    for attempt in range(MAX_ATTEMPTS):
        used = field.derive_seed(seed, attempt)
        affine = to_affine(apply_evaluation(m, used))
        try:
            top, detc = block_eliminate(affine, s)
        except SingularBlockError:
            log.info("singular trailing block with seed %016x; retrying", used)
            continue
        top.scale_row(0, detc)
        return CompressedInstance(r.k, r.n, used, top)
    raise RetriesExhaustedError(f"trailing block singular for {MAX_ATTEMPTS} seeds derived from {seed:016x}")


def evaluate_compressed(c: CompressedInstance, threads: int = 1) -> Verdict:
    """Sum the determinant over all 2^(k-1) orientation assignments."""
    configs = orientation_assignments(list(range(2, c.k + 1)))
    total = parallel_sum(configs, lambda a: determinant(c.matrix.instantiate(a)), threads)
    return Verdict(total != 0, Algorithm.COMPRESSED, c.seed, false_negative_bound(c.n), len(configs))


# --- serialization ----------------------------------------------------------


def _format_entry(var: int, c1: int, c0: int) -> str:
    if var:
        return f"{var}:{c1:016x}:{c0:016x}"
    return f"-:{c0:016x}"


def serialize(c: CompressedInstance) -> bytes:
    mat = c.matrix
    lines = [
        f"KCYC {VERSION} k={c.k} n={c.n:020d} ell={field.BITS} mod=0x{field.MODULUS_LOW:02X} "
        f"seed={c.seed:016x} detc={'folded' if c.detc_folded else 'separate'}"
    ]
    for i in range(mat.n):
        lines.append(" ".join(
            _format_entry(int(mat.var[i, j]), int(mat.c1[i, j]), int(mat.c0[i, j]))
            for j in range(mat.n)
        ))
    body = ("\n".join(lines) + "\n").encode("ascii")
    return body + f"crc32={zlib.crc32(body):08x}\n".encode("ascii")


def deserialize(data: bytes) -> CompressedInstance:
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError:
        raise FormatError("compressed instance is not ASCII text") from None
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError("empty input")

    trailer = lines[-1]
    if not trailer.startswith("crc32="):
        raise FormatError("missing crc32 trailer (truncated?)")
    body = ("\n".join(lines[:-1]) + "\n").encode("ascii")
    try:
        expected_crc = int(trailer[len("crc32="):], 16)
    except ValueError:
        raise FormatError("malformed crc32 trailer") from None
    if zlib.crc32(body) != expected_crc:
        raise FormatError("checksum mismatch: data corrupted")

    header = _HEADER.fullmatch(lines[0])
    if header is None:
        if lines[0].startswith("KCYC "):
            version = lines[0].split()[1]
            if version != VERSION:
                raise FormatError(f"unsupported version {version!r}")
        raise FormatError(f"malformed header: {lines[0]!r}")
    if header["version"] != VERSION:
        raise FormatError(f"unsupported version {header['version']!r}")
    if int(header["ell"]) != field.BITS or int(header["mod"], 16) != field.MODULUS_LOW:
        raise FormatError("field parameters do not match GF(2^64) mod x^64+x^4+x^3+x+1")
    if header["detc"] != "folded":
        raise FormatError(f"unsupported detc mode {header['detc']!r}")
    k, n = int(header["k"]), int(header["n"])
    if k < 2:
        raise FormatError("k must be at least 2")
    dim = 3 * k

    rows = lines[1:-1]
    if len(rows) != dim:
        raise FormatError(f"expected {dim} matrix rows, found {len(rows)}")
    c0 = np.zeros((dim, dim), dtype=np.uint64)
    c1 = np.zeros((dim, dim), dtype=np.uint64)
    var = np.zeros((dim, dim), dtype=np.int32)
    for i, row in enumerate(rows):
        entries = row.split(" ")
        if len(entries) != dim:
            raise FormatError(f"row {i + 1}: expected {dim} entries, found {len(entries)}")
        for j, entry in enumerate(entries):
            var[i, j], c1[i, j], c0[i, j] = _parse_entry(entry, k, i, j)
    return CompressedInstance(k, n, int(header["seed"], 16), AffineMatrix(c0, c1, var))


def _parse_entry(entry: str, k: int, i: int, j: int) -> tuple[int, int, int]:
    where = f"entry ({i + 1},{j + 1})"
    parts = entry.split(":")
    if len(parts) not in (2, 3):
        raise FormatError(f"{where}: malformed {entry!r}")
    for h in parts[1:]:
        if not _HEX16.fullmatch(h):
            raise FormatError(f"{where}: invalid hex {h!r}")
    if parts[0] == "-":
        c1 = int(parts[1], 16) if len(parts) == 3 else 0
        if c1:
            raise FormatError(f"{where}: constant entry with nonzero c1")
        return 0, 0, int(parts[-1], 16)
    if len(parts) != 3 or not parts[0].isdigit():
        raise FormatError(f"{where}: malformed {entry!r}")
    v = int(parts[0])
    if not 2 <= v <= k:
        raise FormatError(f"{where}: variable index {v} outside 2..{k}")
    return v, int(parts[1], 16), int(parts[2], 16)
