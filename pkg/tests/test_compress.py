import importlib
import itertools
import random
import zlib

import numpy as np
import pytest

from _graphs import BOWTIE, C5, gnp
from kcycle.compress import (
    MAX_ATTEMPTS,
    CompressedInstance,
    compress,
    deserialize,
    evaluate_compressed,
    serialize,
)
from kcycle.encode import apply_evaluation, build_matrix, instantiate
from kcycle.errors import FormatError, RetriesExhaustedError, SingularBlockError
from kcycle.graph import Graph, reduce_terminals
from kcycle.linalg import determinant
from kcycle.solver import Algorithm, detect_2k

compress_mod = importlib.import_module("kcycle.compress")


def assignments(k):
    for bits in itertools.product((0, 1), repeat=k - 1):
        yield dict(zip(range(2, k + 1), bits))


def test_compressed_shape_and_variables():
    r = reduce_terminals(gnp(20, 0.3, random.Random(1)), (1, 5, 9, 13))
    c = compress(r, 5)
    assert c.dimension == 12 and c.k == 4 and c.n == r.n
    assert c.matrix.variables() == [2, 3, 4]
    # exactly the four tagged cells per terminal stay symbolic
    assert np.count_nonzero(c.matrix.var) == 4 * (c.k - 1)
    assert not np.any(c.matrix.var[0])
    e = c.entry(1, 7)  # terminal 2 -> twin'' (vertex k+4 = 8)
    assert e.var == 2


def test_n_equals_3k_gives_top_block_itself():
    r = reduce_terminals(Graph.from_edges(2, []), (1, 2))
    assert r.n == 6
    c = compress(r, 3)
    m = apply_evaluation(build_matrix(r)[0], 3)
    for a in assignments(2):
        assert np.array_equal(c.instantiate(a), instantiate(m, a))


def test_exact_determinant_preservation_n50_k4():
    rnd = random.Random(50)
    g = gnp(46, 0.12, rnd)
    r = reduce_terminals(g, (3, 11, 29, 40))
    assert r.n >= 50
    c = compress(r, 1234)
    m = apply_evaluation(build_matrix(r)[0], c.seed)
    for a in assignments(4):
        assert determinant(c.instantiate(a)) == determinant(instantiate(m, a))


def test_same_seed_byte_identical():
    r = reduce_terminals(gnp(15, 0.4, random.Random(2)), (1, 2, 3))
    assert serialize(compress(r, 9)) == serialize(compress(r, 9))
    assert serialize(compress(r, 9)) != serialize(compress(r, 10))


@pytest.mark.parametrize("seed", range(10))
def test_pipeline_matches_detect_2k(seed):
    rnd = random.Random(seed)
    g = gnp(14, 0.3, rnd)
    terms = tuple(rnd.sample(range(1, 15), 3))
    r = reduce_terminals(g, terms)
    c = compress(r, seed)
    v = evaluate_compressed(c)
    assert v.answer == detect_2k(apply_evaluation(build_matrix(r)[0], seed)).answer
    assert v.algorithm is Algorithm.COMPRESSED
    assert v.determinant_evaluations == 4


def test_no_instance_stays_no():
    r = reduce_terminals(BOWTIE, (1, 4))
    for seed in range(20):
        assert not evaluate_compressed(compress(r, seed)).answer


def test_k4_eight_determinants_of_12x12(monkeypatch):
    sizes = []
    real = compress_mod.determinant

    def spy(m):
        sizes.append(m.shape)
        return real(m)

    monkeypatch.setattr(compress_mod, "determinant", spy)
    c = compress(reduce_terminals(gnp(20, 0.3, random.Random(3)), (1, 2, 3, 4)), 1)
    v = evaluate_compressed(c)
    assert v.determinant_evaluations == 8
    assert sizes == [(12, 12)] * 8


def test_retry_on_singular_block(monkeypatch):
    real = compress_mod.block_eliminate
    calls = []

    def flaky(m, s):
        calls.append(1)
        if len(calls) < 3:
            raise SingularBlockError("forced")
        return real(m, s)

    monkeypatch.setattr(compress_mod, "block_eliminate", flaky)
    r = reduce_terminals(C5, (1, 3))
    c = compress(r, 77)
    assert len(calls) == 3
    assert c.seed != 77
    m = apply_evaluation(build_matrix(r)[0], c.seed)
    for a in assignments(2):
        assert determinant(c.instantiate(a)) == determinant(instantiate(m, a))


def test_retries_exhausted(monkeypatch):
    def always(m, s):
        raise SingularBlockError("forced")

    monkeypatch.setattr(compress_mod, "block_eliminate", always)
    with pytest.raises(RetriesExhaustedError):
        compress(reduce_terminals(C5, (1, 3)), 1)
    assert MAX_ATTEMPTS == 16


# --- serialization ----------------------------------------------------------


def sample_instance(seed=4, k=3):
    rnd = random.Random(seed)
    g = gnp(16, 0.3, rnd)
    return compress(reduce_terminals(g, tuple(rnd.sample(range(1, 17), k))), seed)


@pytest.mark.parametrize("seed", range(8))
def test_roundtrip(seed):
    c = sample_instance(seed, k=2 + seed % 4)
    assert deserialize(serialize(c)) == c


def test_format_layout():
    c = sample_instance()
    lines = serialize(c).decode().splitlines()
    assert lines[0] == f"KCYC v1 k=3 n={c.n:020d} ell=64 mod=0x1B seed={c.seed:016x} detc=folded"
    assert len(lines) == 1 + 9 + 1
    assert lines[-1].startswith("crc32=")
    for row in lines[1:-1]:
        entries = row.split(" ")
        assert len(entries) == 9
        for e in entries:
            head, *coeffs = e.split(":")
            assert head == "-" and len(coeffs) == 1 or head in "23" and len(coeffs) == 2
            assert all(len(x) == 16 and x == x.lower() for x in coeffs)


def test_size_depends_only_on_k():
    rnd = random.Random(6)
    small = compress(reduce_terminals(gnp(50, 0.1, rnd), tuple(range(1, 9))), 1)
    large = compress(reduce_terminals(gnp(500, 0.01, rnd), tuple(range(1, 9))), 1)
    a, b = serialize(small), serialize(large)
    assert a.index(b"\n") == b.index(b"\n")  # n is a fixed-width header field
    assert len(a) == len(b)
    assert len(b) <= 20 * 1024


def test_accepts_long_form_constant_entries():
    c = sample_instance()
    body = body_of(c).replace("-:", "-:" + "0" * 16 + ":")
    assert deserialize(reseal(body)) == c


def reseal(body: str) -> bytes:
    return (body + f"crc32={zlib.crc32(body.encode()):08x}\n").encode()


def body_of(c: CompressedInstance) -> str:
    text = serialize(c).decode()
    return text[: text.rindex("crc32=")]


def test_corrupt_hex_digit_detected():
    data = bytearray(serialize(sample_instance()))
    pos = data.index(b"-:") + 5
    data[pos] = ord("0") if data[pos] != ord("0") else ord("1")
    with pytest.raises(FormatError, match="checksum"):
        deserialize(bytes(data))


def test_invalid_hex_rejected():
    body = body_of(sample_instance())
    pos = body.index("-:") + 5
    with pytest.raises(FormatError, match="invalid hex"):
        deserialize(reseal(body[:pos] + "g" + body[pos + 1:]))


def test_truncation_rejected():
    data = serialize(sample_instance())
    for cut in (len(data) // 2, len(data) - 5, 10):
        with pytest.raises(FormatError):
            deserialize(data[:cut])
    body = body_of(sample_instance())
    with pytest.raises(FormatError, match="matrix rows"):
        deserialize(reseal(body.rsplit("\n", 2)[0] + "\n"))


def test_version_mismatch():
    body = body_of(sample_instance()).replace("KCYC v1", "KCYC v2", 1)
    with pytest.raises(FormatError, match="version"):
        deserialize(reseal(body))


def test_variable_index_out_of_range():
    body = body_of(sample_instance())
    i = body.index(" 2:") + 1
    with pytest.raises(FormatError, match="outside"):
        deserialize(reseal(body[:i] + "7" + body[i + 1:]))
    with pytest.raises(FormatError, match="outside"):
        deserialize(reseal(body[:i] + "1" + body[i + 1:]))


def test_constant_entry_with_nonzero_c1():
    body = body_of(sample_instance())
    body = body.replace("-:", "-:" + "0" * 15 + "1:", 1)
    with pytest.raises(FormatError, match="nonzero c1"):
        deserialize(reseal(body))


def test_wrong_field_parameters():
    body = body_of(sample_instance()).replace("mod=0x1B", "mod=0x87", 1)
    with pytest.raises(FormatError, match="field"):
        deserialize(reseal(body))


def test_unpadded_n_accepted():
    c = sample_instance()
    body = body_of(c).replace(f"n={c.n:020d}", f"n={c.n}", 1)
    assert deserialize(reseal(body)) == c


def test_non_ascii_and_empty():
    with pytest.raises(FormatError):
        deserialize("KCYC é".encode())
    with pytest.raises(FormatError):
        deserialize(b"")
