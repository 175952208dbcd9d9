"""Acceptance suite. Each test records one PASS/FAIL line shown in the terminal summary."""

import itertools
import os
import random
import time

import pytest

from _graphs import gnp
from kcycle.cli import main
from kcycle.compress import compress, evaluate_compressed, serialize
from kcycle.encode import apply_evaluation, build_matrix, build_tutte_matrix, instantiate
from kcycle.graph import Graph, reduce_terminals
from kcycle.linalg import determinant
from kcycle.oracle import SmallPolynomial, brute_kcycle, brute_matching, lemma_polypie_check
from kcycle.solver import detect_2k, detect_4k, solve

nx = pytest.importorskip("networkx")

SEEDS_PER_INSTANCE = 20


def evaluated(g, terms, seed):
    m, t = build_matrix(reduce_terminals(g, terms))
    return apply_evaluation(m, seed), t


def oracle_instances(want: bool, count: int, rnd: random.Random):
    """Random G(n<=12, p) instances with 2 <= k <= 4 whose oracle answer is `want`."""
    found = []
    while len(found) < count:
        n = rnd.randint(5, 12)
        g = gnp(n, rnd.choice([0.2, 0.3, 0.5]), rnd)
        terms = tuple(sorted(rnd.sample(range(1, n + 1), rnd.randint(2, 4))))
        if brute_kcycle(g, terms) == want:
            found.append((g, terms))
    return found


def connected_six_vertex_graphs():
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == 6 and nx.is_connected(h):
            yield Graph.from_edges(6, [(u + 1, v + 1) for u, v in h.edges()])


def test_c1_exhaustive_oracle_equivalence(record_criterion):
    graphs = list(connected_six_vertex_graphs())
    rnd = random.Random(1)
    total = bad_yes = missed = 0
    for g in graphs:
        for size in (2, 3):
            for terms in itertools.combinations(range(1, 7), size):
                truth = brute_kcycle(g, terms)
                got = solve(g, terms, "2k", seed=rnd.getrandbits(64)).answer
                total += 1
                bad_yes += got and not truth
                missed += truth and not got
    ok = len(graphs) == 112 and bad_yes == 0 and missed == 0
    record_criterion("1 oracle equivalence, connected 6-vertex graphs", ok,
                     f"{len(graphs)} graphs, {total} instances, NO->YES {bad_yes}, YES->NO {missed}")
    assert ok


def test_c2_one_sided_error(record_criterion):
    instances = oracle_instances(False, 500, random.Random(2))
    errors = 0
    for idx, (g, terms) in enumerate(instances):
        for s in range(SEEDS_PER_INSTANCE):
            m, t = evaluated(g, terms, idx * 1000 + s)
            errors += detect_2k(m).answer + detect_4k(m, t).answer
    record_criterion("2 one-sided error on NO instances", errors == 0,
                     f"500 instances x {SEEDS_PER_INSTANCE} seeds x 2 detectors, {errors} YES answers")
    assert errors == 0


def test_c3_false_negative_statistics(record_criterion):
    instances = oracle_instances(True, 500, random.Random(3))
    misses = 0
    for idx, (g, terms) in enumerate(instances):
        for s in range(SEEDS_PER_INSTANCE):
            misses += not solve(g, terms, "2k", seed=idx * 1000 + s).answer
    trials = 500 * SEEDS_PER_INSTANCE
    record_criterion("3 false negatives on YES instances", misses == 0, f"{misses}/{trials} trials")
    assert misses == 0


def test_c4_cross_algorithm_agreement(record_criterion):
    rnd = random.Random(4)
    disagree = bad_counts = 0
    for _ in range(200):
        n = rnd.randint(6, 14)
        g = gnp(n, rnd.choice([0.2, 0.3, 0.5]), rnd)
        k = rnd.randint(2, 5)
        terms = tuple(rnd.sample(range(1, n + 1), k))
        m, t = evaluated(g, terms, rnd.getrandbits(64))
        v4, v2 = detect_4k(m, t), detect_2k(m)
        disagree += v4.answer != v2.answer
        bad_counts += v4.determinant_evaluations != 4**k or v2.determinant_evaluations != 2 ** (k - 1)
    ok = disagree == 0 and bad_counts == 0
    record_criterion("4 detect_2k / detect_4k agreement and evaluation counts", ok,
                     f"200 instances, {disagree} disagreements, {bad_counts} wrong counters")
    assert ok


def test_c5_compression_exactness(record_criterion):
    rnd = random.Random(5)
    det_mismatch = verdict_mismatch = checked = 0
    for _ in range(100):
        n = rnd.randint(6, 60)
        k = rnd.randint(2, 6)
        g = gnp(n, rnd.uniform(1.5, 4.0) / n, rnd)
        r = reduce_terminals(g, tuple(rnd.sample(range(1, n + 1), k)))
        c = compress(r, rnd.getrandbits(64))
        m = apply_evaluation(build_matrix(r)[0], c.seed)
        for bits in itertools.product((0, 1), repeat=k - 1):
            a = dict(zip(range(2, k + 1), bits))
            det_mismatch += determinant(c.instantiate(a)) != determinant(instantiate(m, a))
            checked += 1
        verdict_mismatch += evaluate_compressed(c).answer != detect_2k(m).answer
    ok = det_mismatch == 0 and verdict_mismatch == 0
    record_criterion("5 compression preserves determinants exactly", ok,
                     f"{checked} assignments, {det_mismatch} det mismatches, {verdict_mismatch} verdict mismatches")
    assert ok


def test_c6_compression_size(record_criterion):
    rnd = random.Random(6)
    k = 8
    blobs = []
    for n, p in ((50, 0.1), (500, 0.01)):
        g = gnp(n, p, rnd)
        blobs.append(serialize(compress(reduce_terminals(g, tuple(range(1, k + 1))), 99)))
    # values differ with the instance, so compare total length and field layout
    same_len = len(blobs[0]) == len(blobs[1])
    same_layout = [len(x) for x in blobs[0].split(b" ")] == [len(x) for x in blobs[1].split(b" ")]
    size = max(len(b) for b in blobs)
    ok = size <= 20 * 1024 and same_len and same_layout
    record_criterion("6 compressed size for k=8 independent of n", ok,
                     f"sizes {len(blobs[0])} / {len(blobs[1])} bytes (limit 20480), layout equal {same_layout}")
    assert ok


def test_c7_tutte_matching(record_criterion):
    rnd = random.Random(7)
    false_pos = missed = matchable = 0
    for _ in range(500):
        n = rnd.randint(1, 10)
        g = gnp(n, rnd.choice([0.2, 0.3, 0.5, 0.7]), rnd)
        nonzero = determinant(apply_evaluation(build_tutte_matrix(g), rnd.getrandbits(64)).values) != 0
        truth = brute_matching(g)
        matchable += truth
        false_pos += nonzero and not truth
        missed += truth and not nonzero
    ok = false_pos == 0 and missed == 0
    record_criterion("7 Tutte determinant detects perfect matchings", ok,
                     f"500 graphs ({matchable} matchable), {false_pos} false nonzero, {missed} missed")
    assert ok


def random_polynomial(rnd, nvars, nterms):
    terms = {}
    for _ in range(nterms):
        mono = tuple(rnd.choice([0, 0, 1, 1, 2, 3]) for _ in range(nvars))
        terms[mono] = rnd.getrandbits(64) or 1
    return SmallPolynomial(nvars, terms)


def test_c8_inclusion_exclusion_lemma(record_criterion):
    rnd = random.Random(8)
    failures = 0
    for _ in range(1000):
        nvars = rnd.randint(1, 6)
        p = random_polynomial(rnd, nvars, rnd.randint(0, 25))
        t = rnd.sample(range(nvars), rnd.randint(0, nvars))
        failures += not lemma_polypie_check(p, t)
    record_criterion("8 inclusion-exclusion lemma on random polynomials", failures == 0,
                     f"1000 polynomials, {failures} failures")
    assert failures == 0


def performance_instance():
    rnd = random.Random(9)
    n, k = 100, 12
    # a Hamiltonian cycle plus chords keeps the instance a YES instance
    edges = {(i, i % n + 1) for i in range(1, n + 1)}
    while len(edges) < 220:
        u, v = sorted(rnd.sample(range(1, n + 1), 2))
        edges.add((u, v))
    return Graph.from_edges(n, edges), tuple(sorted(rnd.sample(range(1, n + 1), k)))


def test_c9_performance_single_thread(record_criterion):
    g, terms = performance_instance()
    start = time.perf_counter()
    v = solve(g, terms, "2k", seed=2024, threads=1)
    elapsed = time.perf_counter() - start
    ok = elapsed <= 120 and v.answer and v.determinant_evaluations == 2048
    record_criterion("9 performance n=100 k=12 single thread", ok,
                     f"{elapsed:.2f} s for {v.determinant_evaluations} determinants, limit 120 s")
    assert ok


@pytest.mark.xfail((os.cpu_count() or 1) < 8, strict=False,
                   reason="speedup needs 8 physical cores; this host has fewer")
def test_c9_parallel_speedup(record_criterion):
    g, terms = performance_instance()
    start = time.perf_counter()
    v1 = solve(g, terms, "2k", seed=2024, threads=1)
    t1 = time.perf_counter() - start
    start = time.perf_counter()
    v8 = solve(g, terms, "2k", seed=2024, threads=8)
    t8 = time.perf_counter() - start
    speedup = t1 / t8
    identical = v1 == v8
    ok = identical and speedup >= 6
    record_criterion("9 parallel speedup at 8 workers", ok,
                     f"speedup {speedup:.2f}x (need >= 6), verdicts identical {identical}, "
                     f"cpu_count {os.cpu_count()}")
    assert identical
    assert speedup >= 6


def test_c10_determinism_across_threads(tmp_path, capsys, record_criterion):
    inst = tmp_path / "g.txt"
    main(["gen", "-n", "20", "-p", "0.25", "-k", "5", "--seed", "10", "--out", str(inst)])
    commands = [
        ["solve", str(inst), "--seed", "11", "--algorithm", "2k"],
        ["solve", str(inst), "--seed", "11", "--algorithm", "4k"],
        ["compress", str(inst), "--seed", "11", "--out", "{out}"],
        ["eval", "{ref}"],
    ]
    capsys.readouterr()
    main(["compress", str(inst), "--seed", "11", "--out", str(tmp_path / "ref.kc")])
    capsys.readouterr()
    differing = []
    for cmd in commands:
        outputs = set()
        for threads in (1, 2, 4, 8):
            out_file = tmp_path / f"c{threads}.kc"
            argv = [a.format(out=out_file, ref=tmp_path / "ref.kc") for a in cmd] + ["--threads", str(threads)]
            code = main(argv)
            stdout = capsys.readouterr().out.replace(str(out_file), "<out>")
            blob = out_file.read_bytes() if cmd[0] == "compress" else b""
            outputs.add((code, stdout, blob))
        if len(outputs) != 1:
            differing.append(cmd[0])
    ok = not differing
    record_criterion("10 byte-identical output across thread counts", ok,
                     f"4 commands x threads 1/2/4/8, differing: {differing or 'none'}")
    assert ok
