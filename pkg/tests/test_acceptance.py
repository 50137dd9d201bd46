"""Acceptance suite: one test per criterion, each reporting a PASS/FAIL line.

The verdicts are printed in the "acceptance criteria" section of the pytest
terminal summary.
"""
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

import oracles
from acceptance_log import criterion
from figures import (DISPLAYED, EXAMPLE_CHUNK1, EXAMPLE_CHUNK2, REPAIRED_CHUNK1, chunk_labels,
                     norm)
from safedissoc import (LimitExceededError, PartitionConfig, audit, attack_audit,
                        disassociate, enumerate_reconstructions,
                        find_km_violation, is_km_anonymous, item_supports, partial_suppress, pem,
                        protect, rae_pair, rlm, support, synth_generate, verify_safe)
from safedissoc.experiments import format_table, sweep
from safedissoc.io import format_dataset, parse_disassociated, parse_transactions

ROOT = Path(__file__).resolve().parent.parent
ARTIFACTS = ROOT / "artifacts"
PINNED = ("a b", "d c")
SWEEP_K = list(range(2, 7))
SWEEP_DELTA = list(range(10, 61, 10))


def _labels(dic, itemset):
    return "".join(sorted(dic.decode(itemset)))


def _records(dic, rows):
    return tuple(sorted(tuple(sorted(dic.encode(r))) for r in rows))


@pytest.fixture(scope="module")
def corpus():
    # via the text format, so ids match what the CLI sees for the same file
    return parse_transactions(format_dataset(synth_generate(500, 10**4, 1.0, 10, 0)))


def test_criterion_1_example_disassociation(example):
    with criterion(1, "example disassociation matches, runtime < 1 s") as log:
        t0 = time.perf_counter()
        dd = disassociate(example, PartitionConfig(2, 2, 6))
        seconds = time.perf_counter() - t0
        assert len(dd.clusters) == 1
        cluster = dd.clusters[0]
        dic = dd.dictionary
        domains = [_labels(dic, ch.itemset) for ch in cluster.record_chunks]
        assert domains == ["abcd", "e"]
        assert chunk_labels(dd, 0, 0) == norm(EXAMPLE_CHUNK1)
        assert chunk_labels(dd, 0, 1) == norm(EXAMPLE_CHUNK2)
        assert cluster.item_chunk.counts == ()
        assert cluster.n_records == 6
        assert seconds < 1.0
        log.append(f"domains {domains}, {seconds * 1000:.1f} ms")


def test_criterion_2_cover_detection(example_dd):
    with criterion(2, "audit flags exactly the first chunk, PEM = 0.5") as log:
        result = audit(example_dd)
        dic = example_dd.dictionary
        flagged = [r for r in result.reports if r.vulnerable]
        assert len(flagged) == 1
        r = flagged[0]
        assert (r.cluster_index, r.chunk_index) == (0, 0)
        assert _labels(dic, r.covered) == "cd"
        assert _labels(dic, r.covering) == "ab"
        assert (result.rc, result.vrc) == (2, 1)
        assert pem(result) == 0.5
        log.append(f"covered {{c,d}} by {{a,b}}, rc={result.rc} vrc={result.vrc}, PEM=0.5")


def test_criterion_3_pinned_partial_suppression(example, example_dd):
    with criterion(3, "pinned partial suppression gives the repaired chunk, vRC = 0, RLM = 0") \
            as log:
        dic = example_dd.dictionary
        cfg = PartitionConfig(2, 2, 8)
        chunk = example_dd.clusters[0].record_chunks[0]
        pairs = [tuple(dic.id(x) for x in p.split()) for p in PINNED]
        out = partial_suppress(chunk, cfg, pairs=pairs)
        assert sorted(tuple(sorted(dic.decode(s))) for s in out.subrecords) == norm(REPAIRED_CHUNK1)
        assert len(out) == 8
        assert out.item_supports() == chunk.item_supports()
        # the seeded repair path lands on the same partition
        dd, safe, report = protect(example, PartitionConfig(2, 2, 8, seed=20))
        assert chunk_labels(safe, 0, 0) == norm(REPAIRED_CHUNK1)
        assert [sorted(dic.decode(g)) for g in report.plans[0].ghosts] == [["a", "d"], ["b", "c"]]
        assert audit(safe).vrc == 0
        assert rlm(dd, safe) == 0
        log.append("8 sub-records, ghosts {a,d} {b,c}, supports unchanged, vRC=0, RLM=0")


def test_criterion_4_reconstruction_oracle(example_dd, repaired_dd):
    with criterion(4, "reconstruction count equals brute force; displayed ones enumerated") as log:
        cluster = repaired_dd.clusters[0]
        chunks = [list(c.subrecords) for c in cluster.record_chunks]
        brute = oracles.reconstructions(chunks, cluster.n_slots, pin_first=True)
        got = {tuple(sorted(r.dataset.records)) for r in enumerate_reconstructions(repaired_dd)}
        assert got == brute
        consistent = enumerate_reconstructions(repaired_dd, consistent=True)
        dic = example_dd.dictionary
        example_recons = {tuple(sorted(r.dataset.records))
                          for r in enumerate_reconstructions(example_dd)}
        for rows in DISPLAYED:
            assert _records(dic, rows) in example_recons
        log.append(f"brute force {len(brute)} = enumerated {len(got)}; "
                   f"re-disassociation-consistent {len(consistent)} (expected 15); "
                   f"all {len(DISPLAYED)} displayed reconstructions found")


def test_criterion_5_attack(example_dd, repaired_dd):
    with criterion(5, "background {d,e}: breach before repair, no certain items after") as log:
        dic = example_dd.dictionary
        before = attack_audit(example_dd, "d e", k=2)
        assert before.breach
        assert _labels(dic, before.certain_items) == "abc"
        after = attack_audit(repaired_dd, "d e", k=2)
        assert after.certain_items == ()
        cands = {_labels(dic, r) for r in after.candidate_records}
        assert {"cde", "ade", "abcde"} <= cands
        assert not after.breach
        log.append(f"before: certain {{a,b,c}}; after: {len(cands)} candidates, none certain")


def _case(rng):
    n_items = int(rng.integers(3, 13))
    n = int(rng.integers(2, 61))
    k = int(rng.choice([2, 3]))
    m = int(rng.choice([2, 3]))
    delta = int(rng.integers(8, 17))
    ds = synth_generate(n_items, n, float(rng.choice([0.0, 0.5, 1.0, 1.5])),
                        int(rng.integers(2, 7)), int(rng.integers(0, 2**32)))
    return ds, PartitionConfig(k, m, delta, int(rng.integers(0, 2**32)))


def _replay_plans(dd, safe, report, cfg):
    """Re-apply every plan, checking singletons and pair drops; returns partial count."""
    chunks = {ci: list(c.record_chunks) for ci, c in enumerate(dd.clusters)}
    partial = 0
    for plan in report.plans:
        ci, j = plan.target
        if plan.mode == "full":
            del chunks[ci][j]
            continue
        before = chunks[ci][j]
        after = partial_suppress(before, cfg, pairs=plan.pair_partition)
        b, a = before.subrecords, after.subrecords
        for x in before.itemset:
            assert oracles.scan_support((x,), a) == oracles.scan_support((x,), b)
        for pair, drop in oracles.ghost_pair_drops(plan.pair_partition).items():
            assert oracles.scan_support(pair, a) == oracles.scan_support(pair, b) - drop
        chunks[ci][j] = after
        partial += 1
    assert [tuple(chunks[ci]) for ci in sorted(chunks)] == [c.record_chunks for c in safe.clusters]
    return partial


def test_criterion_6_property_suite():
    with criterion(6, "200 random cases: k^m chunks, vRC = 0, ghost pair drops, verify_safe") \
            as log:
        rng = np.random.default_rng(2024)
        cases = feasible = partial = full = 0
        for _ in range(200):
            ds, cfg = _case(rng)
            dd, safe, report = protect(ds, cfg)
            for cluster in dd.clusters:
                for ch in cluster.record_chunks:
                    assert is_km_anonymous(ch.subrecords, cfg.k, cfg.m)
                    assert oracles.km_anonymous(ch.subrecords, cfg.k, cfg.m)
            assert audit(safe).vrc == 0
            partial += _replay_plans(dd, safe, report, cfg)
            full += report.chunks_fully_suppressed
            try:
                assert verify_safe(safe, cfg, limit=10**6)
                feasible += 1
            except LimitExceededError:
                pass
            cases += 1
        assert cases == 200 and partial > 0
        log.append(f"{cases} cases, {partial} partial and {full} full repairs replayed, "
                   f"verify_safe true on all {feasible} enumerable at limit 10^6, "
                   f"{cases - feasible} over the limit")


def test_criterion_7_metrics(example, example_dd):
    with criterion(7, "RAE hand values; estimator within 3 SE of 10^4 samples") as log:
        enc = example.dictionary.id
        ae = rae_pair(enc("a"), enc("e"), example, example_dd)
        de = rae_pair(enc("d"), enc("e"), example, example_dd)
        assert ae == 0
        assert abs(de - 2 / 7) <= 1e-12
        n_pairs, worst = oracles.within_3se(example_dd, 10_000)
        log.append(f"RAE(a,e)={ae}, RAE(d,e)={de:.15f}, {n_pairs} pairs, worst |z|={worst:.2f}")


@pytest.mark.slow
def test_criterion_8_synthetic_sweep(corpus):
    with criterion(8, "synthetic sweep: PEM non-increasing in k, non-decreasing in delta") as log:
        by_k, by_delta = sweep(corpus, SWEEP_K, SWEEP_DELTA, m=2, fixed_k=3, fixed_delta=30, seed=0)
        ARTIFACTS.mkdir(exist_ok=True)
        text = (format_table(by_k, "vary k (m=2, delta=30)") + "\n"
                + format_table(by_delta, "vary delta (k=3, m=2)"))
        (ARTIFACTS / "synthetic_sweep.txt").write_text(text, encoding="utf-8")
        pem_k = [r.pem for r in by_k]
        pem_d = [r.pem for r in by_delta]
        assert all(a >= b for a, b in zip(pem_k, pem_k[1:])), pem_k
        assert all(a <= b for a, b in zip(pem_d, pem_d[1:])), pem_d
        log.append("PEM vs k " + " ".join(f"{v:.4f}" for v in pem_k)
                   + "; vs delta " + " ".join(f"{v:.4f}" for v in pem_d)
                   + "; tables in artifacts/synthetic_sweep.txt")


@pytest.mark.slow
def test_criterion_9_performance(corpus, tmp_path):
    with criterion(9, "CLI protect on the sweep corpus and support counting at scale < 60 s") \
            as log:
        src = tmp_path / "corpus.txt"
        src.write_text(format_dataset(corpus), encoding="utf-8")
        out, rep = tmp_path / "safe.txt", tmp_path / "report.txt"
        t0 = time.perf_counter()
        proc = subprocess.run([sys.executable, "-m", "safedissoc", "protect", str(src),
                               "--k", "3", "--m", "2", "--delta", "30", "--seed", "0",
                               "-o", str(out), "--report", str(rep)],
                              capture_output=True, text=True)
        protect_s = time.perf_counter() - t0
        assert proc.returncode == 0, proc.stderr
        assert audit(parse_disassociated(out.read_text(encoding="utf-8"))).vrc == 0
        assert protect_s < 60

        big = synth_generate(3000, 10**5, 1.0, 10, 0)
        pair_rng = np.random.default_rng(0)
        pairs = [tuple(sorted(p)) for p in
                 (pair_rng.choice(3000, size=2, replace=False) for _ in range(10_000))]
        t0 = time.perf_counter()
        singles = item_supports(big)
        pair_sups = [support(p, big) for p in pairs]
        witness = find_km_violation(big, 2, 2)
        count_s = time.perf_counter() - t0
        assert len(big) == 10**5 and len(singles) == 3000
        for p, s in list(zip(pairs, pair_sups))[:3]:
            assert s == oracles.scan_support(p, big.records)
        assert witness is not None and 0 < oracles.scan_support(witness, big.records) < 2
        assert count_s < 60
        log.append(f"protect {protect_s:.1f} s; 10^5 x 3000 item supports, 10^4 pair "
                   f"supports and a 2^2 check in {count_s:.1f} s")
