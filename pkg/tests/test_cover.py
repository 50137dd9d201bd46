import pytest
from hypothesis import given, settings, strategies as st

import oracles
from safedissoc import PartitionConfig, audit, detect_cover, disassociate
from safedissoc.cover import audit_cluster, chunk_itemset
from safedissoc.disassociation import Cluster, ItemChunk, RecordChunk

chunks_st = st.lists(st.frozensets(st.integers(0, 5), min_size=1, max_size=4), max_size=12)


def _chunk(sets):
    return RecordChunk(tuple(sorted(tuple(sorted(s)) for s in sets)))


def test_example_chunk_is_covered(example_dd):
    dic = example_dd.dictionary
    report = detect_cover(example_dd.clusters[0].record_chunks[0])
    assert sorted(dic.decode(report.chunk_itemset)) == ["a", "b", "c", "d"]
    assert sorted(dic.decode(report.covered)) == ["c", "d"]
    assert sorted(dic.decode(report.covering)) == ["a", "b"]
    assert report.vulnerable


def test_example_audit(example_dd):
    result = audit(example_dd)
    assert (result.vrc, result.rc) == (1, 2)
    assert [(r.cluster_index, r.chunk_index) for r in result.vulnerable] == [(0, 0)]


def test_repaired_example_audit(repaired_dd):
    result = audit(repaired_dd)
    assert (result.vrc, result.rc) == (0, 2)
    assert chunk_itemset(repaired_dd.clusters[0].record_chunks[0]) == \
        tuple(sorted(repaired_dd.dictionary.encode("a b c d")))


def test_identical_pair_chunk():
    report = detect_cover(_chunk([{0, 1}, {0, 1}]))
    assert report.covered == (0, 1) and report.covering == () and report.vulnerable


def test_triangle_chunk_not_covered():
    report = detect_cover(_chunk([{0, 1}, {1, 2}, {0, 2}]))
    assert report.covered == () and not report.vulnerable


def test_singleton_and_empty_chunks():
    assert not detect_cover(_chunk([{3}, {3}])).vulnerable
    empty = detect_cover(RecordChunk())
    assert empty.chunk_itemset == () and empty.covered == () and not empty.vulnerable


def test_single_chunk_cluster_exempt(example):
    # with k=3 the rare item e leaves, so abcd is the cluster's only record chunk
    dd = disassociate(example, PartitionConfig(k=3, m=2, delta=6))
    [report] = audit(dd).reports
    assert report.covered and not report.vulnerable
    assert audit(dd).vrc == 0


@settings(max_examples=200, deadline=None)
@given(chunks_st)
def test_detect_cover_matches_scan(sets):
    chunk = _chunk(sets)
    report = detect_cover(chunk)
    items = sorted({x for s in sets for x in s})
    full = oracles.scan_support(items, chunk.subrecords) if items else 0
    expect = tuple(z for z in items if oracles.scan_support((z,), chunk.subrecords) == full)
    assert report.covered == expect
    assert set(report.covered) | set(report.covering) == set(items)
    assert not set(report.covered) & set(report.covering)
    assert report.vulnerable == (len(items) >= 2 and bool(expect))
    if report.vulnerable:
        assert report.covered
    for z in items:
        assert full <= oracles.scan_support((z,), chunk.subrecords)
    assert detect_cover(chunk) == report


@settings(max_examples=100, deadline=None)
@given(st.lists(chunks_st, min_size=1, max_size=3))
def test_cluster_audit_exemption(list_of_sets):
    chunks = tuple(_chunk(s) for s in list_of_sets)
    n = max([1] + [len(c) for c in chunks])
    reports = audit_cluster(Cluster(chunks, ItemChunk(), n))
    assert len(reports) == len(chunks)
    if len(chunks) == 1:
        assert not reports[0].vulnerable
    else:
        assert [r.vulnerable for r in reports] == [detect_cover(c).vulnerable for c in chunks]


@pytest.mark.parametrize("delta", [3, 4, 6])
def test_audit_counts_every_chunk(example, delta):
    dd = disassociate(example, PartitionConfig(k=2, m=2, delta=delta))
    assert audit(dd).rc == dd.n_record_chunks
