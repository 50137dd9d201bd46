import os

import pytest
from hypothesis import given, settings, strategies as st

from figures import EXAMPLE_DISSOC, EXAMPLE_TEXT
from safedissoc import (Dataset, FormatError, PartitionConfig, disassociate, parse_dataset,
                        parse_disassociated, protect, read_disassociated, write_dataset,
                        write_disassociated)
from safedissoc.io import format_dataset, format_disassociated, parse_transactions



def test_parse_dataset_file(tmp_path, example):
    path = tmp_path / "t.txt"
    path.write_text(EXAMPLE_TEXT)
    assert parse_dataset(path) == example
    assert parse_dataset(path).dictionary == example.dictionary


def test_parse_collapses_and_skips():
    assert parse_transactions("x x x\n").records == ((0,),)
    ds = parse_transactions("a b\n\n   \nb\n")
    assert ds.n == 2
    assert parse_transactions("").n == 0


def test_missing_file(tmp_path):
    with pytest.raises(OSError):
        parse_dataset(tmp_path / "nope.txt")


def test_example_serialization(example_dd):
    text = format_disassociated(example_dd)
    assert text == EXAMPLE_DISSOC
    lines = text.splitlines()
    assert "CLUSTER 0 n=6" in lines
    r0, r1, t = lines.index("RCHUNK 0"), lines.index("RCHUNK 1"), lines.index("TCHUNK")
    assert (r1 - r0 - 1, t - r1 - 1, len(lines) - t - 1) == (6, 2, 0)


def test_round_trip_is_byte_exact(tmp_path, example_dd):
    path = tmp_path / "t.dis"
    write_disassociated(example_dd, path)
    back = read_disassociated(path)
    assert back == example_dd
    assert format_disassociated(back) == path.read_text()


def test_items_line_optional(example_dd):
    text = EXAMPLE_DISSOC.replace("ITEMS a e b c d\n", "")
    dd = parse_disassociated(text)
    assert dd.dictionary.labels == ("a", "b", "c", "d", "e")
    assert [len(c) for c in dd.clusters[0].record_chunks] == [6, 2]


@pytest.mark.parametrize("text, lineno", [
    ("", 1),
    ("DISSOC 1 k=2 m=2\n", 1),
    ("DISOC 1 k=2 m=2 delta=6 seed=0\n", 1),
    ("DISSOC 2 k=2 m=2 delta=6 seed=0\n", 1),
    ("DISSOC 1 k=3 m=2 delta=2 seed=0\n", 1),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 1 n=2\n", 2),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 0 n=2\nRCHUNK 1\n", 3),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 0 n=2\nTCHUNK\nx 0\n", 4),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 0 n=2\nTCHUNK\nx 1\nx 1\n", 5),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 0 n=2\nTCHUNK\nRCHUNK 0\n", 4),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nITEMS a\nCLUSTER 0 n=1\nRCHUNK 0\nb\n", 5),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 0 n=1\nRCHUNK 0\na a\n", 4),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nstray\n", 2),
    ("DISSOC 1 k=2 m=2 delta=6 seed=0\nCLUSTER 0 n=0\n", 2),
])
def test_parse_errors_name_the_line(text, lineno):
    with pytest.raises(FormatError) as err:
        parse_disassociated(text)
    assert err.value.lineno == lineno
    assert str(err.value).startswith(f"line {lineno}:")


def test_atomic_write_leaves_no_temp(tmp_path, example):
    path = tmp_path / "out.txt"
    write_dataset(example, path)
    write_dataset(example, path)
    assert os.listdir(tmp_path) == ["out.txt"]
    assert path.read_text() == format_dataset(example)


datasets_st = st.lists(st.frozensets(st.sampled_from(["a", "b", "c", "d", "e", "f", "1", "x_y"]),
                                     min_size=1, max_size=5), max_size=30)


@settings(max_examples=100, deadline=None)
@given(datasets_st, st.integers(1, 3), st.integers(1, 3), st.integers(3, 8), st.integers(0, 2**64 - 1))
def test_round_trip_property(sets, k, m, delta, seed):
    ds = Dataset.from_transactions(sorted(s) for s in sets)
    assert parse_transactions(format_dataset(ds)) == ds
    _, safe, _ = protect(ds, PartitionConfig(k, m, max(k, delta), seed))
    text = format_disassociated(safe)
    back = parse_disassociated(text)
    assert back == safe
    assert format_disassociated(back) == text


def test_repaired_round_trip(repaired_dd):
    assert parse_disassociated(format_disassociated(repaired_dd)) == repaired_dd


def test_item_chunk_serialization(example):
    dd = disassociate(example, PartitionConfig(k=3, m=2, delta=6))
    text = format_disassociated(dd)
    assert text.endswith("TCHUNK\ne 2\n")
    assert parse_disassociated(text) == dd
