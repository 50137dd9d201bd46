"""Reading and writing transaction files and disassociated datasets.

Transaction files hold one record per line, items separated by whitespace.
Disassociated datasets use a line-oriented text format::

    DISSOC 1 k=<k> m=<m> delta=<delta> seed=<seed>
    ITEMS <label> <label> ...          (optional; dictionary in id order)
    CLUSTER <i> n=<n_records>
    RCHUNK <j>
    <label> <label> ...                (one sub-record per line, ids ascending)
    TCHUNK
    <label> <multiplicity>             (one line per rare item, ids ascending)

Without an ``ITEMS`` line, ids are assigned in first-appearance order.
"""
from __future__ import annotations

import os
import re
import tempfile
from pathlib import Path

from .disassociation import Cluster, DisassociatedDataset, ItemChunk, PartitionConfig, RecordChunk
from .exceptions import FormatError, InvalidParameterError
from .model import Dataset, ItemDictionary

FORMAT_VERSION = 1
_HEADER = re.compile(r"^DISSOC (\d+) k=(\d+) m=(\d+) delta=(\d+) seed=(\d+)$")
_CLUSTER = re.compile(r"^CLUSTER (\d+) n=(\d+)$")
_RCHUNK = re.compile(r"^RCHUNK (\d+)$")


def atomic_write(path, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def parse_transactions(text: str) -> Dataset:
    return Dataset.from_transactions(line.split() for line in text.splitlines())


def parse_dataset(path) -> Dataset:
    return parse_transactions(Path(path).read_text(encoding="utf-8"))


def format_dataset(dataset: Dataset) -> str:
    return "".join(" ".join(dataset.dictionary.decode(r)) + "\n" for r in dataset.records)


def write_dataset(dataset: Dataset, path) -> None:
    atomic_write(path, format_dataset(dataset))


def looks_disassociated(text: str) -> bool:
    return text.startswith("DISSOC ")


def format_disassociated(dd: DisassociatedDataset) -> str:
    cfg, dic = dd.config, dd.dictionary
    lines = [f"DISSOC {FORMAT_VERSION} k={cfg.k} m={cfg.m} delta={cfg.delta} seed={cfg.seed}",
             " ".join(["ITEMS", *dic.labels])]
    for ci, cluster in enumerate(dd.clusters):
        lines.append(f"CLUSTER {ci} n={cluster.n_records}")
        for cj, chunk in enumerate(cluster.record_chunks):
            lines.append(f"RCHUNK {cj}")
            lines.extend(" ".join(dic.decode(sub)) for sub in chunk.subrecords)
        lines.append("TCHUNK")
        lines.extend(f"{dic.label(x)} {c}" for x, c in cluster.item_chunk.counts)
    return "\n".join(lines) + "\n"


def write_disassociated(dd: DisassociatedDataset, path) -> None:
    atomic_write(path, format_disassociated(dd))


def parse_disassociated(text: str) -> DisassociatedDataset:
    lines = text.splitlines()
    if not lines:
        raise FormatError("empty file, expected a DISSOC header", 1)
    head = _HEADER.match(lines[0])
    if head is None:
        if lines[0].startswith("DISSOC "):
            raise FormatError(f"malformed header {lines[0]!r}", 1)
        raise FormatError("missing DISSOC header", 1)
    version, k, m, delta, seed = (int(g) for g in head.groups())
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}", 1)
    try:
        config = PartitionConfig(k, m, delta, seed)
    except InvalidParameterError as exc:
        raise FormatError(str(exc), 1) from None

    pos = 1
    fixed_items = False
    dictionary = ItemDictionary()
    if pos < len(lines) and (lines[pos] == "ITEMS" or lines[pos].startswith("ITEMS ")):
        try:
            dictionary = ItemDictionary(lines[pos].split()[1:])
        except InvalidParameterError as exc:
            raise FormatError(str(exc), pos + 1) from None
        fixed_items = True
        pos += 1

    def item_id(label, lineno):
        if fixed_items:
            if label not in dictionary:
                raise FormatError(f"item {label!r} missing from the ITEMS line", lineno)
            return dictionary.id(label)
        return dictionary.add(label)

    clusters = []
    cluster_n = None
    chunks: list[list[tuple[int, ...]]] = []
    rare: dict[int, int] = {}
    section = None  # "R" or "T"

    def close_cluster():
        clusters.append(Cluster(tuple(RecordChunk(tuple(c)) for c in chunks),
                                ItemChunk.from_mapping(rare), cluster_n))

    for idx in range(pos, len(lines)):
        lineno, line = idx + 1, lines[idx]
        if (mc := _CLUSTER.match(line)) is not None:
            if cluster_n is not None:
                close_cluster()
            if int(mc.group(1)) != len(clusters):
                raise FormatError(f"expected CLUSTER {len(clusters)}", lineno)
            cluster_n = int(mc.group(2))
            if cluster_n < 1:
                raise FormatError("cluster must hold at least one record", lineno)
            chunks, rare, section = [], {}, None
        elif (mr := _RCHUNK.match(line)) is not None:
            if cluster_n is None or section == "T":
                raise FormatError("RCHUNK outside a cluster or after TCHUNK", lineno)
            if int(mr.group(1)) != len(chunks):
                raise FormatError(f"expected RCHUNK {len(chunks)}", lineno)
            chunks.append([])
            section = "R"
        elif line == "TCHUNK":
            if cluster_n is None or section == "T":
                raise FormatError("unexpected TCHUNK", lineno)
            section = "T"
        elif section == "R":
            labels = line.split()
            if not labels:
                raise FormatError("empty sub-record", lineno)
            if len(set(labels)) != len(labels):
                raise FormatError("repeated item in sub-record", lineno)
            chunks[-1].append(tuple(sorted(item_id(lab, lineno) for lab in labels)))
        elif section == "T":
            parts = line.split()
            if len(parts) != 2 or not parts[1].isdigit() or int(parts[1]) < 1:
                raise FormatError(f"expected '<label> <multiplicity>', got {line!r}", lineno)
            x = item_id(parts[0], lineno)
            if x in rare:
                raise FormatError(f"item {parts[0]!r} listed twice in TCHUNK", lineno)
            rare[x] = int(parts[1])
        else:
            raise FormatError(f"unexpected line {line!r}", lineno)
    if cluster_n is not None:
        close_cluster()
    return DisassociatedDataset(tuple(clusters), config, dictionary)


def read_disassociated(path) -> DisassociatedDataset:
    return parse_disassociated(Path(path).read_text(encoding="utf-8"))
