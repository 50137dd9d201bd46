"""k^m-disassociation: horizontal clustering, then vertical chunking.

Horizontal partitioning repeatedly splits the working records on their most
frequent unused item until every part holds at most ``delta`` records.
Vertical partitioning then walks each cluster's items by descending support:
rare items (support < k) go to the item chunk, the rest are packed greedily
into record chunks, a new chunk being opened whenever the next item would
break k^m-anonymity of the current one.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_positive_int, check_seed, check_transactions
from .exceptions import InvalidParameterError
from .model import (Dataset, ItemDictionary, Itemset, SupportIndex, _km_search,
                    is_km_anonymous)


@dataclass(frozen=True)
class PartitionConfig:
    k: int = 2
    m: int = 2
    delta: int = 10
    seed: int = 0

    def __post_init__(self):
        check_positive_int(self.k, "k")
        check_positive_int(self.m, "m")
        check_positive_int(self.delta, "delta")
        check_seed(self.seed)
        if self.delta < self.k:
            raise InvalidParameterError(
                f"delta ({self.delta}) must be at least k ({self.k})")


@dataclass(frozen=True)
class RecordChunk:
    """Multiset of non-empty sub-records over one chunk's item domain."""

    subrecords: tuple[Itemset, ...] = ()

    @cached_property
    def index(self) -> SupportIndex:
        return SupportIndex(self.subrecords)

    @cached_property
    def itemset(self) -> Itemset:
        return tuple(sorted({x for rec in self.subrecords for x in rec}))

    def support(self, itemset: Iterable[int]) -> int:
        return self.index.support(itemset)

    def item_supports(self) -> dict[int, int]:
        return self.index.item_supports()

    @property
    def occurrences(self) -> int:
        return sum(len(r) for r in self.subrecords)

    def __len__(self) -> int:
        return len(self.subrecords)


@dataclass(frozen=True)
class ItemChunk:
    """Rare items of a cluster with their multiplicities, unlinked from records."""

    counts: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_mapping(cls, mapping) -> "ItemChunk":
        return cls(tuple(sorted((int(x), int(c)) for x, c in mapping.items() if c)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def occurrences(self) -> int:
        return sum(c for _, c in self.counts)

    def __len__(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class Cluster:
    record_chunks: tuple[RecordChunk, ...]
    item_chunk: ItemChunk
    n_records: int

    @property
    def n_slots(self) -> int:
        """Record slots available to a reconstruction (ghosts may exceed n_records)."""
        return max([self.n_records] + [len(c) for c in self.record_chunks])

    def item_occurrences(self) -> Counter:
        """Per-item occurrence totals over every chunk of the cluster."""
        total = Counter(self.item_chunk.as_dict())
        for chunk in self.record_chunks:
            total.update(chunk.item_supports())
        return total


@dataclass(frozen=True)
class DisassociatedDataset:
    clusters: tuple[Cluster, ...]
    config: PartitionConfig
    dictionary: ItemDictionary = field(default_factory=ItemDictionary)

    def item_occurrences(self) -> Counter:
        total = Counter()
        for cluster in self.clusters:
            total.update(cluster.item_occurrences())
        return total

    @property
    def n_records(self) -> int:
        return sum(c.n_records for c in self.clusters)

    @property
    def n_record_chunks(self) -> int:
        return sum(len(c.record_chunks) for c in self.clusters)


def horizontal_partition(dataset: Dataset, config: PartitionConfig) -> list[tuple[Itemset, ...]]:
    """Split the records into clusters of at most ``config.delta`` records.

    The working set is split on its most frequent unused item (ties: smallest
    id) into records with and without it; the "with" side is emitted first.
    When no unused item remains the set is cut into runs of ``delta``.
    """
    delta = config.delta
    records = dataset.records
    parts = []
    stack = [(list(range(len(records))), frozenset())]
    while stack:
        ids, used = stack.pop()
        if not ids:
            continue
        if len(ids) <= delta:
            parts.append(ids)
            continue
        counts = Counter(x for i in ids for x in records[i] if x not in used)
        if not counts:
            parts.extend(ids[s:s + delta] for s in range(0, len(ids), delta))
            continue
        top = min(counts, key=lambda x: (-counts[x], x))
        with_top = [i for i in ids if top in records[i]]
        without = [i for i in ids if top not in records[i]]
        stack.append((without, used))
        stack.append((with_top, used | {top}))
    return [tuple(records[i] for i in part) for part in parts]


def vertical_partition(cluster_records: Sequence[Itemset], config: PartitionConfig) -> Cluster:
    """Chunk one cluster into k^m-anonymous record chunks plus an item chunk."""
    records = list(cluster_records)
    if len(records) > config.delta:
        raise InvalidParameterError(
            f"cluster holds {len(records)} records, more than delta={config.delta}")
    k, m = config.k, config.m
    bits = SupportIndex(records).bitsets
    sup = {x: b.bit_count() for x, b in bits.items()}
    order = sorted(sup, key=lambda x: (-sup[x], x))

    domains: list[list[int]] = []
    current: dict[int, int] = {}
    for x in order:
        if sup[x] < k:
            continue
        if current:
            current[x] = bits[x]
            # the chunk was k^m-anonymous before x, so only itemsets with x can fail
            if _km_search(current, k, m, required=x) is None:
                continue
            del current[x]
            domains.append(list(current))
        current = {x: bits[x]}
    if current:
        domains.append(list(current))

    chunks = []
    for dom in domains:
        dom_set = set(dom)
        subs = [tuple(x for x in rec if x in dom_set) for rec in records]
        chunks.append(RecordChunk(tuple(sorted(s for s in subs if s))))
    rare = ItemChunk.from_mapping({x: sup[x] for x in order if sup[x] < k})
    return Cluster(tuple(chunks), rare, len(records))


def disassociate(dataset: Dataset, config: PartitionConfig) -> DisassociatedDataset:
    clusters = tuple(vertical_partition(part, config)
                     for part in horizontal_partition(dataset, config))
    return DisassociatedDataset(clusters, config, dataset.dictionary)


def check_disassociated(dd: DisassociatedDataset, source: Dataset | None = None) -> None:
    """Raise ``AssertionError`` if ``dd`` breaks a structural invariant.

    With ``source`` given, also checks record-count and per-item
    occurrence conservation (valid only before any suppression).
    """
    k, m = dd.config.k, dd.config.m
    for ci, cluster in enumerate(dd.clusters):
        assert 0 < cluster.n_records <= dd.config.delta, f"cluster {ci} size"
        for cj, chunk in enumerate(cluster.record_chunks):
            assert all(chunk.subrecords), f"empty sub-record in chunk {ci}.{cj}"
            assert is_km_anonymous(chunk, k, m), f"chunk {ci}.{cj} is not k^m-anonymous"
        assert all(0 < c < k for _, c in cluster.item_chunk.counts), f"item chunk {ci}"
    if source is not None:
        assert dd.n_records == source.n
        assert dd.item_occurrences() == Counter(source.index.item_supports())


class Disassociator(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """Transformer producing a k^m-disassociated dataset.

    ``fit`` learns the item vocabulary; ``transform`` encodes transactions
    against it and disassociates them.  ``X`` is a :class:`Dataset` or an
    iterable of transactions (iterables of item labels).

    Parameters
    ----------
    k, m : int
        Every itemset of at most ``m`` items in a record chunk is contained
        in at least ``k`` of its sub-records.
    delta : int
        Maximum number of records per cluster.
    seed : int
        Seed of every randomized stage downstream.
    """

    def __init__(self, k=2, m=2, delta=10, seed=0):
        self.k = k
        self.m = m
        self.delta = delta
        self.seed = seed

    def _config(self) -> PartitionConfig:
        return PartitionConfig(self.k, self.m, self.delta, self.seed)

    def fit(self, X, y=None):
        self._config()
        dataset = check_transactions(X)
        self.dictionary_ = dataset.dictionary
        self.n_items_ = len(dataset.dictionary)
        return self

    def transform(self, X) -> DisassociatedDataset:
        check_is_fitted(self, "dictionary_")
        dataset = check_transactions(X, self.dictionary_, allow_new_items=False)
        return disassociate(dataset, self._config())

    def fit_transform(self, X, y=None, **fit_params) -> DisassociatedDataset:
        dataset = check_transactions(X)
        self._config()
        self.dictionary_ = dataset.dictionary
        self.n_items_ = len(dataset.dictionary)
        return disassociate(dataset, self._config())
