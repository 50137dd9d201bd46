"""Items, records, datasets and support queries.

Itemsets are plain tuples of strictly ascending integer item ids.  A
:class:`Dataset` maps those ids back to their original labels through an
:class:`ItemDictionary`.  Support queries go through a vertical bitset index
(one Python ``int`` per item, bit *i* set when record *i* holds the item), so
a k-itemset support costs k-1 big-int ANDs and a popcount.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .exceptions import InvalidParameterError

Itemset = tuple  # tuple[int, ...], strictly ascending


def as_itemset(items: Iterable[int]) -> Itemset:
    """Return ``items`` as a sorted, duplicate-free tuple."""
    return tuple(sorted(set(items)))


class ItemDictionary:
    """Bijection between dense ids ``0..d-1`` and item labels."""

    def __init__(self, labels: Iterable[str] = ()):
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        for label in labels:
            if label in self._index:
                raise InvalidParameterError(f"duplicate item label {label!r}")
            self.add(label)

    def add(self, label: str) -> int:
        """Return the id of ``label``, assigning the next free id if new."""
        try:
            return self._index[label]
        except KeyError:
            idx = len(self._labels)
            self._labels.append(label)
            self._index[label] = idx
            return idx

    def id(self, label: str) -> int:
        return self._index[label]

    def label(self, idx: int) -> str:
        return self._labels[idx]

    def encode(self, labels: Iterable[str]) -> Itemset:
        """Map labels (or one space-separated string) to an itemset.

        Raises ``KeyError`` on unknown labels.
        """
        if isinstance(labels, str):
            labels = labels.split()
        return as_itemset(self._index[lab] for lab in labels)

    def decode(self, itemset: Iterable[int]) -> tuple[str, ...]:
        return tuple(self._labels[i] for i in itemset)

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self._labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self._labels)

    def __eq__(self, other) -> bool:
        return isinstance(other, ItemDictionary) and self._labels == other._labels

    def __hash__(self):
        return hash(tuple(self._labels))

    def __repr__(self) -> str:
        return f"ItemDictionary({self._labels!r})"


class SupportIndex:
    """Vertical bitset index over a fixed sequence of itemsets."""

    def __init__(self, records: Sequence[Itemset]):
        self.n = len(records)
        self.bitsets: dict[int, int] = _build_bitsets(records)

    def support(self, itemset: Iterable[int]) -> int:
        bits = self.cover(itemset)
        return self.n if bits is None else bits.bit_count()

    def cover(self, itemset: Iterable[int]):
        """Bitset of records containing ``itemset`` (``None`` for the empty set)."""
        acc = None
        for x in itemset:
            b = self.bitsets.get(x, 0)
            acc = b if acc is None else acc & b
            if not acc:
                return 0
        return acc

    def item_supports(self) -> dict[int, int]:
        return {x: b.bit_count() for x, b in self.bitsets.items()}


def _build_bitsets(records: Sequence[Itemset]) -> dict[int, int]:
    # Shifting into a growing int per occurrence is quadratic for large n;
    # go through numpy tid arrays instead once the collection is big.
    if len(records) <= 256:
        bits: dict[int, int] = {}
        for i, rec in enumerate(records):
            bit = 1 << i
            for x in rec:
                bits[x] = bits.get(x, 0) | bit
        return bits
    tids: dict[int, list[int]] = {}
    for i, rec in enumerate(records):
        for x in rec:
            tids.setdefault(x, []).append(i)
    n = len(records)
    out = {}
    mask = np.zeros(n, dtype=bool)
    for x, ids in tids.items():
        mask[ids] = True
        out[x] = int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")
        mask[ids] = False
    return out


@dataclass(frozen=True, eq=False)
class Dataset:
    """Multiset of records (ordered, duplicates allowed) over a dictionary."""

    records: tuple[Itemset, ...]
    dictionary: ItemDictionary = field(default_factory=ItemDictionary)

    def __post_init__(self):
        d = len(self.dictionary)
        for rec in self.records:
            if not rec:
                raise InvalidParameterError("datasets cannot hold empty records")
            if rec[0] < 0 or rec[-1] >= d:
                raise InvalidParameterError(f"record {rec} uses ids outside the dictionary")

    @classmethod
    def from_transactions(cls, transactions: Iterable[Iterable[str]],
                          dictionary: ItemDictionary | None = None) -> "Dataset":
        """Build a dataset from label lists; empty transactions are skipped."""
        dictionary = ItemDictionary() if dictionary is None else dictionary
        records = []
        for tx in transactions:
            rec = as_itemset(dictionary.add(lab) for lab in tx)
            if rec:
                records.append(rec)
        return cls(tuple(records), dictionary)

    @cached_property
    def index(self) -> SupportIndex:
        return SupportIndex(self.records)

    @property
    def n(self) -> int:
        return len(self.records)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.dictionary == other.dictionary
                and Counter(self.records) == Counter(other.records))

    __hash__ = None

    def labelled(self) -> list[tuple[str, ...]]:
        return [self.dictionary.decode(r) for r in self.records]


def _index_of(collection) -> SupportIndex:
    idx = getattr(collection, "index", None)
    if isinstance(idx, SupportIndex):
        return idx
    recs = getattr(collection, "subrecords", None)
    if recs is None:
        recs = getattr(collection, "records", collection)
    return SupportIndex(list(recs))


def support(itemset: Iterable[int], collection) -> int:
    """Number of records in ``collection`` containing every id of ``itemset``.

    ``collection`` may be a :class:`Dataset`, a record chunk, or any sequence
    of itemsets.  Unknown ids simply yield 0.
    """
    return _index_of(collection).support(itemset)


def item_supports(collection) -> dict[int, int]:
    """Support of every occurring item, in one pass."""
    return _index_of(collection).item_supports()


def _check_km(k, m):
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InvalidParameterError(f"k must be a positive integer, got {k!r}")
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise InvalidParameterError(f"m must be a positive integer, got {m!r}")


def find_km_violation(collection, k: int, m: int) -> Itemset | None:
    """Return an occurring itemset of size <= m with support < k, or None.

    Depth-first over occurring items, rarest first (ties: larger id first),
    extending a prefix only while its support is at least k.  Itemsets with
    support 0 are skipped; they never occur in the collection.
    """
    _check_km(k, m)
    index = _index_of(collection)
    return _km_search(index.bitsets, k, m)


def _km_search(bitsets: Mapping[int, int], k: int, m: int,
               required: int | None = None) -> Itemset | None:
    sup = {x: b.bit_count() for x, b in bitsets.items()}
    order = sorted((x for x in bitsets if sup[x] and x != required),
                   key=lambda x: (sup[x], -x))

    def dfs(bits, start, prefix):
        for pos in range(start, len(order)):
            x = order[pos]
            cur = bitsets[x] if bits is None else bits & bitsets[x]
            c = cur.bit_count()
            if not c:
                continue
            itemset = prefix + (x,)
            if c < k:
                return tuple(sorted(itemset))
            if len(itemset) < m:
                found = dfs(cur, pos + 1, itemset)
                if found is not None:
                    return found
        return None

    if required is None:
        return dfs(None, 0, ())
    # restrict the search to itemsets containing `required`
    c = sup.get(required, 0)
    if not c:
        return None
    if c < k:
        return (required,)
    return dfs(bitsets[required], 0, (required,)) if m > 1 else None


def is_km_anonymous(collection, k: int, m: int) -> bool:
    """True iff every occurring itemset of size 1..m has support >= k."""
    return find_km_violation(collection, k, m) is None
