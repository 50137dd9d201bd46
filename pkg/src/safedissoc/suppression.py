"""Repair of cover problems by partial suppression with ghost records.

For a vulnerable chunk with itemset I, the items of I are randomly paired
(one trailing singleton when |I| is odd).  Each pair is removed from its own
sub-record equal to I, and the two members of every pair are moved to two
ghost sub-records L1 and L2.  Singleton supports are unchanged, while every
pair of items in I loses at least one co-occurrence, so s(I) drops below
every singleton support.  When the chunk is too large to receive the ghosts,
or too few exact copies of I exist to keep it k^m-anonymous, the whole chunk
is suppressed instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_transactions
from .cover import audit_cluster, detect_cover
from .disassociation import (Cluster, DisassociatedDataset, PartitionConfig, RecordChunk,
                             disassociate)
from .exceptions import PreconditionError
from .model import Itemset, as_itemset

SIZE_BOUND = "size-bound"
ANONYMITY_BOUND = "anonymity-bound"
TOO_FEW_ITEMS = "too-few-items"
TOO_FEW_COPIES = "too-few-copies"


@dataclass(frozen=True)
class SuppressionPlan:
    """One repair applied to chunk ``target = (cluster_index, chunk_index)``.

    ``pair_partition`` lists the pairs in application order; the first member
    of each pair went to ghost L1, the second to L2, and a trailing singleton
    to L1.  ``chunk_index`` is the position at the time of the repair.
    """

    target: tuple[int, int]
    mode: str  # "partial" | "full"
    pair_partition: tuple[tuple[int, ...], ...] = ()
    reason: str | None = None
    occurrences_removed: int = 0

    @property
    def ghosts(self) -> tuple[Itemset, Itemset]:
        l1 = as_itemset(p[0] for p in self.pair_partition)
        l2 = as_itemset(p[1] for p in self.pair_partition if len(p) == 2)
        return l1, l2


@dataclass(frozen=True)
class SuppressionReport:
    plans: tuple[SuppressionPlan, ...] = ()

    @property
    def suppressed_occurrences(self) -> int:
        return sum(p.occurrences_removed for p in self.plans)

    @property
    def chunks_fully_suppressed(self) -> int:
        return sum(p.mode == "full" for p in self.plans)

    @property
    def chunks_partially_suppressed(self) -> int:
        return sum(p.mode == "partial" for p in self.plans)


def chunk_rng(seed: int, cluster_index: int, chunk_index: int) -> np.random.Generator:
    """Independent, reproducible stream for one chunk's random choices."""
    return np.random.default_rng([seed, cluster_index, chunk_index])


def partial_suppression_blocker(chunk: RecordChunk, itemset: Itemset,
                                config: PartitionConfig) -> str | None:
    """Why partial suppression cannot be applied, or None when it can."""
    if len(itemset) < 2:
        return TOO_FEW_ITEMS
    card = math.ceil(len(itemset) / 2)
    if len(chunk) > config.delta - 2:
        return SIZE_BOUND
    full = chunk.support(itemset)
    if full < config.k + min(card, config.m):
        return ANONYMITY_BOUND
    # each pair needs its own exact copy of I; the anonymity bound only
    # implies this when m >= card
    if full < card:
        return TOO_FEW_COPIES
    return None


def preconditions_ok(chunk: RecordChunk, itemset: Itemset | None = None,
                     config: PartitionConfig | None = None) -> bool:
    itemset = chunk.itemset if itemset is None else itemset
    return partial_suppression_blocker(chunk, itemset, config or PartitionConfig()) is None


def random_pair_partition(itemset: Itemset, rng: np.random.Generator) -> tuple[tuple[int, ...], ...]:
    items = list(itemset)
    rng.shuffle(items)
    return tuple(tuple(items[i:i + 2]) for i in range(0, len(items), 2))


def _check_partition(pairs, itemset):
    flat = [x for p in pairs for x in p]
    sizes = [len(p) for p in pairs]
    if (sorted(flat) != sorted(itemset) or len(set(flat)) != len(flat)
            or any(s != 2 for s in sizes[:-1]) or sizes[-1] not in (1, 2)
            or len(pairs) != math.ceil(len(itemset) / 2)):
        raise PreconditionError(f"{pairs} is not a pair partition of {itemset}")


def partial_suppress(chunk: RecordChunk, config: PartitionConfig,
                     rng: np.random.Generator | None = None,
                     pairs: Sequence[Sequence[int]] | None = None) -> RecordChunk:
    """Apply partial suppression to ``chunk`` over its full itemset.

    ``pairs`` pins the partition (first member of each pair to ghost L1);
    otherwise it is drawn from ``rng``.  The result is returned with its
    sub-records in canonical order so the ghosts are not recognisable by
    position.
    """
    itemset = chunk.itemset
    blocker = partial_suppression_blocker(chunk, itemset, config)
    if blocker is not None:
        raise PreconditionError(f"partial suppression not applicable: {blocker}")
    if pairs is None:
        pairs = random_pair_partition(itemset, rng if rng is not None else chunk_rng(config.seed, 0, 0))
    pairs = tuple(tuple(p) for p in pairs)
    _check_partition(pairs, itemset)

    subs = list(chunk.subrecords)
    l1, l2 = [], []
    for pair in pairs:
        # a modified sub-record never equals I again, so each pair hits a fresh one
        j = subs.index(itemset)
        subs[j] = tuple(x for x in subs[j] if x not in pair)
        l1.append(pair[0])
        if len(pair) == 2:
            l2.append(pair[1])
    subs = [s for s in subs if s]
    subs.append(as_itemset(l1))
    subs.append(as_itemset(l2))
    return RecordChunk(tuple(sorted(subs)))


def full_suppress(chunk: RecordChunk) -> tuple[RecordChunk, int]:
    """Drop every occurrence of the chunk; returns the empty chunk and the loss."""
    return RecordChunk(), chunk.occurrences


def _repair_cluster(cluster: Cluster, ci: int, config: PartitionConfig):
    chunks = list(cluster.record_chunks)
    plans = []
    j = 0
    while j < len(chunks):
        if len(chunks) < 2:
            break
        report = detect_cover(chunks[j], ci, j)
        if not report.vulnerable:
            j += 1
            continue
        chunk = chunks[j]
        blocker = partial_suppression_blocker(chunk, chunk.itemset, config)
        if blocker is None:
            pairs = random_pair_partition(chunk.itemset, chunk_rng(config.seed, ci, j))
            chunks[j] = partial_suppress(chunk, config, pairs=pairs)
            plans.append(SuppressionPlan((ci, j), "partial", pairs))
            # stays at j: the repaired chunk is re-audited on the next pass
        else:
            _, lost = full_suppress(chunk)
            del chunks[j]
            plans.append(SuppressionPlan((ci, j), "full", reason=blocker, occurrences_removed=lost))
    return replace(cluster, record_chunks=tuple(chunks)), plans


def enforce_safety(dd: DisassociatedDataset, config: PartitionConfig | None = None
                   ) -> tuple[DisassociatedDataset, SuppressionReport]:
    """Repair every vulnerable chunk until the audit finds none.

    Clusters with a single record chunk are left alone.  Within a cluster,
    chunks are visited in index order; a chunk is partially suppressed when
    the preconditions hold and fully suppressed otherwise.
    """
    config = dd.config if config is None else config
    clusters, plans = [], []
    for ci, cluster in enumerate(dd.clusters):
        if len(cluster.record_chunks) >= 2:
            cluster, cplans = _repair_cluster(cluster, ci, config)
            plans.extend(cplans)
        clusters.append(cluster)
    out = replace(dd, clusters=tuple(clusters))
    assert not any(r.vulnerable for ci, c in enumerate(out.clusters) for r in audit_cluster(c, ci))
    return out, SuppressionReport(tuple(plans))


def protect(dataset, config: PartitionConfig):
    """Disassociate then repair; returns ``(disassociated, safe, report)``."""
    dd = disassociate(dataset, config)
    safe, report = enforce_safety(dd, config)
    return dd, safe, report


class SafeDisassociator(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """Disassociation followed by cover-problem repair.

    After ``fit(X)`` the estimator exposes ``disassociated_`` (the plain
    k^m-disassociation of X), ``safe_`` (the repaired dataset) and
    ``suppression_report_``.  ``transform`` repeats the whole pipeline on new
    transactions encoded with the fitted vocabulary.
    """

    def __init__(self, k=2, m=2, delta=10, seed=0):
        self.k = k
        self.m = m
        self.delta = delta
        self.seed = seed

    def _config(self) -> PartitionConfig:
        return PartitionConfig(self.k, self.m, self.delta, self.seed)

    def fit(self, X, y=None):
        config = self._config()
        dataset = check_transactions(X)
        self.dictionary_ = dataset.dictionary
        self.disassociated_, self.safe_, self.suppression_report_ = protect(dataset, config)
        return self

    def transform(self, X) -> DisassociatedDataset:
        check_is_fitted(self, "dictionary_")
        dataset = check_transactions(X, self.dictionary_, allow_new_items=False)
        return protect(dataset, self._config())[1]

    def fit_transform(self, X, y=None, **fit_params) -> DisassociatedDataset:
        return self.fit(X).safe_
