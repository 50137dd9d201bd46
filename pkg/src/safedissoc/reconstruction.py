"""Brute-force reconstruction of disassociated datasets.

A cluster offers ``n_slots`` record slots.  Each record chunk places its
sub-records injectively into slots, and a reconstructed record is the union
of what landed in one slot; empty slots vanish.  Item-chunk occurrences are
never placed (their record linkage is gone by construction).

Enumeration works on classes of identical sub-records and identical partial
records, so it yields each distinct cluster reconstruction exactly once
without walking raw permutations.  Counts are computed before enumerating,
so limits are enforced without materializing anything.  Clusters are
independent, which lets the guarantee and attack checks combine per-cluster
extremes instead of expanding the full cross product.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Iterable, Iterator

import numpy as np

from .cover import audit
from .disassociation import Cluster, DisassociatedDataset, PartitionConfig, vertical_partition
from .exceptions import InvalidParameterError, LimitExceededError
from .model import Dataset, Itemset, as_itemset

DEFAULT_LIMIT = 10**6


@dataclass(frozen=True)
class Reconstruction:
    dataset: Dataset
    provenance: tuple[tuple[Itemset, ...], ...]  # per cluster, its reconstructed records


@dataclass(frozen=True)
class AttackFinding:
    background: Itemset
    candidate_records: frozenset
    min_support: int
    max_support: int
    certain_items: Itemset
    breach: bool


def _bounded_compositions(total: int, caps, start: int = 0) -> Iterator[tuple[int, ...]]:
    """Vectors ``a`` with ``0 <= a[i] <= caps[i]`` summing to ``total``."""
    if start == len(caps):
        if total == 0:
            yield ()
        return
    rest = sum(caps[start + 1:])
    for a in range(max(0, total - rest), min(total, caps[start]) + 1):
        for tail in _bounded_compositions(total - a, caps, start + 1):
            yield (a,) + tail


@lru_cache(maxsize=1 << 16)
def _count_tables(mults: tuple[int, ...], caps: tuple[int, ...]) -> int:
    """Number of placements of class multiplicities ``mults`` into kinds with ``caps``."""
    if not mults:
        return 1
    total = 0
    for alloc in _bounded_compositions(mults[0], caps):
        rest = tuple(sorted(c - a for c, a in zip(caps, alloc)))
        total += _count_tables(mults[1:], rest)
    return total


def _place_chunk(state: tuple[Itemset, ...], classes: list[tuple[Itemset, int]]):
    """Every slot multiset obtained by placing one chunk into ``state``.

    Chunk domains are disjoint, so a new slot determines which partial record
    and which sub-record class it came from; distinct allocation tables thus
    give distinct results and no deduplication is needed.
    """
    kinds = sorted(Counter(state).items())
    merged = [[tuple(sorted(p + c)) for c, _ in classes] for p, _ in kinds]

    def tables(ci, caps):
        if ci == len(classes):
            yield ()
            return
        for alloc in _bounded_compositions(classes[ci][1], caps):
            for rest in tables(ci + 1, [c - a for c, a in zip(caps, alloc)]):
                yield (alloc,) + rest

    for table in tables(0, [c for _, c in kinds]):
        out = []
        for ki, (partial, count) in enumerate(kinds):
            left = count
            for ci, alloc in enumerate(table):
                n = alloc[ki]
                if n:
                    out.extend([merged[ki][ci]] * n)
                    left -= n
            if left:
                out.extend([partial] * left)
        out.sort()
        yield tuple(out)


def _chunk_classes(cluster: Cluster):
    # the most varied chunk goes last: its placements are only counted
    classes = [sorted(Counter(ch.subrecords).items()) for ch in cluster.record_chunks]
    return sorted(classes, key=len)


def _count_cluster(cluster: Cluster, limit: int) -> int:
    """Exact number of distinct reconstructions of ``cluster``.

    Raises :class:`LimitExceededError` as soon as the count is known to pass
    ``limit``; projecting onto a subset of chunks never merges two distinct
    reconstructions, so partial counts are lower bounds.
    """
    classes = _chunk_classes(cluster)
    if not classes:
        return 1
    *head, last = classes
    mults = tuple(sorted((c for _, c in last), reverse=True))
    total = 0

    def dfs(state, ci):
        nonlocal total
        if ci == len(head):
            total += _count_tables(mults, tuple(sorted(Counter(state).values())))
            if total > limit:
                raise LimitExceededError(total, limit)
            return
        for nxt in _place_chunk(state, head[ci]):
            dfs(nxt, ci + 1)

    dfs(((),) * cluster.n_slots, 0)
    return total


def iter_cluster_reconstructions(cluster: Cluster, limit: int = DEFAULT_LIMIT
                                 ) -> Iterator[tuple[Itemset, ...]]:
    """Lazily yield every distinct reconstruction of one cluster.

    The count is checked against ``limit`` before anything is yielded.
    """
    _count_cluster(cluster, limit)
    classes = _chunk_classes(cluster)

    def dfs(state, ci):
        if ci == len(classes):
            yield tuple(r for r in state if r)
            return
        for nxt in _place_chunk(state, classes[ci]):
            yield from dfs(nxt, ci + 1)

    yield from dfs(((),) * cluster.n_slots, 0)


def _chunk_domains(chunks) -> Counter:
    return Counter(frozenset(c.itemset) for c in chunks)


def _consistent_filter(cluster: Cluster, config: PartitionConfig | None):
    if config is None:
        raise InvalidParameterError("consistent enumeration needs the partition config")
    target = _chunk_domains(cluster.record_chunks)
    return lambda recs: _reproduces(recs, target, config)


def cluster_reconstructions(cluster: Cluster, limit: int = DEFAULT_LIMIT,
                            consistent: bool = False,
                            config: PartitionConfig | None = None) -> list[tuple[Itemset, ...]]:
    """Distinct reconstructions of one cluster, each a sorted tuple of records.

    With ``consistent=True`` only reconstructions whose vertical partition
    (under ``config``) reproduces the cluster's record-chunk item domains are
    kept.
    """
    out = sorted(iter_cluster_reconstructions(cluster, limit))
    if consistent:
        keep = _consistent_filter(cluster, config)
        out = [recs for recs in out if keep(recs)]
    return out


def _reproduces(records, target: Counter, config: PartitionConfig) -> bool:
    cfg = replace(config, delta=max(config.delta, len(records)))
    return _chunk_domains(vertical_partition(records, cfg).record_chunks) == target


def _iter_filtered(cluster, limit, consistent, config):
    recs = iter_cluster_reconstructions(cluster, limit)
    if consistent:
        keep = _consistent_filter(cluster, config)
        recs = (r for r in recs if keep(r))
    return recs


def count_reconstructions(dd: DisassociatedDataset, limit: int = DEFAULT_LIMIT,
                          consistent: bool = False) -> int:
    """Size of the per-cluster cross product (before cross-cluster dedup)."""
    if not consistent:
        return math.prod(_count_cluster(c, limit) for c in dd.clusters)
    return math.prod(sum(1 for _ in _iter_filtered(c, limit, True, dd.config))
                     for c in dd.clusters)


def enumerate_reconstructions(dd: DisassociatedDataset, limit: int = DEFAULT_LIMIT,
                              consistent: bool = False) -> list[Reconstruction]:
    """All distinct reconstructed datasets, deduplicated as multisets.

    Raises :class:`LimitExceededError` when the cross product of per-cluster
    reconstruction counts exceeds ``limit``.
    """
    count = 1
    for c in dd.clusters:
        count *= _count_cluster(c, limit)
        if count > limit:
            raise LimitExceededError(count, limit)
    per_cluster = [cluster_reconstructions(c, limit, consistent, dd.config) for c in dd.clusters]
    seen, out = set(), []
    for combo in itertools.product(*per_cluster):
        records = tuple(sorted(r for part in combo for r in part))
        if records not in seen:
            seen.add(records)
            out.append(Reconstruction(Dataset(records, dd.dictionary), combo))
    return out


def sample_reconstruction(dd: DisassociatedDataset, seed: int = 0,
                          include_item_chunk: bool = False) -> Reconstruction:
    """One reconstruction with uniformly random injective slot assignment.

    With ``include_item_chunk`` the rare items are scattered over distinct
    random slots as well (used by the sampled RAE mode, whose estimator
    counterpart prices item-chunk pairs the same way).
    """
    records, provenance = [], []
    for ci, cluster in enumerate(dd.clusters):
        rng = np.random.default_rng([seed, ci])
        n_slots = cluster.n_slots
        slots: list[list[int]] = [[] for _ in range(n_slots)]
        for chunk in cluster.record_chunks:
            positions = rng.choice(n_slots, size=len(chunk), replace=False)
            for pos, sub in zip(positions, chunk.subrecords):
                slots[pos].extend(sub)
        if include_item_chunk:
            for x, c in cluster.item_chunk.counts:
                for pos in rng.choice(n_slots, size=c, replace=False):
                    slots[pos].append(x)
        recs = [tuple(sorted(s)) for s in slots if s]
        records.extend(recs)
        provenance.append(tuple(sorted(recs)))
    return Reconstruction(Dataset(tuple(records), dd.dictionary), tuple(provenance))


def _itemset_counts(records: Iterable[Itemset], m: int, wanted=None) -> Counter:
    counts = Counter()
    for rec, mult in Counter(records).items():
        for size in range(1, min(m, len(rec)) + 1):
            for sub in itertools.combinations(rec, size):
                if wanted is None or sub in wanted:
                    counts[sub] += mult
    return counts


def _support_bounds(cluster: Cluster, m: int) -> dict[Itemset, int]:
    """Upper bound min_j s(S & C_j, C_j) on any reconstruction's support of S.

    Covers every itemset of size <= m whose per-chunk parts all occur; a slot
    holding S needs one sub-record per touched chunk, and placement is
    injective, so no reconstruction can beat the rarest part.
    """
    owner = {x: j for j, ch in enumerate(cluster.record_chunks) for x in ch.itemset}
    per_chunk = [_itemset_counts(ch.subrecords, m) for ch in cluster.record_chunks]
    bounds = {}
    for size in range(1, m + 1):
        for combo in itertools.combinations(sorted(owner), size):
            parts: dict[int, list[int]] = {}
            for x in combo:
                parts.setdefault(owner[x], []).append(x)
            b = min(per_chunk[j].get(tuple(p), 0) for j, p in parts.items())
            if b:
                bounds[combo] = b
    return bounds


def _cluster_max_supports(cluster: Cluster, m: int, limit: int, consistent: bool,
                          config: PartitionConfig | None, cap: int | None = None
                          ) -> dict[Itemset, int]:
    """Largest support each itemset reaches in some reconstruction of ``cluster``,
    truncated at ``cap`` when one is given.

    Enumeration stops early once every itemset has reached its upper bound.
    """
    bounds = _support_bounds(cluster, m)
    if cap is not None:
        bounds = {i: min(b, cap) for i, b in bounds.items()}
    best: dict[Itemset, int] = {}
    open_ = set(bounds)
    for recon in _iter_filtered(cluster, limit, consistent, config):
        for itemset, c in _itemset_counts(recon, m, open_).items():
            c = min(c, bounds[itemset])
            if c > best.get(itemset, 0):
                best[itemset] = c
                if c == bounds[itemset]:
                    open_.discard(itemset)
        if not open_:
            break
    return best


def max_supports(dd: DisassociatedDataset, m: int, limit: int = DEFAULT_LIMIT,
                 consistent: bool = False, cap: int | None = None) -> Counter:
    """For every itemset of size <= m occurring in some reconstruction, the
    largest support it reaches in any reconstruction.

    Supports add up across clusters and clusters reconstruct independently,
    so the maximum over whole datasets is the sum of per-cluster maxima.
    With ``cap`` each per-cluster maximum is truncated there, which is enough
    to decide whether the total reaches ``cap``.
    """
    for cluster in dd.clusters:
        _count_cluster(cluster, limit)
    total = Counter()
    for cluster in dd.clusters:
        total.update(_cluster_max_supports(cluster, m, limit, consistent, dd.config, cap))
    return total


def find_guarantee_violation(dd: DisassociatedDataset, k: int | None = None,
                             m: int | None = None, limit: int = DEFAULT_LIMIT,
                             consistent: bool = False) -> Itemset | None:
    """An itemset of size <= m that no reconstruction supports k times."""
    k = dd.config.k if k is None else k
    m = dd.config.m if m is None else m
    best = max_supports(dd, m, limit, consistent, cap=k)
    bad = [i for i, c in best.items() if c < k]
    return min(bad, key=lambda i: (len(i), i)) if bad else None


def check_guarantee(dd: DisassociatedDataset, k: int | None = None, m: int | None = None,
                    limit: int = DEFAULT_LIMIT, consistent: bool = False) -> bool:
    return find_guarantee_violation(dd, k, m, limit, consistent) is None


def _encode_background(dd: DisassociatedDataset, background) -> Itemset:
    if isinstance(background, str):
        background = background.split()
    items = list(background)
    if not items:
        raise InvalidParameterError("background knowledge must hold at least one item")
    if all(isinstance(x, str) for x in items):
        unknown = [x for x in items if x not in dd.dictionary]
        if unknown:
            raise InvalidParameterError(f"background items not in the dictionary: {unknown}")
        return dd.dictionary.encode(items)
    return as_itemset(int(x) for x in items)


def _spans_chunks(dd: DisassociatedDataset, items: set) -> bool:
    for cluster in dd.clusters:
        touched = {j for j, ch in enumerate(cluster.record_chunks) if items & set(ch.itemset)}
        if len(touched) >= 2:
            return True
    return False


def attack_audit(dd: DisassociatedDataset, background, k: int | None = None,
                 limit: int = DEFAULT_LIMIT, consistent: bool = False) -> AttackFinding:
    """What an attacker knowing ``background`` learns from every reconstruction.

    Only reconstructions holding at least one record that contains the
    background are considered.  ``certain_items`` are items present in every
    such candidate record.  A breach is reported when the background is
    linked to fewer than k records in all those reconstructions, or when a
    background spanning two record chunks of a cluster certainly implies
    further items.  Certainty derived from a single chunk is published
    k^m-anonymous content and does not count.
    """
    k = dd.config.k if k is None else k
    bg = _encode_background(dd, background)
    if len(bg) > dd.config.m:
        raise InvalidParameterError(
            f"background has {len(bg)} items, more than m={dd.config.m}")
    bg_set = set(bg)
    candidates = set()
    mins, maxs, min_pos = [], [], []
    for cluster in dd.clusters:
        sups = []
        for recon in _iter_filtered(cluster, limit, consistent, dd.config):
            hits = [r for r in recon if bg_set.issubset(r)]
            candidates.update(hits)
            sups.append(len(hits))
        if not sups:
            continue
        mins.append(min(sups))
        maxs.append(max(sups))
        positive = [s for s in sups if s]
        min_pos.append(min(positive) if positive else None)
    base = sum(mins)
    options = [p + base - lo for p, lo in zip(min_pos, mins) if p is not None]
    min_support = min(options) if options else 0
    max_support = sum(maxs)
    if candidates:
        common = set.intersection(*(set(r) for r in candidates)) - bg_set
        certain = tuple(sorted(common))
        breach = max_support < k or (bool(certain) and _spans_chunks(dd, bg_set))
    else:
        certain, breach = (), False
    return AttackFinding(bg, frozenset(candidates), min_support, max_support, certain, breach)


def verify_safe(dd: DisassociatedDataset, config: PartitionConfig | None = None,
                limit: int = DEFAULT_LIMIT) -> bool:
    """Disassociation guarantee holds and no record chunk has a cover problem."""
    config = dd.config if config is None else config
    return audit(dd).vrc == 0 and check_guarantee(dd, config.k, config.m, limit)
