"""Privacy and utility metrics: PEM, RLM and RAE.

Pair supports of an anonymized dataset are estimated per cluster: a pair
inside one record chunk keeps its exact count, while items from different
chunks (or from the item chunk) are expected to meet ``s(x) * s(y) / S``
times, S being the cluster's slot count -- the mean co-occurrence under
uniformly random slot matching.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .cover import CoverAudit, audit
from .disassociation import Cluster, DisassociatedDataset
from .exceptions import InconsistencyError, InvalidParameterError
from .model import Dataset
from .reconstruction import sample_reconstruction

DEFAULT_PAIR_CAP = 10**6


@dataclass(frozen=True)
class MetricsReport:
    pem: float
    rlm: float
    rae_mean: float
    rae_pairs_evaluated: int
    rae_mode: str
    vrc: int
    rc: int
    k: int
    m: int
    delta: int
    seed: int
    rae_pair_cap: int | None = None  # set when pairs were subsampled


def pem(summary) -> float:
    """Fraction of record chunks that are vulnerable (0 without chunks)."""
    if isinstance(summary, DisassociatedDataset):
        summary = audit(summary)
    return summary.vrc / summary.rc if summary.rc else 0.0


def rlm(before: DisassociatedDataset, after: DisassociatedDataset) -> float:
    """Share of item occurrences lost between ``before`` and ``after``."""
    if before.dictionary != after.dictionary:
        raise InconsistencyError("before/after datasets use different dictionaries")
    s_before = before.item_occurrences()
    s_after = after.item_occurrences()
    total = sum(s_before.values())
    lost = 0
    for x, c in s_after.items():
        if c > s_before.get(x, 0):
            raise InconsistencyError(f"item {x} gained occurrences ({s_before.get(x, 0)} -> {c})")
    for x, c in s_before.items():
        lost += c - s_after.get(x, 0)
    return lost / total if total else 0.0


def _pair(x, y):
    return (x, y) if x < y else (y, x)


def _cluster_pair_estimates(cluster: Cluster, out: dict) -> None:
    n_slots = cluster.n_slots
    group, sup = {}, {}
    for g, chunk in enumerate(cluster.record_chunks):
        for x, s in chunk.item_supports().items():
            group[x], sup[x] = g, s
        for rec in chunk.subrecords:
            for pair in itertools.combinations(rec, 2):
                out[pair] = out.get(pair, 0.0) + 1.0
    for x, t in cluster.item_chunk.counts:
        group[x], sup[x] = ("T", x), t
    for x, y in itertools.combinations(sorted(group), 2):
        if group[x] != group[y]:
            out[(x, y)] = out.get((x, y), 0.0) + sup[x] * sup[y] / n_slots


def pair_support_estimates(anonymized: DisassociatedDataset) -> dict[tuple[int, int], float]:
    """Estimated support of every pair that can co-occur in some cluster."""
    out: dict = {}
    for cluster in anonymized.clusters:
        _cluster_pair_estimates(cluster, out)
    return out


def pair_support_estimate(x: int, y: int, anonymized: DisassociatedDataset) -> float:
    total = 0.0
    for cluster in anonymized.clusters:
        occ = cluster.item_occurrences()
        if x not in occ or y not in occ:
            continue
        est: dict = {}
        _cluster_pair_estimates(cluster, est)
        total += est.get(_pair(x, y), 0.0)
    return total


def relative_error(true: float, estimate: float) -> float:
    if true == 0 and estimate == 0:
        return 0.0
    return abs(true - estimate) / ((true + estimate) / 2)


def rae_pair(x: int, y: int, original: Dataset, anonymized: DisassociatedDataset) -> float:
    if x == y:
        raise InvalidParameterError("rae_pair needs two distinct items")
    true = original.index.support((x, y))
    return relative_error(true, pair_support_estimate(x, y, anonymized))


def original_pair_supports(original: Dataset) -> Counter:
    counts = Counter()
    for rec in original.records:
        counts.update(itertools.combinations(rec, 2))
    return counts


def rae_aggregate(original: Dataset, anonymized: DisassociatedDataset, mode: str = "estimator",
                  seed: int = 0, pair_cap: int = DEFAULT_PAIR_CAP) -> tuple[float, int, bool]:
    """Mean relative association error over pairs co-occurring in ``original``.

    ``mode="estimator"`` uses the expected-matching pair estimate;
    ``mode="sampled"`` counts pairs in one random reconstruction drawn with
    ``seed`` (item-chunk occurrences scattered over random slots).  Returns ``(mean, pairs_evaluated, capped)``.
    """
    truth = original_pair_supports(original)
    if mode == "estimator":
        est = pair_support_estimates(anonymized)
    elif mode == "sampled":
        est = original_pair_supports(sample_reconstruction(anonymized, seed, True).dataset)
    else:
        raise InvalidParameterError(f"unknown RAE mode {mode!r}")
    pairs = sorted(truth)
    capped = len(pairs) > pair_cap
    if capped:
        rng = np.random.default_rng(seed)
        keep = np.sort(rng.choice(len(pairs), size=pair_cap, replace=False))
        pairs = [pairs[i] for i in keep]
    if not pairs:
        return 0.0, 0, False
    errors = [relative_error(truth[p], est.get(p, 0.0)) for p in pairs]
    return float(np.mean(errors)), len(pairs), capped


def metrics_report(original: Dataset, anonymized: DisassociatedDataset,
                   before: DisassociatedDataset | None = None, mode: str = "estimator",
                   seed: int | None = None, pair_cap: int = DEFAULT_PAIR_CAP) -> MetricsReport:
    """PEM and RAE of ``anonymized``; RLM against ``before`` when given."""
    cfg = anonymized.config
    seed = cfg.seed if seed is None else seed
    summary: CoverAudit = audit(anonymized)
    mean, count, capped = rae_aggregate(original, anonymized, mode, seed, pair_cap)
    return MetricsReport(
        pem=pem(summary),
        rlm=rlm(before, anonymized) if before is not None else 0.0,
        rae_mean=mean,
        rae_pairs_evaluated=count,
        rae_mode=mode,
        vrc=summary.vrc,
        rc=summary.rc,
        k=cfg.k, m=cfg.m, delta=cfg.delta, seed=seed,
        rae_pair_cap=pair_cap if capped else None,
    )
