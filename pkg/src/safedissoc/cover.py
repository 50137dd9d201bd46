"""Cover-problem detection on record chunks.

An item z of a chunk with itemset I is *covered* when s(I) == s({z}): every
sub-record holding z holds all of I, so an attacker pairing z with an item
of another chunk learns the whole of I.
"""
from __future__ import annotations

from dataclasses import dataclass

from .disassociation import Cluster, DisassociatedDataset, RecordChunk
from .model import Itemset


@dataclass(frozen=True)
class ChunkCoverReport:
    cluster_index: int
    chunk_index: int
    chunk_itemset: Itemset
    covered: Itemset
    covering: Itemset
    vulnerable: bool


@dataclass(frozen=True)
class CoverAudit:
    reports: tuple[ChunkCoverReport, ...]

    @property
    def vrc(self) -> int:
        """Number of vulnerable record chunks."""
        return sum(r.vulnerable for r in self.reports)

    @property
    def rc(self) -> int:
        """Total number of record chunks."""
        return len(self.reports)

    @property
    def vulnerable(self) -> tuple[ChunkCoverReport, ...]:
        return tuple(r for r in self.reports if r.vulnerable)


def chunk_itemset(chunk: RecordChunk) -> Itemset:
    return chunk.itemset


def detect_cover(chunk: RecordChunk, cluster_index: int = 0,
                 chunk_index: int = 0) -> ChunkCoverReport:
    items = chunk.itemset
    full = chunk.support(items) if items else 0
    singles = chunk.item_supports()
    covered = tuple(z for z in items if singles[z] == full)
    covering = tuple(z for z in items if singles[z] != full)
    # singleton chunks satisfy s(I) == s({z}) trivially but link nothing
    vulnerable = len(items) >= 2 and bool(covered)
    return ChunkCoverReport(cluster_index, chunk_index, items, covered, covering, vulnerable)


def audit_cluster(cluster: Cluster, cluster_index: int = 0) -> list[ChunkCoverReport]:
    reports = [detect_cover(ch, cluster_index, j) for j, ch in enumerate(cluster.record_chunks)]
    if len(reports) == 1:
        # no second record chunk to draw the linking item from
        r = reports[0]
        reports = [ChunkCoverReport(r.cluster_index, r.chunk_index, r.chunk_itemset,
                                    r.covered, r.covering, False)]
    return reports


def audit(dd: DisassociatedDataset) -> CoverAudit:
    reports = []
    for ci, cluster in enumerate(dd.clusters):
        reports.extend(audit_cluster(cluster, ci))
    return CoverAudit(tuple(reports))
