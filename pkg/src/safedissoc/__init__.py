"""Safe disassociation of set-valued (transaction) data.

Records are clustered horizontally, each cluster's items are split into
k^m-anonymous record chunks plus an item chunk of rare items, and chunks with
a cover problem are repaired by partial (or, failing that, full) suppression.
"""
from .cover import ChunkCoverReport, CoverAudit, audit, detect_cover
from .disassociation import (Cluster, DisassociatedDataset, Disassociator, ItemChunk,
                             PartitionConfig, RecordChunk, disassociate, horizontal_partition,
                             vertical_partition)
from .exceptions import (FormatError, InconsistencyError, InvalidParameterError,
                         LimitExceededError, PreconditionError, SafeDissocError)
from .io import parse_dataset, parse_disassociated, read_disassociated, write_dataset, \
    write_disassociated
from .metrics import MetricsReport, metrics_report, pem, rae_aggregate, rae_pair, rlm
from .model import Dataset, ItemDictionary, find_km_violation, is_km_anonymous, item_supports, \
    support
from .reconstruction import (AttackFinding, Reconstruction, attack_audit, check_guarantee,
                             count_reconstructions, enumerate_reconstructions,
                             sample_reconstruction, verify_safe)
from .suppression import (SafeDisassociator, SuppressionPlan, SuppressionReport, enforce_safety,
                          full_suppress, partial_suppress, protect)
from .synth import synth_generate

__version__ = "0.1.0"

__all__ = [
    "AttackFinding", "ChunkCoverReport", "Cluster", "CoverAudit", "Dataset",
    "DisassociatedDataset", "Disassociator", "FormatError", "InconsistencyError",
    "InvalidParameterError", "ItemChunk", "ItemDictionary", "LimitExceededError",
    "MetricsReport", "PartitionConfig", "PreconditionError", "Reconstruction", "RecordChunk",
    "SafeDisassociator", "SafeDissocError", "SuppressionPlan", "SuppressionReport",
    "attack_audit", "audit", "check_guarantee", "count_reconstructions", "detect_cover",
    "disassociate", "enforce_safety", "enumerate_reconstructions", "find_km_violation",
    "full_suppress", "horizontal_partition", "is_km_anonymous", "item_supports",
    "metrics_report", "parse_dataset", "parse_disassociated", "partial_suppress", "pem",
    "protect", "rae_aggregate", "rae_pair", "read_disassociated", "rlm",
    "sample_reconstruction", "support", "synth_generate", "verify_safe", "vertical_partition",
    "write_dataset", "write_disassociated",
]
