"""Parameter sweeps over k and delta on a fixed corpus."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

from .cover import audit
from .disassociation import PartitionConfig, disassociate
from .metrics import pem, rae_aggregate, rlm
from .model import Dataset
from .suppression import enforce_safety


@dataclass(frozen=True)
class SweepRow:
    k: int
    m: int
    delta: int
    clusters: int
    rc: int
    vrc: int
    pem: float
    rlm: float
    rae_disassociated: float
    rae_safe: float
    chunks_fully_suppressed: int
    seconds: float


def run_point(dataset: Dataset, config: PartitionConfig, with_rae: bool = True) -> SweepRow:
    """Disassociate, audit and repair once; PEM is measured before repair."""
    t0 = time.perf_counter()
    dd = disassociate(dataset, config)
    summary = audit(dd)
    safe, report = enforce_safety(dd, config)
    seconds = time.perf_counter() - t0
    rae_d = rae_aggregate(dataset, dd, seed=config.seed)[0] if with_rae else float("nan")
    rae_s = rae_aggregate(dataset, safe, seed=config.seed)[0] if with_rae else float("nan")
    return SweepRow(config.k, config.m, config.delta, len(dd.clusters), summary.rc, summary.vrc,
                    pem(summary), rlm(dd, safe), rae_d, rae_s,
                    report.chunks_fully_suppressed, seconds)


def sweep(dataset: Dataset, k_values=range(2, 7), delta_values=range(10, 61, 10), m: int = 2,
          fixed_k: int = 3, fixed_delta: int = 30, seed: int = 0, with_rae: bool = True):
    """Two tables: metrics versus k (delta fixed) and versus delta (k fixed)."""
    by_k = [run_point(dataset, PartitionConfig(k, m, fixed_delta, seed), with_rae)
            for k in k_values]
    by_delta = [run_point(dataset, PartitionConfig(fixed_k, m, d, seed), with_rae)
                for d in delta_values]
    return by_k, by_delta


def format_table(rows, title: str = "") -> str:
    if not rows:
        return ""
    names = list(asdict(rows[0]))
    out = [f"# {title}"] if title else []
    out.append("\t".join(names))
    for row in rows:
        vals = []
        for v in asdict(row).values():
            vals.append(f"{v:.6f}" if isinstance(v, float) else str(v))
        out.append("\t".join(vals))
    return "\n".join(out) + "\n"
