"""Line-oriented ``key = value`` reports; see docs/report_format.md."""
from __future__ import annotations

from .cover import CoverAudit
from .disassociation import DisassociatedDataset
from .metrics import MetricsReport
from .model import ItemDictionary
from .reconstruction import AttackFinding
from .suppression import SuppressionReport


def _labels(dic: ItemDictionary, itemset) -> str:
    return " ".join(dic.decode(itemset))


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return "none"
    return str(value)


def render(kind: str, fields) -> str:
    lines = [f"report = {kind}"]
    lines.extend(f"{key} = {_fmt(value)}".rstrip() for key, value in fields)
    return "\n".join(lines) + "\n"


def audit_report(result: CoverAudit, dd: DisassociatedDataset) -> str:
    dic = dd.dictionary
    fields = [("clusters", len(dd.clusters)), ("rc", result.rc), ("vrc", result.vrc),
              ("pem", result.vrc / result.rc if result.rc else 0.0)]
    for r in result.reports:
        key = f"chunk.{r.cluster_index}.{r.chunk_index}"
        fields += [(f"{key}.items", _labels(dic, r.chunk_itemset)),
                   (f"{key}.covered", _labels(dic, r.covered)),
                   (f"{key}.covering", _labels(dic, r.covering)),
                   (f"{key}.vulnerable", r.vulnerable)]
    return render("audit", fields)


def suppression_report(report: SuppressionReport, dd: DisassociatedDataset) -> str:
    dic = dd.dictionary
    fields = [("plans", len(report.plans)),
              ("chunks_partially_suppressed", report.chunks_partially_suppressed),
              ("chunks_fully_suppressed", report.chunks_fully_suppressed),
              ("suppressed_occurrences", report.suppressed_occurrences)]
    for i, plan in enumerate(report.plans):
        key = f"plan.{i}"
        fields += [(f"{key}.target", f"{plan.target[0]} {plan.target[1]}"),
                   (f"{key}.mode", plan.mode)]
        if plan.mode == "partial":
            l1, l2 = plan.ghosts
            fields += [(f"{key}.pairs", " | ".join(_labels(dic, p) for p in plan.pair_partition)),
                       (f"{key}.ghost1", _labels(dic, l1)), (f"{key}.ghost2", _labels(dic, l2))]
        else:
            fields += [(f"{key}.reason", plan.reason),
                       (f"{key}.occurrences_removed", plan.occurrences_removed)]
    return render("suppression", fields)


def attack_report(finding: AttackFinding, dd: DisassociatedDataset, k: int) -> str:
    dic = dd.dictionary
    fields = [("background", _labels(dic, finding.background)), ("k", k),
              ("breach", finding.breach), ("certain_items", _labels(dic, finding.certain_items)),
              ("min_support", finding.min_support), ("max_support", finding.max_support),
              ("candidate_records", len(finding.candidate_records))]
    for i, rec in enumerate(sorted(finding.candidate_records)):
        fields.append((f"candidate.{i}", _labels(dic, rec)))
    return render("attack", fields)


def metrics_report_text(report: MetricsReport, extra=()) -> str:
    fields = [("k", report.k), ("m", report.m), ("delta", report.delta), ("seed", report.seed),
              ("rc", report.rc), ("vrc", report.vrc), ("pem", report.pem), ("rlm", report.rlm),
              ("rae_mean", report.rae_mean), ("rae_pairs_evaluated", report.rae_pairs_evaluated),
              ("rae_mode", report.rae_mode), ("rae_pair_cap", report.rae_pair_cap)]
    return render("metrics", fields + list(extra))
