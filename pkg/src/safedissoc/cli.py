"""Command-line interface.

Exit codes: 0 success, 1 breach found (``audit``/``attack`` with
``--fail-on-breach``), 2 usage, parse or parameter errors.  The environment
variable ``DISSOC_SEED`` overrides ``--seed``.
"""
from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from ._validation import check_transactions
from .cover import audit
from .disassociation import PartitionConfig, disassociate
from .exceptions import SafeDissocError
from .experiments import format_table, sweep
from .io import (atomic_write, format_dataset, format_disassociated, looks_disassociated,
                 parse_disassociated, parse_transactions)
from .metrics import metrics_report, rlm
from .reconstruction import (DEFAULT_LIMIT, attack_audit, enumerate_reconstructions,
                             sample_reconstruction)
from .reports import attack_report, audit_report, metrics_report_text, suppression_report
from .suppression import enforce_safety
from .synth import synth_generate

EXIT_OK, EXIT_BREACH, EXIT_USAGE = 0, 1, 2


def _emit(text: str, path) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _read(path) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _seed(args) -> int:
    env = os.environ.get("DISSOC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SafeDissocError(f"DISSOC_SEED must be an integer, got {env!r}") from None
    return args.seed


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _add_partition_args(p, required=False):
    p.add_argument("--k", type=int, required=required, default=None if required else 2)
    p.add_argument("--m", type=int, required=required, default=None if required else 2)
    p.add_argument("--delta", type=int, required=required, default=None if required else 10)


def _add_seed(p):
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="safedissoc",
                                     description="Safe k^m-disassociation of set-valued data.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("disassociate", help="transaction file -> disassociated dataset")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    _add_partition_args(p)
    _add_seed(p)

    p = sub.add_parser("audit", help="cover-problem report for a disassociated dataset")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--fail-on-breach", action="store_true")

    p = sub.add_parser("protect", help="repair cover problems (input: dataset or transactions)")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--report", help="where to write the suppression report (default: stderr)")
    _add_partition_args(p)
    _add_seed(p)

    p = sub.add_parser("reconstruct", help="enumerate or sample reconstructed datasets")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--sample", type=int, default=0, help="draw N random reconstructions instead")
    p.add_argument("--consistent", action="store_true",
                   help="keep only reconstructions whose re-disassociation gives the same chunks")
    _add_seed(p)

    p = sub.add_parser("attack", help="linkage audit for one background itemset")
    p.add_argument("input")
    p.add_argument("--background", required=True)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--limit", type=int, default=DEFAULT_LIMIT)
    p.add_argument("--consistent", action="store_true")
    p.add_argument("--fail-on-breach", action="store_true")
    p.add_argument("-o", "--output")

    p = sub.add_parser("metrics", help="PEM / RLM / RAE of a disassociated dataset")
    p.add_argument("input")
    p.add_argument("--original", required=True)
    p.add_argument("--before", help="dataset before repair (default: re-disassociate --original)")
    p.add_argument("--mode", choices=("estimator", "sampled"), default="estimator")
    p.add_argument("-o", "--output")
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("synth", help="generate Zipf-distributed transactions")
    p.add_argument("--items", type=int, required=True)
    p.add_argument("--records", type=int, required=True)
    p.add_argument("--zipf-s", type=float, default=1.0)
    p.add_argument("--max-len", type=int, default=10)
    p.add_argument("-o", "--output")
    _add_seed(p)

    p = sub.add_parser("sweep", help="metric tables versus k and delta")
    p.add_argument("input", help="transaction file")
    p.add_argument("--k-values", type=_int_list, default=list(range(2, 7)))
    p.add_argument("--delta-values", type=_int_list, default=list(range(10, 61, 10)))
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--fixed-k", type=int, default=3)
    p.add_argument("--fixed-delta", type=int, default=30)
    p.add_argument("--no-rae", action="store_true")
    p.add_argument("-o", "--output")
    _add_seed(p)
    return parser


def _cmd_disassociate(args):
    dataset = parse_transactions(_read(args.input))
    dd = disassociate(dataset, PartitionConfig(args.k, args.m, args.delta, _seed(args)))
    _emit(format_disassociated(dd), args.output)
    return EXIT_OK


def _cmd_audit(args):
    dd = parse_disassociated(_read(args.input))
    result = audit(dd)
    _emit(audit_report(result, dd), args.output)
    return EXIT_BREACH if args.fail_on_breach and result.vrc else EXIT_OK


def _cmd_protect(args):
    text = _read(args.input)
    if looks_disassociated(text):
        dd = parse_disassociated(text)
        config = dd.config
    else:
        config = PartitionConfig(args.k, args.m, args.delta, _seed(args))
        dd = disassociate(parse_transactions(text), config)
    safe, report = enforce_safety(dd, config)
    _emit(format_disassociated(safe), args.output)
    rep = suppression_report(report, safe).replace(
        "report = suppression\n", f"report = suppression\nrlm = {rlm(dd, safe)!r}\n", 1)
    if args.report:
        atomic_write(args.report, rep)
    else:
        sys.stderr.write(rep)
    return EXIT_OK


def _cmd_reconstruct(args):
    dd = parse_disassociated(_read(args.input))
    if args.sample:
        seed = _seed(args)
        recons = [sample_reconstruction(dd, seed + i) for i in range(args.sample)]
    else:
        recons = enumerate_reconstructions(dd, args.limit, args.consistent)
    blocks = []
    for i, r in enumerate(recons):
        blocks.append(f"RECONSTRUCTION {i} n={r.dataset.n}\n" + format_dataset(r.dataset))
    _emit("".join(blocks), args.output)
    return EXIT_OK


def _cmd_attack(args):
    dd = parse_disassociated(_read(args.input))
    k = dd.config.k if args.k is None else args.k
    finding = attack_audit(dd, args.background, k, args.limit, args.consistent)
    _emit(attack_report(finding, dd, k), args.output)
    return EXIT_BREACH if args.fail_on_breach and finding.breach else EXIT_OK


def _rebase(dd, dictionary):
    """Re-express ``dd`` over ``dictionary`` (a superset of its labels)."""
    lines = format_disassociated(dd).splitlines()
    lines[1] = " ".join(["ITEMS", *dictionary.labels])
    return parse_disassociated("\n".join(lines) + "\n")


def _cmd_metrics(args):
    dd = parse_disassociated(_read(args.input))
    # encode the original over the published dictionary so item ids agree
    original = check_transactions(parse_transactions(_read(args.original)).labelled(),
                                  dd.dictionary)
    if original.dictionary != dd.dictionary:
        dd = _rebase(dd, original.dictionary)
    if args.before:
        before = _rebase(parse_disassociated(_read(args.before)), original.dictionary)
    else:
        before = disassociate(original, dd.config)
    report = metrics_report(original, dd, before, args.mode, args.seed)
    _emit(metrics_report_text(report), args.output)
    return EXIT_OK


def _cmd_synth(args):
    dataset = synth_generate(args.items, args.records, args.zipf_s, args.max_len, _seed(args))
    _emit(format_dataset(dataset), args.output)
    return EXIT_OK


def _cmd_sweep(args):
    dataset = parse_transactions(_read(args.input))
    by_k, by_delta = sweep(dataset, args.k_values, args.delta_values, args.m,
                           args.fixed_k, args.fixed_delta, _seed(args), not args.no_rae)
    text = (format_table(by_k, f"vary k (m={args.m}, delta={args.fixed_delta})") + "\n"
            + format_table(by_delta, f"vary delta (k={args.fixed_k}, m={args.m})"))
    _emit(text, args.output)
    return EXIT_OK


COMMANDS = {
    "disassociate": _cmd_disassociate, "audit": _cmd_audit, "protect": _cmd_protect,
    "reconstruct": _cmd_reconstruct, "attack": _cmd_attack, "metrics": _cmd_metrics,
    "synth": _cmd_synth, "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except (SafeDissocError, OSError) as exc:
        print(f"safedissoc {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
