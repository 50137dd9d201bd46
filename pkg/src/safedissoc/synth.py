"""Zipf-distributed synthetic transactions.

Record lengths are uniform in ``[1, max_len]``; the items of a record are
drawn without replacement with probability proportional to ``1 / rank**s``.
Successive weighted draws without replacement are produced in bulk with the
Gumbel-top-k trick: perturb the log-weights with Gumbel noise and keep the
``L`` largest keys.
"""
from __future__ import annotations

import numpy as np

from ._validation import check_positive_int, check_seed
from .exceptions import InvalidParameterError
from .model import Dataset, ItemDictionary

_BATCH_CELLS = 1 << 22


def zipf_weights(n_items: int, s: float) -> np.ndarray:
    ranks = np.arange(1, n_items + 1, dtype=float)
    w = ranks ** -float(s)
    return w / w.sum()


def synth_generate(n_items: int, n_records: int, zipf_s: float = 1.0, max_len: int = 10,
                   seed: int = 0) -> Dataset:
    """Generate ``n_records`` transactions over items labelled ``1..n_items``."""
    n_items = check_positive_int(n_items, "items")
    max_len = check_positive_int(max_len, "max-len")
    seed = check_seed(seed)
    if isinstance(n_records, bool) or not isinstance(n_records, (int, np.integer)) or n_records < 0:
        raise InvalidParameterError(f"records must be a non-negative integer, got {n_records!r}")
    if not np.isfinite(zipf_s) or zipf_s < 0:
        raise InvalidParameterError(f"zipf-s must be a finite non-negative number, got {zipf_s!r}")

    dictionary = ItemDictionary(str(i) for i in range(1, n_items + 1))
    rng = np.random.default_rng(seed)
    max_len = min(max_len, n_items)
    lengths = rng.integers(1, max_len + 1, size=n_records)
    log_w = np.log(zipf_weights(n_items, zipf_s))
    batch = max(1, _BATCH_CELLS // n_items)
    records = []
    for start in range(0, n_records, batch):
        stop = min(n_records, start + batch)
        keys = log_w + rng.gumbel(size=(stop - start, n_items))
        top = np.argpartition(-keys, max_len - 1, axis=1)[:, :max_len] if max_len < n_items \
            else np.broadcast_to(np.arange(n_items), (stop - start, n_items))
        top_keys = np.take_along_axis(keys, top, axis=1)
        ranked = np.take_along_axis(top, np.argsort(-top_keys, axis=1, kind="stable"), axis=1)
        for row, length in zip(ranked, lengths[start:stop]):
            records.append(tuple(sorted(int(x) for x in row[:length])))
    return Dataset(tuple(records), dictionary)
