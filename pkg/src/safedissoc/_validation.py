"""Input validation shared by the estimators and the functional API."""
from __future__ import annotations

import numbers
from typing import Iterable

from .exceptions import InvalidParameterError
from .model import Dataset, ItemDictionary


def check_positive_int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
        raise InvalidParameterError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, numbers.Integral) or not 0 <= seed < 2**64:
        raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def check_transactions(X, dictionary: ItemDictionary | None = None,
                       allow_new_items: bool = True) -> Dataset:
    """Coerce ``X`` to a :class:`Dataset`.

    Accepts a Dataset (returned as is when no dictionary is imposed) or any
    iterable of transactions, each an iterable of hashable labels.  A bare
    string transaction is split on whitespace.  Labels are converted with
    ``str``.  With ``allow_new_items=False`` every label must already be in
    ``dictionary``.
    """
    if isinstance(X, Dataset):
        if dictionary is None or X.dictionary == dictionary:
            return X
        X = X.labelled()
    if isinstance(X, (str, bytes)):
        raise InvalidParameterError("expected an iterable of transactions, got a string")
    try:
        transactions = list(X)
    except TypeError:
        raise InvalidParameterError(
            f"expected an iterable of transactions, got {type(X).__name__}") from None
    if dictionary is None:
        dictionary = ItemDictionary()
    elif allow_new_items:
        dictionary = ItemDictionary(dictionary.labels)
    cleaned = []
    for i, tx in enumerate(transactions):
        labels = _transaction_labels(tx, i)
        if not allow_new_items:
            unknown = [lab for lab in labels if lab not in dictionary]
            if unknown:
                raise InvalidParameterError(
                    f"transaction {i} has items unseen during fit: {unknown[:5]}")
        cleaned.append(labels)
    return Dataset.from_transactions(cleaned, dictionary)


def _transaction_labels(tx, i: int) -> list[str]:
    if isinstance(tx, str):
        return tx.split()
    if not isinstance(tx, Iterable):
        raise InvalidParameterError(f"transaction {i} is not iterable: {tx!r}")
    labels = []
    for item in tx:
        label = str(item)
        if not label or any(c.isspace() for c in label):
            raise InvalidParameterError(
                f"transaction {i}: item labels must be non-empty and whitespace-free, got {item!r}")
        labels.append(label)
    return labels
