"""Bucketing, padding, and masking of indexed instances.

Padding id is 0 in every array, including character arrays; every TextField
gets a {0,1} mask with 1 exactly at real (non-padded) positions.  Bucketing
stable-sorts by length, batches contiguous runs, and shuffles only the order
of the batches.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from textlab.data.fields import (
    IndexedIndex,
    IndexedInstance,
    IndexedLabel,
    IndexedMetadata,
    IndexedSequenceLabels,
    IndexedSpan,
    IndexedText,
)


@dataclass
class Batch:
    instances: list[IndexedInstance]
    arrays: dict[str, dict[str, np.ndarray]]

    def __len__(self) -> int:
        return len(self.instances)


def _pad_text(fields: list[IndexedText]) -> dict[str, np.ndarray]:
    batch = len(fields)
    max_len = max(len(f) for f in fields)
    max_chars = max(max(len(cs) for cs in f.char_ids) for f in fields)
    word_ids = np.zeros((batch, max_len), dtype=np.int64)
    mask = np.zeros((batch, max_len), dtype=np.int64)
    char_ids = np.zeros((batch, max_len, max_chars), dtype=np.int64)
    char_mask = np.zeros((batch, max_len, max_chars), dtype=np.int64)
    for i, f in enumerate(fields):
        word_ids[i, : len(f)] = f.word_ids
        mask[i, : len(f)] = 1
        for t, chars in enumerate(f.char_ids):
            char_ids[i, t, : len(chars)] = chars
            char_mask[i, t, : len(chars)] = 1
    return {"word_ids": word_ids, "mask": mask, "char_ids": char_ids, "char_mask": char_mask}


def pad_batch(instances: list[IndexedInstance]) -> Batch:
    """Pad a list of indexed instances sharing one field schema into arrays."""
    if not instances:
        raise ValueError("cannot pad an empty batch")
    schema = instances[0].schema()
    for inst in instances[1:]:
        if inst.schema() != schema:
            raise ValueError(
                f"all instances in a batch must share a field schema; "
                f"got {schema} and {inst.schema()}"
            )
    arrays: dict[str, dict[str, np.ndarray]] = {}
    text_lengths: dict[str, int] = {}
    for name, kind in schema:
        fields = [inst.fields[name] for inst in instances]
        if kind is IndexedText:
            arrays[name] = _pad_text(fields)
            text_lengths[name] = arrays[name]["word_ids"].shape[1]
    for name, kind in schema:
        fields = [inst.fields[name] for inst in instances]
        if kind is IndexedText or kind is IndexedMetadata:
            continue
        if kind is IndexedLabel:
            arrays[name] = {
                "label": np.array([f.label_id for f in fields], dtype=np.int64)
            }
        elif kind is IndexedSequenceLabels:
            length = text_lengths[fields[0].aligned_to]
            tags = np.zeros((len(fields), length), dtype=np.int64)
            for i, f in enumerate(fields):
                tags[i, : len(f.tag_ids)] = f.tag_ids
            arrays[name] = {"tags": tags}
        elif kind is IndexedSpan:
            arrays[name] = {
                "span": np.array([[f.start, f.end] for f in fields], dtype=np.int64)
            }
        elif kind is IndexedIndex:
            arrays[name] = {
                "index": np.array([f.index for f in fields], dtype=np.int64)
            }
        else:
            raise ValueError(f"cannot batch field '{name}' of type {kind.__name__}")
    return Batch(list(instances), arrays)


def make_buckets(
    instances: list[IndexedInstance],
    batch_size: int,
    sort_field: str,
    shuffle_seed: int,
) -> list[Batch]:
    """Sort by length, batch contiguous runs, and shuffle the batch order.

    The sort is stable (ties keep their original position), each batch is a
    contiguous run of the sorted order, and only the order of whole batches is
    shuffled, with a PRNG seeded by ``shuffle_seed``.  The last batch may be
    smaller.
    """
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    for inst in instances:
        if sort_field not in inst.fields or not isinstance(
            inst.fields[sort_field], IndexedText
        ):
            raise ValueError(f"sort field '{sort_field}' missing from an instance")
    ordered = sorted(instances, key=lambda inst: inst.text_length(sort_field))
    groups = [ordered[i : i + batch_size] for i in range(0, len(ordered), batch_size)]
    random.Random(shuffle_seed).shuffle(groups)
    return [pad_batch(group) for group in groups]


def iter_evaluation_batches(
    instances: list[IndexedInstance], batch_size: int, sort_field: str
) -> list[Batch]:
    """Length-sorted batches without shuffling, for evaluation."""
    if batch_size < 1:
        raise ValueError("batch_size must be >= 1")
    ordered = sorted(instances, key=lambda inst: inst.text_length(sort_field))
    return [
        pad_batch(ordered[i : i + batch_size])
        for i in range(0, len(ordered), batch_size)
    ]
