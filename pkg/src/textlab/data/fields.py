"""Typed fields and the Instance container.

Each field maps to exactly one model input array (MetadataField maps to
none).  Fields that are defined relative to a token sequence (tag sequences,
spans, indices) name the TextField they align to; alignment is validated when
the Instance is assembled.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from textlab.data.tokenization import Token
from textlab.data.vocabulary import CHARACTERS_NAMESPACE, TOKENS_NAMESPACE, Vocabulary

# Indexed payloads are plain python lists of ints; batching turns them into
# padded numpy arrays.


class Field:
    """Base class for all field variants."""

    def count_vocab_items(self, counts: dict[str, dict[str, int]]):
        """Accumulate token counts into per-namespace counters."""

    def index(self, vocab: Vocabulary) -> "IndexedField":
        raise NotImplementedError


@dataclass(frozen=True)
class IndexedField:
    pass


@dataclass(frozen=True)
class IndexedText(IndexedField):
    word_ids: tuple[int, ...]
    char_ids: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.word_ids)


@dataclass(frozen=True)
class IndexedLabel(IndexedField):
    label_id: int


@dataclass(frozen=True)
class IndexedSequenceLabels(IndexedField):
    tag_ids: tuple[int, ...]
    aligned_to: str


@dataclass(frozen=True)
class IndexedSpan(IndexedField):
    start: int
    end: int
    over: str


@dataclass(frozen=True)
class IndexedIndex(IndexedField):
    index: int
    over: str


@dataclass(frozen=True)
class IndexedMetadata(IndexedField):
    value: Any


@dataclass(frozen=True)
class TextField(Field):
    tokens: tuple[Token, ...]

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("a TextField needs at least one token")

    def __len__(self) -> int:
        return len(self.tokens)

    def count_vocab_items(self, counts):
        word_counter = counts.setdefault(TOKENS_NAMESPACE, {})
        char_counter = counts.setdefault(CHARACTERS_NAMESPACE, {})
        for token in self.tokens:
            word_counter[token.text] = word_counter.get(token.text, 0) + 1
            for ch in token.text:
                char_counter[ch] = char_counter.get(ch, 0) + 1

    def index(self, vocab):
        word_ids = tuple(vocab.token_to_id(TOKENS_NAMESPACE, t.text) for t in self.tokens)
        char_ids = tuple(
            tuple(vocab.token_to_id(CHARACTERS_NAMESPACE, ch) for ch in t.text)
            for t in self.tokens
        )
        return IndexedText(word_ids, char_ids)


@dataclass(frozen=True)
class LabelField(Field):
    label: str
    namespace: str = "class_labels"

    def count_vocab_items(self, counts):
        counter = counts.setdefault(self.namespace, {})
        counter[self.label] = counter.get(self.label, 0) + 1

    def index(self, vocab):
        return IndexedLabel(vocab.label_to_id(self.namespace, self.label))


@dataclass(frozen=True)
class SequenceLabelField(Field):
    tags: tuple[str, ...]
    aligned_to: str
    namespace: str = "tag_labels"

    def count_vocab_items(self, counts):
        counter = counts.setdefault(self.namespace, {})
        for tag in self.tags:
            counter[tag] = counter.get(tag, 0) + 1

    def index(self, vocab):
        tag_ids = tuple(vocab.label_to_id(self.namespace, tag) for tag in self.tags)
        return IndexedSequenceLabels(tag_ids, self.aligned_to)


@dataclass(frozen=True)
class SpanField(Field):
    start: int
    end: int  # inclusive
    over: str

    def index(self, vocab):
        return IndexedSpan(self.start, self.end, self.over)


@dataclass(frozen=True)
class IndexField(Field):
    index: int
    over: str

    def index(self, vocab):
        return IndexedIndex(self.index, self.over)


@dataclass(frozen=True)
class MetadataField(Field):
    value: Any

    def index(self, vocab):
        return IndexedMetadata(self.value)


class Instance:
    """A named collection of fields representing one example."""

    def __init__(self, fields: dict[str, Field]):
        self.fields = dict(fields)
        self._validate()

    def _validate(self):
        for name, fld in self.fields.items():
            if isinstance(fld, SequenceLabelField):
                target = self._aligned_text(name, fld.aligned_to)
                if len(fld.tags) != len(target):
                    raise ValueError(
                        f"field '{name}' has {len(fld.tags)} tags but "
                        f"'{fld.aligned_to}' has {len(target)} tokens"
                    )
            elif isinstance(fld, SpanField):
                target = self._aligned_text(name, fld.over)
                if not (0 <= fld.start <= fld.end < len(target)):
                    raise ValueError(
                        f"span ({fld.start}, {fld.end}) of field '{name}' is outside "
                        f"'{fld.over}' of length {len(target)}"
                    )
            elif isinstance(fld, IndexField):
                target = self._aligned_text(name, fld.over)
                if not (0 <= fld.index < len(target)):
                    raise ValueError(
                        f"index {fld.index} of field '{name}' is outside "
                        f"'{fld.over}' of length {len(target)}"
                    )

    def _aligned_text(self, name: str, target_name: str) -> TextField:
        target = self.fields.get(target_name)
        if not isinstance(target, TextField):
            raise ValueError(
                f"field '{name}' aligns to '{target_name}', which is not a "
                f"TextField in this instance"
            )
        return target

    def count_vocab_items(self, counts: dict[str, dict[str, int]]):
        for fld in self.fields.values():
            fld.count_vocab_items(counts)

    def index(self, vocab: Vocabulary) -> "IndexedInstance":
        return IndexedInstance(
            {name: fld.index(vocab) for name, fld in self.fields.items()}
        )


class IndexedInstance:
    """An Instance whose fields have been mapped to integer ids; immutable."""

    def __init__(self, fields: dict[str, IndexedField]):
        self.fields = dict(fields)

    def schema(self) -> tuple[tuple[str, type], ...]:
        return tuple(sorted((name, type(f)) for name, f in self.fields.items()))

    def text_length(self, field_name: str) -> int:
        fld = self.fields[field_name]
        if not isinstance(fld, IndexedText):
            raise ValueError(f"field '{field_name}' is not a text field")
        return len(fld)


def index_instance(instance: Instance, vocab: Vocabulary) -> IndexedInstance:
    """Map every field of ``instance`` to vocabulary ids."""
    return instance.index(vocab)
