"""Dataset readers for the four JSONL task schemas.

Each reader turns one JSON object into an Instance, both when reading
training files and when validating prediction inputs (where gold fields are
absent).  Prediction-input problems raise InputError with a message that
names the offending field, which the HTTP service surfaces as a 400.
"""

from __future__ import annotations

import json
import os
from typing import Any, Optional

from textlab.data.fields import (
    Instance,
    LabelField,
    MetadataField,
    SequenceLabelField,
    SpanField,
    TextField,
)
from textlab.data.tokenization import Token, tokenize
from textlab.errors import ConfigurationError
from textlab.params import Params
from textlab.registry import BuildContext


class InputError(ValueError):
    """A malformed input object for prediction; message names the field."""


class DatasetReader:
    task: str = ""
    sort_field: str = ""
    label_namespace: Optional[str] = None

    def __init__(self, lowercase: bool = False):
        self.lowercase = lowercase

    @classmethod
    def from_params(cls, params: Params, context: BuildContext) -> "DatasetReader":
        return cls(lowercase=params.pop_bool("lowercase", False))

    def read(self, path: str) -> list[Instance]:
        if not os.path.exists(path):
            raise ConfigurationError(f"data file not found: {path}")
        instances = []
        with open(path, encoding="utf-8") as handle:
            for lineno, line in enumerate(handle, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as err:
                    raise ConfigurationError(f"{path}:{lineno}: invalid JSON: {err}") from None
                try:
                    instances.append(self.instance_from_json(obj, with_gold=True))
                except (InputError, ValueError) as err:
                    raise ConfigurationError(f"{path}:{lineno}: {err}") from None
        if not instances:
            raise ConfigurationError(f"data file is empty: {path}")
        return instances

    def instance_from_json(self, obj: Any, with_gold: bool) -> Instance:
        raise NotImplementedError

    def input_schema(self) -> list[dict[str, str]]:
        """Field layout of a prediction input, for /info and the demo UI."""
        raise NotImplementedError

    # -- input validation helpers ------------------------------------------

    def _require(self, obj: Any, key: str, kind: type, kind_name: str) -> Any:
        if not isinstance(obj, dict):
            raise InputError("input must be a JSON object")
        if key not in obj:
            raise InputError(f"missing required field '{key}'")
        value = obj[key]
        if not isinstance(value, kind) or isinstance(value, bool):
            raise InputError(f"field '{key}' must be a {kind_name}")
        return value

    def _text_field(self, obj: Any, key: str) -> TextField:
        text = self._require(obj, key, str, "string")
        tokens = tokenize(text, lowercase=self.lowercase)
        if not tokens:
            raise InputError(f"field '{key}' contains no tokens")
        return TextField(tuple(tokens))


class ClassificationReader(DatasetReader):
    task = "classification"
    sort_field = "text"
    label_namespace = "class_labels"

    def instance_from_json(self, obj, with_gold):
        fields = {"text": self._text_field(obj, "text")}
        if with_gold:
            label = self._require(obj, "label", str, "string")
            fields["label"] = LabelField(label, namespace=self.label_namespace)
        return Instance(fields)

    def input_schema(self):
        return [{"name": "text", "type": "text"}]


class TaggingReader(DatasetReader):
    task = "tagging"
    sort_field = "tokens"
    label_namespace = "tag_labels"

    def _token_list(self, obj) -> TextField:
        raw = self._require(obj, "tokens", list, "list of strings")
        if not raw or not all(isinstance(t, str) and t for t in raw):
            raise InputError("field 'tokens' must be a non-empty list of non-empty strings")
        if self.lowercase:
            raw = [t.lower() for t in raw]
        return TextField(tuple(Token(t) for t in raw))

    def instance_from_json(self, obj, with_gold):
        text = self._token_list(obj)
        fields: dict = {"tokens": text}
        if with_gold:
            tags = self._require(obj, "tags", list, "list of strings")
            if not all(isinstance(t, str) and t for t in tags):
                raise InputError("field 'tags' must be a list of non-empty strings")
            fields["tags"] = SequenceLabelField(
                tuple(tags), aligned_to="tokens", namespace=self.label_namespace
            )
        return Instance(fields)

    def input_schema(self):
        return [{"name": "tokens", "type": "tokens"}]


class SpanSelectionReader(DatasetReader):
    task = "span_selection"
    sort_field = "passage"
    label_namespace = None

    def instance_from_json(self, obj, with_gold):
        fields: dict = {
            "question": self._text_field(obj, "question"),
            "passage": self._text_field(obj, "passage"),
        }
        if with_gold:
            span = self._require(obj, "span", list, "pair of token indices")
            if len(span) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in span):
                raise InputError("field 'span' must be [start, end] token indices")
            fields["span"] = SpanField(span[0], span[1], over="passage")
        return Instance(fields)

    def input_schema(self):
        return [
            {"name": "question", "type": "text"},
            {"name": "passage", "type": "text"},
        ]


class PairClassificationReader(DatasetReader):
    task = "pair_classification"
    sort_field = "premise"
    label_namespace = "class_labels"

    def instance_from_json(self, obj, with_gold):
        fields = {
            "premise": self._text_field(obj, "premise"),
            "hypothesis": self._text_field(obj, "hypothesis"),
        }
        if with_gold:
            label = self._require(obj, "label", str, "string")
            fields["label"] = LabelField(label, namespace=self.label_namespace)
        return Instance(fields)

    def input_schema(self):
        return [
            {"name": "premise", "type": "text"},
            {"name": "hypothesis", "type": "text"},
        ]
