"""Namespace-partitioned token/id mappings.

Token namespaces reserve id 0 for padding and id 1 for unknown tokens.
Label namespaces (names ending in ``_labels``) are closed-class: ids start at
0 and looking up an unseen label is an error.
"""

from __future__ import annotations

import os
from typing import Iterable, Optional

PADDING_TOKEN = "@@PADDING@@"
UNKNOWN_TOKEN = "@@UNKNOWN@@"
PADDING_ID = 0
UNKNOWN_ID = 1

TOKENS_NAMESPACE = "tokens"
CHARACTERS_NAMESPACE = "characters"

VOCAB_DIR_NAME = "vocabulary"


def is_label_namespace(namespace: str) -> bool:
    return namespace.endswith("_labels")


class Vocabulary:
    def __init__(self, id_to_token: dict[str, list[str]]):
        self._id_to_token = {ns: list(tokens) for ns, tokens in id_to_token.items()}
        self._token_to_id = {
            ns: {token: i for i, token in enumerate(tokens)}
            for ns, tokens in self._id_to_token.items()
        }
        for ns, tokens in self._id_to_token.items():
            if len(self._token_to_id[ns]) != len(tokens):
                raise ValueError(f"duplicate tokens in namespace '{ns}'")
            if not is_label_namespace(ns):
                if tokens[:2] != [PADDING_TOKEN, UNKNOWN_TOKEN]:
                    raise ValueError(
                        f"token namespace '{ns}' must reserve ids 0/1 for "
                        f"padding/unknown"
                    )

    @property
    def namespaces(self) -> list[str]:
        return sorted(self._id_to_token)

    def size(self, namespace: str) -> int:
        self._check_namespace(namespace)
        return len(self._id_to_token[namespace])

    def sizes(self) -> dict[str, int]:
        return {ns: len(tokens) for ns, tokens in sorted(self._id_to_token.items())}

    def _check_namespace(self, namespace: str):
        if namespace not in self._id_to_token:
            raise ValueError(f"unknown vocabulary namespace '{namespace}'")

    def token_to_id(self, namespace: str, token: str) -> int:
        """Look up a token in an open (token) namespace; unseen tokens map to unknown."""
        self._check_namespace(namespace)
        return self._token_to_id[namespace].get(token, UNKNOWN_ID)

    def label_to_id(self, namespace: str, label: str) -> int:
        """Look up a label in a closed namespace; unseen labels are an error."""
        self._check_namespace(namespace)
        try:
            return self._token_to_id[namespace][label]
        except KeyError:
            known = ", ".join(self._id_to_token[namespace])
            raise ValueError(
                f"label '{label}' is not in namespace '{namespace}' (known: {known})"
            ) from None

    def id_to_token(self, namespace: str, index: int) -> str:
        self._check_namespace(namespace)
        return self._id_to_token[namespace][index]

    def tokens(self, namespace: str) -> list[str]:
        self._check_namespace(namespace)
        return list(self._id_to_token[namespace])

    @classmethod
    def from_instances(
        cls,
        instances: Iterable,
        min_count: Optional[dict[str, int]] = None,
    ) -> "Vocabulary":
        """Count tokens per namespace and assign dense ids.

        Tokens with count >= min_count (default 1) get ids ordered by
        descending count, ties broken lexicographically, so vocabulary
        construction is bit-reproducible.
        """
        min_count = min_count or {}
        counts: dict[str, dict[str, int]] = {}
        for instance in instances:
            instance.count_vocab_items(counts)
        id_to_token: dict[str, list[str]] = {}
        for ns, counter in counts.items():
            threshold = min_count.get(ns, 1)
            kept = sorted(
                (token for token, n in counter.items() if n >= threshold),
                key=lambda t: (-counter[t], t),
            )
            if is_label_namespace(ns):
                id_to_token[ns] = kept
            else:
                reserved = [PADDING_TOKEN, UNKNOWN_TOKEN]
                id_to_token[ns] = reserved + [t for t in kept if t not in reserved]
        return cls(id_to_token)

    def save_to(self, directory: str):
        """Write one ``<namespace>.txt`` per namespace, line number = id."""
        os.makedirs(directory, exist_ok=True)
        for ns in self.namespaces:
            path = os.path.join(directory, f"{ns}.txt")
            with open(path, "w", encoding="utf-8") as handle:
                for token in self._id_to_token[ns]:
                    handle.write(token + "\n")

    @classmethod
    def load_from(cls, directory: str) -> "Vocabulary":
        if not os.path.isdir(directory):
            raise FileNotFoundError(f"vocabulary directory not found: {directory}")
        id_to_token = {}
        for filename in sorted(os.listdir(directory)):
            if not filename.endswith(".txt"):
                continue
            ns = filename[: -len(".txt")]
            with open(os.path.join(directory, filename), encoding="utf-8") as handle:
                id_to_token[ns] = [line.rstrip("\n") for line in handle]
        return cls(id_to_token)


def build_vocabulary(instances, min_count: Optional[dict[str, int]] = None) -> Vocabulary:
    return Vocabulary.from_instances(instances, min_count)
