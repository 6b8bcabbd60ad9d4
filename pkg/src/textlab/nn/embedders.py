"""Token embedders: word lookup, character CNN, and concatenation.

All variants map a batch of token ids to [B, T, output_dim].  Outputs at
padded token positions are computed normally and excluded downstream by
masks.
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

from textlab.data.vocabulary import CHARACTERS_NAMESPACE, TOKENS_NAMESPACE, Vocabulary
from textlab.engine.core import Tensor
from textlab.engine.ops import concat_last_dim, embedding_lookup, reshape
from textlab.errors import ConfigurationError
from textlab.nn.convolution import conv_max_over_time
from textlab.nn.initialization import uniform_fan_in
from textlab.nn.module import Module
from textlab.params import Params
from textlab.registry import BuildContext, instantiate_from_params


class TokenEmbedder(Module):
    output_dim: int = 0

    def embed(
        self,
        word_ids: np.ndarray,
        char_ids: np.ndarray,
        mask: np.ndarray,
        char_mask: np.ndarray,
    ) -> Tensor:
        raise NotImplementedError


def load_pretrained_embeddings(path: str, vocab: Vocabulary, dim: int, table: np.ndarray) -> int:
    """Overlay vectors from a whitespace-separated text file onto ``table``.

    Each line is ``token v1 ... vD``.  Tokens absent from the file keep their
    random initialization.  Returns the number of rows replaced.
    """
    if not os.path.exists(path):
        raise ConfigurationError(f"pretrained embedding file not found: {path}")
    known = {t: i for i, t in enumerate(vocab.tokens(TOKENS_NAMESPACE))}
    replaced = 0
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                continue
            token, values = parts[0], parts[1:]
            if len(values) != dim:
                raise ConfigurationError(
                    f"{path}:{lineno}: expected {dim} values, got {len(values)}"
                )
            row = known.get(token)
            if row is not None:
                table[row] = [float(v) for v in values]
                replaced += 1
    return replaced


class WordEmbedding(TokenEmbedder):
    """Trainable lookup table over the word namespace."""

    def __init__(
        self,
        vocab: Vocabulary,
        embedding_dim: int,
        rng: np.random.Generator,
        pretrained_file: Optional[str] = None,
    ):
        super().__init__()
        self.output_dim = embedding_dim
        vocab_size = vocab.size(TOKENS_NAMESPACE)
        table = uniform_fan_in(rng, embedding_dim, (vocab_size, embedding_dim))
        if pretrained_file:
            load_pretrained_embeddings(pretrained_file, vocab, embedding_dim, table)
        self.weight = self.add_parameter("weight", table)

    @classmethod
    def from_params(cls, params: Params, context: BuildContext) -> "WordEmbedding":
        return cls(
            vocab=context.vocab,
            embedding_dim=params.pop_int("embedding_dim"),
            rng=context.rng,
            pretrained_file=params.pop_str("pretrained_file", None),
        )

    def embed(self, word_ids, char_ids, mask, char_mask):
        return embedding_lookup(self.weight, word_ids)


class CharacterCnn(TokenEmbedder):
    """Character embeddings convolved per token, max-pooled over positions.

    Character sequences shorter than the widest filter count as if right-padded
    to that width, so every token sees at least one valid window.
    """

    def __init__(
        self,
        vocab: Vocabulary,
        embedding_dim: int,
        filters: int,
        widths: list[int],
        rng: np.random.Generator,
    ):
        super().__init__()
        if not widths or any(w < 1 for w in widths):
            raise ConfigurationError("character_cnn widths must be positive")
        if filters < 1:
            raise ConfigurationError("character_cnn filters must be >= 1")
        self.char_dim = embedding_dim
        self.filters = filters
        self.widths = list(widths)
        self.output_dim = filters * len(widths)
        vocab_size = vocab.size(CHARACTERS_NAMESPACE)
        self.char_table = self.add_parameter(
            "char_table", uniform_fan_in(rng, embedding_dim, (vocab_size, embedding_dim))
        )
        self.conv_weights = []
        self.conv_biases = []
        for width in self.widths:
            fan_in = width * embedding_dim
            self.conv_weights.append(
                self.add_parameter(f"conv_w{width}.weight", uniform_fan_in(rng, fan_in, (fan_in, filters)))
            )
            self.conv_biases.append(
                self.add_parameter(f"conv_w{width}.bias", np.zeros(filters))
            )

    @classmethod
    def from_params(cls, params: Params, context: BuildContext) -> "CharacterCnn":
        return cls(
            vocab=context.vocab,
            embedding_dim=params.pop_int("embedding_dim"),
            filters=params.pop_int("filters"),
            widths=params.pop_int_list("widths"),
            rng=context.rng,
        )

    def embed(self, word_ids, char_ids, mask, char_mask):
        batch, time, chars = char_ids.shape
        widest = max(self.widths)
        if chars < widest:
            pad = widest - chars
            char_ids = np.pad(char_ids, ((0, 0), (0, 0), (0, pad)))
            char_mask = np.pad(char_mask, ((0, 0), (0, 0), (0, pad)))
            chars = widest
        embedded = embedding_lookup(self.char_table, char_ids)  # [B, T, C, Dc]
        flat = reshape(embedded, (batch * time, chars, self.char_dim))
        lengths = char_mask.sum(axis=2).reshape(batch * time)
        pooled = conv_max_over_time(flat, lengths, self.widths, self.conv_weights, self.conv_biases)
        return reshape(pooled, (batch, time, self.output_dim))


class ConcatEmbedder(TokenEmbedder):
    """Concatenates the outputs of member embedders on the last dimension."""

    def __init__(self, embedders: list[TokenEmbedder]):
        super().__init__()
        if not embedders:
            raise ConfigurationError("concat embedder needs at least one member")
        self.embedders = embedders
        for i, embedder in enumerate(embedders):
            self.add_child(f"embedders.{i}", embedder)
        self.output_dim = sum(e.output_dim for e in embedders)

    @classmethod
    def from_params(cls, params: Params, context: BuildContext) -> "ConcatEmbedder":
        members = [
            instantiate_from_params("token_embedder", sub, context)
            for sub in params.pop_object_list("embedders")
        ]
        return cls(members)

    def embed(self, word_ids, char_ids, mask, char_mask):
        return concat_last_dim(
            [e.embed(word_ids, char_ids, mask, char_mask) for e in self.embedders]
        )
