"""Whitespace tokenizer with punctuation splitting."""

from __future__ import annotations

from dataclasses import dataclass

PUNCTUATION = set(".,!?;:'\"()[]")


@dataclass(frozen=True)
class Token:
    text: str

    def __post_init__(self):
        if not self.text:
            raise ValueError("token text must be non-empty")


def tokenize(text: str, lowercase: bool = False) -> list[Token]:
    """Split on whitespace, then peel leading/trailing punctuation into tokens.

    ``"Dogs bark."`` becomes ``["Dogs", "bark", "."]``.  Empty text yields an
    empty list.  Lowercasing is off by default.
    """
    if lowercase:
        text = text.lower()
    tokens: list[Token] = []
    for chunk in text.split():
        leading: list[str] = []
        trailing: list[str] = []
        while chunk and chunk[0] in PUNCTUATION:
            leading.append(chunk[0])
            chunk = chunk[1:]
        while chunk and chunk[-1] in PUNCTUATION:
            trailing.append(chunk[-1])
            chunk = chunk[:-1]
        tokens.extend(Token(ch) for ch in leading)
        if chunk:
            tokens.append(Token(chunk))
        tokens.extend(Token(ch) for ch in reversed(trailing))
    return tokens
