"""Commented-JSON configuration dialect: parsing, merging, canonical output.

Experiments are defined in strict JSON extended with line comments (``//`` or
``#`` outside string literals).  Parsing keeps a (line, column) span on every
node so that later validation errors can point back into the file.  There is
deliberately no support for substitutions, includes, or unquoted keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterator, Optional, Union

from textlab.errors import ConfigParseError, ConfigurationError

# Span used for nodes that were synthesized in code rather than parsed.
SYNTHETIC_SPAN = (0, 0)

_KINDS = ("null", "boolean", "number", "string", "array", "object")

# Largest float that still round-trips through an exact integer literal.
_MAX_INT_LITERAL = 2.0**53


@dataclass
class ConfigValue:
    """One node of a parsed configuration tree.

    ``value`` holds ``None``, ``bool``, ``float``, ``str``, a list of
    ``ConfigValue`` (arrays), or an ordered ``dict[str, ConfigValue]``
    (objects).  All numbers are 64-bit floats; integer extraction happens at
    parameter-reading time.  Equality is structural and ignores spans.
    """

    kind: str
    value: Any
    span: tuple[int, int] = SYNTHETIC_SPAN

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown config value kind: {self.kind!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ConfigValue):
            return NotImplemented
        return self.kind == other.kind and self.value == other.value

    def __repr__(self) -> str:
        return f"ConfigValue({self.kind}, {self.value!r})"

    def is_object(self) -> bool:
        return self.kind == "object"

    @property
    def entries(self) -> dict[str, "ConfigValue"]:
        if self.kind != "object":
            raise ValueError(f"not an object: {self.kind}")
        return self.value

    @property
    def items(self) -> list["ConfigValue"]:
        if self.kind != "array":
            raise ValueError(f"not an array: {self.kind}")
        return self.value

    def to_python(self) -> Any:
        """Convert to plain Python values (floats stay floats)."""
        if self.kind == "array":
            return [v.to_python() for v in self.value]
        if self.kind == "object":
            return {k: v.to_python() for k, v in self.value.items()}
        return self.value

    @classmethod
    def from_python(cls, obj: Any) -> "ConfigValue":
        """Build a synthetic tree from plain Python values."""
        if obj is None:
            return cls("null", None)
        if isinstance(obj, bool):
            return cls("boolean", obj)
        if isinstance(obj, (int, float)):
            number = float(obj)
            if number != number or number in (float("inf"), float("-inf")):
                raise ConfigurationError("config numbers must be finite")
            return cls("number", number)
        if isinstance(obj, str):
            return cls("string", obj)
        if isinstance(obj, (list, tuple)):
            return cls("array", [cls.from_python(v) for v in obj])
        if isinstance(obj, dict):
            entries: dict[str, ConfigValue] = {}
            for key, val in obj.items():
                if not isinstance(key, str):
                    raise ConfigurationError(f"object keys must be strings, got {key!r}")
                entries[key] = cls.from_python(val)
            return cls("object", entries)
        raise ConfigurationError(f"cannot represent {type(obj).__name__} as a config value")


_WHITESPACE = " \t\r\n"
_DIGITS = "0123456789"
_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "b": "\b", "f": "\f", "n": "\n", "r": "\r", "t": "\t"}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def error(self, message: str, where: Optional[tuple[int, int]] = None) -> ConfigParseError:
        line, column = where if where is not None else (self.line, self.column)
        return ConfigParseError(message, line, column)

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def skip_trivia(self):
        """Skip whitespace and line comments (``//`` or ``#`` to end of line)."""
        while not self.at_end():
            ch = self.peek()
            if ch in _WHITESPACE:
                self.advance()
            elif ch == "#" or (ch == "/" and self.text[self.pos : self.pos + 2] == "//"):
                while not self.at_end() and self.peek() != "\n":
                    self.advance()
            else:
                return

    def expect(self, ch: str):
        if self.at_end() or self.peek() != ch:
            found = "end of input" if self.at_end() else repr(self.peek())
            raise self.error(f"expected {ch!r}, found {found}")
        self.advance()

    def parse_value(self) -> ConfigValue:
        self.skip_trivia()
        if self.at_end():
            raise self.error("unexpected end of input")
        span = (self.line, self.column)
        ch = self.peek()
        if ch == "{":
            return self.parse_object(span)
        if ch == "[":
            return self.parse_array(span)
        if ch == '"':
            return ConfigValue("string", self.parse_string(), span)
        if ch == "-" or ch in _DIGITS:
            return ConfigValue("number", self.parse_number(span), span)
        if self.text.startswith("true", self.pos):
            self._consume_word("true")
            return ConfigValue("boolean", True, span)
        if self.text.startswith("false", self.pos):
            self._consume_word("false")
            return ConfigValue("boolean", False, span)
        if self.text.startswith("null", self.pos):
            self._consume_word("null")
            return ConfigValue("null", None, span)
        raise self.error(f"unexpected character {ch!r}")

    def _consume_word(self, word: str):
        for _ in word:
            self.advance()
        # Guard against identifiers that merely start with a keyword (nullx).
        nxt = self.peek()
        if nxt and (nxt.isalnum() or nxt == "_"):
            raise self.error(f"unexpected character {nxt!r}")

    def parse_object(self, span: tuple[int, int]) -> ConfigValue:
        self.expect("{")
        entries: dict[str, ConfigValue] = {}
        self.skip_trivia()
        if self.peek() == "}":
            self.advance()
            return ConfigValue("object", entries, span)
        while True:
            self.skip_trivia()
            key_span = (self.line, self.column)
            if self.peek() != '"':
                found = "end of input" if self.at_end() else repr(self.peek())
                raise self.error(f"expected object key string, found {found}")
            key = self.parse_string()
            if key in entries:
                raise self.error(f"duplicate key {key!r}", key_span)
            self.skip_trivia()
            self.expect(":")
            entries[key] = self.parse_value()
            self.skip_trivia()
            if self.peek() == ",":
                comma_span = (self.line, self.column)
                self.advance()
                self.skip_trivia()
                if self.peek() == "}":
                    raise self.error("trailing comma", comma_span)
                continue
            if self.peek() == "}":
                self.advance()
                return ConfigValue("object", entries, span)
            found = "end of input" if self.at_end() else repr(self.peek())
            raise self.error(f"expected ',' or '}}', found {found}")

    def parse_array(self, span: tuple[int, int]) -> ConfigValue:
        self.expect("[")
        items: list[ConfigValue] = []
        self.skip_trivia()
        if self.peek() == "]":
            self.advance()
            return ConfigValue("array", items, span)
        while True:
            items.append(self.parse_value())
            self.skip_trivia()
            if self.peek() == ",":
                comma_span = (self.line, self.column)
                self.advance()
                self.skip_trivia()
                if self.peek() == "]":
                    raise self.error("trailing comma", comma_span)
                continue
            if self.peek() == "]":
                self.advance()
                return ConfigValue("array", items, span)
            found = "end of input" if self.at_end() else repr(self.peek())
            raise self.error(f"expected ',' or ']', found {found}")

    def parse_string(self) -> str:
        start = (self.line, self.column)
        self.expect('"')
        chunks: list[str] = []
        while True:
            if self.at_end():
                raise self.error("unterminated string", start)
            ch = self.advance()
            if ch == '"':
                return "".join(chunks)
            if ch == "\n":
                raise self.error("unterminated string", start)
            if ch == "\\":
                if self.at_end():
                    raise self.error("unterminated string", start)
                esc = self.advance()
                if esc in _ESCAPES:
                    chunks.append(_ESCAPES[esc])
                elif esc == "u":
                    chunks.append(self._parse_unicode_escape(start))
                else:
                    raise self.error(f"invalid escape sequence \\{esc}")
            elif ord(ch) < 0x20:
                raise self.error(f"invalid control character {ch!r} in string")
            else:
                chunks.append(ch)

    def _parse_unicode_escape(self, start: tuple[int, int]) -> str:
        code = self._read_hex4(start)
        # Combine UTF-16 surrogate pairs into a single character.
        if 0xD800 <= code <= 0xDBFF and self.text.startswith("\\u", self.pos):
            save = (self.pos, self.line, self.column)
            self.advance()
            self.advance()
            low = self._read_hex4(start)
            if 0xDC00 <= low <= 0xDFFF:
                return chr(0x10000 + ((code - 0xD800) << 10) + (low - 0xDC00))
            self.pos, self.line, self.column = save
        return chr(code)

    def _read_hex4(self, start: tuple[int, int]) -> int:
        digits = []
        for _ in range(4):
            if self.at_end():
                raise self.error("unterminated string", start)
            digits.append(self.advance())
        try:
            return int("".join(digits), 16)
        except ValueError:
            raise self.error(f"invalid unicode escape \\u{''.join(digits)}") from None

    def parse_number(self, span: tuple[int, int]) -> float:
        start = self.pos
        if self.peek() == "-":
            self.advance()
        if self.peek() == "0":
            self.advance()
            if self.peek() in _DIGITS:
                raise self.error("leading zeros are not allowed", span)
        elif self.peek() in _DIGITS:
            while self.peek() in _DIGITS:
                self.advance()
        else:
            raise self.error("invalid number", span)
        if self.peek() == ".":
            self.advance()
            if self.peek() not in _DIGITS:
                raise self.error("digit expected after decimal point")
            while self.peek() in _DIGITS:
                self.advance()
        if self.peek() in "eE":
            self.advance()
            if self.peek() in "+-":
                self.advance()
            if self.peek() not in _DIGITS:
                raise self.error("digit expected in exponent")
            while self.peek() in _DIGITS:
                self.advance()
        literal = self.text[start : self.pos]
        number = float(literal)
        if number in (float("inf"), float("-inf")):
            raise self.error(f"number out of range: {literal}", span)
        return number


def parse_config(text: str) -> ConfigValue:
    """Parse a commented-JSON document into a ConfigValue tree.

    Accepts strict JSON plus ``//`` and ``#`` line comments anywhere outside
    string literals.  Trailing commas, duplicate keys, and non-finite numbers
    are hard errors with a line/column position.
    """
    if text.startswith("﻿"):
        text = text[1:]
    parser = _Parser(text)
    value = parser.parse_value()
    parser.skip_trivia()
    if not parser.at_end():
        raise parser.error(f"unexpected trailing content {parser.peek()!r}")
    return value


def load_config_file(path: str) -> ConfigValue:
    """Read and parse a UTF-8 config file."""
    try:
        with open(path, encoding="utf-8") as handle:
            text = handle.read()
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    try:
        return parse_config(text)
    except ConfigParseError as err:
        raise ConfigParseError(f"in {path}: {err.args[0].rsplit(' at line', 1)[0]}", err.line, err.column) from None


def _expand_dotted_keys(overrides: ConfigValue) -> ConfigValue:
    """Rewrite keys like ``"trainer.num_epochs"`` into nested objects."""
    expanded: dict[str, ConfigValue] = {}
    for key, value in overrides.entries.items():
        if value.is_object():
            value = _expand_dotted_keys(value)
        parts = key.split(".")
        if any(not part for part in parts):
            raise ConfigurationError(f"invalid override key {key!r}")
        node = value
        for part in reversed(parts[1:]):
            node = ConfigValue("object", {part: node})
        head = parts[0]
        if head in expanded:
            node = _merge(expanded[head], node, head)
        expanded[head] = node
    return ConfigValue("object", expanded, overrides.span)


def _merge(base: ConfigValue, overrides: ConfigValue, path: str) -> ConfigValue:
    if not overrides.is_object():
        # Scalar and array overrides replace the base value wholesale.
        return overrides
    if not base.is_object():
        raise ConfigurationError(
            f"override at '{path}' expects an object but the base config has "
            f"a {base.kind} there"
        )
    merged: dict[str, ConfigValue] = dict(base.entries)
    for key, value in overrides.entries.items():
        child_path = f"{path}.{key}" if path else key
        if key in merged:
            merged[key] = _merge(merged[key], value, child_path)
        else:
            merged[key] = value
    return ConfigValue("object", merged, base.span)


def merge_overrides(base: ConfigValue, overrides: ConfigValue) -> ConfigValue:
    """Deep-merge ``overrides`` into ``base`` and return a new tree.

    Object values merge recursively; scalar and array overrides replace the
    base value.  Override keys may be dotted paths, which are expanded into
    nested objects before merging.  An override that descends into a
    non-object base value is an error.
    """
    if not base.is_object():
        raise ConfigurationError("merge base must be an object")
    if not overrides.is_object():
        raise ConfigurationError("overrides must be an object")
    return _merge(base, _expand_dotted_keys(overrides), "")


def _format_number(number: float) -> str:
    if number == int(number) and abs(number) <= _MAX_INT_LITERAL:
        return str(int(number))
    return repr(number)


def _serialize(value: ConfigValue, indent: int) -> str:
    pad = "  " * indent
    child_pad = "  " * (indent + 1)
    if value.kind == "null":
        return "null"
    if value.kind == "boolean":
        return "true" if value.value else "false"
    if value.kind == "number":
        return _format_number(value.value)
    if value.kind == "string":
        return json.dumps(value.value, ensure_ascii=False)
    if value.kind == "array":
        if not value.value:
            return "[]"
        lines = [f"{child_pad}{_serialize(item, indent + 1)}" for item in value.value]
        return "[\n" + ",\n".join(lines) + f"\n{pad}]"
    if not value.value:
        return "{}"
    lines = [
        f"{child_pad}{json.dumps(key, ensure_ascii=False)}: {_serialize(value.value[key], indent + 1)}"
        for key in sorted(value.value)
    ]
    return "{\n" + ",\n".join(lines) + f"\n{pad}}}"


def canonical_serialize(value: ConfigValue) -> str:
    """Deterministic pretty-printed JSON: 2-space indent, sorted keys, no comments.

    ``parse_config(canonical_serialize(v))`` is structurally equal to ``v``;
    the canonical form is what gets logged and archived as the experiment
    record.
    """
    return _serialize(value, 0)
