"""Strict parameter reading for component construction.

A ``Params`` wraps one object node of the parsed config tree and tracks which
keys have been consumed.  Every extraction error names the full dotted path
from the experiment-config root, and ``assert_empty`` turns silent typos into
hard failures.
"""

from __future__ import annotations

from typing import Any, Optional

from textlab.config import ConfigValue
from textlab.errors import ConfigurationError


class _Required:
    def __repr__(self) -> str:
        return "<required>"


REQUIRED = _Required()


class Params:
    """A consumable view over one config object, with a dotted-path history."""

    def __init__(self, entries: dict[str, ConfigValue], history: str = ""):
        self._entries = entries
        self._consumed: set[str] = set()
        self.history = history

    @classmethod
    def from_config(cls, value: ConfigValue, history: str = "") -> "Params":
        if not value.is_object():
            raise ConfigurationError(
                f"expected an object at '{history or '<root>'}', got {value.kind}"
            )
        return cls(dict(value.entries), history)

    @classmethod
    def from_python(cls, obj: dict, history: str = "") -> "Params":
        return cls.from_config(ConfigValue.from_python(obj), history)

    def path(self, key: str) -> str:
        return f"{self.history}.{key}" if self.history else key

    def __contains__(self, key: str) -> bool:
        return key in self._entries and key not in self._consumed

    def keys(self) -> list[str]:
        return list(self._entries)

    def unconsumed(self) -> list[str]:
        return [k for k in self._entries if k not in self._consumed]

    def _take(self, key: str) -> ConfigValue:
        if key in self._consumed:
            raise RuntimeError(f"key '{self.path(key)}' was already consumed")
        self._consumed.add(key)
        return self._entries[key]

    def pop(self, key: str, default: Any = REQUIRED) -> Any:
        """Pop the raw ConfigValue for ``key``, or ``default`` when absent."""
        if key not in self._entries:
            if default is REQUIRED:
                raise ConfigurationError(
                    f"key '{self.path(key)}' is required"
                    + (f" for '{self.history}'" if self.history else "")
                )
            self._consumed.add(key)
            return default
        return self._take(key)

    def _pop_scalar(self, key: str, kind: str, default: Any) -> Any:
        value = self.pop(key, default)
        if not isinstance(value, ConfigValue):
            return value
        if value.kind != kind:
            raise ConfigurationError(
                f"expected a {kind} for key '{self.path(key)}', got {value.kind}"
            )
        return value.value

    def pop_bool(self, key: str, default: Any = REQUIRED) -> bool:
        return self._pop_scalar(key, "boolean", default)

    def pop_str(self, key: str, default: Any = REQUIRED) -> str:
        return self._pop_scalar(key, "string", default)

    def pop_float(self, key: str, default: Any = REQUIRED) -> float:
        return self._pop_scalar(key, "number", default)

    def pop_int(self, key: str, default: Any = REQUIRED) -> int:
        value = self.pop(key, default)
        if not isinstance(value, ConfigValue):
            return value
        if value.kind != "number" or not float(value.value).is_integer():
            got = value.value if value.kind == "number" else value.kind
            raise ConfigurationError(
                f"expected an integer for key '{self.path(key)}', got {got}"
            )
        return int(value.value)

    def pop_object(self, key: str, default: Any = REQUIRED) -> Any:
        value = self.pop(key, default)
        if not isinstance(value, ConfigValue):
            return value
        if not value.is_object():
            raise ConfigurationError(
                f"expected an object for key '{self.path(key)}', got {value.kind}"
            )
        return Params(dict(value.entries), self.path(key))

    def pop_object_list(self, key: str, default: Any = REQUIRED) -> Any:
        value = self.pop(key, default)
        if not isinstance(value, ConfigValue):
            return value
        if value.kind != "array":
            raise ConfigurationError(
                f"expected an array for key '{self.path(key)}', got {value.kind}"
            )
        result = []
        for i, item in enumerate(value.items):
            if not item.is_object():
                raise ConfigurationError(
                    f"expected an object at '{self.path(key)}.{i}', got {item.kind}"
                )
            result.append(Params(dict(item.entries), f"{self.path(key)}.{i}"))
        return result

    def pop_int_list(self, key: str, default: Any = REQUIRED) -> Any:
        value = self.pop(key, default)
        if not isinstance(value, ConfigValue):
            return value
        if value.kind != "array":
            raise ConfigurationError(
                f"expected an array for key '{self.path(key)}', got {value.kind}"
            )
        result = []
        for i, item in enumerate(value.items):
            if item.kind != "number" or not float(item.value).is_integer():
                raise ConfigurationError(
                    f"expected an integer at '{self.path(key)}.{i}'"
                )
            result.append(int(item.value))
        return result

    def pop_str_dict(self, key: str, default: Any = REQUIRED) -> Any:
        """Pop an object of scalars, e.g. per-namespace min_count maps."""
        value = self.pop(key, default)
        if not isinstance(value, ConfigValue):
            return value
        if not value.is_object():
            raise ConfigurationError(
                f"expected an object for key '{self.path(key)}', got {value.kind}"
            )
        return {k: v for k, v in value.entries.items()}

    def assert_empty(self, owner: str):
        """Fail if any key was never consumed, naming each leftover's full path."""
        leftovers = self.unconsumed()
        if leftovers:
            paths = ", ".join(f"'{self.path(k)}'" for k in leftovers)
            raise ConfigurationError(f"unconsumed parameter(s) {paths} for {owner}")
