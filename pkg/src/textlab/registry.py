"""Maps `type` strings in config files to component factories.

Each factory is keyed by (abstraction, name), e.g. ("seq2vec_encoder",
"mean_pooler").  Factories receive the remaining Params plus an explicit
BuildContext; after a factory returns, all parameters must have been
consumed.  Lookup of anything unregistered is always a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Optional

import numpy as np

from textlab.errors import ConfigurationError
from textlab.params import Params

Factory = Callable[[Params, "BuildContext"], Any]


@dataclass
class BuildContext:
    """Explicit construction context handed to every factory."""

    vocab: Any = None
    rng: Optional[np.random.Generator] = None


class Registry:
    def __init__(self):
        self._entries: dict[tuple[str, str], Factory] = {}

    def register(self, abstraction: str, name: str, factory: Factory):
        if not name:
            raise ConfigurationError("registered name must be non-empty")
        key = (abstraction, name)
        if key in self._entries:
            raise ConfigurationError(
                f"'{name}' is already registered for abstraction '{abstraction}'"
            )
        self._entries[key] = factory

    def names(self, abstraction: str) -> list[str]:
        return sorted(name for abst, name in self._entries if abst == abstraction)

    def factory(self, abstraction: str, name: str) -> Factory:
        try:
            return self._entries[(abstraction, name)]
        except KeyError:
            known = ", ".join(self.names(abstraction)) or "<none>"
            raise ConfigurationError(
                f"unknown {abstraction} type '{name}'; registered names: {known}"
            ) from None

    def instantiate(self, abstraction: str, params: Params, context: BuildContext) -> Any:
        """Pop `type`, dispatch to its factory, and enforce full consumption."""
        type_name = params.pop_str("type")
        factory = self.factory(abstraction, type_name)
        try:
            component = factory(params, context)
        except ConfigurationError:
            raise
        except (TypeError, ValueError) as err:
            where = params.history or "<root>"
            raise ConfigurationError(
                f"could not construct {abstraction} '{type_name}' at '{where}': {err}"
            ) from err
        params.assert_empty(f"{abstraction} '{type_name}'")
        return component


# The process-wide registry.  Built-in components are registered once, from
# the static manifest, when the package is imported.
GLOBAL_REGISTRY = Registry()


def register_factory(abstraction: str, name: str, factory: Factory):
    GLOBAL_REGISTRY.register(abstraction, name, factory)


def instantiate_from_params(abstraction: str, params: Params, context: BuildContext) -> Any:
    return GLOBAL_REGISTRY.instantiate(abstraction, params, context)
