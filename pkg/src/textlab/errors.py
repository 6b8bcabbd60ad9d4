"""Shared error types."""


class ConfigurationError(Exception):
    """Raised for any invalid, missing, unknown, or leftover configuration parameter.

    Messages always carry the full dotted path from the experiment-config root
    to the offending key so that a failure in a deeply nested component can be
    traced back to one line of the config file.
    """


class ConfigParseError(ConfigurationError):
    """Syntax error while parsing a config document; carries line/column."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column
