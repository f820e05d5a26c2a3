"""Exception hierarchy and the undefined-metric sentinel."""

from __future__ import annotations

from dataclasses import dataclass


class SociogramError(Exception):
    """Base class for every error raised by this package."""


class FormatError(SociogramError):
    """Input document is structurally unusable (e.g. missing header columns)."""


class UnknownVertexError(SociogramError, KeyError):
    """A vertex id was requested that the graph does not contain."""

    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return f"unknown vertex: {self.args[0]!r}"


class UndefinedMetricError(SociogramError, ValueError):
    """A metric has no defined value on the given input (empty graph, m=0, ...)."""


class ContractError(SociogramError, ValueError):
    """Caller violated a documented precondition."""


class SingularFitError(SociogramError, ValueError):
    """Regression design is degenerate (constant abscissa)."""


class ConfigurationError(SociogramError):
    """A configuration file or lexicon is missing or malformed."""


@dataclass(frozen=True)
class Undefined:
    """Placeholder for a metric that could not be computed.

    Reports render it as ``{"value": null, "reason": <reason>}`` rather than
    dropping the field, so downstream consumers can tell "zero" from "n/a".
    """

    reason: str

    def __bool__(self) -> bool:
        return False

    def to_json(self) -> dict:
        return {"value": None, "reason": self.reason}


def is_defined(value: object) -> bool:
    return not isinstance(value, Undefined)
