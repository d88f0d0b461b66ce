"""Movement error models.

A nominal move of length ``f`` is realized with some length inside an
admissible interval. Two families are supported:

* percentual: ``[(1 - delta) f, (1 + delta) f]`` with ``0 <= delta < 1``
* multiplicative: ``[f / (1 + delta), (1 + delta) f]`` with ``delta >= 0``

``delta = 0`` is accepted in both and reduces to error-free motion.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .exceptions import DomainError


class ErrorKind(str, enum.Enum):
    PERCENTUAL = "percentual"
    MULTIPLICATIVE = "multiplicative"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def scaled(self, c: float) -> "Interval":
        return Interval(self.lo * c, self.hi * c)


@dataclass(frozen=True)
class ErrorModel:
    kind: ErrorKind
    delta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", ErrorKind(self.kind))
        object.__setattr__(self, "delta", float(self.delta))

    @classmethod
    def percentual(cls, delta: float) -> "ErrorModel":
        model = cls(ErrorKind.PERCENTUAL, delta)
        validate(model)
        return model

    @classmethod
    def multiplicative(cls, delta: float) -> "ErrorModel":
        model = cls(ErrorKind.MULTIPLICATIVE, delta)
        validate(model)
        return model

    @classmethod
    def parse(cls, model: str, delta: float | str) -> "ErrorModel":
        """Build from the ``model=...``, ``delta=...`` config/CSV pair."""
        try:
            kind = ErrorKind(model.strip().lower())
        except ValueError:
            raise DomainError(f"unknown error model {model!r}") from None
        m = cls(kind, float(delta))
        validate(m)
        return m

    @property
    def is_percentual(self) -> bool:
        return self.kind is ErrorKind.PERCENTUAL

    def multiplier_bounds(self) -> Interval:
        """Admissible realized/nominal ratio, i.e. ``bounds(self, 1)``."""
        return bounds(self, 1.0)

    def to_fields(self) -> dict:
        return {"model": self.kind.value, "delta": self.delta}


def validate(model: ErrorModel) -> None:
    """Raise :class:`DomainError` unless ``model.delta`` suits ``model.kind``."""
    d = model.delta
    if not math.isfinite(d):
        raise DomainError(f"delta must be finite, got {d}")
    if d < 0:
        raise DomainError(f"delta must be >= 0, got {d}")
    if model.kind is ErrorKind.PERCENTUAL and d >= 1:
        raise DomainError(f"percentual model requires delta < 1, got {d}")


def bounds(model: ErrorModel, f: float) -> Interval:
    """Interval of realized lengths for the nominal move ``f``."""
    if not f > 0:
        raise DomainError(f"nominal length must be positive, got {f}")
    validate(model)
    d = model.delta
    if model.kind is ErrorKind.PERCENTUAL:
        return Interval((1 - d) * f, (1 + d) * f)
    return Interval(f / (1 + d), (1 + d) * f)
