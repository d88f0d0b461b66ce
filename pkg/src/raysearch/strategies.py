"""Nominal-distance sequences for line and m-ray search.

Steps are indexed from 1. On the line, odd steps head left and even steps
head right unless the strategy is ``mirrored``. On m rays, step ``i``
explores ray ``i mod m``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .error_models import ErrorKind, ErrorModel, bounds, validate
from .exceptions import DomainError, RangeError

LEFT = -1
RIGHT = 1


class StrategyKind(str, enum.Enum):
    DOUBLING = "doubling"
    GEOMETRIC = "geometric"
    MRAY = "mray"
    TABULATED = "tabulated"
    OPTIMAL = "optimal"


@dataclass(frozen=True)
class StrategySpec:
    kind: StrategyKind
    alpha: float | None = None
    m: int | None = None
    values: tuple[float, ...] = field(default=(), repr=False)
    model: ErrorModel | None = None
    mirrored: bool = False

    def __post_init__(self):
        k = StrategyKind(self.kind)
        object.__setattr__(self, "kind", k)
        if k is StrategyKind.GEOMETRIC:
            if self.alpha is None or not self.alpha > 1:
                raise DomainError(f"geometric strategy needs alpha > 1, got {self.alpha}")
        elif k is StrategyKind.MRAY:
            if self.m is None or int(self.m) != self.m or self.m < 2:
                raise DomainError(f"m-ray strategy needs integer m >= 2, got {self.m}")
        elif k is StrategyKind.TABULATED:
            vals = tuple(float(v) for v in self.values)
            if not vals:
                raise DomainError("tabulated strategy needs at least one value")
            if not all(v > 0 and math.isfinite(v) for v in vals):
                raise DomainError("tabulated values must be finite and positive")
            object.__setattr__(self, "values", vals)
        elif k is StrategyKind.OPTIMAL:
            if self.model is None:
                raise DomainError("optimal strategy needs an error model")
            validate(self.model)

    # constructors
    @classmethod
    def doubling(cls) -> "StrategySpec":
        return cls(StrategyKind.DOUBLING)

    @classmethod
    def geometric(cls, alpha: float) -> "StrategySpec":
        return cls(StrategyKind.GEOMETRIC, alpha=float(alpha))

    @classmethod
    def mray(cls, m: int) -> "StrategySpec":
        return cls(StrategyKind.MRAY, m=m)

    @classmethod
    def tabulated(cls, values: Sequence[float]) -> "StrategySpec":
        return cls(StrategyKind.TABULATED, values=tuple(values))

    @classmethod
    def optimal_line(cls, model: ErrorModel) -> "StrategySpec":
        return cls(StrategyKind.OPTIMAL, model=model)

    @classmethod
    def parse(cls, text: str, model: ErrorModel | None = None) -> "StrategySpec":
        """Parse ``doubling | geometric:<alpha> | mray:<m> | optimal | file:<path>``."""
        name, _, arg = text.strip().partition(":")
        name = name.lower()
        try:
            if name == "doubling":
                return cls.doubling()
            if name == "geometric":
                return cls.geometric(float(arg))
            if name == "mray":
                return cls.mray(int(arg))
            if name == "optimal":
                if model is None:
                    raise DomainError("'optimal' strategy requires an error model")
                return cls.optimal_line(model)
            if name == "file":
                lines = Path(arg).read_text().split()
                return cls.tabulated([float(x) for x in lines])
        except ValueError as exc:
            if isinstance(exc, DomainError):
                raise
            raise DomainError(f"bad strategy argument in {text!r}: {exc}") from None
        raise DomainError(f"unknown strategy {text!r}")

    def mirror(self) -> "StrategySpec":
        """Same distances with the line parity convention flipped."""
        return replace(self, mirrored=not self.mirrored)

    @property
    def ratio(self) -> float | None:
        """Common ratio f_{i+1}/f_i for geometric kinds, else None."""
        if self.kind is StrategyKind.DOUBLING:
            return 2.0
        if self.kind is StrategyKind.GEOMETRIC:
            return self.alpha
        if self.kind is StrategyKind.MRAY:
            return self.m / (self.m - 1)
        if self.kind is StrategyKind.OPTIMAL:
            return optimal_alpha(self.model)
        return None

    @property
    def length(self) -> int | None:
        """Number of available steps; None when unbounded."""
        return len(self.values) if self.kind is StrategyKind.TABULATED else None

    def nominal(self, i: int) -> float:
        return nominal(self, i)

    def sequence(self, n: int) -> np.ndarray:
        """Array of f_1 .. f_n."""
        return np.array([nominal(self, i) for i in range(1, n + 1)], dtype=float)

    def direction(self, i: int) -> int:
        """Line direction of step ``i``: LEFT (-1) or RIGHT (+1)."""
        d = LEFT if i % 2 == 1 else RIGHT
        return -d if self.mirrored else d


def nominal(s: StrategySpec, i: int) -> float:
    """Nominal distance f_i of step ``i`` (1-based)."""
    if int(i) != i or i < 1:
        raise RangeError(f"step index must be a positive integer, got {i}")
    if s.kind is StrategyKind.TABULATED:
        if i > len(s.values):
            raise RangeError(f"step {i} exceeds tabulated strategy of length {len(s.values)}")
        return s.values[i - 1]
    r = s.ratio
    try:
        v = r ** i
    except OverflowError:
        raise OverflowError(f"nominal f_{i} = {r}^{i} exceeds float range") from None
    if not math.isfinite(v):
        raise OverflowError(f"nominal f_{i} = {r}^{i} exceeds float range")
    return v


def optimal_alpha(model: ErrorModel) -> float:
    """Ratio of the optimal geometric line strategy for ``model``."""
    validate(model)
    d = model.delta
    if model.kind is ErrorKind.PERCENTUAL:
        return 2 * (1 + d) / (1 - d)
    return 2 * (1 + d) ** 2


def is_monotone_under_error(s: StrategySpec, m: int, model: ErrorModel, horizon: int) -> bool:
    """True iff the shortest realization of f_k beats the longest of f_{k-m}.

    Checked for every ``m < k <= horizon``; this is what keeps a periodic
    m-ray strategy from exploring a ray less deeply than on its previous visit.
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if horizon < m + 1:
        raise DomainError(f"horizon must be >= m + 1 = {m + 1}, got {horizon}")
    f = s.sequence(horizon)
    for k in range(m + 1, horizon + 1):
        if not bounds(model, f[k - 1]).lo > bounds(model, f[k - m - 1]).hi:
            return False
    return True


def delta_max(m: int, kind: ErrorKind | str = ErrorKind.PERCENTUAL) -> float:
    """Largest error bound keeping the (m/(m-1))^i strategy monotone."""
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    q = (m / (m - 1)) ** m
    if ErrorKind(kind) is ErrorKind.PERCENTUAL:
        return (q - 1) / (q + 1)
    return math.sqrt(q) - 1
