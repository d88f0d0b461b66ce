"""Competitive factors, per-step cost functionals and the lower-bound machinery.

Everything here is a pure function of an :class:`ErrorModel` (and a
strategy where relevant). Closed forms are paired with numerical routes
that do not use them: a golden-section minimization of the asymptotic cost
of geometric strategies, and a bisection on the positivity of the
optimality recurrence.
"""
from __future__ import annotations

import cmath
import enum
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import mpmath
import numpy as np

from .error_models import ErrorKind, ErrorModel, validate
from .exceptions import ConvergenceError, DomainError, NoProgressError
from .strategies import StrategySpec, delta_max

FACTOR_COLUMNS = ("model", "scenario", "m", "delta", "factor", "feasible", "bound")


class Scenario(str, enum.Enum):
    LINE_DOUBLING = "line-doubling"
    LINE_OPTIMAL = "line-optimal"
    MRAY = "mray"


@dataclass(frozen=True)
class FactorReport:
    model: ErrorModel
    scenario: Scenario
    factor: float | None
    feasible: bool
    feasibility_bound: float
    m: int | None = None

    def row(self) -> dict:
        return {
            "model": self.model.kind.value,
            "scenario": self.scenario.value,
            "m": "" if self.m is None else self.m,
            "delta": self.model.delta,
            "factor": self.factor,
            "feasible": self.feasible,
            "bound": self.feasibility_bound,
        }


def _scale(model: ErrorModel) -> float:
    """Coefficient linking the per-step functional to the total factor."""
    d = model.delta
    return 2 * (1 + d) if model.is_percentual else 2 * (1 + d) ** 2


def total_factor(model: ErrorModel, g: float) -> float:
    """Line competitive factor ``1 + scale * g`` for a functional level ``g``."""
    return 1 + _scale(model) * g


# ---------------------------------------------------------------------------
# closed forms


def doubling_factor(model: ErrorModel) -> FactorReport:
    """Worst-case factor of f_i = 2^i when the strategy ignores the error.

    Feasible up to and including the bound; at the bound itself every goal
    is still reached but the ratio is unbounded (factor ``inf``, warned).
    """
    validate(model)
    d = model.delta
    if model.is_percentual:
        bound = 1 / 3
        denom, num = 1 - 3 * d, 8 * (1 + d)
    else:
        bound = math.sqrt(2) - 1
        denom, num = 2 - (1 + d) ** 2, 8 * (1 + d) ** 2
    feasible = d <= bound
    if not feasible:
        factor = None
    elif denom <= 0 or math.isclose(d, bound, rel_tol=0, abs_tol=1e-15):
        warnings.warn(f"delta={d} sits on the doubling feasibility bound; ratio is unbounded",
                      RuntimeWarning, stacklevel=2)
        factor = math.inf
    else:
        factor = 1 + num / denom
    return FactorReport(model, Scenario.LINE_DOUBLING, factor, feasible, bound)


def optimal_factor(model: ErrorModel) -> FactorReport:
    validate(model)
    d = model.delta
    if model.is_percentual:
        factor = 1 + 8 * ((1 + d) / (1 - d)) ** 2
        bound = 1.0
    else:
        factor = 1 + 8 * (1 + d) ** 4
        bound = math.inf
    return FactorReport(model, Scenario.LINE_OPTIMAL, factor, True, bound)


def mray_factor(model: ErrorModel, m: int) -> FactorReport:
    validate(model)
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    d = model.delta
    core = m ** m / (m - 1) ** (m - 1) - 1
    stretch = (1 + d) / (1 - d) if model.is_percentual else (1 + d) ** 2
    bound = delta_max(m, model.kind)
    feasible = d < bound
    factor = 3 + 2 * stretch * core if feasible else None
    return FactorReport(model, Scenario.MRAY, factor, feasible, bound, m=m)


def doubling_ratio_chain(model: ErrorModel, j: int, eps: float = 0.0) -> float:
    """Exact worst-case ratio of doubling for a goal just past step 2j.

    ``eps`` is the absolute overshoot of the goal beyond the turning point.
    """
    validate(model)
    d = model.delta
    x = 4.0 ** j
    num = 2 * (1 + d) * (4 * x - 2)
    if model.is_percentual:
        den = (1 - 3 * d) * x + 4 * d + eps
    else:
        den = x / (1 + d) - ((1 + d) - 1 / (1 + d)) * (x - 2) + eps
    return 1 + num / den


def doubling_worst_reach(model: ErrorModel, j: int) -> float:
    """Rightmost point guaranteed by step 2j of doubling under the worst case."""
    d = model.delta
    x = 4.0 ** j
    if model.is_percentual:
        return (1 - 3 * d) * x + 4 * d
    return x / (1 + d) - ((1 + d) - 1 / (1 + d)) * (x - 2)


# ---------------------------------------------------------------------------
# per-step cost functional


def _denominator(f: np.ndarray, n: int, model: ErrorModel) -> float:
    d = model.delta
    prev = math.fsum(f[: n - 1])
    if model.is_percentual:
        return (1 - d) * f[n - 1] - 2 * d * prev
    return f[n - 1] - d * (2 + d) * prev


def g_functional(s: StrategySpec, n: int, model: ErrorModel) -> float:
    """Worst-case cost functional of step ``n`` (``n = 0`` gives ``f_1``)."""
    validate(model)
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if n == 0:
        return s.nominal(1)
    f = s.sequence(n + 1)
    den = _denominator(f, n, model)
    if den <= 0:
        raise NoProgressError(f"no worst-case progress at step {n} (denominator {den})")
    return math.fsum(f) / den


class GSupremum(NamedTuple):
    value: float
    argmax: int
    increasing_at_horizon: bool


def g_supremum(s: StrategySpec, model: ErrorModel, horizon: int) -> GSupremum:
    """Maximum of the functional over ``0 <= n <= horizon``."""
    if horizon < 1:
        raise DomainError(f"horizon must be >= 1, got {horizon}")
    vals = [g_functional(s, n, model) for n in range(horizon + 1)]
    k = int(np.argmax(vals))
    return GSupremum(vals[k], k, vals[-1] > vals[-2])


def progress_lower_bound(s: StrategySpec, model: ErrorModel, n: int) -> float:
    """Guaranteed worst-case distance from the start after step ``n``."""
    validate(model)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    f = s.sequence(n)
    den = _denominator(f, n, model)
    return den if model.is_percentual else den / (1 + model.delta)


# ---------------------------------------------------------------------------
# optimality recurrence and its characteristic roots


@dataclass(frozen=True)
class RecurrenceResult:
    c: float
    f_star: np.ndarray
    stayed_positive: bool
    first_nonpositive_index: int | None


@dataclass(frozen=True)
class RootPair:
    lam: complex
    lam_conj: complex
    discriminant: float

    @property
    def is_real(self) -> bool:
        return self.discriminant >= 0


def _coefficients(c: float, model: ErrorModel) -> tuple[float, float]:
    """(b, q) of f_n = b f_{n-1} - q f_{n-2}."""
    d = model.delta
    if model.is_percentual:
        return c * (1 - d), c * (1 + d)
    return c, c * (1 + d) ** 2


def recurrence_sequence(c: float, model: ErrorModel, f1: float, f2: float, n: int,
                        renormalize: bool = True) -> RecurrenceResult:
    """Iterate the equality recurrence up to index ``n``.

    With ``renormalize`` the working pair is rescaled whenever it leaves
    ``[1e-100, 1e100]``; the sign pattern, which is all positivity depends
    on, is unaffected, but ``f_star`` is then only correct up to piecewise
    scale.
    """
    validate(model)
    if not (f1 > 0 and f2 > 0):
        raise DomainError(f"seeds must be positive, got {f1}, {f2}")
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    b, q = _coefficients(c, model)
    out = np.empty(n)
    out[0], out[1] = f1, f2
    first_bad = None
    for k in range(2, n):
        out[k] = b * out[k - 1] - q * out[k - 2]
        if first_bad is None and out[k] <= 0:
            first_bad = k + 1
        if renormalize:
            scale = abs(out[k])
            if scale > 1e100 or 0 < scale < 1e-100:
                out[k - 1: k + 1] /= scale
    return RecurrenceResult(c, out, first_bad is None, first_bad)


def _discriminant(c: float, model: ErrorModel) -> float:
    b, q = _coefficients(c, model)
    raw = b * b - 4 * q
    if abs(raw) <= 8 * np.finfo(float).eps * max(b * b, 4 * q):
        return 0.0  # zero to within rounding of the two terms
    return raw


def char_roots(c: float, model: ErrorModel) -> RootPair:
    """Roots of X^2 - b X + q for the model's recurrence coefficients."""
    validate(model)
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    b, q = _coefficients(c, model)
    disc = _discriminant(c, model)
    if disc >= 0:
        big = (b + math.sqrt(disc)) / 2
        small = q / big
        return RootPair(complex(big), complex(small), disc)
    root = cmath.sqrt(disc)
    lam = (b + root) / 2
    return RootPair(lam, lam.conjugate(), disc)


def critical_constant(model: ErrorModel) -> float:
    """Closed-form smallest functional level with real characteristic roots."""
    d = model.delta
    if model.is_percentual:
        return 4 * (1 + d) / (1 - d) ** 2
    return 4 * (1 + d) ** 2


def _goes_negative(c: float, model: ErrorModel, horizon: int) -> bool:
    roots = char_roots(c, model)
    seed = max(roots.lam.real, 1e-300)
    return not recurrence_sequence(c, model, 1.0, seed, horizon).stayed_positive


def lower_bound_via_positivity(model: ErrorModel, tol: float = 1e-10, horizon: int = 10_000,
                               lo: float = 1e-6, hi: float | None = None) -> float:
    """Smallest level ``c`` at which the equality recurrence can stay positive.

    Bisects on the sign of the characteristic discriminant. The bracket
    endpoints are confirmed by running the recurrence itself: below the
    threshold it must turn nonpositive within ``horizon`` steps, above it a
    dominant-root seed must stay positive. A final probe 1% below the
    returned value must also turn nonpositive.
    """
    validate(model)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if hi is None:
        hi = 4 * critical_constant(model)

    def real(c):
        return _discriminant(c, model) >= 0

    if real(lo) or not _goes_negative(lo, model, horizon):
        raise ConvergenceError(f"lower bracket {lo} does not force a sign change")
    if not real(hi) or _goes_negative(hi, model, horizon):
        raise ConvergenceError(f"upper bracket {hi} does not keep the recurrence positive")
    for _ in range(400):
        if hi - lo <= tol * max(1.0, hi):
            break
        mid = 0.5 * (lo + hi)
        if real(mid):
            hi = mid
        else:
            lo = mid
    else:
        raise ConvergenceError("bisection did not converge")
    if not _goes_negative(0.99 * hi, model, horizon):
        raise ConvergenceError("recurrence stays positive just below the bisected threshold")
    return hi


# ---------------------------------------------------------------------------
# asymptotic cost of geometric strategies


def _h_pole(model: ErrorModel) -> float:
    d = model.delta
    return (1 + d) / (1 - d) if model.is_percentual else (1 + d) ** 2


def h_alpha(model: ErrorModel, alpha: float) -> float:
    """Limit of the functional for f_i = alpha^i."""
    validate(model)
    pole = _h_pole(model)
    if not alpha > pole:
        raise DomainError(f"alpha must exceed {pole}, got {alpha}")
    d = model.delta
    if model.is_percentual:
        return alpha * alpha / ((1 - d) * alpha - d - 1)
    return alpha * alpha / (alpha - (1 + d) ** 2)


_INVPHI = (math.sqrt(5) - 1) / 2


def golden_section(fn, a, b, tol, max_iter=500):
    """Minimize a unimodal ``fn`` on ``[a, b]``; works with floats or mpf."""
    c = b - (b - a) * _INVPHI
    d = a + (b - a) * _INVPHI
    fc, fd = fn(c), fn(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            return (a + b) / 2
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - (b - a) * _INVPHI
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + (b - a) * _INVPHI
            fd = fn(d)
    raise ConvergenceError("golden-section search did not converge")


def minimize_h(model: ErrorModel, tol: float = 1e-8, upper: float | None = None,
               dps: int = 40) -> tuple[float, float]:
    """Numerically minimize :func:`h_alpha` over ``(pole, upper]``.

    The minimum is too flat to locate to ``tol`` in double precision, so the
    search runs in ``dps``-digit arithmetic and is rounded at the end.
    """
    validate(model)
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol}")
    pole = _h_pole(model)
    if upper is None:
        upper = 10 * pole + 10
    d = model.delta
    with mpmath.workdps(dps):
        md = mpmath.mpf(d)
        if model.is_percentual:
            def h(a):
                return a * a / ((1 - md) * a - md - 1)
        else:
            def h(a):
                return a * a / (a - (1 + md) ** 2)
        a0 = mpmath.mpf(pole) * (1 + mpmath.mpf(10) ** (-dps // 2))
        x = golden_section(h, a0, mpmath.mpf(upper), mpmath.mpf(10) ** (-(dps - 10)))
        hmin = h(x)
        alpha_star, h_min = float(x), float(hmin)
    if abs(alpha_star - upper) < 1e-6 * upper:
        raise ConvergenceError(f"minimum sits on the upper bound {upper}")
    probe = tol ** (1 / 3)
    if not (h_alpha(model, alpha_star - probe) > h_min and h_alpha(model, alpha_star + probe) > h_min):
        raise ConvergenceError("second-order check failed around the minimizer")
    return alpha_star, h_min
