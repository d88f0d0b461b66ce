"""Acceptance checks, shared by ``raysearch verify`` and the test suite.

Each check returns a :class:`CheckResult` with the worst measured deviation
next to the tolerance it was held to.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analysis as an
from .error_models import ErrorModel, bounds
from .strategies import LEFT, RIGHT, StrategySpec, delta_max, is_monotone_under_error, optimal_alpha
from .walk_sim import (
    DEFAULT_EPSILON,
    ErrorAssignment,
    GoalSpec,
    brute_force_worst_ratio,
    competitive_ratio,
    execute_line_walk,
    execute_mray_walk,
    realize_assignment,
    worst_case_bits,
)

P = ErrorModel.percentual
M = ErrorModel.multiplicative
PERCENTUAL_GRID = [round(0.05 * k, 2) for k in range(10)]
MULTIPLICATIVE_GRID = [0.05, 0.1, 0.2, 0.4]
N_RANDOM = 1000


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.number:2d} {self.name}: worst deviation {self.measured:.3g} "
                f"(tol {self.tolerance:.0e}){' - ' + self.detail if self.detail else ''}")


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def doubling_worst_walk(model: ErrorModel, j: int, epsilon: float = DEFAULT_EPSILON, s=None):
    s = s or StrategySpec.doubling()
    return execute_line_walk(s, ErrorAssignment.worst_case(RIGHT), model,
                             GoalSpec.beyond_step(2 * j, epsilon), max_iter=2 * j + 4)


# ---------------------------------------------------------------------------


def check_classical_nine() -> CheckResult:
    m0 = P(0.0)
    closed = [
        an.doubling_factor(m0).factor,
        an.optimal_factor(m0).factor,
        an.mray_factor(m0, 2).factor,
        an.total_factor(m0, an.lower_bound_via_positivity(m0)),
    ]
    dev_closed = max(abs(x - 9) for x in closed)
    sim_sup = max(competitive_ratio(doubling_worst_walk(m0, j)) for j in range(1, 26))
    dev_sim = abs(sim_sup - 9)
    ok = dev_closed <= 1e-9 and dev_sim <= 1e-6 and sim_sup < 9
    return CheckResult(1, "classical factor 9", ok, dev_closed, 1e-9,
                       f"simulated sup {sim_sup!r}, dev {dev_sim:.2g} (tol 1e-06)")


def check_doubling_chain() -> CheckResult:
    worst = 0.0
    trend_ok = True
    for delta in (0.0, 0.1, 0.2, 0.3):
        model = P(delta)
        limit = an.doubling_factor(model).factor
        prev = -math.inf
        for j in range(1, 21):
            r = competitive_ratio(doubling_worst_walk(model, j))
            eps_abs = an.doubling_worst_reach(model, j) * DEFAULT_EPSILON
            worst = max(worst, _rel(r, an.doubling_ratio_chain(model, j, eps_abs)))
            trend_ok &= prev < r < limit
            prev = r
    ok = worst <= 1e-9 and trend_ok
    return CheckResult(2, "doubling worst case: simulation vs closed form", ok, worst, 1e-9,
                       "monotone from below" if trend_ok else "trend violated")


def check_doubling_failure() -> CheckResult:
    delta = 0.4
    model = P(delta)
    trace = execute_line_walk(StrategySpec.doubling(), ErrorAssignment.worst_case(RIGHT), model,
                              GoalSpec.absolute(2.0, RIGHT), max_iter=50)
    reaches = [an.doubling_worst_reach(model, j) for j in range(1, 26)]
    sim_right = [seg.end for seg in trace.segments if seg.outbound and seg.direction == RIGHT]
    dev = max(_rel(a, b) for a, b in zip(sim_right, reaches))
    ok = (not trace.hit and all(x < 4 * delta for x in reaches) and max(sim_right) < 2
          and dev <= 1e-9)
    return CheckResult(3, "doubling fails beyond delta=1/3", ok, dev, 1e-9,
                       f"hit={trace.hit}, max right reach {max(sim_right):.6g} < 4*delta={4 * delta}")


def brute_force_structure(delta: float, j_max: int) -> tuple[bool, float, str]:
    """Is the exhaustive argmax the analytic worst case, at the closed-form ratio?"""
    model = P(delta)
    res = brute_force_worst_ratio(StrategySpec.doubling(), model, j_max)
    wc = worst_case_bits(res, RIGHT)
    rows_equal = (res.maximizers == wc[None, :]).all(axis=1)
    varies = (res.maximizers != res.maximizers[0]).any(axis=0)
    # ratio-neutral segments: return of step 2j+1 and outbound of step 2j+2
    last = 2 * j_max + 1
    neutral = ((res.segment_steps == last) & ~res.segment_outbound) | (res.segment_steps == last + 1)
    contains_wc = bool(rows_equal.any())
    agree = bool((res.maximizers[:, ~neutral] == wc[~neutral]).all())
    ties_only_neutral = bool((varies <= neutral).all())
    expected = an.doubling_ratio_chain(model, j_max, an.doubling_worst_reach(model, j_max) * DEFAULT_EPSILON)
    dev = _rel(res.ratio, expected)
    ok = contains_wc and agree and ties_only_neutral and dev <= 1e-9
    return ok, dev, f"{len(res.maximizers)} tied maximizers"


def check_brute_force() -> CheckResult:
    j_values = (1, 2, 3, 4)
    worst, ok = 0.0, True
    for delta in (0.1, 0.25):
        for j in j_values:
            good, dev, _ = brute_force_structure(delta, j)
            ok &= good
            worst = max(worst, dev)
    return CheckResult(4, "brute-force adversary structure", ok, worst, 1e-9,
                       f"j_max in {j_values}")


def check_percentual_chain() -> CheckResult:
    worst = 0.0
    worst_lb = 0.0
    for delta in PERCENTUAL_GRID:
        model = P(delta)
        alpha, hmin = an.minimize_h(model, tol=1e-8)
        c_star = an.lower_bound_via_positivity(model)
        worst = max(worst,
                    abs(alpha - 2 * (1 + delta) / (1 - delta)),
                    abs(hmin - 4 * (1 + delta) / (1 - delta) ** 2),
                    abs(alpha - optimal_alpha(model)),
                    abs(an.total_factor(model, hmin) - an.optimal_factor(model).factor))
        worst_lb = max(worst_lb, abs(c_star - hmin))
    ok = worst <= 1e-8 and worst_lb <= 1e-6
    return CheckResult(5, "optimality chain (percentual)", ok, worst, 1e-8,
                       f"positivity bound dev {worst_lb:.2g} (tol 1e-06)")


def check_multiplicative_chain() -> CheckResult:
    worst = 0.0
    for delta in MULTIPLICATIVE_GRID:
        model = M(delta)
        alpha, hmin = an.minimize_h(model, tol=1e-8)
        c_star = an.lower_bound_via_positivity(model)
        worst = max(worst,
                    abs(alpha - 2 * (1 + delta) ** 2),
                    abs(hmin - 4 * (1 + delta) ** 2),
                    abs(c_star - 4 * (1 + delta) ** 2),
                    abs(an.total_factor(model, hmin) - (1 + 8 * (1 + delta) ** 4)),
                    abs(an.optimal_factor(model).factor - (1 + 8 * (1 + delta) ** 4)),
                    abs(an.doubling_factor(model).factor - (1 + 8 * (1 + delta) ** 2 / (2 - (1 + delta) ** 2))))
    edge = math.sqrt(2) - 1
    edge_ok = (an.doubling_factor(M(edge - 1e-9)).feasible
               and not an.doubling_factor(M(edge + 1e-9)).feasible
               and all(an.doubling_factor(M(d)).feasible for d in MULTIPLICATIVE_GRID))
    ok = worst <= 1e-8 and edge_ok
    return CheckResult(6, "multiplicative chain", ok, worst, 1e-8,
                       "infeasible exactly above sqrt(2)-1" if edge_ok else "feasibility edge wrong")


def check_equality_strategy() -> CheckResult:
    ref = [(i + 1) * 2.0 ** i for i in range(1, 32)]
    s = StrategySpec.tabulated(ref)
    model = P(0.0)
    dev_g = max(abs(an.g_functional(s, n, model) - 4) for n in range(1, 31))
    rec = an.recurrence_sequence(4.0, model, 4.0, 12.0, 31, renormalize=False)
    scale = rec.f_star / np.array(ref)
    dev_rec = float(np.max(np.abs(scale / scale[0] - 1)))
    ok = dev_g <= 1e-9 and dev_rec <= 1e-9 and rec.stayed_positive
    return CheckResult(7, "equality strategy (i+1)2^i", ok, max(dev_g, dev_rec), 1e-9)


def check_mray() -> CheckResult:
    worst = 0.0
    for m in (2, 3, 4, 6):
        for delta in (0.0, 0.1, 0.2):
            model = P(delta)
            assert delta < delta_max(m)
            trace = execute_mray_walk(StrategySpec.mray(m), m, ErrorAssignment.mray_worst_case(),
                                      model, GoalSpec.beyond_step(40), max_iter=60)
            worst = max(worst, _rel(competitive_ratio(trace), an.mray_factor(model, m).factor))
    s2 = StrategySpec.mray(2)
    reject = not is_monotone_under_error(s2, 2, P(0.7), 50)
    accept = is_monotone_under_error(s2, 2, P(0.5), 50)
    ok = worst <= 1e-3 and reject and accept
    return CheckResult(8, "m-ray factors", ok, worst, 1e-3,
                       f"monotonicity rejects 0.7: {reject}, accepts 0.5: {accept}")


def _progress_closed_form(model: ErrorModel, n: int) -> float:
    d = model.delta
    a = optimal_alpha(model)
    if model.is_percentual:
        return ((1 - d) * (1 + d) * a ** n + 4 * d * (1 + d)) / (1 + 3 * d)
    return ((1 + 2 * d + d * d) * a ** n + d * (2 + d) * a) / ((1 + d) * (1 + 4 * d + 2 * d * d))


def check_progress() -> CheckResult:
    worst = 0.0
    ok = True
    models = [P(d) for d in PERCENTUAL_GRID] + [M(d) for d in MULTIPLICATIVE_GRID]
    for model in models:
        s = StrategySpec.optimal_line(model)
        vals = [an.progress_lower_bound(s, model, n) for n in range(1, 41)]
        ok &= all(v > 0 for v in vals) and all(b > a for a, b in zip(vals, vals[1:]))
        ok &= vals[-1] > 1e6
        worst = max(worst, max(_rel(v, _progress_closed_form(model, n))
                               for n, v in zip(range(1, 41), vals)))
    ok &= worst <= 1e-9
    return CheckResult(9, "progress guarantees", ok, worst, 1e-9)


# ---------------------------------------------------------------------------
# randomized property suites


def _random_model(rng) -> ErrorModel:
    if rng.random() < 0.5:
        return P(rng.uniform(0, 0.3))
    return M(rng.uniform(0, 0.35))


def _random_strategy(rng) -> StrategySpec:
    if rng.random() < 0.5:
        return StrategySpec.geometric(rng.uniform(1.5, 4.0))
    return StrategySpec.tabulated(np.cumprod(rng.uniform(1.2, 3.5, size=40)).tolist())


def _random_multipliers(rng, model: ErrorModel, n: int) -> list[float]:
    b = bounds(model, 1.0)
    picks = rng.uniform(b.lo, b.hi, size=n)
    ends = rng.random(n)
    picks = np.where(ends < 0.2, b.lo, np.where(ends > 0.8, b.hi, picks))
    return picks.tolist()


def prop_drift_identity(rng) -> float:
    model = _random_model(rng)
    s = _random_strategy(rng)
    n = int(rng.integers(1, 30))
    rule = ErrorAssignment.custom(_random_multipliers(rng, model, 2 * n))
    trace = execute_line_walk(s, rule, model, GoalSpec.absolute(1e300), max_iter=n)
    lengths = realize_assignment(rule, model, s, n)
    delta_k = np.cumsum(lengths[:, 0] - lengths[:, 1])
    scale = float(np.sum(np.abs(lengths)))
    err = max(abs(p + dk) for p, dk in zip(trace.positions, delta_k))
    err = max(err, max(abs(dt - dk) for dt, dk in zip(trace.drift_per_iteration, delta_k)))
    return err / (1e-12 * scale)


def prop_mirror(rng) -> float:
    model = _random_model(rng)
    s = _random_strategy(rng)
    n = 30
    rule = ErrorAssignment.custom(_random_multipliers(rng, model, 2 * n))
    if rng.random() < 0.5:
        goal = GoalSpec.beyond_step(int(rng.integers(1, 20)))
        mirrored_goal = goal
    else:
        d = float(rng.uniform(1, 500))
        side = RIGHT if rng.random() < 0.5 else LEFT
        goal, mirrored_goal = GoalSpec.absolute(d, side), GoalSpec.absolute(d, -side)
    try:
        a = execute_line_walk(s, rule, model, goal, max_iter=n)
    except Exception as exc:
        a = type(exc)
    try:
        b = execute_line_walk(s.mirror(), rule, model, mirrored_goal, max_iter=n)
    except Exception as exc:
        b = type(exc)
    if isinstance(a, type) or isinstance(b, type):
        return 0.0 if a == b else math.inf
    if a.hit != b.hit:
        return math.inf
    if not a.hit:
        return 0.0
    return 0.0 if competitive_ratio(a) == competitive_ratio(b) else math.inf


def prop_homogeneity(rng) -> float:
    model = _random_model(rng)
    f = float(10 ** rng.uniform(-3, 6))
    c = float(10 ** rng.uniform(-3, 3))
    a, b = bounds(model, c * f), bounds(model, f)
    return max(_rel(a.lo, c * b.lo), _rel(a.hi, c * b.hi)) / 1e-14


def prop_double_root(rng) -> float:
    delta = float(rng.uniform(0, 0.95))
    model = P(delta) if rng.random() < 0.5 else M(delta)
    roots = an.char_roots(an.critical_constant(model), model)
    if roots.discriminant != 0:
        return math.inf
    alpha = optimal_alpha(model)
    return max(_rel(roots.lam.real, alpha), _rel(roots.lam_conj.real, alpha),
               abs(roots.lam.imag)) / 1e-9


def prop_optimal_below_doubling(rng) -> float:
    if rng.random() < 0.5:
        model = P(float(rng.uniform(0, 1 / 3 - 1e-6)))
    else:
        model = M(float(rng.uniform(0, math.sqrt(2) - 1 - 1e-6)))
    opt = an.optimal_factor(model).factor
    dbl = an.doubling_factor(model).factor
    if model.delta == 0:
        return 0.0 if opt == dbl else math.inf
    return 0.0 if opt < dbl else math.inf


PROPERTIES: dict[str, Callable] = {
    "drift/position bookkeeping": prop_drift_identity,
    "mirror symmetry": prop_mirror,
    "bounds homogeneity": prop_homogeneity,
    "double root at critical constant": prop_double_root,
    "optimal <= doubling": prop_optimal_below_doubling,
}


def check_properties(n_cases: int = N_RANDOM, seed: int = 20261014) -> CheckResult:
    worst = 0.0
    failed = []
    for k, (name, prop) in enumerate(PROPERTIES.items()):
        rng = np.random.default_rng(seed + k)
        w = max(prop(rng) for _ in range(n_cases))
        if not w <= 1:
            failed.append(name)
        worst = max(worst, w)
    return CheckResult(10, f"property suites ({n_cases} cases each)", not failed, worst, 1.0,
                       "failed: " + ", ".join(failed) if failed else "deviation in units of tolerance")


CHECKS = [
    check_classical_nine,
    check_doubling_chain,
    check_doubling_failure,
    check_brute_force,
    check_percentual_chain,
    check_multiplicative_chain,
    check_equality_strategy,
    check_mray,
    check_progress,
    check_properties,
]


def run_all(quick: bool = False) -> list[CheckResult]:
    """Run every check; ``quick`` skips the exhaustive enumeration."""
    return [check() for check in CHECKS if not (quick and check is check_brute_force)]
