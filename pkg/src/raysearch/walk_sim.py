"""Error-afflicted search walks on the line and on m rays.

Line walks start at the origin. Every step ``i`` is an out-and-back sweep:
the robot moves ``f_i`` (realized with error) in the step's direction and
then ``f_i`` (realized with an independent error) back. Since the two
realized lengths differ, the start point of the next step drifts; the
simulator never corrects it.

m-ray walks return exactly to the common origin after every step, so they
carry no drift.
"""
from __future__ import annotations

import csv
import enum
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Sequence, TextIO

import numpy as np

from .error_models import ErrorKind, ErrorModel, bounds, validate
from .exceptions import (
    BudgetError,
    DomainError,
    MonotonicityError,
    NotHitError,
    RangeError,
)
from .strategies import LEFT, RIGHT, StrategySpec, is_monotone_under_error

DEFAULT_EPSILON = 1e-9
DEFAULT_MAX_ITER = 200
DEFAULT_NODE_LIMIT = 2 ** 25

TRACE_COLUMNS = ("step", "direction", "nominal", "realized", "position", "drift", "cum_path")


class AssignmentRule(str, enum.Enum):
    WORST_CASE = "worst-case"
    ERROR_FREE = "error-free"
    CUSTOM = "custom"
    MRAY_WORST_CASE = "mray-worst-case"


@dataclass(frozen=True)
class ErrorAssignment:
    """How the adversary realizes each nominal move.

    ``multipliers`` (custom rule) are realized/nominal ratios in traversal
    order: two per line step (outbound, return), one per m-ray step.
    ``beta`` and ``short_step`` parametrize the m-ray worst case: every depth
    is realized at the interval maximum except step ``short_step``, which is
    shortened to ``(1 - beta) f`` (percentual) or ``f / (1 + beta)``
    (multiplicative). ``beta=None`` means ``beta = delta``.
    """

    rule: AssignmentRule
    goal_side: int = RIGHT
    multipliers: tuple[float, ...] = field(default=(), repr=False)
    beta: float | None = None
    short_step: int | None = None

    @classmethod
    def worst_case(cls, goal_side: int = RIGHT) -> "ErrorAssignment":
        if goal_side not in (LEFT, RIGHT):
            raise DomainError(f"goal side must be LEFT or RIGHT, got {goal_side}")
        return cls(AssignmentRule.WORST_CASE, goal_side=goal_side)

    @classmethod
    def error_free(cls) -> "ErrorAssignment":
        return cls(AssignmentRule.ERROR_FREE)

    @classmethod
    def custom(cls, multipliers: Sequence[float]) -> "ErrorAssignment":
        return cls(AssignmentRule.CUSTOM, multipliers=tuple(float(x) for x in multipliers))

    @classmethod
    def mray_worst_case(cls, beta: float | None = None, short_step: int | None = None) -> "ErrorAssignment":
        return cls(AssignmentRule.MRAY_WORST_CASE, beta=beta, short_step=short_step)


@dataclass(frozen=True)
class GoalSpec:
    """Where the goal is.

    Either an absolute distance ``distance`` on ``side`` (line) / ``ray``
    (m rays), or ``just_beyond=j``: slightly past the turning point of step
    ``j``, by the relative margin ``epsilon``. In that case side and ray
    follow from step ``j`` itself.
    """

    distance: float | None = None
    side: int = RIGHT
    ray: int = 0
    just_beyond: int | None = None
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if (self.distance is None) == (self.just_beyond is None):
            raise DomainError("goal needs exactly one of distance or just_beyond")
        if self.distance is not None and not self.distance >= 1:
            raise DomainError(f"goal distance must be >= 1, got {self.distance}")
        if self.just_beyond is not None and self.just_beyond < 1:
            raise DomainError(f"just_beyond step must be >= 1, got {self.just_beyond}")
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be > 0, got {self.epsilon}")
        if self.side not in (LEFT, RIGHT):
            raise DomainError(f"side must be LEFT or RIGHT, got {self.side}")

    @classmethod
    def absolute(cls, d: float, side: int = RIGHT, ray: int = 0) -> "GoalSpec":
        return cls(distance=float(d), side=side, ray=ray)

    @classmethod
    def beyond_step(cls, j: int, epsilon: float = DEFAULT_EPSILON) -> "GoalSpec":
        return cls(just_beyond=j, epsilon=epsilon)


@dataclass(frozen=True)
class Segment:
    step: int
    outbound: bool
    direction: int  # LEFT/RIGHT on the line, +1 out / -1 back on a ray
    nominal: float
    realized: float
    start: float
    end: float
    ray: int | None = None

    @property
    def label(self) -> str:
        if self.ray is not None:
            return f"{'out' if self.outbound else 'back'}:{self.ray}"
        return "left" if self.direction == LEFT else "right"


@dataclass(frozen=True)
class WalkTrace:
    """Immutable record of one walk.

    ``segments`` runs up to and including the segment that hits the goal
    (that one is listed with its full realized length; only the part up to
    the goal enters ``path_length``). ``positions`` holds the start point
    after each completed iteration, ``drift_per_iteration`` the drifts.
    """

    segments: tuple[Segment, ...]
    positions: tuple[float, ...]
    drift_per_iteration: tuple[float, ...]
    path_length: float
    hit: bool
    hit_step: int | None
    goal: GoalSpec
    goal_position: float
    distance: float
    model: ErrorModel
    m: int | None = None

    @property
    def iterations(self) -> int:
        return len(self.drift_per_iteration)

    @property
    def turning_points(self) -> list[float]:
        return [seg.end for seg in self.segments if seg.outbound]


# ---------------------------------------------------------------------------
# assignments


def _interval_multipliers(model: ErrorModel) -> tuple[float, float]:
    b = bounds(model, 1.0)
    return b.lo, b.hi


def _check_multiplier(model: ErrorModel, x: float, where: str) -> float:
    lo, hi = _interval_multipliers(model)
    if not lo <= x <= hi:
        raise DomainError(f"{where}: multiplier {x} outside admissible [{lo}, {hi}]")
    return x


def _short_multiplier(model: ErrorModel, beta: float) -> float:
    if model.kind is ErrorKind.PERCENTUAL:
        x = 1.0 - beta
    else:
        x = 1.0 / (1.0 + beta)
    return _check_multiplier(model, x, f"m-ray short step with beta={beta}")


def _line_step(rule: ErrorAssignment, model: ErrorModel, s: StrategySpec, i: int) -> tuple[float, float, float]:
    """(nominal, outbound length, return length) of line step ``i``."""
    f = s.nominal(i)
    b = bounds(model, f)
    direction = s.direction(i)
    if rule.rule is AssignmentRule.ERROR_FREE:
        return f, f, f
    if rule.rule is AssignmentRule.WORST_CASE:
        # moves away from the goal are long, moves toward it are short
        out = b.lo if direction == rule.goal_side else b.hi
        back = b.hi if direction == rule.goal_side else b.lo
        return f, out, back
    if rule.rule is AssignmentRule.CUSTOM:
        k = 2 * (i - 1)
        if k + 1 >= len(rule.multipliers):
            raise RangeError(f"custom assignment has no multipliers for line step {i}")
        mo = _check_multiplier(model, rule.multipliers[k], f"step {i} outbound")
        mb = _check_multiplier(model, rule.multipliers[k + 1], f"step {i} return")
        return f, mo * f, mb * f
    raise DomainError(f"assignment rule {rule.rule.value} does not apply to line walks")


def _mray_step(rule: ErrorAssignment, model: ErrorModel, s: StrategySpec, i: int,
               short_step: int | None) -> tuple[float, float]:
    """(nominal, realized depth) of m-ray step ``i``."""
    f = s.nominal(i)
    b = bounds(model, f)
    if rule.rule is AssignmentRule.ERROR_FREE:
        return f, f
    if rule.rule in (AssignmentRule.MRAY_WORST_CASE, AssignmentRule.WORST_CASE):
        if i == short_step:
            beta = model.delta if rule.beta is None else rule.beta
            return f, _short_multiplier(model, beta) * f
        return f, b.hi
    if rule.rule is AssignmentRule.CUSTOM:
        if i > len(rule.multipliers):
            raise RangeError(f"custom assignment has no multiplier for m-ray step {i}")
        return f, _check_multiplier(model, rule.multipliers[i - 1], f"step {i}") * f
    raise DomainError(f"assignment rule {rule.rule.value} does not apply to m-ray walks")


def realize_assignment(rule: ErrorAssignment, model: ErrorModel, s: StrategySpec, n: int,
                       geometry: str = "line") -> np.ndarray:
    """Realized lengths of the first ``n`` steps.

    For the line the result has shape ``(n, 2)`` with columns
    ``(left-moving length, right-moving length)`` per step. For m rays it is
    the ``(n,)`` array of realized depths.
    """
    validate(model)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if geometry == "line":
        out = np.empty((n, 2))
        for i in range(1, n + 1):
            _, lo, lb = _line_step(rule, model, s, i)
            if s.direction(i) == LEFT:
                out[i - 1] = (lo, lb)
            else:
                out[i - 1] = (lb, lo)
        return out
    if geometry == "mray":
        return np.array([_mray_step(rule, model, s, i, rule.short_step)[1] for i in range(1, n + 1)])
    raise DomainError(f"unknown geometry {geometry!r}")


# ---------------------------------------------------------------------------
# line walk


def _line_segments(s: StrategySpec, rule: ErrorAssignment, model: ErrorModel,
                   max_iter: int) -> Iterator[Segment]:
    pos = 0.0
    for i in range(1, max_iter + 1):
        if s.length is not None and i > s.length:
            return
        if rule.rule is AssignmentRule.CUSTOM and 2 * i > len(rule.multipliers):
            return
        f, out_len, back_len = _line_step(rule, model, s, i)
        d = s.direction(i)
        turn = pos + d * out_len
        yield Segment(i, True, d, f, out_len, pos, turn)
        pos = turn - d * back_len
        yield Segment(i, False, -d, f, back_len, turn, pos)


def _resolve_line_goal(goal: GoalSpec, segs: list[Segment], source: Iterator[Segment]) -> float:
    if goal.just_beyond is None:
        return goal.side * goal.distance
    j = goal.just_beyond
    while not any(g.step == j and g.outbound for g in segs):
        nxt = next(source, None)
        if nxt is None:
            raise RangeError(f"walk ends before step {j}; cannot place goal beyond it")
        segs.append(nxt)
    turn = next(g for g in segs if g.step == j and g.outbound)
    x = turn.end
    if x * turn.direction <= 0:
        raise DomainError(f"turning point of step {j} ({x}) is not on the step's side of the start")
    g = x * (1 + goal.epsilon)
    if abs(g) < 1:
        raise DomainError(f"goal beyond step {j} would lie at distance {abs(g)} < 1")
    return g


def execute_line_walk(s: StrategySpec, assignment: ErrorAssignment, model: ErrorModel,
                      goal: GoalSpec, max_iter: int = DEFAULT_MAX_ITER) -> WalkTrace:
    """Simulate alternating sweeps until the goal is swept over.

    The goal counts as found when any segment's closed extent contains it.
    Without a hit in ``max_iter`` steps (or before a finite strategy or
    custom assignment runs out) the full trace is returned with
    ``hit=False``.
    """
    validate(model)
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")
    source = _line_segments(s, assignment, model, max_iter)
    pending: list[Segment] = []
    g = _resolve_line_goal(goal, pending, source)

    taken: list[Segment] = []
    lengths: list[float] = []
    positions: list[float] = []
    drifts: list[float] = []
    left_minus_right: list[float] = []
    hit_step = None
    path = None
    for seg in itertools.chain(pending, source):
        taken.append(seg)
        lo, hi = min(seg.start, seg.end), max(seg.start, seg.end)
        if lo <= g <= hi:
            lengths.append(abs(g - seg.start))
            hit_step = seg.step
            path = math.fsum(lengths)
            break
        lengths.append(seg.realized)
        left_minus_right.append(seg.realized if seg.direction == LEFT else -seg.realized)
        if not seg.outbound:
            positions.append(seg.end)
            drifts.append(math.fsum(left_minus_right))
    hit = hit_step is not None
    if not hit:
        path = math.fsum(lengths)
    return WalkTrace(
        segments=tuple(taken),
        positions=tuple(positions),
        drift_per_iteration=tuple(drifts),
        path_length=path,
        hit=hit,
        hit_step=hit_step,
        goal=goal,
        goal_position=g,
        distance=abs(g),
        model=model,
    )


def drift(trace: WalkTrace, k: int) -> float:
    """Drift after ``k`` completed iterations; positive means left of the start."""
    if k == 0:
        return 0.0
    if not 1 <= k <= trace.iterations:
        raise RangeError(f"trace has {trace.iterations} completed iterations, asked for {k}")
    return trace.drift_per_iteration[k - 1]


def competitive_ratio(trace: WalkTrace) -> float:
    if not trace.hit:
        raise NotHitError("walk did not reach the goal")
    return trace.path_length / trace.distance


# ---------------------------------------------------------------------------
# m-ray walk


def execute_mray_walk(s: StrategySpec, m: int, assignment: ErrorAssignment, model: ErrorModel,
                      goal: GoalSpec, max_iter: int = DEFAULT_MAX_ITER) -> WalkTrace:
    """Cyclic m-ray search; step ``i`` explores ray ``i mod m``."""
    validate(model)
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter}")
    horizon = max_iter if s.length is None else min(max_iter, s.length)
    if horizon >= m + 1 and not is_monotone_under_error(s, m, model, horizon):
        raise MonotonicityError(
            f"strategy is not monotone for m={m} under {model.kind.value} delta={model.delta}")

    short = assignment.short_step
    if short is None and goal.just_beyond is not None:
        short = goal.just_beyond

    def step(i):
        return _mray_step(assignment, model, s, i, short)

    depths: dict[int, float] = {}
    if goal.just_beyond is not None:
        k = goal.just_beyond
        if k > horizon:
            raise RangeError(f"walk ends before step {k}; cannot place goal beyond it")
        ray = k % m
        d = step(k)[1] * (1 + goal.epsilon)
        if d < 1:
            raise DomainError(f"goal beyond step {k} would lie at distance {d} < 1")
    else:
        if not 0 <= goal.ray < m:
            raise DomainError(f"goal ray must be in [0, {m}), got {goal.ray}")
        ray, d = goal.ray, goal.distance

    taken: list[Segment] = []
    lengths: list[float] = []
    hit_step = None
    for i in range(1, horizon + 1):
        if assignment.rule is AssignmentRule.CUSTOM and i > len(assignment.multipliers):
            break
        f, depth = step(i)
        r = i % m
        taken.append(Segment(i, True, 1, f, depth, 0.0, depth, ray=r))
        if r == ray and depth >= d:
            lengths.append(d)
            hit_step = i
            break
        lengths.append(depth)
        taken.append(Segment(i, False, -1, f, depth, depth, 0.0, ray=r))
        lengths.append(depth)
        depths[i] = depth
    n_done = len(depths)
    return WalkTrace(
        segments=tuple(taken),
        positions=(0.0,) * n_done,
        drift_per_iteration=(0.0,) * n_done,
        path_length=math.fsum(lengths),
        hit=hit_step is not None,
        hit_step=hit_step,
        goal=goal,
        goal_position=d,
        distance=d,
        model=model,
        m=m,
    )


# ---------------------------------------------------------------------------
# brute-force adversary


@dataclass(frozen=True)
class BruteForceResult:
    """Outcome of :func:`brute_force_worst_ratio`.

    ``at_max`` rows flag, per enumerated segment (traversal order), whether
    the realized length sits at the interval maximum. ``assignment`` is the
    first maximizer, ``maximizers`` all assignments tying the maximum.
    """

    ratio: float
    assignment: ErrorAssignment
    at_max: np.ndarray
    goal_position: float
    maximizers: np.ndarray
    segment_steps: np.ndarray
    segment_outbound: np.ndarray
    segment_direction: np.ndarray
    nodes: int


def _enumeration_layout(s: StrategySpec, j_max: int):
    n_iter = 2 * j_max + 2
    if s.length is not None:
        n_iter = min(n_iter, s.length)
    steps, outbound, direction, nominal = [], [], [], []
    for i in range(1, n_iter + 1):
        d = s.direction(i)
        f = s.nominal(i)
        steps.append(i); outbound.append(True); direction.append(d); nominal.append(f)
        if i < n_iter:
            steps.append(i); outbound.append(False); direction.append(-d); nominal.append(f)
    return (np.array(steps), np.array(outbound), np.array(direction, dtype=float),
            np.array(nominal))


def brute_force_worst_ratio(s: StrategySpec, model: ErrorModel, j_max: int, goal_grid: int = 16,
                            epsilon: float = DEFAULT_EPSILON,
                            node_limit: int = DEFAULT_NODE_LIMIT,
                            chunk: int = 2 ** 14) -> BruteForceResult:
    """Exhaustive worst case over extreme assignments and goal placements.

    Enumerates every choice of interval endpoint for each segment of steps
    ``1 .. 2 j_max + 1`` plus the outbound segment of step ``2 j_max + 2``.
    Goal candidates are the points just beyond every turning point and
    ``goal_grid`` evenly spaced distances in ``[1, reach]`` on both sides.
    Only goals actually hit within the enumerated segments count.
    """
    validate(model)
    if j_max < 0:
        raise DomainError(f"j_max must be >= 0, got {j_max}")
    steps, outbound, direction, nominal = _enumeration_layout(s, j_max)
    n_seg = len(steps)
    lo_m, hi_m = _interval_multipliers(model)

    n_assign = 2 ** n_seg
    reach = float(np.sum(nominal) * hi_m)
    grid = np.linspace(1.0, max(reach, 1.0), goal_grid) if goal_grid > 0 else np.empty(0)
    grid = np.concatenate([grid, -grid])
    n_goals = int(outbound.sum()) + grid.size
    nodes = n_assign * n_goals
    if nodes > node_limit:
        raise BudgetError(f"enumeration needs {nodes} nodes, limit is {node_limit}")

    bit_weights = 1 << np.arange(n_seg - 1, -1, -1)
    best_ratio = -math.inf
    per_assign_best = np.full(n_assign, -math.inf)
    per_assign_goal = np.full(n_assign, math.nan)
    out_idx = np.nonzero(outbound)[0]

    for start in range(0, n_assign, chunk):
        codes = np.arange(start, min(start + chunk, n_assign))
        bits = (codes[:, None] & bit_weights[None, :]) != 0
        lengths = np.where(bits, hi_m, lo_m) * nominal[None, :]
        moves = lengths * direction[None, :]
        pos = np.concatenate([np.zeros((len(codes), 1)), np.cumsum(moves, axis=1)], axis=1)
        cum = np.concatenate([np.zeros((len(codes), 1)), np.cumsum(lengths, axis=1)], axis=1)

        beyond = pos[:, out_idx + 1] * (1 + epsilon)
        goals = np.concatenate([beyond, np.broadcast_to(grid, (len(codes), grid.size))], axis=1)
        valid = np.abs(goals) >= 1
        path = np.full(goals.shape, math.nan)
        found = np.zeros(goals.shape, dtype=bool)
        for k in range(n_seg):
            x0 = pos[:, k:k + 1]
            x1 = pos[:, k + 1:k + 2]
            hit = (~found) & (np.minimum(x0, x1) <= goals) & (goals <= np.maximum(x0, x1))
            path = np.where(hit, cum[:, k:k + 1] + np.abs(goals - x0), path)
            found |= hit
        ratio = np.where(found & valid, path / np.abs(goals), -math.inf)
        arg = np.argmax(ratio, axis=1)
        rows = np.arange(len(codes))
        per_assign_best[codes] = ratio[rows, arg]
        per_assign_goal[codes] = goals[rows, arg]
        best_ratio = max(best_ratio, float(per_assign_best[codes].max()))

    if not math.isfinite(best_ratio):
        raise NotHitError("no enumerated goal placement is ever reached")
    tied = np.nonzero(per_assign_best >= best_ratio * (1 - 1e-12))[0]
    all_bits = (tied[:, None] & bit_weights[None, :]) != 0
    first = all_bits[0]
    mult = np.where(first, hi_m, lo_m)
    return BruteForceResult(
        ratio=best_ratio,
        assignment=ErrorAssignment.custom(mult.tolist()),
        at_max=first,
        goal_position=float(per_assign_goal[tied[0]]),
        maximizers=all_bits,
        segment_steps=steps,
        segment_outbound=outbound,
        segment_direction=direction,
        nodes=nodes,
    )


def worst_case_bits(result: BruteForceResult, goal_side: int = RIGHT) -> np.ndarray:
    """The analytic worst case on ``result``'s segment layout: away long, toward short."""
    return result.segment_direction != goal_side


# ---------------------------------------------------------------------------
# export


def _fmt(x: float | int) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{x:.12g}"


def write_trace_csv(trace: WalkTrace, fh: TextIO) -> None:
    """One row per traversed segment; the hit segment ends at the goal."""
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(TRACE_COLUMNS)
    cum = 0.0
    done = 0
    last = len(trace.segments) - 1
    for n, seg in enumerate(trace.segments):
        is_hit = trace.hit and n == last
        if is_hit:
            cum = trace.path_length
            position = trace.goal_position
        else:
            cum += seg.realized
            position = seg.end
            if not seg.outbound:
                done += 1
        drift_now = trace.drift_per_iteration[done - 1] if done else 0.0
        w.writerow([seg.step, seg.label, _fmt(seg.nominal), _fmt(seg.realized), _fmt(position),
                    _fmt(drift_now), _fmt(cum)])


def trace_csv(trace: WalkTrace) -> str:
    buf = io.StringIO()
    write_trace_csv(trace, buf)
    return buf.getvalue()
