"""Capacity planning over channels ``c``, guard channels ``g`` and orbit size ``m``.

Problems
--------
o1  minimise P_b subject to P_d <= P_d0        (fixed c)
      algI:  g from x% of c, largest feasible m
      algII: m from x% of c, smallest feasible g
o2  minimise P_d subject to P_b <= P_b0        (fixed c)
      algIII: g from x% of c, smallest feasible m
o3  minimise c subject to both bounds
      exhaustive (default) or the midpoint/bracketing heuristic ``paperIV``
o4  minimise m subject to both bounds
      algV: c ascending, g from x% of c, m in [0, c // 2]

The searches rely on P_d being non-decreasing in m and non-increasing in g,
and P_b being non-increasing in m and non-decreasing in g. ``linear=True``
replaces every bisection with a full scan that does not assume monotonicity.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from .errors import DomainError
from .measures import PerformanceMeasures, evaluate
from .model import DEFAULT_RATES, ModelParams
from .solver import Method


@dataclass(frozen=True)
class QosTargets:
    P_d0: float | None = None
    P_b0: float | None = None

    def __post_init__(self):
        for name in ("P_d0", "P_b0"):
            v = getattr(self, name)
            if v is not None and not 0.0 < v < 1.0:
                raise DomainError(f"{name} must lie in (0, 1), got {v}")

    def require(self, *names: str) -> None:
        missing = [n for n in names if getattr(self, n) is None]
        if missing:
            raise DomainError(f"missing target(s): {', '.join(missing)}")


@dataclass(frozen=True)
class TracePoint:
    c: int
    g: int
    m: int
    P_b: float
    P_d: float


@dataclass
class OptimizationResult:
    problem: str
    feasible: bool
    c: int | None = None
    g: int | None = None
    m: int | None = None
    P_b: float | None = None
    P_d: float | None = None
    trace: list[TracePoint] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def as_dict(self, with_trace: bool = False) -> dict:
        d = asdict(self)
        if not with_trace:
            d.pop("trace")
        return d


class Evaluator:
    """Memoised ``(c, g, m) -> measures`` at fixed rates; records every new point."""

    def __init__(self, rates: dict | None = None, method: Method | str = Method.REPLACE_COLUMN):
        self.rates = dict(DEFAULT_RATES if rates is None else rates)
        self.method = Method(method)
        self.cache: dict[tuple[int, int, int], PerformanceMeasures] = {}
        self.trace: list[TracePoint] = []

    def __call__(self, c: int, g: int, m: int) -> PerformanceMeasures:
        key = (c, g, m)
        hit = self.cache.get(key)
        if hit is None:
            hit = evaluate(ModelParams(c, g, m, **self.rates), self.method)
            self.cache[key] = hit
            self.trace.append(TracePoint(c, g, m, hit.P_b, hit.P_d))
        return hit

    def result(self, problem: str, c=None, g=None, m=None, notes=()) -> OptimizationResult:
        if c is None:
            return OptimizationResult(problem, False, trace=list(self.trace), notes=list(notes))
        pm = self(c, g, m)
        return OptimizationResult(
            problem, True, c, g, m, pm.P_b, pm.P_d, list(self.trace), list(notes)
        )


def ceil_percent(x_percent, c: int) -> int:
    """Exact ``ceil(x% * c)`` (no floating-point round-off)."""
    frac = Fraction(str(x_percent)) if isinstance(x_percent, float) else Fraction(x_percent)
    if frac < 0 or frac > 100:
        raise DomainError(f"x must lie in [0, 100], got {x_percent}")
    return math.ceil(frac * c / 100)


def first_true(lo: int, hi: int, pred: Callable[[int], bool], linear: bool = False) -> int | None:
    """Smallest ``x`` in ``[lo, hi]`` with ``pred(x)``; bisection assumes false...true."""
    if lo > hi:
        return None
    if linear:
        return next((x for x in range(lo, hi + 1) if pred(x)), None)
    if not pred(hi):
        return None
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def last_true(lo: int, hi: int, pred: Callable[[int], bool], linear: bool = False) -> int | None:
    """Largest ``x`` in ``[lo, hi]`` with ``pred(x)``; bisection assumes true...false."""
    if lo > hi:
        return None
    if linear:
        return next((x for x in range(hi, lo - 1, -1) if pred(x)), None)
    if not pred(lo):
        return None
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def _evaluator(evaluator, rates):
    return evaluator if evaluator is not None else Evaluator(rates)


def solve_o1_algI(
    c: int,
    x_percent,
    targets: QosTargets,
    m_cap: int | None = None,
    *,
    g: int | None = None,
    rates: dict | None = None,
    linear: bool = False,
    evaluator: Evaluator | None = None,
) -> OptimizationResult:
    """Largest orbit size meeting the dropping bound; ``g = ceil(x% c)`` unless given."""
    targets.require("P_d0")
    ev = _evaluator(evaluator, rates)
    g = ceil_percent(x_percent, c) if g is None else g
    m_cap = 2 * c if m_cap is None else m_cap
    m_star = last_true(0, m_cap, lambda m: ev(c, g, m).P_d <= targets.P_d0, linear)
    if m_star is None:
        return ev.result("o1-algI", notes=[f"P_d(c={c}, g={g}, m=0) exceeds P_d0"])
    return ev.result("o1-algI", c, g, m_star)


def solve_o1_algII(
    c: int,
    x_percent,
    targets: QosTargets,
    *,
    m: int | None = None,
    rates: dict | None = None,
    linear: bool = False,
    evaluator: Evaluator | None = None,
) -> OptimizationResult:
    """Smallest guard-channel count meeting the dropping bound; ``m = ceil(x% c)``."""
    targets.require("P_d0")
    ev = _evaluator(evaluator, rates)
    m = ceil_percent(x_percent, c) if m is None else m
    g_star = first_true(0, c, lambda g: ev(c, g, m).P_d <= targets.P_d0, linear)
    if g_star is None:
        return ev.result("o1-algII", notes=[f"P_d(c={c}, g=c, m={m}) exceeds P_d0"])
    return ev.result("o1-algII", c, g_star, m)


def solve_o2_algIII(
    c: int,
    x_percent,
    targets: QosTargets,
    m_cap: int | None = None,
    *,
    g: int | None = None,
    rates: dict | None = None,
    linear: bool = False,
    evaluator: Evaluator | None = None,
) -> OptimizationResult:
    """Smallest orbit size meeting the blocking bound."""
    targets.require("P_b0")
    ev = _evaluator(evaluator, rates)
    g = ceil_percent(x_percent, c) if g is None else g
    m_cap = 2 * c if m_cap is None else m_cap
    m_star = first_true(0, m_cap, lambda m: ev(c, g, m).P_b <= targets.P_b0, linear)
    if m_star is None:
        return ev.result("o2-algIII", notes=[f"P_b(c={c}, g={g}, m={m_cap}) exceeds P_b0"])
    return ev.result("o2-algIII", c, g, m_star)


def _feasible(ev, targets, c, g, m) -> bool:
    pm = ev(c, g, m)
    return pm.P_d <= targets.P_d0 and pm.P_b <= targets.P_b0


def _o3_exhaustive(ev, targets, m_range, c_range, linear):
    for c in c_range:
        best = None
        for m in m_range:
            if linear:
                g = next((g for g in range(c + 1) if _feasible(ev, targets, c, g, m)), None)
            else:
                g = first_true(0, c, lambda g: ev(c, g, m).P_d <= targets.P_d0)
                if g is not None and ev(c, g, m).P_b > targets.P_b0:
                    g = None
            if g is not None and (best is None or g < best[0]):
                best = (g, m)
        if best is not None:
            return c, best[0], best[1], []
    return None, None, None, ["no c in range admits a feasible (g, m)"]


def _o3_paper_iv(ev, targets, m_range, c_range, linear):
    c_lo, c_hi = min(c_range), max(c_range)
    notes, best = [], None
    for m in m_range:
        c_d0 = first_true(c_lo, c_hi, lambda c: ev(c, 0, m).P_d <= targets.P_d0, linear)
        c_b0 = first_true(c_lo, c_hi, lambda c: ev(c, 0, m).P_b <= targets.P_b0, linear)
        if c_d0 is None or c_b0 is None:
            notes.append(f"m={m}: c_d0={c_d0}, c_b0={c_b0}; skipped")
            continue
        c_mid = math.ceil((c_d0 + c_b0) / 2)
        found = None
        while c_mid <= c_hi:
            g_max = last_true(0, c_mid, lambda g: ev(c_mid, g, m).P_b <= targets.P_b0, linear)
            g_min = first_true(0, c_mid, lambda g: ev(c_mid, g, m).P_d <= targets.P_d0, linear)
            if g_max is not None and g_min is not None and g_min <= g_max:
                if g_min < g_max:
                    # the stopping rule only names the g_max == g_min case
                    notes.append(
                        f"m={m}: stopped at c={c_mid} with g_min={g_min} < g_max={g_max}; took g_min"
                    )
                found = (c_mid, g_min, m)
                break
            c_mid += 1
        notes.append(f"m={m}: c_d0={c_d0}, c_b0={c_b0}, result={found}")
        if found is not None and (best is None or found[0] < best[0]):
            best = found
    if best is None:
        return None, None, None, notes
    return best[0], best[1], best[2], notes


def solve_o3(
    targets: QosTargets,
    strategy: str = "exhaustive",
    m_range: Iterable[int] = range(0, 1),
    c_range: Iterable[int] = range(1, 501),
    *,
    rates: dict | None = None,
    linear: bool = False,
    evaluator: Evaluator | None = None,
) -> OptimizationResult:
    """Fewest channels meeting both bounds.

    The default ``m_range`` is ``{0}``; wider ranges can lower ``c`` because
    the orbit absorbs new-call blocking.
    """
    targets.require("P_d0", "P_b0")
    m_range, c_range = list(m_range), list(c_range)
    if not m_range or not c_range:
        raise DomainError("m_range and c_range must be non-empty")
    ev = _evaluator(evaluator, rates)
    if strategy == "exhaustive":
        c, g, m, notes = _o3_exhaustive(ev, targets, m_range, c_range, linear)
    elif strategy == "paperIV":
        c, g, m, notes = _o3_paper_iv(ev, targets, m_range, c_range, linear)
    else:
        raise DomainError(f"unknown strategy {strategy!r}")
    return ev.result(f"o3-{strategy}", c, g, m, notes)


def solve_o4_algV(
    targets: QosTargets,
    x_percent,
    c_range: Iterable[int] = range(2, 501),
    *,
    rates: dict | None = None,
    linear: bool = False,
    evaluator: Evaluator | None = None,
) -> OptimizationResult:
    """Smallest orbit size meeting both bounds at the first ``c`` that admits one."""
    targets.require("P_d0", "P_b0")
    c_range = list(c_range)
    if not c_range:
        raise DomainError("c_range must be non-empty")
    ev = _evaluator(evaluator, rates)
    for c in c_range:
        g = ceil_percent(x_percent, c)
        m_hi = c // 2
        if linear:
            m = next((m for m in range(m_hi + 1) if _feasible(ev, targets, c, g, m)), None)
        else:
            m = first_true(0, m_hi, lambda m: ev(c, g, m).P_b <= targets.P_b0)
            if m is not None and ev(c, g, m).P_d > targets.P_d0:
                m = None
        if m is not None:
            return ev.result("o4-algV", c, g, m)
    return ev.result("o4-algV", notes=["no c in range admits a feasible m"])
