"""Reference optimizer outcomes at the default rates, and a reproduction report.

Each row records the problem inputs and the printed answer. ``report()`` reruns
the optimizer, evaluates the printed triple directly, and evaluates the
triple one channel and one orbit slot smaller, which is where several of the
printed retrial-regime values actually come from.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .measures import evaluate
from .model import ModelParams
from .optimize import (
    QosTargets,
    solve_o1_algI,
    solve_o1_algII,
    solve_o2_algIII,
    solve_o3,
    solve_o4_algV,
)


@dataclass(frozen=True)
class ReferenceRow:
    group: str
    problem: str
    inputs: dict
    c: int
    g: int
    m: int
    P_b: float
    P_d: float
    gating: bool = False


_O1_I = dict(c=100, x_percent=5)
_O1_II = dict(c=100, x_percent=5)
_O1_II0 = dict(c=100, x_percent=0)
_O2 = dict(c=105, x_percent=5, g=5)

ROWS: list[ReferenceRow] = [
    ReferenceRow("algI-x5", "o1-algI", dict(_O1_I, P_d0=1e-2), 100, 5, 0, 0.02313149, 0.00016136),
    ReferenceRow("algI-x5", "o1-algI", dict(_O1_I, P_d0=1e-3), 100, 5, 0, 0.02313149, 0.00016136),
    ReferenceRow("algI-x5", "o1-algI", dict(_O1_I, P_d0=1e-4), 100, 5, 69, 0.04732208, 0.00009624, True),
    ReferenceRow("algII-x5", "o1-algII", dict(_O1_II, P_d0=1e-2), 100, 0, 5, 0.000784093, 0.000786833),
    ReferenceRow("algII-x5", "o1-algII", dict(_O1_II, P_d0=1e-3), 100, 1, 5, 0.000784093, 0.000786833),
    ReferenceRow("algII-x5", "o1-algII", dict(_O1_II, P_d0=1e-4), 100, 5, 5, 0.00378360, 0.0000572980, True),
    ReferenceRow("algII-x0", "o1-algII", dict(_O1_II0, P_d0=1e-2), 100, 0, 0, 0.003992, 0.003992, True),
    ReferenceRow("algII-x0", "o1-algII", dict(_O1_II0, P_d0=1e-3), 100, 3, 0, 0.012528, 0.000504, True),
    ReferenceRow("algII-x0", "o1-algII", dict(_O1_II0, P_d0=1e-4), 100, 6, 0, 0.023195, 0.000065, True),
    ReferenceRow("algII-x0", "o1-algII", dict(_O1_II0, P_d0=1e-5), 100, 9, 0, 0.038967, 0.000008, True),
    ReferenceRow("algIII-x5", "o2-algIII", dict(_O2, P_b0=1e-2), 105, 5, 0, 0.0082, 0.000046),
    ReferenceRow("algIII-x5", "o2-algIII", dict(_O2, P_b0=1e-3), 105, 5, 12, 0.00086, 0.000067),
    ReferenceRow("algIII-x5", "o2-algIII", dict(_O2, P_b0=1e-4), 105, 5, 22, 0.000083, 0.000070),
    ReferenceRow("o3", "o3", dict(P_d0=1e-2, P_b0=1e-1), 87, 3, 0, 0.09089, 0.00127, True),
    ReferenceRow("o3", "o3", dict(P_d0=1e-3, P_b0=1e-2), 101, 2, 0, 0.0077859, 0.000791455, True),
    ReferenceRow("o3", "o3", dict(P_d0=1e-4, P_b0=1e-3), 109, 2, 0, 0.0009482, 0.00008555, True),
    ReferenceRow("o3", "o3", dict(P_d0=1e-5, P_b0=1e-4), 116, 2, 0, 0.0000933, 0.000007625, True),
    ReferenceRow("o3", "o3", dict(P_d0=1e-6, P_b0=1e-5), 122, 2, 0, 0.0000091, 0.000000687, True),
    ReferenceRow("algV-x5", "o4-algV", dict(P_d0=1e-2, P_b0=1e-1, x_percent=5), 90, 4, 3, 0.09089, 0.00127),
    ReferenceRow("algV-x5", "o4-algV", dict(P_d0=1e-3, P_b0=1e-2, x_percent=5), 103, 5, 3, 0.009173, 0.000089),
    ReferenceRow("algV-x5", "o4-algV", dict(P_d0=1e-4, P_b0=1e-3, x_percent=5), 112, 5, 3, 0.0007501, 0.0000061),
    ReferenceRow("algV-x5", "o4-algV", dict(P_d0=1e-5, P_b0=1e-4, x_percent=5), 118, 5, 3, 0.0000949, 0.00000071),
    ReferenceRow("sharing", "point", dict(P_d0=1e-1, P_b0=1e-2), 87, 3, 0, 0.096834, 0.00544),
    ReferenceRow("sharing", "point", dict(P_d0=1e-1, P_b0=1e-2), 87, 3, 1, 0.092030, 0.005744),
    ReferenceRow("sharing", "point", dict(P_d0=1e-1, P_b0=1e-2), 83, 2, 10, 0.027259, 0.089082),
]


def run_row(row: ReferenceRow):
    """Run the optimizer a row describes; ``None`` for pure point rows."""
    kw = dict(row.inputs)
    targets = QosTargets(kw.pop("P_d0", None), kw.pop("P_b0", None))
    if row.problem == "o1-algI":
        return solve_o1_algI(kw["c"], kw["x_percent"], targets)
    if row.problem == "o1-algII":
        return solve_o1_algII(kw["c"], kw["x_percent"], targets)
    if row.problem == "o2-algIII":
        return solve_o2_algIII(kw["c"], kw["x_percent"], targets, g=kw["g"])
    if row.problem == "o3":
        return solve_o3(targets)
    if row.problem == "o4-algV":
        return solve_o4_algV(targets, kw["x_percent"])
    return None


def _close(value: float, ref: float, rel: float = 0.01, atol: float = 5e-7) -> bool:
    # atol covers values printed with six decimals
    return abs(value - ref) <= max(rel * abs(ref), atol)


@dataclass
class RowReport:
    row: ReferenceRow
    found: tuple | None
    at_printed: tuple[float, float]
    at_shifted: tuple[float, float] | None
    deviations: list[str] = field(default_factory=list)

    def line(self) -> str:
        r = self.row
        head = f"{r.group} {r.problem} {r.inputs}: printed (c,g,m)=({r.c},{r.g},{r.m})"
        if r.problem == "point":
            found = "n/a"
        elif self.found is None:
            found = "infeasible"
        else:
            found = "({},{},{})".format(*self.found[:3])
        status = "OK" if not self.deviations else "; ".join(self.deviations)
        return f"{head} computed {found} -> {status}"


def report(rows: list[ReferenceRow] = ROWS) -> list[RowReport]:
    out = []
    for row in rows:
        res = run_row(row)
        found = None
        if res is not None and res.feasible:
            found = (res.c, res.g, res.m, res.P_b, res.P_d)
        direct = evaluate(ModelParams(row.c, row.g, row.m))
        at_printed = (direct.P_b, direct.P_d)
        at_shifted = None
        if row.c > row.g:
            s = evaluate(ModelParams(row.c - 1, row.g, max(row.m - 1, 0)))
            at_shifted = (s.P_b, s.P_d)

        dev = []
        if res is not None:
            if found is None:
                dev.append("optimizer infeasible")
            elif found[:3] != (row.c, row.g, row.m):
                dev.append(f"optimum differs ({found[0]},{found[1]},{found[2]})")
        if not (_close(at_printed[0], row.P_b) and _close(at_printed[1], row.P_d)):
            msg = f"printed triple gives P_b={at_printed[0]:.6g}, P_d={at_printed[1]:.6g}"
            if at_shifted and _close(at_shifted[0], row.P_b) and _close(at_shifted[1], row.P_d):
                msg += "; printed values match (c-1, g, m-1)"
            dev.append(msg)
        out.append(RowReport(row, found, at_printed, at_shifted, dev))
    return out
