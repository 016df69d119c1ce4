"""Self-check suite behind ``retrialcap validate``.

Every check compares the production path (sparse generator + banded/GTH
solver) against something that does not share its code. The report is a pure
function of the seed, so two runs with the same seed print the same bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .generator import SparseGenerator, build_generator, check_structure
from .measures import evaluate, measures_from
from .model import ModelParams, StateSpace
from .oracle import dense_generator, dense_stationary, product_form_m0, simulate
from .solver import Method, solve_stationary

FAULTS = ("row-sum",)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def _random_params(rng, c_max, m_max) -> ModelParams:
    c = int(rng.integers(1, c_max + 1))
    return ModelParams(
        c=c,
        g=int(rng.integers(0, c + 1)),
        m=int(rng.integers(0, m_max + 1)),
        lambda_n=float(rng.uniform(0.2, 3.0) * c),
        lambda_h=float(rng.uniform(0.2, 3.0) * c),
        nu=float(rng.uniform(0.5, 2.0)),
        p=float(rng.uniform(0.0, 1.0)),
        mu_r=float(rng.uniform(0.1, 3.0)),
    )


def _faulty(Qg: SparseGenerator) -> SparseGenerator:
    vals = Qg.vals.copy()
    vals[0] += 1e-6
    return SparseGenerator(Qg.params, Qg.rows, Qg.cols, vals)


def check_generators(rng, n=25, fault=None) -> CheckResult:
    bad = []
    for _ in range(n):
        Qg = build_generator(_random_params(rng, 15, 6))
        if fault == "row-sum":
            Qg = _faulty(Qg)
        problems = check_structure(Qg)
        if problems:
            bad.append(f"{Qg.params.c},{Qg.params.g},{Qg.params.m}: {problems[0]}")
    return CheckResult("generator-structure", not bad, f"{n - len(bad)}/{n} valid" + (f"; {bad[0]}" if bad else ""))


def check_product_form(n_c=(5, 20, 60, 100, 120)) -> CheckResult:
    worst = 0.0
    for c in n_c:
        for g in sorted({0, 1, c // 4, c // 2, c}):
            p = ModelParams(c, g, 0)
            pi = solve_stationary(build_generator(p)).pi
            worst = max(worst, float(np.max(np.abs(pi - product_form_m0(p)))))
    return CheckResult("product-form", worst <= 1e-10, f"max |diff| = {worst:.2e}")


def check_dense(rng, n=20) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        p = _random_params(rng, 10, 5)
        ref = dense_stationary(dense_generator(p))
        Qg = build_generator(p)
        for method in Method:
            worst = max(worst, float(np.max(np.abs(solve_stationary(Qg, method).pi - ref))))
    return CheckResult("dense-null-space", worst <= 1e-10, f"max |diff| = {worst:.2e}")


def check_simulation(seed, horizon=2e5) -> CheckResult:
    configs = [
        ModelParams(10, 2, 3, 4.0, 4.0, 1.0, 0.8, 0.5),
        ModelParams(6, 1, 4, 3.0, 2.0, 1.0, 0.5, 1.0),
        ModelParams(8, 0, 2, 6.0, 1.0, 1.0, 0.9, 2.0),
    ]
    misses = []
    for i, p in enumerate(configs):
        sim = simulate(p, horizon, warmup=horizon / 100, seed=seed + i)
        exact = evaluate(p)
        for name in ("P_b", "P_d", "M_b", "M_o"):
            est, hw = sim.estimate(name)
            if abs(getattr(exact, name) - est) > 3 * hw:
                misses.append(f"{name}@{p.c},{p.g},{p.m}")
    total = 4 * len(configs)
    return CheckResult("simulation-3hw", not misses, f"{total - len(misses)}/{total} within 3 half-widths" + (f"; {misses}" if misses else ""))


def check_monotonicity(cs=range(95, 106, 2), gs=range(1, 7), ms=range(0, 11, 2)) -> CheckResult:
    slack = 1e-12
    grid = {(c, g, m): evaluate(ModelParams(c, g, m)) for c, g, m in product(cs, gs, ms)}
    viol = []
    for (c, g, m), pm in grid.items():
        nxt = grid.get((c + 2, g, m))
        if nxt and nxt.P_b > pm.P_b + slack:
            viol.append(f"P_b up in c at {c},{g},{m}")
        nxt = grid.get((c, g + 1, m))
        if nxt and (nxt.P_d > pm.P_d + slack or nxt.P_b < pm.P_b - slack):
            viol.append(f"g-direction at {c},{g},{m}")
        nxt = grid.get((c, g, m + 2))
        if nxt and (nxt.P_b > pm.P_b + slack or nxt.P_d < pm.P_d - slack):
            viol.append(f"m-direction at {c},{g},{m}")
    return CheckResult("monotonicity", not viol, f"{len(grid)} points, {len(viol)} violations")


def check_measure_bounds(rng, n=20) -> CheckResult:
    bad = 0
    for _ in range(n):
        p = _random_params(rng, 20, 8)
        pm = measures_from(solve_stationary(build_generator(p)), StateSpace(p))
        ok = (
            0 <= pm.P_b <= 1
            and 0 <= pm.P_d <= 1
            and 0 <= pm.M_b <= p.c
            and 0 <= pm.M_o <= p.m
            and pm.M_s == pm.M_b + pm.M_o
        )
        bad += not ok
    return CheckResult("measure-bounds", bad == 0, f"{n - bad}/{n} in range")


def run_validation(seed: int = 0, fault: str | None = None, quick: bool = False) -> list[CheckResult]:
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    rng = np.random.default_rng(seed)
    results = [
        check_generators(rng, fault=fault),
        check_product_form(),
        check_dense(rng),
        check_measure_bounds(rng),
        check_monotonicity(),
    ]
    results.append(check_simulation(seed, horizon=2e4 if quick else 2e5))
    return results
