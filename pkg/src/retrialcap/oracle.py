"""Independent reference answers used only for verification.

* ``product_form_m0`` - closed-form birth-death solution when there is no orbit.
* ``dense_stationary`` - null space of a dense generator via SVD.
* ``simulate`` - event-driven simulation with batch-means confidence intervals.

None of these go through ``build_generator`` or the production solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import null_space
from scipy.special import gammaln
from scipy.stats import t as student_t

from . import kernels
from .errors import ConfigurationError, DomainError
from .model import ModelParams

MIN_BATCHES = 20


def product_form_m0(params: ModelParams) -> np.ndarray:
    """Level distribution ``pi_j`` for ``m = 0``.

    Unnormalised weights are ``lam^j / j!`` up to the guard threshold ``c-g``
    and ``lam^(c-g) * lambda_h^(j-(c-g)) / j!`` above it; computed in log space.
    """
    if params.m != 0:
        raise DomainError(f"product form requires m = 0, got m = {params.m}")
    j = np.arange(params.c + 1)
    t = params.threshold
    lam, lh, nu = params.lam, params.lambda_h, params.nu
    below = np.minimum(j, t)
    above = np.maximum(j - t, 0)
    logw = below * math.log(lam / nu) + above * math.log(lh / nu) - gammaln(j + 1)
    w = np.exp(logw - logw.max())
    return w / w.sum()


def product_form_losses(params: ModelParams) -> tuple[float, float]:
    """``(P_b, P_d)`` from the product form."""
    pi = product_form_m0(params)
    return float(pi[params.threshold:].sum()), float(pi[-1])


def erlang_b(load: float, servers: int) -> float:
    """Erlang-B blocking via the standard stable recursion."""
    b = 1.0
    for n in range(1, servers + 1):
        b = load * b / (n + load * b)
    return b


def dense_generator(params: ModelParams) -> np.ndarray:
    """Dense generator built from the transition rules written out longhand."""
    c, g, m = params.c, params.g, params.m
    w = m + 1
    Q = np.zeros(((c + 1) * w, (c + 1) * w))
    for j in range(c + 1):
        for k in range(m + 1):
            s = j * w + k
            if j < c:
                Q[s, s + w] += params.lambda_h
            if j < c - g:
                Q[s, s + w] += params.lambda_n
            elif k < m:
                Q[s, s + 1] += params.lambda_n
            if j > 0:
                Q[s, s - w] += j * params.nu
            if k > 0 and j < c:
                Q[s, s + w - 1] += k * params.p * params.mu_r
            if k > 0:
                Q[s, s - 1] += k * (1 - params.p) * params.mu_r
            Q[s, s] = -Q[s].sum()
    return Q


def dense_stationary(Q: np.ndarray) -> np.ndarray:
    """Stationary vector as the (one-dimensional) left null space of ``Q``."""
    ns = null_space(np.asarray(Q, dtype=float).T)
    if ns.shape[1] != 1:
        raise DomainError(f"null space has dimension {ns.shape[1]}, expected 1")
    v = ns[:, 0]
    v = v / v.sum()
    return np.where(np.abs(v) < 1e-300, 0.0, v)


# --------------------------------------------------------- simulation -------


@dataclass(frozen=True)
class SimulationResult:
    P_b: float
    P_d: float
    M_b: float
    M_o: float
    hw_P_b: float
    hw_P_d: float
    hw_M_b: float
    hw_M_o: float
    sim_time: float
    events: int
    seed: int
    batches: int

    def estimate(self, name: str) -> tuple[float, float]:
        return getattr(self, name), getattr(self, "hw_" + name)


def simulate(
    params,
    horizon: float,
    warmup: float = 0.0,
    seed: int = 0,
    batches: int = MIN_BATCHES,
    chunk: int = 1 << 20,
    trace=None,
) -> SimulationResult:
    """Simulate the cell and estimate ``P_b``, ``P_d``, ``M_b``, ``M_o``.

    ``params`` only needs the eight model attributes, so degenerate rate
    settings such as ``lambda_n = 0`` can be simulated. Blocking and dropping
    are estimated as time fractions (Poisson arrivals see time averages).
    When ``trace`` is a path, every event is written to it as CSV
    (slow; for debugging short runs only).
    """
    if not horizon > warmup >= 0.0:
        raise ConfigurationError(f"need horizon > warmup >= 0, got {horizon}, {warmup}")
    if batches < MIN_BATCHES:
        raise ConfigurationError(f"need at least {MIN_BATCHES} batches, got {batches}")
    span = (horizon - warmup) / batches
    if not span > 0.0 or warmup + span <= warmup:
        raise ConfigurationError(f"horizon {horizon} too short for {batches} batches")

    rates = np.array(
        [params.lambda_n, params.lambda_h, params.nu, params.p, params.mu_r], dtype=np.float64
    )
    dims = np.array([params.c, params.g, params.m], dtype=np.int64)
    edges = warmup + span * np.arange(batches + 1, dtype=np.float64)
    edges[-1] = horizon
    if trace is not None:
        return _simulate_traced(params, rates, dims, edges, seed, batches, trace)

    rng = np.random.default_rng(seed)
    state = np.zeros(4)
    acc = np.zeros((batches, 4))
    while state[0] < horizon:
        u = rng.random(2 * chunk)
        kernels.simulate_chunk(u, state, acc, rates, dims, edges)
    return _summarise(acc, np.diff(edges), state, seed, batches, horizon)


def _summarise(acc, widths, state, seed, batches, horizon) -> SimulationResult:
    means = acc / widths[:, None]
    est = means.mean(axis=0)
    hw = student_t.ppf(0.975, batches - 1) * means.std(axis=0, ddof=1) / math.sqrt(batches)
    return SimulationResult(
        P_b=float(est[0]),
        P_d=float(est[1]),
        M_b=float(est[2]),
        M_o=float(est[3]),
        hw_P_b=float(hw[0]),
        hw_P_d=float(hw[1]),
        hw_M_b=float(hw[2]),
        hw_M_o=float(hw[3]),
        sim_time=float(horizon),
        events=int(state[3]),
        seed=int(seed),
        batches=int(batches),
    )


_EVENT_NAMES = {
    (1, 0): "admit",
    (0, 1): "join_orbit",
    (-1, 0): "departure",
    (1, -1): "retrial_success",
    (0, -1): "retrial_abandon",
    (0, 0): "no_change",
}


def _simulate_traced(params, rates, dims, edges, seed, batches, path) -> SimulationResult:
    # one event per kernel call so state changes can be logged
    rng = np.random.default_rng(seed)
    state = np.zeros(4)
    acc = np.zeros((batches, 4))
    horizon = edges[-1]
    with open(path, "w") as fh:
        fh.write("time,event,j,k\n")
        while state[0] < horizon:
            j0, k0 = int(state[1]), int(state[2])
            kernels._simulate_chunk_py(rng.random(2), state, acc, rates, dims, edges)
            if state[0] >= horizon:
                break
            j, k = int(state[1]), int(state[2])
            fh.write(f"{state[0]!r},{_EVENT_NAMES[(j - j0, k - k0)]},{j},{k}\n")
    return _summarise(acc, np.diff(edges), state, seed, batches, horizon)
