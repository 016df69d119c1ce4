"""Performance measures from a stationary distribution."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .generator import build_generator
from .model import ModelParams, StateSpace
from .solver import Method, StationaryDistribution, solve_stationary


@dataclass(frozen=True)
class PerformanceMeasures:
    P_b: float
    P_d: float
    M_b: float
    M_o: float
    M_s: float

    def as_dict(self) -> dict:
        return asdict(self)


def _grid(dist, space: StateSpace) -> np.ndarray:
    pi = dist.pi if isinstance(dist, StationaryDistribution) else np.asarray(dist)
    return pi.reshape(space.params.c + 1, space.params.m + 1)


def blocking_probability(dist, space: StateSpace) -> float:
    """Mass of states where an arriving new call is lost: orbit full, >= c-g busy."""
    P = _grid(dist, space)
    return float(P[space.params.threshold:, -1].sum())


def dropping_probability(dist, space: StateSpace) -> float:
    return float(_grid(dist, space)[-1, :].sum())


def mean_busy_channels(dist, space: StateSpace) -> float:
    P = _grid(dist, space)
    return float(np.arange(P.shape[0]) @ P.sum(axis=1))


def mean_orbit_occupancy(dist, space: StateSpace, from_level_one: bool = False) -> float:
    """Mean orbit size.

    The empty-channel level carries orbit mass too and is included by default;
    ``from_level_one=True`` drops level ``j = 0`` from the sum.
    """
    P = _grid(dist, space)
    if from_level_one:
        P = P[1:]
    return float(np.arange(P.shape[1]) @ P.sum(axis=0))


def mean_system_size(dist, space: StateSpace) -> float:
    return mean_busy_channels(dist, space) + mean_orbit_occupancy(dist, space)


def measures_from(dist, space: StateSpace) -> PerformanceMeasures:
    m_b = mean_busy_channels(dist, space)
    m_o = mean_orbit_occupancy(dist, space)
    return PerformanceMeasures(
        P_b=blocking_probability(dist, space),
        P_d=dropping_probability(dist, space),
        M_b=m_b,
        M_o=m_o,
        M_s=m_b + m_o,
    )


def evaluate(params: ModelParams, method: Method | str = Method.REPLACE_COLUMN) -> PerformanceMeasures:
    """Build the generator, solve it and compute all five measures."""
    Qg = build_generator(params)
    dist = solve_stationary(Qg, method)
    return measures_from(dist, StateSpace(params))
