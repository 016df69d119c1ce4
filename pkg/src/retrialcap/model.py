"""Model parameters, state space and transition rules.

A state ``(j, k)`` holds ``j`` busy channels out of ``c`` and ``k`` calls
waiting in a retrial orbit of capacity ``m``. States are ordered level-major,
``index(j, k) = j * (m + 1) + k``, so each level ``j`` is a contiguous block.

``transition_rules`` is the only place where rates are defined; the
generator assembly and the per-state enumeration both go through it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError

# defaults used for every reproduction run (c, g and m have none)
DEFAULT_RATES = dict(lambda_n=40.0, lambda_h=40.0, nu=1.0, p=0.8, mu_r=0.5)


@dataclass(frozen=True)
class ModelParams:
    c: int
    g: int
    m: int
    lambda_n: float = DEFAULT_RATES["lambda_n"]
    lambda_h: float = DEFAULT_RATES["lambda_h"]
    nu: float = DEFAULT_RATES["nu"]
    p: float = DEFAULT_RATES["p"]
    mu_r: float = DEFAULT_RATES["mu_r"]

    def __post_init__(self):
        for name in ("c", "g", "m"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        for name in ("lambda_n", "lambda_h", "nu", "p", "mu_r"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.c < 1:
            raise DomainError(f"c must be >= 1, got {self.c}")
        if not 0 <= self.g <= self.c:
            raise DomainError(f"g must satisfy 0 <= g <= c, got g={self.g}, c={self.c}")
        if self.m < 0:
            raise DomainError(f"m must be >= 0, got {self.m}")
        for name in ("lambda_n", "lambda_h", "nu", "mu_r"):
            if getattr(self, name) <= 0.0:
                raise DomainError(f"{name} must be > 0, got {getattr(self, name)}")
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"p must lie in [0, 1], got {self.p}")

    @property
    def lam(self) -> float:
        """Total arrival rate, new plus handoff."""
        return self.lambda_n + self.lambda_h

    @property
    def threshold(self) -> int:
        """Busy-channel count from which new calls are diverted to the orbit."""
        return self.c - self.g

    def with_(self, **changes) -> "ModelParams":
        fields = {f: getattr(self, f) for f in self.__dataclass_fields__}
        fields.update(changes)
        return ModelParams(**fields)

    def rates(self) -> dict:
        return {f: getattr(self, f) for f in ("lambda_n", "lambda_h", "nu", "p", "mu_r")}


class State(NamedTuple):
    j: int
    k: int


@dataclass(frozen=True)
class StateSpace:
    params: ModelParams

    @property
    def level_width(self) -> int:
        return self.params.m + 1

    @property
    def total_states(self) -> int:
        return (self.params.c + 1) * (self.params.m + 1)

    def contains(self, s) -> bool:
        j, k = s
        return 0 <= j <= self.params.c and 0 <= k <= self.params.m

    def index(self, s) -> int:
        if not self.contains(s):
            raise DomainError(f"state {tuple(s)} outside [0,{self.params.c}]x[0,{self.params.m}]")
        j, k = s
        return int(j) * self.level_width + int(k)

    def state(self, i: int) -> State:
        if not 0 <= i < self.total_states:
            raise DomainError(f"index {i} outside [0, {self.total_states})")
        j, k = divmod(int(i), self.level_width)
        return State(j, k)

    def grid(self) -> tuple[np.ndarray, np.ndarray]:
        """``(j, k)`` arrays for every index in order."""
        idx = np.arange(self.total_states)
        return idx // self.level_width, idx % self.level_width

    def level_slice(self, j: int) -> slice:
        w = self.level_width
        return slice(j * w, (j + 1) * w)


def transition_rules(params: ModelParams, j, k):
    """Yield ``(dj, dk, rate, active)`` for each of the six transition types.

    ``j`` and ``k`` may be scalars or equally-shaped integer arrays; ``rate``
    and ``active`` broadcast against them.
    """
    c, m, t = params.c, params.m, params.threshold
    j = np.asarray(j)
    k = np.asarray(k)
    ones = np.ones(np.broadcast(j, k).shape)
    # handoff arrival
    yield 1, 0, params.lambda_h * ones, j < c
    # new call admitted directly below the guard threshold
    yield 1, 0, params.lambda_n * ones, j < t
    # new call diverted into the orbit (lost when the orbit is full)
    yield 0, 1, params.lambda_n * ones, (j >= t) & (k < m)
    # service completion
    yield -1, 0, j * params.nu * ones, j >= 1
    # retrial succeeds and seizes a channel (guard channels included)
    yield 1, -1, k * params.p * params.mu_r * ones, (k >= 1) & (j < c)
    # retrial gives up for good
    yield 0, -1, k * (1.0 - params.p) * params.mu_r * ones, k >= 1


def enumerate_transitions(params: ModelParams, s) -> list[tuple[State, float]]:
    """Outgoing transitions of state ``s`` with parallel edges merged."""
    if not StateSpace(params).contains(s):
        raise DomainError(f"state {tuple(s)} outside [0,{params.c}]x[0,{params.m}]")
    j, k = int(s[0]), int(s[1])
    merged: dict[State, float] = {}
    for dj, dk, rate, active in transition_rules(params, j, k):
        rate = float(rate)
        if bool(active) and rate > 0.0:
            target = State(j + dj, k + dk)
            merged[target] = merged.get(target, 0.0) + rate
    return list(merged.items())


def uniformization_constant(params: ModelParams) -> float:
    """Upper bound on the total outflow rate of any state."""
    return params.lambda_n + params.lambda_h + params.c * params.nu + params.m * params.mu_r
