"""Stationary distribution of the generator: banded direct solve or GTH."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.linalg import LinAlgError, solve_banded

from . import kernels
from .errors import SolverError, StructuralError
from .generator import SparseGenerator, check_irreducible

log = logging.getLogger(__name__)

CLAMP = 1e-14
RESIDUAL_TOL = 1e-10


class Method(str, Enum):
    REPLACE_COLUMN = "replace-column"
    GTH = "gth"


@dataclass(frozen=True, eq=False)
class StationaryDistribution:
    pi: np.ndarray
    residual: float
    method_tag: Method

    def levels(self, level_width: int) -> np.ndarray:
        """``pi`` reshaped to ``(c + 1, m + 1)``."""
        return self.pi.reshape(-1, level_width)


def residual_norm(pi, Qg: SparseGenerator) -> float:
    """Max-norm of ``pi Q``."""
    pi = np.asarray(pi, dtype=float)
    return float(np.max(np.abs(Qg.csr.T @ pi))) if pi.size else 0.0


def _pinned_solve(ab0: np.ndarray, bw: int, pin: int, params) -> np.ndarray:
    # Q^T x = 0 with the balance equation of state `pin` swapped for x_pin = 1.
    # Only one row of the band changes, so banded LU still applies.
    n = ab0.shape[1]
    ab = ab0.copy()
    cols = np.arange(max(0, pin - bw), min(n, pin + bw + 1))
    ab[bw + pin - cols, cols] = 0.0
    ab[bw, pin] = 1.0
    rhs = np.zeros(n)
    rhs[pin] = 1.0
    try:
        x = solve_banded((bw, bw), ab, rhs, check_finite=False)
    except (LinAlgError, ValueError) as exc:
        raise SolverError(f"banded solve failed for {params} (pin {pin}): {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SolverError(f"banded solve returned non-finite values for {params} (pin {pin})")
    total = x.sum()
    if not total > 0.0:
        raise SolverError(f"unnormalisable solution (sum={total!r}) for {params}")
    return x / total


def _initial_pin(Qg: SparseGenerator) -> int:
    # mode of the no-orbit birth-death chain; the orbit is taken as full once
    # new calls are diverted, empty otherwise
    params = Qg.params
    j = np.arange(params.c + 1)
    up = np.where(j < params.threshold, params.lam, params.lambda_h)
    logw = np.concatenate([[0.0], np.cumsum(np.log(up[:-1]) - np.log(j[1:] * params.nu))])
    level = int(np.argmax(logw))
    k = params.m if level >= params.threshold else 0
    return level * Qg.level_width + k


def _replace_column(Qg: SparseGenerator, max_passes: int = 3) -> np.ndarray | None:
    # The pinned system is well conditioned only when the pinned state carries
    # a large share of the mass; pinning a tiny-probability state loses every
    # digit. Re-pin at the argmax until it is stable; a failed pass moves on
    # to the next fixed candidate. Returns None if every attempt fails.
    params = Qg.params
    ab, bw = Qg.to_banded(transpose=True)
    w = Qg.level_width
    t = min(params.threshold, params.c)
    candidates = [_initial_pin(Qg), Qg.dim - 1, t * w + params.m, t * w, 0]
    tried: set[int] = set()
    pin = candidates[0]
    for _ in range(max_passes + len(candidates)):
        tried.add(pin)
        try:
            x = _pinned_solve(ab, bw, pin, params)
        except SolverError:
            x = None
        if x is not None:
            best = int(np.argmax(x))
            if best == pin or best in tried:
                return x
            pin = best
            continue
        rest = [p for p in candidates if p not in tried]
        if not rest:
            return None
        pin = rest[0]
    return None


def _gth(Qg: SparseGenerator) -> np.ndarray:
    bw = Qg.level_width
    R = np.zeros((Qg.dim, 2 * bw + 1))
    off = Qg.rows != Qg.cols
    r, c = Qg.rows[off], Qg.cols[off]
    R[r, c - r + bw] = Qg.vals[off]
    pi, failed_at = kernels.gth_band(R, bw)
    if failed_at >= 0:
        raise StructuralError(f"state {failed_at} has no path to lower states")
    return pi


def solve_stationary(
    Qg: SparseGenerator,
    method: Method | str = Method.REPLACE_COLUMN,
    check: bool = True,
) -> StationaryDistribution:
    method = Method(method)
    if check:
        check_irreducible(Qg)
    pi = None
    if method is Method.REPLACE_COLUMN:
        pi = _replace_column(Qg)
        if pi is None:
            log.warning("banded solve failed for %s; falling back to GTH", Qg.params)
            method = Method.GTH
    if pi is None:
        pi = _gth(Qg)

    worst = pi.min()
    if worst < -CLAMP:
        raise SolverError(
            f"stationary vector has entry {worst:.3e} < -{CLAMP:g} ({method.value}, {Qg.params})"
        )
    if worst < 0.0:
        pi = np.where(pi < 0.0, 0.0, pi)
        pi = pi / pi.sum()

    res = residual_norm(pi, Qg)
    if res > RESIDUAL_TOL:
        raise SolverError(f"residual {res:.3e} exceeds {RESIDUAL_TOL:g} ({method.value}, {Qg.params})")
    return StationaryDistribution(pi, res, method)
