"""Sparse block-tridiagonal generator assembly."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import CapacityError, DomainError, StructuralError
from .model import ModelParams, StateSpace, transition_rules

MAX_STATES = 10**7


@dataclass(frozen=True, eq=False)
class SparseGenerator:
    """Generator in coordinate form; off-diagonals first, then one diagonal per row."""

    params: ModelParams
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    @property
    def dim(self) -> int:
        return (self.params.c + 1) * (self.params.m + 1)

    @property
    def level_width(self) -> int:
        return self.params.m + 1

    @property
    def space(self) -> StateSpace:
        return StateSpace(self.params)

    @property
    def triplets(self) -> list[tuple[int, int, float]]:
        return list(zip(self.rows.tolist(), self.cols.tolist(), self.vals.tolist()))

    @cached_property
    def csr(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.vals, (self.rows, self.cols)), shape=(self.dim, self.dim))

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def offdiagonal_rates(self) -> sp.csr_matrix:
        mask = self.rows != self.cols
        return sp.csr_matrix(
            (self.vals[mask], (self.rows[mask], self.cols[mask])), shape=(self.dim, self.dim)
        )

    def to_banded(self, transpose: bool = False) -> tuple[np.ndarray, int]:
        """LAPACK-style band storage ``ab[u + i - j, j] = A[i, j]`` and the half-bandwidth.

        Level-major ordering bounds both half-bandwidths by ``m + 1``.
        """
        bw = self.level_width
        r, c = (self.cols, self.rows) if transpose else (self.rows, self.cols)
        ab = np.zeros((2 * bw + 1, self.dim))
        np.add.at(ab, (bw + r - c, c), self.vals)
        return ab, bw


def build_generator(params: ModelParams, max_states: int = MAX_STATES) -> SparseGenerator:
    space = StateSpace(params)
    n = space.total_states
    if n > max_states:
        raise CapacityError(f"state space has {n} states, cap is {max_states}")
    w = space.level_width
    j, k = space.grid()
    src = np.arange(n)

    rows, cols, vals = [], [], []
    for dj, dk, rate, active in transition_rules(params, j, k):
        keep = active & (rate > 0.0)
        rows.append(src[keep])
        cols.append(src[keep] + dj * w + dk)
        vals.append(rate[keep])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals)

    # merge parallel edges (handoff + direct new-call admission share a target)
    key = rows * n + cols
    uniq, inv = np.unique(key, return_inverse=True)
    merged = np.zeros(uniq.size)
    np.add.at(merged, inv, vals)
    rows, cols = uniq // n, uniq % n

    outflow = np.zeros(n)
    np.add.at(outflow, rows, merged)
    diag = np.arange(n)
    return SparseGenerator(
        params,
        np.concatenate([rows, diag]).astype(np.int64),
        np.concatenate([cols, diag]).astype(np.int64),
        np.concatenate([merged, -outflow]),
    )


def extract_level_blocks(Qg: SparseGenerator, level: int):
    """Dense ``(lower, diagonal, upper)`` blocks of row-level ``level``.

    ``lower`` is ``None`` at level 0 and ``upper`` is ``None`` at level ``c``.
    """
    c = Qg.params.c
    if not 0 <= level <= c:
        raise DomainError(f"level {level} outside [0, {c}]")
    w = Qg.level_width
    Q = Qg.csr
    rs = slice(level * w, (level + 1) * w)

    def block(other):
        return Q[rs, other * w:(other + 1) * w].toarray()

    lower = block(level - 1) if level > 0 else None
    upper = block(level + 1) if level < c else None
    return lower, block(level), upper


def is_irreducible(Qg: SparseGenerator) -> bool:
    n_comp, _ = connected_components(Qg.offdiagonal_rates(), directed=True, connection="strong")
    return n_comp == 1


def check_irreducible(Qg: SparseGenerator) -> None:
    if not is_irreducible(Qg):
        raise StructuralError(f"generator for {Qg.params} is not irreducible")


def check_structure(Qg: SparseGenerator, atol: float = 1e-12) -> list[str]:
    """Return a list of violated generator invariants (empty if valid)."""
    problems = []
    off = Qg.rows != Qg.cols
    if np.any(Qg.vals[off] <= 0.0):
        problems.append("non-positive off-diagonal entry")
    counts = np.bincount(Qg.rows[~off], minlength=Qg.dim)
    if np.any(counts != 1):
        problems.append("row without exactly one diagonal entry")
    row_sums = np.zeros(Qg.dim)
    np.add.at(row_sums, Qg.rows, Qg.vals)
    worst = float(np.max(np.abs(row_sums))) if Qg.dim else 0.0
    if worst > atol:
        problems.append(f"row sum off by {worst:.3e}")
    w = Qg.level_width
    if np.any(np.abs(Qg.rows // w - Qg.cols // w) > 1):
        problems.append("entry outside the block-tridiagonal band")
    if not is_irreducible(Qg):
        problems.append("not irreducible")
    return problems


def dump_coordinates(Qg: SparseGenerator, path) -> None:
    """Write ``row col value`` lines, 17 significant digits, row-major order.

    ``path`` may also be an open text stream.
    """
    order = np.lexsort((Qg.cols, Qg.rows))
    lines = "".join(f"{Qg.rows[i]} {Qg.cols[i]} {Qg.vals[i]:.17g}\n" for i in order)
    if hasattr(path, "write"):
        path.write(lines)
        return
    with open(path, "w") as fh:
        fh.write(lines)
