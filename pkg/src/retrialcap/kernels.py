"""Hot loops: banded GTH elimination and the event-driven simulator.

Each kernel has a numba version and a numpy/plain-python version; the
module-level names ``gth_band`` and ``simulate_chunk`` point at whichever
path ``_accel.USE_NUMBA`` selects. Both versions stay importable so they
can be compared directly.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------- GTH -------
#
# R is the off-diagonal rate matrix in row-anchored band storage:
# R[i, j - i + bw] holds the rate i -> j for |i - j| <= bw. Eliminating
# states from the top index down keeps all fill-in inside the band.


def _gth_band_py(R, bw):
    n = R.shape[0]
    S = np.zeros(n)
    for top in range(n - 1, 0, -1):
        lo = max(0, top - bw)
        idx = np.arange(lo, top)
        out = R[top, idx - top + bw]
        s = out.sum()
        S[top] = s
        if not s > 0.0:
            return np.zeros(n), top
        into = R[idx, top - idx + bw] / s
        nz = np.nonzero(into)[0]
        if nz.size:
            ii = idx[nz]
            R[ii[:, None], idx[None, :] - ii[:, None] + bw] += np.outer(into[nz], out)
    pi = np.zeros(n)
    pi[0] = 1.0
    for top in range(1, n):
        lo = max(0, top - bw)
        idx = np.arange(lo, top)
        pi[top] = np.dot(pi[lo:top], R[idx, top - idx + bw]) / S[top]
    return pi / pi.sum(), -1


@njit(cache=True)
def _gth_band_nb(R, bw):
    n = R.shape[0]
    S = np.zeros(n)
    for top in range(n - 1, 0, -1):
        lo = max(0, top - bw)
        s = 0.0
        for j in range(lo, top):
            s += R[top, j - top + bw]
        S[top] = s
        if not s > 0.0:
            return np.zeros(n), top
        for i in range(lo, top):
            a = R[i, top - i + bw]
            if a == 0.0:
                continue
            a /= s
            for j in range(lo, top):
                b = R[top, j - top + bw]
                if b != 0.0:
                    R[i, j - i + bw] += a * b
    pi = np.zeros(n)
    pi[0] = 1.0
    total = 1.0
    for top in range(1, n):
        lo = max(0, top - bw)
        acc = 0.0
        for i in range(lo, top):
            acc += pi[i] * R[i, top - i + bw]
        pi[top] = acc / S[top]
        total += pi[top]
    for i in range(n):
        pi[i] /= total
    return pi, -1


# --------------------------------------------------------- simulation -------
#
# state = [t, j, k, events]; acc[b] = time integrals over batch b of
# (1{new call blocked}, 1{handoff dropped}, j, k).


def _simulate_chunk_py(u, state, acc, rates, dims, edges):
    lambda_n, lambda_h, nu, p, mu_r = rates[0], rates[1], rates[2], rates[3], rates[4]
    c, g, m = dims[0], dims[1], dims[2]
    thr = c - g
    horizon = edges[-1]
    nb = edges.shape[0] - 1
    t, j, k, events = state[0], int(state[1]), int(state[2]), state[3]
    used = 0
    npairs = u.shape[0] // 2
    b = 0
    while used < npairs and t < horizon:
        u1 = u[2 * used]
        u2 = u[2 * used + 1]
        used += 1
        total = lambda_h + lambda_n + j * nu + k * mu_r
        dt = -np.log1p(-u1) / total
        t_end = min(t + dt, horizon)
        blocked = 1.0 if (j >= thr and k == m) else 0.0
        dropped = 1.0 if j == c else 0.0
        s = max(t, edges[0])
        while b < nb and edges[b + 1] <= s:
            b += 1
        while s < t_end and b < nb:
            e = min(t_end, edges[b + 1])
            span = e - s
            acc[b, 0] += span * blocked
            acc[b, 1] += span * dropped
            acc[b, 2] += span * j
            acc[b, 3] += span * k
            s = e
            if s >= edges[b + 1]:
                b += 1
        t = t + dt
        if t >= horizon:
            break
        events += 1.0
        x = u2 * total
        if x < lambda_h:
            if j < c:
                j += 1
        elif x < lambda_h + lambda_n:
            if j < thr:
                j += 1
            elif k < m:
                k += 1
        elif x < lambda_h + lambda_n + j * nu:
            j -= 1
        else:
            y = (x - (lambda_h + lambda_n + j * nu)) / (k * mu_r)
            if y < p:
                if j < c:
                    j += 1
                    k -= 1
            else:
                k -= 1
    state[0] = t
    state[1] = j
    state[2] = k
    state[3] = events
    return used


_simulate_chunk_nb = njit(cache=True)(_simulate_chunk_py) if USE_NUMBA else None

gth_band = _gth_band_nb if USE_NUMBA else _gth_band_py
simulate_chunk = _simulate_chunk_nb if USE_NUMBA else _simulate_chunk_py
