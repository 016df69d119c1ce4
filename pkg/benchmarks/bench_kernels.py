"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 3]

Both versions are called directly, so the RETRIALCAP_DISABLE_NUMBA flag does
not matter here. The banded LU solve is timed too, for scale.
"""

import argparse
import time

import numpy as np

from retrialcap import Method, ModelParams, build_generator, solve_stationary
from retrialcap import kernels
from retrialcap._accel import USE_NUMBA


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def gth_input(params):
    Qg = build_generator(params)
    bw = Qg.level_width
    R = np.zeros((Qg.dim, 2 * bw + 1))
    off = Qg.rows != Qg.cols
    R[Qg.rows[off], Qg.cols[off] - Qg.rows[off] + bw] = Qg.vals[off]
    return Qg, R, bw


def sim_input(n_pairs, seed=0):
    u = np.random.default_rng(seed).random(2 * n_pairs)
    rates = np.array([4.0, 4.0, 1.0, 0.8, 0.5])
    dims = np.array([10, 2, 3], dtype=np.int64)
    edges = np.linspace(0.0, 1e12, 21)
    return u, rates, dims, edges


def run_sim(fn, u, rates, dims, edges):
    fn(u, np.zeros(4), np.zeros((20, 4)), rates, dims, edges)


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not USE_NUMBA:
        print("numba disabled by RETRIALCAP_DISABLE_NUMBA; both columns use the same code")

    print(f"{'kernel':<28}{'numpy [s]':>12}{'numba [s]':>12}{'speed-up':>10}")
    for c, g, m in [(40, 3, 10), (100, 5, 20), (100, 5, 69)]:
        Qg, R, bw = gth_input(ModelParams(c, g, m))
        kernels._gth_band_nb(R.copy(), bw)  # compile
        t_py = best_of(lambda: kernels._gth_band_py(R.copy(), bw), args.repeat)
        t_nb = best_of(lambda: kernels._gth_band_nb(R.copy(), bw), args.repeat)
        print(f"{f'gth c={c} m={m}':<28}{t_py:>12.4f}{t_nb:>12.4f}{t_py / t_nb:>10.1f}")

    nb_sim = kernels._simulate_chunk_nb or kernels._simulate_chunk_py
    for n in (10**4, 10**5):
        data = sim_input(n)
        run_sim(nb_sim, *data)  # compile
        t_py = best_of(lambda: run_sim(kernels._simulate_chunk_py, *data), args.repeat)
        t_nb = best_of(lambda: run_sim(nb_sim, *data), args.repeat)
        print(f"{f'simulate {n} events':<28}{t_py:>12.4f}{t_nb:>12.4f}{t_py / t_nb:>10.1f}")

    Qg = build_generator(ModelParams(100, 5, 69))
    t = best_of(lambda: solve_stationary(Qg, Method.REPLACE_COLUMN, check=False), args.repeat)
    print(f"{'banded LU c=100 m=69':<28}{t:>12.4f}")


if __name__ == "__main__":
    main()
