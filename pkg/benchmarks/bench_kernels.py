"""Time the numba kernels against the numpy fallbacks on the same inputs.

    python benchmarks/bench_kernels.py [--repeat N] [--threads N]

Both backends are imported directly, so the ``KDCOINC_DISABLE_NUMBA`` flag
does not matter here. The first numba call (compilation or cache load) is
excluded from the timings.
"""
import argparse
import time

import numpy as np

from kdcoinc import _kernels_nb as nb
from kdcoinc import _kernels_np as npk
from kdcoinc import dft, tao
from kdcoinc._accel import set_threads
from kdcoinc.coinc import canonical_masks
from kdcoinc.linalg import combinations_array


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def all_minors(mod, U):
    d = U.shape[0]
    for k in range(1, d + 1):
        idx = combinations_array(d, k)
        mod.minor_moduli(U, idx, idx)


def cases():
    U6, U8, U10 = (np.ascontiguousarray(T.U) for T in (tao(), dft(8), dft(10)))
    m8 = canonical_masks(8)
    return [
        ("minors dft10", lambda m: all_minors(m, U10)),
        ("dim_table tao", lambda m: m.dim_table(U6, 1e-10, 1e-9)),
        ("dim_table dft8", lambda m: m.dim_table(U8, 1e-10, 1e-9)),
        ("diagram dft8", lambda m: m.diagram_from_dims(nb.dim_table(U8, 1e-10, 1e-9), 8)),
        ("commute dft8", lambda m: m.commute_table(U8, m8, m8, 1e-9)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--threads", type=int, default=None)
    args = ap.parse_args()
    set_threads(args.threads)

    print(f"{'kernel':<18}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for name, fn in cases():
        fn(nb)  # warm-up
        t_np = best_of(lambda: fn(npk), args.repeat)
        t_nb = best_of(lambda: fn(nb), args.repeat)
        print(f"{name:<18}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
