"""Benchmark the compiled Pfaffian/string kernels against the numpy fallback.

Usage: python benchmarks/bench_pfaffian.py

Times (a) single Pfaffians of random antisymmetric matrices across sizes
and (b) the full correlator-string sweep behind witness_qfi on an evolved
chain, for both backends.  Run with MIPT_QFI_DISABLE_NUMBA=1 to confirm
the fallback is the one being dispatched by the library itself.
"""

import time

import numpy as np

from mipt_qfi import _kernels
from mipt_qfi.realspace import evolve, init_state, majorana_correlations
from mipt_qfi.spectral import ModelParams


def time_call(fn, *args, repeat=5):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def random_antisymmetric(n, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return np.ascontiguousarray(x - x.T)


def main():
    print(f"active backend: {_kernels.backend_name()}")
    have_numba = _kernels.HAS_NUMBA

    if have_numba:
        # compile outside the timed region
        _kernels.pfaffian_numba(random_antisymmetric(4))

    print("\nPfaffian of an n x n antisymmetric matrix (best of 5):")
    print(f"{'n':>6} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>9}")
    for n in (32, 64, 128, 256):
        a = random_antisymmetric(n)
        t_np = time_call(_kernels.pfaffian_numpy, a)
        if have_numba:
            t_nb = time_call(_kernels.pfaffian_numba, a)
            print(f"{n:>6} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} {t_np / t_nb:>8.1f}x")
        else:
            print(f"{n:>6} {1e3 * t_np:>12.3f} {'-':>12} {'-':>9}")

    print("\nFull correlator-string sweep (the hot path of witness_qfi):")
    print(f"{'sites':>6} {'numpy [s]':>12} {'numba [s]':>12} {'speedup':>9}")
    for n in (32, 64, 96):
        p = ModelParams(n, 0.0, 0.75, "open")
        state = evolve(init_state(n), p, 0.05, 40)
        g = np.ascontiguousarray(majorana_correlations(state))
        t_np = time_call(_kernels.xx_table_numpy, g, repeat=2)
        if have_numba:
            _kernels.xx_table_numba(g)
            t_nb = time_call(_kernels.xx_table_numba, g, repeat=2)
            print(f"{n:>6} {t_np:>12.3f} {t_nb:>12.3f} {t_np / t_nb:>8.1f}x")
        else:
            print(f"{n:>6} {t_np:>12.3f} {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
