"""Hot numeric kernels: Pfaffians and Jordan-Wigner string sums.

Two interchangeable backends. The numba backend compiles the skew
Parlett-Reid elimination and the pair sweep to native loops; the numpy
backend vectorizes the same elimination with outer products.  Set
MIPT_QFI_DISABLE_NUMBA=1 to force the numpy path (it is also chosen
automatically when numba is unavailable).  Both accumulate in the same
ascending order, so results are deterministic per backend.

benchmarks/bench_pfaffian.py times one against the other.
"""

from __future__ import annotations

import os

import numpy as np

_DISABLED = os.environ.get("MIPT_QFI_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _DISABLED:
        raise ImportError("numba disabled by MIPT_QFI_DISABLE_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False


def pfaffian_numpy(a: np.ndarray) -> complex:
    """Pfaffian by skew-symmetric Parlett-Reid elimination with pivoting.

    Mutates a copy; O(n^3).  Zero pivot column means Pf = 0 exactly.
    """
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(a[k + 1 :, k])))
        if a[kp, k] == 0:
            return 0j
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        pivot = a[k, k + 1]
        pf *= pivot
        if k + 2 < n:
            tau = a[k, k + 2 :] / pivot
            col = a[k + 2 :, k + 1]
            a[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return complex(pf)


# phase i^d for string length d, cycle of 4
_PHASES = np.array([1.0 + 0j, 1j, -1.0 + 0j, -1j])


def _string_indices(i: int, j: int) -> np.ndarray:
    """Majorana indices (b_i, a_{i+1}, b_{i+1}, ..., a_j), interleaved layout."""
    idx = np.empty(2 * (j - i), dtype=np.int64)
    idx[0] = 2 * i + 1
    p = 1
    for l in range(i + 1, j):
        idx[p] = 2 * l
        idx[p + 1] = 2 * l + 1
        p += 2
    idx[-1] = 2 * j
    return idx


def xx_table_numpy(g: np.ndarray) -> np.ndarray:
    """Upper-triangular table of <x_i x_j> string values from the Majorana matrix."""
    n = g.shape[0] // 2
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(i + 1, n):
            idx = _string_indices(i, j)
            sub = g[np.ix_(idx, idx)]
            out[i, j] = _PHASES[(j - i) % 4] * pfaffian_numpy(sub)
    return out


if HAS_NUMBA:

    @njit(cache=True)
    def _pfaffian_inplace_nb(a):  # pragma: no cover - exercised via wrappers
        n = a.shape[0]
        if n == 0:
            return 1.0 + 0j
        pf = 1.0 + 0j
        for k in range(0, n - 1, 2):
            kp = k + 1
            best = abs(a[k + 1, k])
            for r in range(k + 2, n):
                v = abs(a[r, k])
                if v > best:
                    best = v
                    kp = r
            if a[kp, k] == 0:
                return 0.0 + 0j
            if kp != k + 1:
                for c in range(n):
                    tmp = a[k + 1, c]
                    a[k + 1, c] = a[kp, c]
                    a[kp, c] = tmp
                for r in range(n):
                    tmp = a[r, k + 1]
                    a[r, k + 1] = a[r, kp]
                    a[r, kp] = tmp
                pf = -pf
            pivot = a[k, k + 1]
            pf *= pivot
            m = n - (k + 2)
            if m > 0:
                tau = np.empty(m, dtype=np.complex128)
                col = np.empty(m, dtype=np.complex128)
                for x in range(m):
                    tau[x] = a[k, k + 2 + x] / pivot
                    col[x] = a[k + 2 + x, k + 1]
                for r in range(m):
                    tr = tau[r]
                    cr = col[r]
                    for c in range(m):
                        a[k + 2 + r, k + 2 + c] += tr * col[c] - cr * tau[c]
        return pf

    @njit(cache=True)
    def pfaffian_numba(a):  # pragma: no cover
        return _pfaffian_inplace_nb(a.astype(np.complex128))

    @njit(cache=True)
    def xx_table_numba(g):  # pragma: no cover
        n = g.shape[0] // 2
        out = np.zeros((n, n), dtype=np.complex128)
        phases = np.empty(4, dtype=np.complex128)
        phases[0] = 1.0
        phases[1] = 1j
        phases[2] = -1.0
        phases[3] = -1j
        for i in range(n):
            for j in range(i + 1, n):
                m = 2 * (j - i)
                idx = np.empty(m, dtype=np.int64)
                idx[0] = 2 * i + 1
                p = 1
                for l in range(i + 1, j):
                    idx[p] = 2 * l
                    idx[p + 1] = 2 * l + 1
                    p += 2
                idx[m - 1] = 2 * j
                sub = np.empty((m, m), dtype=np.complex128)
                for r in range(m):
                    for c in range(m):
                        sub[r, c] = g[idx[r], idx[c]]
                out[i, j] = phases[(j - i) % 4] * _pfaffian_inplace_nb(sub)
        return out

else:
    pfaffian_numba = None
    xx_table_numba = None


def backend_name() -> str:
    return "numba" if HAS_NUMBA else "numpy"


def pfaffian_kernel(a: np.ndarray) -> complex:
    if HAS_NUMBA:
        return complex(pfaffian_numba(np.ascontiguousarray(a, dtype=np.complex128)))
    return pfaffian_numpy(a)


def xx_table(g: np.ndarray) -> np.ndarray:
    if HAS_NUMBA:
        return xx_table_numba(np.ascontiguousarray(g, dtype=np.complex128))
    return xx_table_numpy(g)
