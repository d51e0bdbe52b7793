"""Mode dynamics of the quench scenario.

The initial state is the gamma = 0 Ising ground state in BCS form,
prod_k (u_k + v_k c+_k c+_{-k}) |0>, one amplitude pair per positive
grid momentum.  Switching the monitoring on at t = 0 evolves each pair
by the non-unitary 2x2 map

    i d/dt (u_k, v_k)^T = M_k (u_k, v_k)^T,

solved in closed form as exp(-i M_k t) = cos(eps t) I - i t sinc(eps t) M_k.
Both coefficient functions are entire in eps^2, so the map is smooth
through the exceptional point eps = 0 (where it degenerates to the
Jordan-block form I - i M_k t) and independent of the branch convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._entire import csinc
from .spectral import ModelParams, momentum_grid

__all__ = [
    "BogoliubovAmplitudes",
    "ising_ground_amplitudes",
    "evolve_amplitudes",
    "mode_occupations",
    "site_occupation",
]


@dataclass
class BogoliubovAmplitudes:
    """Per-mode BCS amplitudes on the positive momentum grid.

    Amplitudes are generally unnormalized during non-unitary evolution;
    |u_k|^2 + |v_k|^2 must stay positive for every mode.
    """

    k: np.ndarray
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        if not (self.k.shape == self.u.shape == self.v.shape):
            raise ValueError("k, u, v must share one shape")
        norms = np.abs(self.u) ** 2 + np.abs(self.v) ** 2
        if np.any(norms <= 0.0):
            raise ValueError("mode amplitudes collapsed to zero")

    def normalized(self) -> "BogoliubovAmplitudes":
        scale = np.sqrt(np.abs(self.u) ** 2 + np.abs(self.v) ** 2)
        return BogoliubovAmplitudes(self.k, self.u / scale, self.v / scale)


def _mode_matrices(params: ModelParams, k: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    alpha = -2.0 * np.cos(k) - 2.0 * params.h - 0.5j * params.gamma
    beta = 2.0 * np.sin(k)
    return alpha, beta


def ising_ground_amplitudes(params: ModelParams) -> BogoliubovAmplitudes:
    """Ground state of the unmonitored chain, mode by mode.

    For gamma = 0 each M_k is real symmetric; the negative-eigenvalue
    eigenvector is (beta, eps - alpha) up to normalization, which already
    has u > 0 since beta > 0 on the grid.
    """
    if params.boundary != "periodic":
        raise ValueError("momentum-space ground state needs periodic boundary")
    k = momentum_grid(params.n_sites)
    alpha0 = -2.0 * np.cos(k) - 2.0 * params.h
    beta = 2.0 * np.sin(k)
    eps = -np.sqrt(alpha0 * alpha0 + beta * beta)
    u = beta.astype(complex)
    v = (eps - alpha0).astype(complex)
    scale = np.sqrt(np.abs(u) ** 2 + np.abs(v) ** 2)
    return BogoliubovAmplitudes(k, u / scale, v / scale)


def evolve_amplitudes(
    amps: BogoliubovAmplitudes, params: ModelParams, t: float
) -> BogoliubovAmplitudes:
    """Apply exp(-i M_k t) to every mode pair; output is unnormalized."""
    if not np.isfinite(t):
        raise ValueError(f"time must be finite, got {t}")
    alpha, beta = _mode_matrices(params, amps.k)
    eps = np.sqrt(alpha * alpha + beta * beta)  # any branch: used evenly below
    c = np.cos(eps * t)
    s = -1j * t * csinc(eps * t)
    u = c * amps.u + s * (alpha * amps.u + beta * amps.v)
    v = c * amps.v + s * (beta * amps.u - alpha * amps.v)
    return BogoliubovAmplitudes(amps.k, u, v)


def mode_occupations(amps: BogoliubovAmplitudes) -> np.ndarray:
    """Monitored occupation <n_k> = |u_k|^2 / (|u_k|^2 + |v_k|^2) per mode.

    Under the ODE convention i (u, v)' = M_k (u, v) the u component is the
    amplitude of the occupied pair: in the h -> +infinity limit the ground
    state has |u| -> 1 and every monitored number is 1 (field-aligned).
    """
    nu = np.abs(amps.u) ** 2
    nv = np.abs(amps.v) ** 2
    return nu / (nu + nv)


def site_occupation(amps: BogoliubovAmplitudes) -> float:
    """Translation-invariant <n_i> = (2/N) sum_k <n_k> over positive modes."""
    n_sites = 2 * amps.k.size
    return float(2.0 / n_sites * np.sum(mode_occupations(amps)))
