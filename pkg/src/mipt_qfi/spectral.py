"""Momentum grid and per-mode spectra of the monitored Ising chain.

The chain H = -sum_i (s^x_i s^x_{i+1} + h s^z_i), continuously monitored
in the local number n_i = (1 + s^z_i)/2 at rate gamma, evolves in the
no-click limit under H_eff = H - (i gamma / 2) sum_i n_i.  After a
Jordan-Wigner transformation the translation-invariant (periodic-spin)
problem splits into independent 2x2 Bogoliubov-de Gennes blocks

    M_k = [[alpha_k, beta_k], [beta_k, -alpha_k]],
    alpha_k = -2 cos k - 2 h - i gamma / 2,   beta_k = 2 sin k,

one per momentum of the anti-periodic fermion grid.  The complex
eigenvalues eps_k = +/- sqrt(alpha_k^2 + beta_k^2) carry a decay rate
Gamma_k = Im(eps_k); this module fixes the branch Gamma_k <= 0, with the
Hermitian tie-break E_k <= 0 when the pair is real.

All functions are pure; nothing here touches I/O or global state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import NoCriticalPointError

__all__ = [
    "ModelParams",
    "Mode",
    "ModeSpectrum",
    "momentum_grid",
    "mode_system",
    "critical_gamma",
    "critical_momentum",
    "critical_mode_system",
    "gap_character",
    "spectrum_table",
]

PERIODIC = "periodic"
OPEN = "open"


@dataclass(frozen=True)
class ModelParams:
    """Knobs of the monitored chain; the Ising coupling is fixed to 1.

    n_sites : even chain length, >= 4
    h       : transverse field (dimensionless)
    gamma   : measurement rate, >= 0
    boundary: "periodic" (spin chain; momentum-space methods) or "open"
              (real-space methods)
    """

    n_sites: int
    h: float
    gamma: float
    boundary: str = PERIODIC

    def __post_init__(self):
        if self.n_sites < 4 or self.n_sites % 2 != 0:
            raise ValueError(f"n_sites must be even and >= 4, got {self.n_sites}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.boundary not in (PERIODIC, OPEN):
            raise ValueError(f"boundary must be 'periodic' or 'open', got {self.boundary!r}")

    def with_gamma(self, gamma: float) -> "ModelParams":
        return ModelParams(self.n_sites, self.h, gamma, self.boundary)


@dataclass(frozen=True)
class Mode:
    """Entries of the 2x2 block M_k = [[alpha, beta], [beta, -alpha]]."""

    k: float
    alpha: complex
    beta: float


@dataclass(frozen=True)
class ModeSpectrum:
    """Chosen eigenvalue branch of M_k: eps = E + i*Gamma, Gamma <= 0."""

    epsilon: complex

    @property
    def E(self) -> float:
        return self.epsilon.real

    @property
    def Gamma(self) -> float:
        return self.epsilon.imag


def momentum_grid(n_sites: int) -> np.ndarray:
    """Positive momenta k_n = (2n - 1) pi / N, n = 1 .. N/2.

    These are the anti-periodic fermion momenta of the even-parity sector
    of the periodic spin chain; only the positive half is needed because
    modes pair as (k, -k).
    """
    if n_sites < 2 or n_sites % 2 != 0:
        raise ValueError(f"momentum grid needs an even n_sites >= 2, got {n_sites}")
    n = np.arange(1, n_sites // 2 + 1)
    return (2 * n - 1) * np.pi / n_sites


def _branch_eigenvalue(alpha: complex, beta: float) -> complex:
    """Square root of alpha^2 + beta^2 with Gamma <= 0, and E <= 0 on ties."""
    eps = cmath.sqrt(alpha * alpha + beta * beta)
    if eps.imag > 0.0:
        eps = -eps
    elif eps.imag == 0.0 and eps.real > 0.0:
        eps = -eps
    return eps


def mode_system(params: ModelParams, k: float) -> tuple[Mode, ModeSpectrum]:
    """Block entries and chosen eigenvalue branch at momentum k in (0, pi)."""
    if not 0.0 < k < np.pi:
        raise ValueError(f"momentum must lie in (0, pi), got {k}")
    alpha = complex(-2.0 * math.cos(k) - 2.0 * params.h, -0.5 * params.gamma)
    beta = 2.0 * math.sin(k)
    return Mode(k, alpha, beta), ModeSpectrum(_branch_eigenvalue(alpha, beta))


def critical_gamma(h: float) -> float:
    """Critical measurement rate gamma_c = 4 sqrt(1 - h^2), defined for |h| < 1."""
    if abs(h) >= 1.0:
        raise NoCriticalPointError(f"no critical point for |h| >= 1 (h = {h})")
    return 4.0 * math.sqrt(1.0 - h * h)


def critical_momentum(h: float) -> float:
    """Momentum k_c = arccos(-h) of the mode whose gap closes at gamma_c."""
    if abs(h) >= 1.0:
        raise NoCriticalPointError(f"no critical mode for |h| >= 1 (h = {h})")
    return math.acos(-h)


def critical_mode_system(h: float, gamma: float) -> tuple[Mode, ModeSpectrum]:
    """Mode exactly at k_c, where Re(alpha) = 0 analytically.

    Built from the closed forms alpha = -i gamma / 2, beta = 2 sqrt(1 - h^2)
    rather than from cos(arccos(-h)), so Gamma_{k_c} = 0 holds exactly for
    gamma <= gamma_c instead of up to round-off.
    """
    kc = critical_momentum(h)
    alpha = complex(0.0, -0.5 * gamma)
    beta = 2.0 * math.sqrt(1.0 - h * h)
    return Mode(kc, alpha, beta), ModeSpectrum(_branch_eigenvalue(alpha, beta))


def gap_character(params: ModelParams, atol: float = 1e-9) -> str:
    """Phase of the critical mode: 'real-gapped', 'critical' or 'imaginary-gapped'.

    Classifies by the sign of eps^2 at k_c, which equals
    4 (1 - h^2) - gamma^2 / 4 = (gamma_c^2 - gamma^2) / 4.
    """
    gc = critical_gamma(params.h)
    eps2 = (gc * gc - params.gamma * params.gamma) / 4.0
    if abs(eps2) <= atol:
        return "critical"
    return "real-gapped" if eps2 > 0 else "imaginary-gapped"


def spectrum_table(params: ModelParams) -> np.ndarray:
    """(N/2, 3) array of rows (k, E_k, Gamma_k) over the momentum grid."""
    ks = momentum_grid(params.n_sites)
    out = np.empty((ks.size, 3))
    for i, k in enumerate(ks):
        _, spec = mode_system(params, float(k))
        out[i] = (k, spec.E, spec.Gamma)
    return out
