"""Gaussian-smoothed trace formula and a broadened-stick reference density.

The exact level density of an entry with counting function F is

    g(E) = D F'(E) [1 + 2 sum_{k>=1} cos(2 pi k F(E))].

Smoothing with a Gaussian of width sigma damps the k-th repetition by
exp(-(2 pi k sigma F'(E))^2 / 2), which is exact when F is linear and the
local-period approximation otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .catalog import CatalogEntry
from .errors import ConfigurationError

__all__ = [
    "DensityCurve",
    "PeakList",
    "energy_grid",
    "density_curve",
    "broadened_stick_density",
    "extract_peaks",
]

# Repetitions whose Gaussian factor falls below this are dropped.
DAMPING_CUTOFF = 1e-20
_STICK_REACH = 8.0


@dataclass(frozen=True)
class DensityCurve:
    energies: np.ndarray
    smooth: np.ndarray
    oscillating: np.ndarray
    total: np.ndarray
    sigma: float
    k_max: int


@dataclass(frozen=True)
class PeakList:
    energies: np.ndarray
    heights: np.ndarray

    def __len__(self):
        return len(self.energies)


def energy_grid(e_min: float, e_max: float, samples: int, sigma: float) -> np.ndarray:
    if not (0 <= e_min < e_max):
        raise ConfigurationError(f"need 0 <= e_min < e_max, got {e_min}, {e_max}")
    if sigma <= 0:
        raise ConfigurationError("sigma must be positive")
    if samples < 3:
        raise ConfigurationError("need at least 3 samples")
    grid = np.linspace(e_min, e_max, samples)
    # relative slack keeps the (e_max - e_min)/(samples - 1) == sigma/5 case legal
    if grid[1] - grid[0] > sigma / 5.0 * (1.0 + 1e-12):
        raise ConfigurationError(
            f"grid spacing {grid[1] - grid[0]:.4g} exceeds sigma/5 = {sigma / 5:.4g}; "
            "increase samples"
        )
    return grid


def density_curve(entry: CatalogEntry, e_min: float, e_max: float, samples: int,
                  sigma: float, k_max: int = 10_000) -> DensityCurve:
    if k_max < 1:
        raise ConfigurationError("k_max must be at least 1")
    E = energy_grid(e_min, e_max, samples, sigma)
    if e_max >= entry.energy_ceiling:
        raise ConfigurationError(f"e_max must lie below the bound-state ceiling {entry.energy_ceiling:g}")
    F = np.asarray(entry.counting_F(E), dtype=float)
    Fp = np.asarray(entry.counting_F_prime(E), dtype=float)
    D = np.array([entry.degeneracy(int(f)) for f in np.floor(F)], dtype=float)
    frac = np.ascontiguousarray(F - np.floor(F))
    damp = np.ascontiguousarray(2.0 * math.pi * sigma * Fp)
    osc_sum = np.asarray(kernels.oscillating_sum(frac, damp, int(k_max), DAMPING_CUTOFF))
    smooth = D * Fp
    oscillating = 2.0 * smooth * osc_sum
    return DensityCurve(E, smooth, oscillating, smooth + oscillating, float(sigma), int(k_max))


def _levels_near(entry: CatalogEntry, lo: float, hi: float):
    """(n, E_n) for every bound level in [lo, hi]; hi lies below the ceiling."""
    n_top = int(math.floor(float(entry.counting_F(hi)) + 1e-9))
    if entry.bound_state_count is not None:
        n_top = min(n_top, entry.bound_state_count - 1)
    n_lo = max(0, int(math.floor(float(entry.counting_F(max(lo, 0.0))))) - 1)
    out = []
    for n in range(n_lo, n_top + 1):
        En = float(entry.spectrum_f(n))
        if lo <= En <= hi:
            out.append((n, En))
    return out


def broadened_stick_density(entry: CatalogEntry, energies, sigma: float) -> DensityCurve:
    """Sum of unit-area Gaussians of width sigma centred on the exact levels."""
    E = np.asarray(energies, dtype=float)
    if sigma <= 0:
        raise ConfigurationError("sigma must be positive")
    if E.size >= 2 and np.any(np.diff(E) <= 0):
        raise ConfigurationError("energy grid must be strictly increasing")
    reach = _STICK_REACH * sigma
    total = np.zeros_like(E)
    norm = 1.0 / (sigma * math.sqrt(2.0 * math.pi))
    hi = float(E.max()) + reach
    if hi >= entry.energy_ceiling:
        if entry.bound_state_count is None:
            # levels accumulate at the threshold, so the sum would not terminate
            raise ConfigurationError(
                f"grid plus 8 sigma reaches the continuum threshold {entry.energy_ceiling:g}")
        hi = float(entry.spectrum_f(entry.bound_state_count - 1))
    for n, En in _levels_near(entry, float(E.min()) - reach, hi):
        total += entry.degeneracy(n) * norm * np.exp(-0.5 * ((E - En) / sigma) ** 2)
    zeros = np.zeros_like(E)
    return DensityCurve(E, zeros, zeros.copy(), total, float(sigma), 0)


def extract_peaks(curve: DensityCurve, min_height: float) -> PeakList:
    """Local maxima of ``curve.total`` above ``min_height``, refined by a
    three-point parabola.

    A maximum on the last sample counts when it exceeds its neighbour (a
    level sitting on the upper end of the window); its parabola uses the
    last three samples.  The first sample is never reported: energy windows
    start at E >= 0, where the only boundary maximum is the zero-energy
    ground state cut in half by the window.
    """
    E = np.asarray(curve.energies)
    y = np.asarray(curve.total)
    if E.size < 3:
        raise ConfigurationError("need at least 3 samples")
    step = E[1] - E[0]
    interior = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:]))[0] + 1
    idx = list(interior)
    if y[-1] > y[-2]:
        idx.append(E.size - 1)

    energies, heights = [], []
    for i in idx:
        if y[i] <= min_height:
            continue
        j = min(max(i, 1), E.size - 2)
        ym, y0, yp = y[j - 1], y[j], y[j + 1]
        denom = ym - 2.0 * y0 + yp
        offset = 0.5 * (ym - yp) / denom if denom < 0 else 0.0
        # vertex relative to sample i, clamped to one grid spacing
        shift = float(np.clip(offset + (j - i), -1.0, 1.0))
        energies.append(E[i] + shift * step)
        heights.append(y0 - 0.25 * (ym - yp) * offset if denom < 0 else y[i])
    return PeakList(np.asarray(energies), np.asarray(heights))
