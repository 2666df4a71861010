"""Finite-difference eigenvalues of H1, independent of every closed form.

``H1 = -gamma^2 d^2/dx^2 + V1`` is discretised with second-order central
differences on the interior nodes of a Dirichlet box; its lowest eigenvalues
come from bisection on the Sturm sequence of the tridiagonal matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .catalog import CatalogEntry
from .errors import ConfigurationError, TruncationError
from .quadrature import find_turning_points, target_curve

__all__ = ["GridSpec", "default_grid", "fd_spectrum", "tridiagonal"]

# WKB attenuation exp(-DECAY) required beyond the outer turning points.
DECAY = 25.0
RESOLUTION = 400


@dataclass(frozen=True)
class GridSpec:
    x_lo: float
    x_hi: float
    points: int
    boundary: str = "dirichlet"

    def __post_init__(self):
        if not self.x_lo < self.x_hi:
            raise ConfigurationError("grid needs x_lo < x_hi")
        if self.points < 100:
            raise ConfigurationError("grid needs at least 100 interior points")
        if self.boundary != "dirichlet":
            raise ConfigurationError(f"unsupported boundary {self.boundary!r}")

    @property
    def spacing(self) -> float:
        return (self.x_hi - self.x_lo) / (self.points + 1)

    def nodes(self) -> np.ndarray:
        return self.x_lo + self.spacing * np.arange(1, self.points + 1)


def _decay_edge(curve, E, start, direction, gamma, step):
    """Walk outward from a turning point until the WKB exponent reaches DECAY."""
    x = start
    acc = 0.0
    while acc < DECAY:
        xs = x + direction * step * (np.arange(64) + 0.5)
        with np.errstate(over="ignore"):
            kappa = np.sqrt(np.maximum(curve(xs) - E, 0.0)) / gamma
        cum = acc + np.cumsum(kappa) * step
        hit = np.nonzero(cum >= DECAY)[0]
        if hit.size:
            return x + direction * step * (hit[0] + 1)
        acc = cum[-1]
        x = x + direction * step * 64
        step *= 1.5
    return x


def default_grid(entry: CatalogEntry, n_levels: int, points: int | None = None) -> GridSpec:
    """Box covering the classically allowed region of level ``n_levels - 1``
    plus an evanescent margin; hard walls (including a radial origin) are
    used exactly, the potential being sampled on interior nodes only.

    Without ``points`` the node count is at least 4000 and puts
    ``RESOLUTION`` nodes across the ground-state classical region.
    """
    if entry.bound_state_count is not None and n_levels > entry.bound_state_count:
        raise ConfigurationError(f"{entry.name} has only {entry.bound_state_count} bound states")
    E_top = float(entry.spectrum_f(n_levels - 1))
    curve = target_curve(entry, "V1")
    tp = find_turning_points(curve, E_top, entry.domain, hint=entry.center)
    width = tp.x2 - tp.x1
    g = entry.units.gamma
    d = entry.domain
    hi = d.hi if tp.wall2 else _decay_edge(curve, E_top, tp.x2, +1, g, 0.01 * width)
    if tp.wall1:
        lo = d.lo
    else:
        lo = _decay_edge(curve, E_top, tp.x1, -1, g, 0.01 * width)
        if d.lo_wall:
            lo = max(lo, d.lo)
    if points is None:
        tp0 = find_turning_points(curve, 0.0, entry.domain, hint=entry.center)
        points = max(4000, int(math.ceil(RESOLUTION * (hi - lo) / (tp0.x2 - tp0.x1))))
    return GridSpec(lo, hi, points)


def tridiagonal(entry: CatalogEntry, grid: GridSpec):
    """Diagonal and squared off-diagonal of the discretised H1."""
    g2 = entry.units.gamma ** 2
    h = grid.spacing
    x = grid.nodes()
    with np.errstate(over="ignore"):
        diag = 2.0 * g2 / h**2 + entry.v1(x, entry.a1)
    off2 = np.full(grid.points - 1, (g2 / h**2) ** 2)
    return np.ascontiguousarray(diag, dtype=float), off2


def _solve(entry, grid, n_levels):
    diag, off2 = tridiagonal(entry, grid)
    if not np.all(np.isfinite(diag)):
        raise ConfigurationError("potential not finite on the grid nodes")
    off = math.sqrt(off2[0])
    lo = float(diag.min()) - 2.0 * off
    hi = float(diag.max()) + 2.0 * off
    norm = max(abs(lo), abs(hi))
    return np.asarray(kernels.lowest_eigenvalues(diag, off2, n_levels, lo, hi,
                                                 2.0 * np.finfo(float).eps, 1e-15 * norm))


def _doubled(entry: CatalogEntry, grid: GridSpec) -> GridSpec:
    d = entry.domain
    h = grid.spacing
    lo, hi = grid.x_lo, grid.x_hi
    span = hi - lo
    new_lo = lo if (d.lo_wall or math.isfinite(d.lo)) else lo - 0.5 * span
    new_hi = hi if (d.hi_wall or math.isfinite(d.hi)) else hi + 0.5 * span
    if new_lo == lo and new_hi == hi:
        new_hi = hi + span if not d.hi_wall else hi
    points = int(round((new_hi - new_lo) / h)) - 1
    return GridSpec(new_lo, new_hi, points)


def fd_spectrum(entry: CatalogEntry, grid: GridSpec | None = None, n_levels: int = 5,
                which: str = "V1", check_box: bool = False) -> np.ndarray:
    """Lowest ``n_levels`` eigenvalues of H1 on ``grid``, ascending.

    With ``check_box`` the box is doubled on its open sides at fixed spacing
    and any level moving by more than 1e-3 (relative to the level spacing
    scale) raises :class:`TruncationError`.
    """
    if which != "V1":
        raise ConfigurationError("only the V1 spectrum is computed")
    if grid is None:
        grid = default_grid(entry, n_levels)
    if n_levels < 1 or n_levels > grid.points // 10:
        raise ConfigurationError(f"n_levels must be in [1, {grid.points // 10}] for {grid.points} points")
    levels = _solve(entry, grid, n_levels)

    curve = target_curve(entry, "V1")
    try:
        tp = find_turning_points(curve, float(levels[-1]), entry.domain, hint=entry.center)
    except Exception:
        tp = None
    if tp is not None and (tp.x1 < grid.x_lo and not tp.wall1 or tp.x2 > grid.x_hi and not tp.wall2):
        raise TruncationError("box does not contain the classical turning points", best_estimate=levels)

    if check_box:
        big = _doubled(entry, grid)
        if big != grid:
            wider = _solve(entry, big, n_levels)
            scale = np.maximum(np.abs(levels), abs(levels[-1] - levels[0]) / max(n_levels - 1, 1))
            if np.any(np.abs(wider - levels) > 1e-3 * scale):
                raise TruncationError("levels shift under box doubling", best_estimate=levels)
    return levels
