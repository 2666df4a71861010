"""Turning points and phase-space integrals between them.

All integrals run over ``[x1, x2]`` with a tanh-sinh (double-exponential)
rule, which tolerates both the square-root zero of the action integrand and
the inverse-square-root blow-up of the density integrand at a turning point.
Near a genuine turning point the gap ``E - curve(x)`` is replaced by its
linearisation about the root, so nodes closer to the endpoint than one ulp
of ``x`` still see an accurate integrand.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .catalog import CatalogEntry, Domain
from .errors import NoClassicalMotionError, NumericError

__all__ = [
    "TurningPoints",
    "QuadratureResult",
    "tanh_sinh",
    "find_turning_points",
    "target_curve",
    "action_integral",
    "smooth_density_integral",
]

_T_MAX = 4.0
_HALF_PI = 0.5 * math.pi
# Below this fraction of the interval the gap is taken from the linear model.
_LINEAR_ZONE = 1e-7
_COINCIDENT = 1e-10


@dataclass(frozen=True)
class TurningPoints:
    x1: float
    x2: float
    wall1: bool = False
    wall2: bool = False

    @property
    def coincident(self) -> bool:
        return self.x2 - self.x1 < _COINCIDENT * (1.0 + abs(self.x1))


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


def _nodes(level: int):
    """Nodes of the half-line t >= 0 new at ``level``.

    Returns (t, 1 - tanh(pi/2 sinh t), weight); the middle entry is the
    distance of the node to the nearer endpoint in units of the half-width.
    """
    h = 2.0 ** -level
    if level == 0:
        k = np.arange(0, int(_T_MAX) + 1)
    else:
        k = np.arange(1, int(_T_MAX * 2**level) + 1, 2)
    t = k * h
    u = _HALF_PI * np.sinh(t)
    # 1 - tanh(u) computed without cancellation
    comp = 2.0 / (np.exp(2.0 * u) + 1.0)
    w = _HALF_PI * np.cosh(t) / np.cosh(u) ** 2
    return t, comp, w


def tanh_sinh(f: Callable, a: float, b: float, *, tol_abs: float = 1e-11,
              tol_rel: float = 1e-12, max_level: int = 12, min_level: int = 3) -> QuadratureResult:
    """Integrate ``f(x, dl, dr)`` over ``[a, b]``.

    ``dl = x - a`` and ``dr = b - x`` are supplied exactly so that the
    integrand can resolve endpoint behaviour beyond the precision of ``x``.
    Level doubling stops once successive estimates differ by less than
    ``max(tol_abs, tol_rel * |value|)``.
    """
    half = 0.5 * (b - a)
    if half <= 0:
        return QuadratureResult(0.0, 0.0, 0)

    total = 0.0
    evaluations = 0
    prev = None
    estimate = 0.0
    for level in range(max_level + 1):
        t, comp, w = _nodes(level)
        d_near = half * comp
        d_far = 2.0 * half - d_near
        centre = t == 0.0
        # right-hand nodes (x = b - d_near), then mirrored left-hand ones
        x_r = b - d_near
        x_l = a + d_near[~centre]
        x = np.concatenate([x_r, x_l])
        dl = np.concatenate([d_far, d_near[~centre]])
        dr = np.concatenate([d_near, d_far[~centre]])
        ww = np.concatenate([w, w[~centre]])
        if np.any(centre):
            # the midpoint is shared by both halves
            x[0] = a + half
            dl[0] = dr[0] = half
        vals = np.asarray(f(x, dl, dr), dtype=float)
        evaluations += x.size
        total += float(np.sum(ww * vals))
        estimate = half * total * 2.0 ** -level
        if prev is not None:
            err = abs(estimate - prev)
            if level >= min_level and err <= max(tol_abs, tol_rel * abs(estimate)):
                return QuadratureResult(estimate, err, evaluations)
        prev = estimate
    raise NumericError(
        f"tanh-sinh did not converge in {max_level} levels (last change {err:.3e})",
        best_estimate=QuadratureResult(estimate, err, evaluations),
    )


def _scalar(curve, x):
    return float(np.asarray(curve(np.array([x])))[0])


def _locate_minimum(curve, domain: Domain, hint: float):
    if math.isfinite(domain.lo) and math.isfinite(domain.hi):
        span = domain.hi - domain.lo
        res = minimize_scalar(lambda y: _scalar(curve, y), method="bounded",
                              bounds=(domain.lo + 1e-9 * span, domain.hi - 1e-9 * span),
                              options={"xatol": 1e-12 * span})
    else:
        step = 0.5 * (1.0 + abs(hint))
        # a two-point bracket lets the search walk downhill from the hint
        res = minimize_scalar(lambda y: _scalar(curve, y), bracket=(hint, hint + step))
    return float(res.x), float(res.fun)


def _side_root(curve, E, domain: Domain, start: float, direction: int, tol: float,
               touching: bool, max_expansions: int):
    """Root of ``curve - E`` between ``start`` and the wall in ``direction``.

    Returns (root, clamped_to_wall).
    """
    end = domain.hi if direction > 0 else domain.lo
    wall = domain.hi_wall if direction > 0 else domain.lo_wall
    g = lambda y: _scalar(curve, y) - E  # noqa: E731

    inner = start
    outer = None
    if math.isfinite(end):
        gap = end - start
        for k in range(1, 61):
            p = start + gap * (1.0 - 2.0**-k)
            if p == end:
                break
            with np.errstate(all="ignore"):
                val = g(p)
            if val > tol:
                outer = p
                break
            inner = p
        if outer is None:
            if wall:
                return end, True
            raise NumericError(f"no turning point found before the open end at {end:g}")
    else:
        step = 0.5 * (1.0 + abs(start))
        for k in range(max_expansions):
            p = start + direction * step * 2.0**k
            with np.errstate(all="ignore"):
                val = g(p)
            if val > tol:
                outer = p
                break
            inner = p
        if outer is None:
            raise NumericError("bracketing failed: curve never exceeds E within the expansion cap")

    if touching:
        return start, False
    if inner != start and g(inner) >= 0.0:
        # a probe landed on the root to within tol
        return float(inner), False
    lo, hi = sorted((inner, outer))
    root = brentq(g, lo, hi, xtol=1e-300, rtol=4.0 * np.finfo(float).eps, maxiter=500)
    return float(root), False


def find_turning_points(curve: Callable, E: float, domain: Domain, hint: float | None = None,
                        *, tol: float | None = None, max_expansions: int = 200) -> TurningPoints:
    """Classical turning points of a single-well ``curve`` at energy ``E``.

    ``hint`` should lie in the classically allowed region (the superpotential
    zero does for every catalog entry when ``E >= 0``).  A side on which the
    curve never rises above ``E`` is clamped to its hard wall.
    """
    tol = 1e-12 * (1.0 + abs(E)) if tol is None else tol
    if hint is None:
        if not (math.isfinite(domain.lo) and math.isfinite(domain.hi)):
            raise ValueError("a hint is required on infinite domains")
        hint = 0.5 * (domain.lo + domain.hi)
        hint, _ = _locate_minimum(curve, domain, hint)

    c0 = _scalar(curve, hint) - E
    if c0 > tol:
        hint, cmin = _locate_minimum(curve, domain, hint)
        c0 = cmin - E
        if c0 > tol:
            raise NoClassicalMotionError(f"E = {E:g} lies below the curve minimum {cmin:g}")
    touching = c0 > -tol

    x1, w1 = _side_root(curve, E, domain, hint, -1, tol, touching, max_expansions)
    x2, w2 = _side_root(curve, E, domain, hint, +1, tol, touching, max_expansions)
    return TurningPoints(x1, x2, w1, w2)


def target_curve(entry: CatalogEntry, target: str) -> Callable:
    """``V1(x; a1)`` or ``W(x; a1)^2`` as a vectorised function of position."""
    a1 = entry.a1
    if target == "V1":
        return lambda x: entry.v1(x, a1)
    if target == "Wsq":
        def wsq(x):
            w = entry.superpotential(x, a1)
            return w * w
        return wsq
    raise ValueError(f"target must be 'V1' or 'Wsq', got {target!r}")


def _linear_model(curve, E, root: float, inward: int, zone: float):
    """Slope of ``E - curve`` into the interval from a turning point.

    The computed root is treated as exact: keeping its rounding residual
    would open a gap of one ulp where the inverse-square-root integrand
    loses about sqrt(ulp) of its weight.  The slope is the secant to the
    point ``zone`` inside, so the model joins the direct evaluation
    continuously.
    """
    with np.errstate(all="ignore"):
        g_zone = E - _scalar(curve, root + inward * zone)
    return g_zone / zone


def _gap_integral(curve, E, tp: TurningPoints, kernel) -> QuadratureResult:
    zone = _LINEAR_ZONE * (tp.x2 - tp.x1)
    left = None if tp.wall1 else _linear_model(curve, E, tp.x1, +1, zone)
    right = None if tp.wall2 else _linear_model(curve, E, tp.x2, -1, zone)

    def integrand(x, dl, dr):
        with np.errstate(all="ignore"):
            gap = E - curve(x)
        if left is not None:
            m = dl < zone
            gap[m] = left * dl[m]
        if right is not None:
            m = dr < zone
            gap[m] = right * dr[m]
        return kernel(gap)

    return tanh_sinh(integrand, tp.x1, tp.x2)


def _sqrt_gap(gap):
    return np.sqrt(np.maximum(gap, 0.0))


def _rsqrt_gap(gap):
    out = np.zeros_like(gap)
    pos = gap > 0
    out[pos] = 1.0 / np.sqrt(gap[pos])
    return out


def action_integral(entry: CatalogEntry, E: float, target: str = "V1") -> QuadratureResult:
    """``2 sqrt(2m) * integral sqrt(E - target) dx`` between the turning points."""
    curve = target_curve(entry, target)
    tp = find_turning_points(curve, E, entry.domain, hint=entry.center)
    if tp.coincident:
        return QuadratureResult(0.0, 0.0, 0)
    res = _gap_integral(curve, E, tp, _sqrt_gap)
    scale = 2.0 * entry.units.sqrt2m
    return QuadratureResult(scale * res.value, scale * res.abs_error_estimate, res.evaluations)


def smooth_density_integral(entry: CatalogEntry, E: float) -> QuadratureResult:
    """Thomas-Fermi level density ``sqrt(2m)/(2 pi hbar) * integral dx / sqrt(E - V1)``."""
    if not E > 0:
        raise ValueError("smooth density integral requires E > 0")
    curve = target_curve(entry, "V1")
    tp = find_turning_points(curve, E, entry.domain, hint=entry.center)
    if tp.coincident:
        return QuadratureResult(0.0, 0.0, 0)
    res = _gap_integral(curve, E, tp, _rsqrt_gap)
    scale = entry.units.sqrt2m / entry.units.h
    return QuadratureResult(scale * res.value, scale * res.abs_error_estimate, res.evaluations)
