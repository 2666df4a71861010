"""Executable checks of the quantisation identities over catalog entries.

Each check kind evaluates one residual family and condenses it into a
:class:`CheckReport`.  Numeric failures inside a check are caught and turned
into failed reports, so one broken entry never stops a sweep.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .catalog import BarclayClass, CatalogEntry, barclay_residual, shape_invariance_residual
from .errors import SwkbError
from .maslov import eta_closed, eta_from_action, eta_series
from .oracle import fd_spectrum
from .quadrature import action_integral, find_turning_points, smooth_density_integral, target_curve
from .trace import broadened_stick_density, density_curve, extract_peaks

__all__ = ["CHECK_KINDS", "DEFAULT_TOLERANCES", "CheckReport", "run_check", "run_all"]

CHECK_KINDS = ("swkb", "wkb", "semi", "count", "shape", "barclay", "eta", "oracle", "trace")

DEFAULT_TOLERANCES = {
    "swkb": 1e-8,
    "wkb": 1e-8,
    "semi": 1e-6,
    "count": 1e-6,
    "eta": 1e-6,
    "shape": 1e-10,
    "barclay": 1e-10,
    "oracle": 1e-3,
    # trace residuals are normalised so that 1 means sigma/2 in location or 2% in height
    "trace": 1.0,
}

RANDOM_SAMPLES = 20
POSITION_SAMPLES = 1000
ORACLE_LEVELS = 5
# series cross-check only where it converges geometrically fast enough
SERIES_MAX_Z = 0.9


@dataclass
class CheckReport:
    entry: str
    kind: str
    tol: float
    worst_residual: float
    samples: list = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.worst_residual <= self.tol)

    @property
    def sample_count(self) -> int:
        return len(self.samples)

    def to_dict(self) -> dict:
        def num(v):
            return float(v) if v is not None and math.isfinite(v) else None
        return {
            "entry": self.entry,
            "kind": self.kind,
            "tol": self.tol,
            "worst_residual": num(self.worst_residual),
            "samples": [{"at": num(a), "residual": num(r)} for a, r in self.samples],
            "pass": self.passed,
            "info": self.info,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _levels(entry: CatalogEntry) -> np.ndarray:
    return np.array([float(entry.spectrum_f(n)) for n in range(entry.top_level + 1)])


def _random_energies(entry: CatalogEntry, seed: int) -> np.ndarray:
    levels = _levels(entry)
    rng = np.random.default_rng(seed)
    return np.sort(rng.uniform(0.1 * levels[1], levels[-1], RANDOM_SAMPLES))


def _positions(entry: CatalogEntry, seed: int) -> np.ndarray:
    """Quasi-random points inside the W^2 well at the highest checked level."""
    E_top = float(entry.spectrum_f(entry.top_level))
    tp = find_turning_points(target_curve(entry, "Wsq"), E_top, entry.domain, hint=entry.center)
    lo, hi = tp.x1, tp.x2
    u = qmc.Halton(d=1, scramble=True, seed=seed).random(POSITION_SAMPLES)[:, 0]
    x = lo + (hi - lo) * u
    # keep clear of hard walls where W itself is singular
    return np.clip(x, np.nextafter(entry.domain.lo, math.inf), np.nextafter(entry.domain.hi, -math.inf))


def _check_swkb(entry, seed, info):
    hbar = entry.units.hbar
    out = []
    for n, E in enumerate(_levels(entry)):
        target = 2.0 * math.pi * hbar * n
        s = action_integral(entry, E, "Wsq").value
        out.append((E, abs(s - target) / (1.0 + target)))
    return out


def _check_wkb(entry, seed, info):
    eta = eta_closed(entry).value
    info["eta"] = eta
    h = entry.units.h
    return [(E, abs(action_integral(entry, E, "V1").value / h - n - eta))
            for n, E in enumerate(_levels(entry))]


def _check_semi(entry, seed, info):
    eta = eta_closed(entry).value
    h = entry.units.h
    gaps = []
    out = []
    for E in _random_energies(entry, seed):
        gap = (action_integral(entry, E, "V1").value - action_integral(entry, E, "Wsq").value) / h
        gaps.append(gap)
        out.append((E, abs(gap - eta)))
    info.update(eta=eta, gap_mean=float(np.mean(gaps)), gap_spread=float(np.ptp(gaps)))
    return out


def _check_count(entry, seed, info):
    """SWKB action against the counting function, and the Thomas-Fermi
    density against its derivative (relative)."""
    two_pi_hbar = entry.units.h
    out = []
    for E in _random_energies(entry, seed):
        F = float(entry.counting_F(E))
        Fp = float(entry.counting_F_prime(E))
        r_count = abs(action_integral(entry, E, "Wsq").value / two_pi_hbar - F)
        r_density = abs(smooth_density_integral(entry, E).value / Fp - 1.0)
        out.append((E, max(r_count, r_density)))
    return out


def _check_shape(entry, seed, info):
    x = _positions(entry, seed)
    r = np.abs(shape_invariance_residual(entry, x))
    return list(zip(x.tolist(), r.tolist()))


def _check_barclay(entry, seed, info):
    x = _positions(entry, seed)
    r = np.abs(barclay_residual(entry, x))
    info["class"] = entry.barclay.class_tag.value
    return list(zip(x.tolist(), r.tolist()))


def _check_eta(entry, seed, info):
    closed = eta_closed(entry)
    action = eta_from_action(entry)
    info.update(eta=closed.value, eta_action=action.value)
    out = [(0.0, abs(closed.value - action.value))]
    bc = entry.barclay
    zs = [bc.B] if bc.class_tag is BarclayClass.I else list(bc.z_pm)
    if max(abs(z) for z in zs) <= SERIES_MAX_Z:
        series = eta_series(entry, tol=1e-10)
        excess = max(0.0, abs(closed.value - series.value) - series.tail_bound)
        info.update(eta_series=series.value, tail_bound=float(series.tail_bound), series_terms=int(series.terms))
        out.append((0.0, excess))
    else:
        info["series"] = "skipped: |z| > %.1f" % SERIES_MAX_Z
    return out


def _check_oracle(entry, seed, info):
    n_levels = ORACLE_LEVELS
    if entry.bound_state_count is not None:
        n_levels = min(n_levels, entry.bound_state_count)
    fd = fd_spectrum(entry, n_levels=n_levels)
    exact = np.array([float(entry.spectrum_f(n)) for n in range(n_levels)])
    # level 0 sits at zero; measure it against the first excitation
    scale = np.maximum(exact, float(entry.spectrum_f(1)) if n_levels > 1 else 1.0)
    info["fd_levels"] = fd.tolist()
    return list(zip(exact.tolist(), (np.abs(fd - exact) / scale).tolist()))


def trace_window(entry: CatalogEntry):
    """(e_max, samples, sigma) covering the checked levels with sigma at most
    0.05 and a tenth of the smallest level spacing."""
    levels = _levels(entry)
    sigma = min(0.05, float(np.diff(levels).min()) / 10.0)
    e_max = levels[-1] + 0.5 * (levels[-1] - levels[-2])
    if math.isfinite(entry.energy_ceiling):
        e_max = min(e_max, 0.5 * (levels[-1] + entry.energy_ceiling))
    samples = int(math.ceil(e_max / (sigma / 5.0))) + 1
    return e_max, samples, sigma


def _check_trace(entry, seed, info):
    e_max, samples, sigma = trace_window(entry)
    curve = density_curve(entry, 0.0, e_max, samples, sigma)
    ref = broadened_stick_density(entry, curve.energies, sigma)
    half_max = 0.5 / (sigma * math.sqrt(2.0 * math.pi))
    got = extract_peaks(curve, half_max)
    want = extract_peaks(ref, half_max)
    info.update(sigma=sigma, e_max=e_max, samples=samples)
    keep_g = got.energies >= 4 * sigma
    keep_w = want.energies >= 4 * sigma
    ge, gh = got.energies[keep_g], got.heights[keep_g]
    we, wh = want.energies[keep_w], want.heights[keep_w]
    if ge.size != we.size:
        info["peak_counts"] = [int(ge.size), int(we.size)]
        return [(float(e), math.inf) for e in we] or [(0.0, math.inf)]
    return [(float(e), max(abs(a - e) / (0.5 * sigma), abs(hg / hw - 1.0) / 0.02))
            for a, e, hg, hw in zip(ge, we, gh, wh)]


_CHECKS = {
    "swkb": _check_swkb,
    "wkb": _check_wkb,
    "semi": _check_semi,
    "count": _check_count,
    "shape": _check_shape,
    "barclay": _check_barclay,
    "eta": _check_eta,
    "oracle": _check_oracle,
    "trace": _check_trace,
}


def run_check(entry: CatalogEntry, kind: str, tol: float | None = None, seed: int = 0) -> CheckReport:
    if kind not in _CHECKS:
        raise ValueError(f"unknown check kind {kind!r}; expected one of {', '.join(CHECK_KINDS)}")
    tol = DEFAULT_TOLERANCES[kind] if tol is None else float(tol)
    info: dict = {"seed": seed}
    try:
        samples = _CHECKS[kind](entry, seed, info)
    except (SwkbError, ValueError, ArithmeticError, IndexError) as exc:
        info["error"] = f"{type(exc).__name__}: {exc}"
        return CheckReport(entry.label, kind, tol, math.inf, [(None, math.inf)], info)
    # a NaN residual must fail, not slip through comparisons
    samples = [(a, math.inf if math.isnan(r) else float(r)) for a, r in samples]
    worst = max((r for _, r in samples), default=0.0)
    return CheckReport(entry.label, kind, tol, float(worst), samples, info)


def run_all(entries, tol_profile: dict | None = None, seed: int = 0, kinds=CHECK_KINDS) -> list[CheckReport]:
    profile = dict(DEFAULT_TOLERANCES, **(tol_profile or {}))
    reports = [run_check(e, k, profile[k], seed) for e in entries for k in kinds]
    return sorted(reports, key=lambda r: (r.entry, r.kind))
