"""Maslov constant eta, evaluated in closed form, by series and from the action.

The class-I series is

    eta = 1/2 * (1 + sum_{k>=1} c_k B^k),   c_k = (2k-1)!! / ((k+1) (2k)!!)

whose sum is ``1 / (1 + sqrt(1 - B))``.  For class II the k-th term carries
the inner binomial sum ``sum_n k!/((k-2n)!(2n)!) B^(k-n) C^(2n)``, which
equals the mean of ``z+^k`` and ``z-^k`` with ``z+- = B +- C sqrt(B)``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .catalog import BarclayClass, CatalogEntry
from .errors import ConvergenceError, DomainError
from .quadrature import action_integral

__all__ = [
    "EtaMethod",
    "EtaValue",
    "eta_class1_closed",
    "eta_class2_closed",
    "eta_class1_series",
    "eta_class2_series",
    "eta_closed",
    "eta_series",
    "eta_from_action",
    "class2_inner_raw",
    "class2_inner_mean",
    "series_coefficients",
]

# Beyond this order the class-II inner sum uses the z+- mean identity.
RAW_INNER_MAX_K = 25
_BLOCK = 4096


class EtaMethod(enum.Enum):
    CLOSED_I = "ClosedI"
    CLOSED_II = "ClosedII"
    SERIES_I = "SeriesI"
    SERIES_II = "SeriesII"
    ACTION = "Action"


@dataclass(frozen=True)
class EtaValue:
    value: float
    method: EtaMethod
    tail_bound: float | None = None
    terms: int = 0


def _closed(z: float) -> float:
    # (1 - sqrt(1 - z)) / z, finite at z = 0
    return 1.0 / (1.0 + math.sqrt(1.0 - z))


def eta_class1_closed(B: float) -> EtaValue:
    if B > 1:
        raise DomainError(f"B = {B} > 1 gives a complex Maslov constant")
    return EtaValue(_closed(B), EtaMethod.CLOSED_I)


def eta_class2_closed(B: float, C: float) -> EtaValue:
    if B < 0:
        raise DomainError(f"class II requires B >= 0, got {B}")
    root = math.sqrt(B)
    z_plus, z_minus = B + C * root, B - C * root
    if z_plus > 1 or z_minus > 1:
        raise DomainError(f"z+- = ({z_plus}, {z_minus}) exceed 1")
    return EtaValue(0.5 * (_closed(z_plus) + _closed(z_minus)), EtaMethod.CLOSED_II)


def series_coefficients(k_max: int) -> np.ndarray:
    """c_k for k = 1..k_max by the ratio recurrence (no factorials)."""
    k = np.arange(1, k_max, dtype=float)
    ratios = (2.0 * k + 1.0) * (k + 1.0) / ((2.0 * k + 2.0) * (k + 2.0))
    return 0.25 * np.concatenate([[1.0], np.cumprod(ratios)])


def _tail(z: float, last_term_mag: float, K: int) -> float:
    """Bound on sum_{k>K} c_k z^k given |c_K z^K| = last_term_mag."""
    az = abs(z)
    if az == 0.0:
        return 0.0
    if az < 1.0:
        if z > 0:
            return last_term_mag * az / (1.0 - az)
        # alternating with decreasing magnitude
        return last_term_mag * az
    # |z| = 1: c_k <= 1/((k+1) sqrt(pi k)) (Wallis), integral comparison
    return 2.0 / math.sqrt(math.pi * K)


def _sum_terms(term_block, tol: float, k_max: int):
    """Accumulate blocks of terms until one drops below tol in magnitude.

    ``term_block(k0, k1)`` returns terms for k = k0..k1-1.  Returns
    (partial sum, index of last term used).
    """
    total = 0.0
    k0 = 1
    while k0 <= k_max:
        k1 = min(k0 + _BLOCK, k_max + 1)
        terms = term_block(k0, k1)
        small = np.nonzero(np.abs(terms) < tol)[0]
        if small.size:
            stop = small[0]
            total += float(np.sum(terms[: stop + 1]))
            return total, k0 + stop
        total += float(np.sum(terms))
        k0 = k1
    return total, k_max


def _check_series_domain(z: float):
    if z > 1:
        raise DomainError(f"series argument {z} > 1 diverges")
    if z < -1:
        raise ConvergenceError(f"series argument {z} < -1 diverges; use the closed form")


def eta_class1_series(B: float, tol: float = 1e-12, k_max: int = 1_000_000) -> EtaValue:
    _check_series_domain(B)
    coeffs = series_coefficients(k_max)

    def block(k0, k1):
        k = np.arange(k0, k1)
        with np.errstate(under="ignore"):
            return coeffs[k - 1] * np.power(B, k)

    s, K = _sum_terms(block, tol, k_max)
    last = abs(block(K, K + 1)[0])
    tail = 0.5 * _tail(B, last, K)
    value = 0.5 * (1.0 + s)
    _raise_if_unconverged(B, last, tail, tol, K, k_max, value)
    return EtaValue(float(value), EtaMethod.SERIES_I, float(tail), int(K))


def class2_inner_raw(k: int, B: float, C: float) -> float:
    """Inner binomial sum of the class-II term at order k, summed literally."""
    return math.fsum(
        math.factorial(k) / (math.factorial(k - 2 * n) * math.factorial(2 * n))
        * B ** (k - n) * C ** (2 * n)
        for n in range(k // 2 + 1)
    )


def class2_inner_mean(k: int, B: float, C: float) -> float:
    root = math.sqrt(B)
    return 0.5 * ((B + C * root) ** k + (B - C * root) ** k)


def eta_class2_series(B: float, C: float, tol: float = 1e-12, k_max: int = 1_000_000) -> EtaValue:
    if B < 0:
        raise DomainError(f"class II requires B >= 0, got {B}")
    root = math.sqrt(B)
    zp, zm = B + C * root, B - C * root
    _check_series_domain(zp)
    _check_series_domain(zm)
    coeffs = series_coefficients(k_max)

    def block(k0, k1):
        k = np.arange(k0, k1)
        with np.errstate(under="ignore"):
            inner = 0.5 * (np.power(zp, k) + np.power(zm, k))
        raw = k <= RAW_INNER_MAX_K
        if np.any(raw):
            inner[raw] = [class2_inner_raw(int(j), B, C) for j in k[raw]]
        return coeffs[k - 1] * inner

    s, K = _sum_terms(block, tol, k_max)
    last_p = abs(coeffs[K - 1] * zp**K)
    last_m = abs(coeffs[K - 1] * zm**K)
    tail = 0.25 * (_tail(zp, last_p, K) + _tail(zm, last_m, K))
    value = 0.5 * (1.0 + s)
    worst = zp if abs(zp) >= abs(zm) else zm
    _raise_if_unconverged(worst, max(last_p, last_m), tail, tol, K, k_max, value)
    return EtaValue(float(value), EtaMethod.SERIES_II, float(tail), int(K))


def _raise_if_unconverged(z, last, tail, tol, K, k_max, value):
    # |z| = 1 converges only algebraically; the tail bound is reported instead.
    if K >= k_max and last >= tol and abs(z) < 1 and tail > 10 * tol:
        raise ConvergenceError(
            f"series not converged after {k_max} terms (tail bound {tail:.3e})",
            best_estimate=value,
        )


def eta_closed(entry: CatalogEntry) -> EtaValue:
    bc = entry.barclay
    if bc.class_tag is BarclayClass.I:
        return eta_class1_closed(bc.B)
    return eta_class2_closed(bc.B, bc.C)


def eta_series(entry: CatalogEntry, tol: float = 1e-10, k_max: int = 1_000_000) -> EtaValue:
    bc = entry.barclay
    if bc.class_tag is BarclayClass.I:
        return eta_class1_series(bc.B, tol, k_max)
    return eta_class2_series(bc.B, bc.C, tol, k_max)


def eta_from_action(entry: CatalogEntry) -> EtaValue:
    """S1(0)/h: the action of the zero-energy orbit of V1 in units of h."""
    res = action_integral(entry, 0.0, "V1")
    return EtaValue(float(res.value / entry.units.h), EtaMethod.ACTION)
