"""Translationally shape-invariant potentials.

Each entry bundles a superpotential ``W(x; a)``, its analytic derivative, the
remainder ``R(a)`` of the shape-invariance relation, the exact spectrum
``f(n)`` of ``H1`` and its continuous inverse ``F(E)``, together with the
Barclay ODE coefficients satisfied by ``W(x; a1)``.

Units are carried by :class:`UnitSystem`; the default ``hbar = 1``,
``mass = 1/2`` gives ``gamma = hbar / sqrt(2 m) = 1``.  Morse and
Poschl-Teller strengths are dimensionless (in units of ``gamma * alpha``)
so that their Barclay ``B`` does not depend on ``hbar``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import (
    ClassificationError,
    DomainError,
    ParameterError,
    RangeError,
    SpectrumExhaustedError,
)

__all__ = [
    "UnitSystem",
    "BarclayClass",
    "BarclayCoefficients",
    "Domain",
    "CatalogEntry",
    "square_well",
    "harmonic_1d",
    "radial_ho",
    "coulomb_radial",
    "morse",
    "poschl_teller",
    "ENTRY_FACTORIES",
    "make_entry",
    "default_catalog",
    "superpotential_value",
    "potential_value",
    "spectrum_level",
    "counting_value",
    "counting_derivative",
    "barclay_residual",
    "shape_invariance_residual",
]


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self):
        if not (self.hbar > 0 and self.mass > 0):
            raise ParameterError(f"hbar and mass must be positive, got {self.hbar}, {self.mass}")

    @property
    def gamma(self) -> float:
        """hbar / sqrt(2 m), the scale multiplying W' in the partner potentials."""
        return self.hbar / math.sqrt(2.0 * self.mass)

    @property
    def sqrt2m(self) -> float:
        return math.sqrt(2.0 * self.mass)

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar


class BarclayClass(enum.Enum):
    I = "ClassI"
    II = "ClassII"


@dataclass(frozen=True)
class BarclayCoefficients:
    """Constants of ``gamma W' = A + B W^2 + C W`` (class I) or
    ``gamma W' = A + B W^2 + C W sqrt(A + B W^2)`` (class II)."""

    class_tag: BarclayClass
    A: float
    B: float
    C: float

    @property
    def z_pm(self) -> tuple[float, float]:
        root = math.sqrt(self.B)
        return self.B + self.C * root, self.B - self.C * root


@dataclass(frozen=True)
class Domain:
    lo: float
    hi: float
    lo_wall: bool = False
    hi_wall: bool = False

    def contains(self, x) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all((x > self.lo) & (x < self.hi)))


def _one(n):
    return 1


@dataclass(frozen=True)
class CatalogEntry:
    """A shape-invariant potential and everything known about it in closed form.

    ``v1`` is an algebraically simplified ``W^2 - gamma W'`` used where the
    naive difference cancels catastrophically (walls, ``1/r^2`` terms).
    """

    name: str
    params: Mapping[str, float]
    units: UnitSystem
    a1: float
    alpha_step: float
    domain: Domain
    superpotential: Callable
    superpotential_prime: Callable
    remainder: Callable
    spectrum_f: Callable
    counting_F: Callable
    counting_F_prime: Callable
    bound_state_count: int | None
    barclay: BarclayCoefficients
    center: float
    energy_ceiling: float
    v1: Callable
    param_valid: Callable[[float], bool]
    degeneracy: Callable = field(default=_one)

    @property
    def label(self) -> str:
        inner = ",".join(f"{k}={_fmt(v)}" for k, v in self.params.items())
        return f"{self.name}[{inner}]"

    def a(self, k: int) -> float:
        """Parameter of the k-th member of the hierarchy, k >= 1."""
        return self.a1 + (k - 1) * self.alpha_step

    @property
    def top_level(self) -> int:
        """Highest level used by the verification sweeps (at most 10)."""
        if self.bound_state_count is None:
            return 10
        return min(10, self.bound_state_count - 1)


def _fmt(v) -> str:
    return f"{v:g}" if isinstance(v, float) else str(v)


def _csc2(y):
    s = np.sin(y)
    return 1.0 / (s * s)


def _sech(y):
    e = np.exp(-np.abs(y))
    return 2.0 * e / (1.0 + e * e)


def _check_levels(n, count):
    n_arr = np.asarray(n)
    if np.any(n_arr < 0):
        raise DomainError("quantum number must be non-negative")
    if count is not None and np.any(n_arr >= count):
        raise SpectrumExhaustedError(f"only {count} bound states (n = 0..{count - 1})")


def _check_energy(E, ceiling):
    E_arr = np.asarray(E, dtype=float)
    if np.any(E_arr < 0):
        raise RangeError("counting function defined for E >= 0 only")
    if np.any(E_arr >= ceiling):
        raise RangeError(f"energy at or above the continuum threshold {ceiling:g}")


def _nonneg_int(value, key):
    if float(value) != int(value) or int(value) < 0:
        raise ParameterError(f"{key} must be a non-negative integer, got {value}")
    return int(value)


def _positive(value, key):
    if not value > 0:
        raise ParameterError(f"{key} must be positive, got {value}")
    return float(value)


def square_well(L: float = math.pi, units: UnitSystem | None = None) -> CatalogEntry:
    u = units or UnitSystem()
    L = _positive(L, "L")
    k = math.pi / L
    E0 = (u.gamma * k) ** 2
    g = u.gamma

    def W(x, a):
        return -a * g * k / np.tan(k * np.asarray(x))

    def dW(x, a):
        return a * g * k * k * _csc2(k * np.asarray(x))

    def v1(x, a):
        return E0 * (a * (a - 1.0) * _csc2(k * np.asarray(x)) - a * a)

    def f(n):
        _check_levels(n, None)
        n = np.asarray(n, dtype=float)
        return E0 * n * (n + 2.0)

    def F(E):
        _check_energy(E, math.inf)
        return np.sqrt(1.0 + np.asarray(E, dtype=float) / E0) - 1.0

    def Fp(E):
        _check_energy(E, math.inf)
        return 0.5 / (E0 * np.sqrt(1.0 + np.asarray(E, dtype=float) / E0))

    return CatalogEntry(
        name="square-well",
        params={"L": L},
        units=u,
        a1=1.0,
        alpha_step=1.0,
        domain=Domain(0.0, L, True, True),
        superpotential=W,
        superpotential_prime=dW,
        remainder=lambda a: E0 * (2.0 * a + 1.0),
        spectrum_f=f,
        counting_F=F,
        counting_F_prime=Fp,
        bound_state_count=None,
        barclay=BarclayCoefficients(BarclayClass.I, E0, 1.0, 0.0),
        center=L / 2.0,
        energy_ceiling=math.inf,
        v1=v1,
        param_valid=lambda a: a > 0,
    )


def harmonic_1d(omega: float = 1.0, units: UnitSystem | None = None) -> CatalogEntry:
    u = units or UnitSystem()
    omega = _positive(omega, "omega")
    slope = math.sqrt(u.mass / 2.0) * omega
    hw = u.hbar * omega

    def W(x, a):
        return slope * np.asarray(x, dtype=float)

    def dW(x, a):
        return np.full_like(np.asarray(x, dtype=float), slope)

    def v1(x, a):
        x = np.asarray(x, dtype=float)
        return 0.5 * u.mass * omega**2 * x * x - 0.5 * hw

    def f(n):
        _check_levels(n, None)
        return hw * np.asarray(n, dtype=float)

    def F(E):
        _check_energy(E, math.inf)
        return np.asarray(E, dtype=float) / hw

    def Fp(E):
        _check_energy(E, math.inf)
        return np.full_like(np.asarray(E, dtype=float), 1.0 / hw)

    return CatalogEntry(
        name="harmonic-1d",
        params={"omega": omega},
        units=u,
        a1=1.0,
        alpha_step=1.0,
        domain=Domain(-math.inf, math.inf),
        superpotential=W,
        superpotential_prime=dW,
        remainder=lambda a: hw,
        spectrum_f=f,
        counting_F=F,
        counting_F_prime=Fp,
        bound_state_count=None,
        barclay=BarclayCoefficients(BarclayClass.I, 0.5 * hw, 0.0, 0.0),
        center=0.0,
        energy_ceiling=math.inf,
        v1=v1,
        param_valid=lambda a: True,
    )


def radial_ho(omega: float = 1.0, l: int = 0, units: UnitSystem | None = None) -> CatalogEntry:
    """Three-dimensional oscillator in a fixed partial wave; a = l + 1."""
    u = units or UnitSystem()
    omega = _positive(omega, "omega")
    l = _nonneg_int(l, "l")
    g = u.gamma
    c = u.sqrt2m * omega / 2.0
    hw = u.hbar * omega
    a1 = l + 1.0
    B = 1.0 / (2.0 * a1)

    def W(r, a):
        r = np.asarray(r, dtype=float)
        return c * r - g * a / r

    def dW(r, a):
        r = np.asarray(r, dtype=float)
        return c + g * a / (r * r)

    def v1(r, a):
        r = np.asarray(r, dtype=float)
        return 0.5 * u.mass * omega**2 * r * r + g * g * a * (a - 1.0) / (r * r) - hw * (a + 0.5)

    def f(n):
        _check_levels(n, None)
        return 2.0 * hw * np.asarray(n, dtype=float)

    def F(E):
        _check_energy(E, math.inf)
        return np.asarray(E, dtype=float) / (2.0 * hw)

    def Fp(E):
        _check_energy(E, math.inf)
        return np.full_like(np.asarray(E, dtype=float), 0.5 / hw)

    return CatalogEntry(
        name="radial-ho",
        params={"omega": omega, "l": l},
        units=u,
        a1=a1,
        alpha_step=1.0,
        domain=Domain(0.0, math.inf, True, False),
        superpotential=W,
        superpotential_prime=dW,
        remainder=lambda a: 2.0 * hw,
        spectrum_f=f,
        counting_F=F,
        counting_F_prime=Fp,
        bound_state_count=None,
        barclay=BarclayCoefficients(BarclayClass.II, hw, B, -math.sqrt(B)),
        center=math.sqrt(g * a1 / c),
        energy_ceiling=math.inf,
        v1=v1,
        param_valid=lambda a: a > 0,
    )


def coulomb_radial(q: float = 2.0, l: int = 0, units: UnitSystem | None = None) -> CatalogEntry:
    """Attractive ``-q/r`` in a fixed partial wave; a = l + 1."""
    u = units or UnitSystem()
    q = _positive(q, "q")
    l = _nonneg_int(l, "l")
    g = u.gamma
    a1 = l + 1.0
    ry = q * q / (4.0 * g * g)
    ceiling = ry / a1**2

    def W(r, a):
        r = np.asarray(r, dtype=float)
        return q / (2.0 * g * a) - g * a / r

    def dW(r, a):
        r = np.asarray(r, dtype=float)
        return g * a / (r * r)

    def v1(r, a):
        r = np.asarray(r, dtype=float)
        return ry / (a * a) - q / r + g * g * a * (a - 1.0) / (r * r)

    def f(n):
        _check_levels(n, None)
        n = np.asarray(n, dtype=float)
        # ry (1/a^2 - 1/(a+n)^2) without cancellation at small n
        return ry * n * (2.0 * a1 + n) / (a1 * a1 * (a1 + n) ** 2)

    def _slack(E):
        _check_energy(E, ceiling)
        return 1.0 / a1**2 - np.asarray(E, dtype=float) / ry

    def F(E):
        return 1.0 / np.sqrt(_slack(E)) - a1

    def Fp(E):
        return 0.5 / (ry * _slack(E) ** 1.5)

    return CatalogEntry(
        name="coulomb",
        params={"q": q, "l": l},
        units=u,
        a1=a1,
        alpha_step=1.0,
        domain=Domain(0.0, math.inf, True, False),
        superpotential=W,
        superpotential_prime=dW,
        remainder=lambda a: ry * (1.0 / a**2 - 1.0 / (a + 1.0) ** 2),
        spectrum_f=f,
        counting_F=F,
        counting_F_prime=Fp,
        bound_state_count=None,
        barclay=BarclayCoefficients(BarclayClass.I, ry / a1**3, 1.0 / a1, -q / (g * a1 * a1)),
        center=2.0 * g * g * a1 * a1 / q,
        energy_ceiling=ceiling,
        v1=v1,
        param_valid=lambda a: a > 0,
    )


def _finite_ladder(lam, s, ceiling):
    """Spectrum a1^2 - (a1 - n s)^2 shared by Morse and Poschl-Teller."""
    a1 = lam * s
    count = math.ceil(lam)

    def f(n):
        _check_levels(n, count)
        n = np.asarray(n, dtype=float)
        return n * s * (2.0 * a1 - n * s)

    def F(E):
        _check_energy(E, ceiling)
        E = np.asarray(E, dtype=float)
        # (a1 - sqrt(a1^2 - E)) / s, rationalised
        return E / (s * (a1 + np.sqrt(a1 * a1 - E)))

    def Fp(E):
        _check_energy(E, ceiling)
        return 0.5 / (s * np.sqrt(a1 * a1 - np.asarray(E, dtype=float)))

    return count, f, F, Fp


def morse(A: float = 12.0, alpha: float = 0.25, units: UnitSystem | None = None) -> CatalogEntry:
    """Morse oscillator with W = a - a1 exp(-alpha x); strength A = a1/(gamma alpha)."""
    u = units or UnitSystem()
    lam = _positive(A, "A")
    alpha = _positive(alpha, "alpha")
    s = u.gamma * alpha
    a1 = lam * s
    b = a1
    count, f, F, Fp = _finite_ladder(lam, s, a1 * a1)

    def W(x, a):
        return a - b * np.exp(-alpha * np.asarray(x, dtype=float))

    def dW(x, a):
        return alpha * b * np.exp(-alpha * np.asarray(x, dtype=float))

    def v1(x, a):
        e = np.exp(-alpha * np.asarray(x, dtype=float))
        return a * a + b * e * (b * e - (2.0 * a + s))

    return CatalogEntry(
        name="morse",
        params={"A": lam, "alpha": alpha},
        units=u,
        a1=a1,
        alpha_step=-s,
        domain=Domain(-math.inf, math.inf),
        superpotential=W,
        superpotential_prime=dW,
        remainder=lambda a: s * (2.0 * a - s),
        spectrum_f=f,
        counting_F=F,
        counting_F_prime=Fp,
        bound_state_count=count,
        barclay=BarclayCoefficients(BarclayClass.I, s * a1, 0.0, -s),
        center=0.0,
        energy_ceiling=a1 * a1,
        v1=v1,
        param_valid=lambda a: a > 0,
    )


def poschl_teller(A: float = 6.0, alpha: float = 1.0, units: UnitSystem | None = None) -> CatalogEntry:
    """Modified Poschl-Teller well with W = a tanh(alpha x); strength A = a1/(gamma alpha)."""
    u = units or UnitSystem()
    lam = _positive(A, "A")
    alpha = _positive(alpha, "alpha")
    s = u.gamma * alpha
    a1 = lam * s
    count, f, F, Fp = _finite_ladder(lam, s, a1 * a1)

    def W(x, a):
        return a * np.tanh(alpha * np.asarray(x, dtype=float))

    def dW(x, a):
        sh = _sech(alpha * np.asarray(x, dtype=float))
        return a * alpha * sh * sh

    def v1(x, a):
        sh = _sech(alpha * np.asarray(x, dtype=float))
        return a * a - a * (a + s) * sh * sh

    return CatalogEntry(
        name="poschl-teller",
        params={"A": lam, "alpha": alpha},
        units=u,
        a1=a1,
        alpha_step=-s,
        domain=Domain(-math.inf, math.inf),
        superpotential=W,
        superpotential_prime=dW,
        remainder=lambda a: s * (2.0 * a - s),
        spectrum_f=f,
        counting_F=F,
        counting_F_prime=Fp,
        bound_state_count=count,
        barclay=BarclayCoefficients(BarclayClass.I, s * a1, -1.0 / lam, 0.0),
        center=0.0,
        energy_ceiling=a1 * a1,
        v1=v1,
        param_valid=lambda a: a > 0,
    )


ENTRY_FACTORIES: dict[str, Callable[..., CatalogEntry]] = {
    "square-well": square_well,
    "harmonic-1d": harmonic_1d,
    "radial-ho": radial_ho,
    "coulomb": coulomb_radial,
    "morse": morse,
    "poschl-teller": poschl_teller,
}

_PARAM_KEYS = {
    "square-well": ("L",),
    "harmonic-1d": ("omega",),
    "radial-ho": ("omega", "l"),
    "coulomb": ("q", "l"),
    "morse": ("A", "alpha"),
    "poschl-teller": ("A", "alpha"),
}


def make_entry(name: str, params: Mapping[str, float] | None = None,
               units: UnitSystem | None = None) -> CatalogEntry:
    """Build a catalog entry by its CLI name, rejecting unknown parameters."""
    try:
        factory = ENTRY_FACTORIES[name]
    except KeyError:
        known = ", ".join(ENTRY_FACTORIES)
        raise ParameterError(f"unknown entry {name!r} (known: {known})") from None
    params = dict(params or {})
    unknown = set(params) - set(_PARAM_KEYS[name])
    if unknown:
        raise ParameterError(f"unknown parameter(s) for {name}: {', '.join(sorted(unknown))}")
    return factory(**params, units=units)


def default_catalog(units: UnitSystem | None = None) -> list[CatalogEntry]:
    """Every shipped family at its default parameters, plus l = 1 radial waves."""
    return [
        square_well(units=units),
        harmonic_1d(units=units),
        radial_ho(l=0, units=units),
        radial_ho(l=1, units=units),
        coulomb_radial(l=0, units=units),
        coulomb_radial(l=1, units=units),
        morse(units=units),
        poschl_teller(units=units),
    ]


def _require_inside(entry: CatalogEntry, x):
    if not entry.domain.contains(x):
        d = entry.domain
        raise DomainError(f"{entry.name}: position outside open domain ({d.lo:g}, {d.hi:g})")


def _require_param(entry: CatalogEntry, a):
    if not entry.param_valid(a):
        raise ParameterError(f"{entry.name}: parameter a={a} outside validity range")


def superpotential_value(entry: CatalogEntry, x, a: float | None = None):
    a = entry.a1 if a is None else a
    _require_inside(entry, x)
    _require_param(entry, a)
    return entry.superpotential(x, a)


def potential_value(entry: CatalogEntry, x, which: str = "V1", a: float | None = None):
    """Partner potential ``V1 = W^2 - gamma W'`` or ``V2 = W^2 + gamma W'``."""
    a = entry.a1 if a is None else a
    _require_inside(entry, x)
    _require_param(entry, a)
    if which == "V1":
        return entry.v1(x, a)
    if which == "V2":
        w = entry.superpotential(x, a)
        return w * w + entry.units.gamma * entry.superpotential_prime(x, a)
    raise ValueError(f"which must be 'V1' or 'V2', got {which!r}")


def spectrum_level(entry: CatalogEntry, n):
    return entry.spectrum_f(n)


def counting_value(entry: CatalogEntry, E):
    return entry.counting_F(E)


def counting_derivative(entry: CatalogEntry, E):
    return entry.counting_F_prime(E)


def barclay_residual(entry: CatalogEntry, x, coefficients: BarclayCoefficients | None = None):
    """``gamma W'(x) - [A + B W^2 + C W (...)]`` evaluated at ``a1``."""
    bc = coefficients or entry.barclay
    _require_inside(entry, x)
    w = entry.superpotential(x, entry.a1)
    lhs = entry.units.gamma * entry.superpotential_prime(x, entry.a1)
    base = bc.A + bc.B * w * w
    if bc.class_tag is BarclayClass.I:
        return lhs - (base + bc.C * w)
    if np.any(base < 0):
        raise ClassificationError(f"{entry.name}: A + B W^2 < 0, class II coefficients inconsistent")
    return lhs - (base + bc.C * w * np.sqrt(base))


def shape_invariance_residual(entry: CatalogEntry, x):
    """``V2(x; a1) - V1(x; a2) - R(a1)`` with both partners built from W."""
    _require_inside(entry, x)
    g = entry.units.gamma
    a1 = entry.a1
    a2 = entry.a(2)
    w1 = entry.superpotential(x, a1)
    w2 = entry.superpotential(x, a2)
    v2 = w1 * w1 + g * entry.superpotential_prime(x, a1)
    v1_next = w2 * w2 - g * entry.superpotential_prime(x, a2)
    return v2 - v1_next - entry.remainder(a1)
