"""TE/TM dispersion of hollow rectangular and circular metallic guides (vacuum filled)."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import numerics as nm
from .constants import C, Z0
from .errors import DomainError, InvalidMode, NotPropagating

CUTOFF_RTOL = 1e-12


class Polarization(str, Enum):
    TE = "TE"
    TM = "TM"


class Regime(str, Enum):
    PROPAGATING = "Propagating"
    CUTOFF = "Cutoff"
    EVANESCENT = "Evanescent"


@dataclass(frozen=True)
class ModeIndex:
    polarization: Polarization
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "polarization", Polarization(self.polarization))
        if self.m < 0 or self.n < 0:
            raise InvalidMode(f"mode indices must be >= 0, got ({self.m}, {self.n})")

    @property
    def label(self) -> str:
        sep = "," if self.m > 9 or self.n > 9 else ""
        return f"{self.polarization.value}{self.m}{sep}{self.n}"

    @classmethod
    def parse(cls, text: str) -> "ModeIndex":
        """Parse 'TE11', 'TM01' or, for multi-digit indices, 'TE1,12'."""
        m = re.fullmatch(r"\s*(TE|TM)\s*(?:(\d)(\d)|(\d+)\s*,\s*(\d+))\s*", text.upper())
        if m is None:
            raise InvalidMode(f"cannot parse mode {text!r}")
        pol, a, b, c, d = m.groups()
        return cls(Polarization(pol), int(a if a is not None else c), int(b if b is not None else d))


@dataclass(frozen=True)
class Rectangular:
    a: float
    b: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise InvalidMode("guide dimensions must be positive")


@dataclass(frozen=True)
class Circular:
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise InvalidMode("guide radius must be positive")


Geometry = Rectangular | Circular


@dataclass(frozen=True)
class DispersionPoint:
    """Kinematics of one mode at one frequency.

    Infinite quantities (v_ph and lambda_g at or below cutoff) are stored as
    ``math.inf``. Below cutoff ``z_char`` is the magnitude of the purely
    reactive wave impedance, which tends to the TE/TM cutoff limits.
    """

    omega: float
    k0: float
    kc: float
    kg: float
    kappa: float
    v_ph: float
    v_g: float
    lambda_g: float
    z_char: float
    regime: Regime


@dataclass(frozen=True)
class CutoffEntry:
    mode: ModeIndex
    kc: float
    cutoff_frequency: float


# -- cutoffs -----------------------------------------------------------------

@lru_cache(maxsize=None)
def bessel_root_table(m: int, derivative: bool, count: int,
                      tol_abs: float = nm.ROOT_TOL) -> tuple[float, ...]:
    """First ``count`` positive zeros of J_m (or J_m') by scan + Brent refinement."""
    if derivative:
        f = lambda x: nm.bessel_j_prime(m, x)
    else:
        f = lambda x: nm.bessel_j(m, x)
    # consecutive zeros are more than 2 apart, so 0.05 cells never hold two
    hi = m + math.pi * (count + 2) + 5.0
    while True:
        brackets = nm.bracket_scan(f, 1e-6, hi, int(hi / 0.05) + 2)
        roots = [nm.find_root(f, b, tol_abs) for b in brackets]
        roots = [r for r in roots if r > 1e-4]
        if len(roots) >= count:
            return tuple(roots[:count])
        hi *= 1.5


def validate_mode(geom: Geometry, mode: ModeIndex) -> None:
    if isinstance(geom, Rectangular):
        if mode.polarization is Polarization.TE and mode.m == 0 and mode.n == 0:
            raise InvalidMode("rectangular TE00 does not exist")
        if mode.polarization is Polarization.TM and (mode.m < 1 or mode.n < 1):
            raise InvalidMode(f"rectangular {mode.label} does not exist (TM needs m, n >= 1)")
    elif isinstance(geom, Circular):
        if mode.n < 1:
            raise InvalidMode(f"circular {mode.label}: radial index must be >= 1")
    else:
        raise TypeError(f"unknown geometry {geom!r}")


def cutoff_wavenumber(geom: Geometry, mode: ModeIndex, tol_abs: float = nm.ROOT_TOL) -> float:
    validate_mode(geom, mode)
    if isinstance(geom, Rectangular):
        return math.hypot(mode.m * math.pi / geom.a, mode.n * math.pi / geom.b)
    roots = bessel_root_table(mode.m, mode.polarization is Polarization.TE, mode.n, tol_abs)
    return roots[mode.n - 1] / geom.radius


def cutoff_table(geom: Geometry, count: int, max_index: int = 12,
                 tol_abs: float = nm.ROOT_TOL) -> list[CutoffEntry]:
    """The ``count`` lowest-cutoff modes, ascending in kc (ties by TE first, then m, n)."""
    entries = []
    for pol in Polarization:
        for m in range(max_index + 1):
            for n in range(max_index + 1):
                mode = ModeIndex(pol, m, n)
                try:
                    kc = cutoff_wavenumber(geom, mode, tol_abs)
                except InvalidMode:
                    continue
                entries.append(CutoffEntry(mode, kc, kc * C / (2 * math.pi)))
    entries.sort(key=lambda e: (round(e.kc, 9), e.mode.polarization.value, e.mode.m, e.mode.n))
    return entries[:count]


# -- dispersion --------------------------------------------------------------

def _impedance(pol: Polarization, ratio: float) -> float:
    """Wave impedance for kg/k0 = ratio (kappa/k0 below cutoff)."""
    if pol is Polarization.TM:
        return ratio * Z0
    return math.inf if ratio == 0.0 else Z0 / ratio


def dispersion(geom: Geometry, mode: ModeIndex, omega: float,
               tol_abs: float = nm.ROOT_TOL) -> DispersionPoint:
    if not omega > 0:
        raise DomainError("omega must be positive")
    kc = cutoff_wavenumber(geom, mode, tol_abs)
    k0 = omega / C
    if abs(k0 - kc) <= CUTOFF_RTOL * kc:
        return DispersionPoint(omega, k0, kc, 0.0, 0.0, math.inf, 0.0, math.inf,
                               _impedance(mode.polarization, 0.0), Regime.CUTOFF)
    if k0 > kc:
        kg = math.sqrt((k0 - kc) * (k0 + kc))
        return DispersionPoint(
            omega, k0, kc, kg, 0.0,
            v_ph=omega / kg,
            v_g=C * C * kg / omega,
            lambda_g=2 * math.pi / kg,
            z_char=_impedance(mode.polarization, kg / k0),
            regime=Regime.PROPAGATING,
        )
    kappa = math.sqrt((kc - k0) * (kc + k0))
    return DispersionPoint(omega, k0, kc, 0.0, kappa, math.inf, 0.0, math.inf,
                           _impedance(mode.polarization, kappa / k0), Regime.EVANESCENT)


def characteristic_impedance(point: DispersionPoint, mode_pol: Polarization) -> float:
    if point.regime is not Regime.PROPAGATING:
        raise NotPropagating(f"characteristic impedance undefined in regime {point.regime.value}")
    return _impedance(Polarization(mode_pol), point.kg / point.k0)


def dispersion_sweep(geom: Geometry, mode: ModeIndex, omega_lo: float, omega_hi: float,
                     samples: int, tol_abs: float = nm.ROOT_TOL) -> list[DispersionPoint]:
    if not omega_lo < omega_hi:
        raise DomainError("need omega_lo < omega_hi")
    if samples < 2:
        raise DomainError("need at least 2 samples")
    return [dispersion(geom, mode, float(w), tol_abs) for w in np.linspace(omega_lo, omega_hi, samples)]


def omega_of_kg(kc: float, kg: float) -> float:
    """Inverse dispersion relation, omega as a function of the guided wavenumber."""
    return C * math.hypot(kg, kc)
