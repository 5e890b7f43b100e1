"""A massive particle mapped onto a guided-mode dispersion with a Compton cutoff.

Convention: every wavenumber is 2 pi / wavelength, so the cutoff wavelength
is h / (m0 c) and the cutoff wavenumber m0 c / hbar. With that choice
k_g^2 + k_c^2 = k_0^2 is exactly the relativistic energy-momentum relation,
the group velocity d(omega)/dk_g is the particle velocity and the phase
velocity is c^2 / v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA2018, PhysicalConstants
from .errors import DomainError


@dataclass(frozen=True)
class ParticleState:
    m0: float
    v: float
    gamma_rel: float
    m_rel: float
    lambda_c: float
    lambda_0: float
    lambda_g: float
    k_c: float
    k_0: float
    k_g: float
    E_total: float
    p: float
    v_ph: float
    v_g: float


@dataclass(frozen=True)
class GuideAnalogy:
    lambda_c: float
    cutoff_omega: float


def _wavelength(k: float) -> float:
    return math.inf if k == 0.0 else 2 * math.pi / k


def from_velocity(m0: float, v: float, pc: PhysicalConstants = CODATA2018) -> ParticleState:
    c, hbar = pc.c, pc.hbar
    if not m0 > 0:
        raise DomainError("rest mass must be positive")
    if not 0 <= v < c:
        raise DomainError(f"velocity must satisfy 0 <= v < c, got {v}")
    beta = v / c
    gamma = 1.0 / math.sqrt((1.0 - beta) * (1.0 + beta))
    m = gamma * m0
    k_c = m0 * c / hbar
    k_0 = m * c / hbar
    k_g = m * v / hbar
    return ParticleState(
        m0=m0, v=v, gamma_rel=gamma, m_rel=m,
        lambda_c=_wavelength(k_c), lambda_0=_wavelength(k_0), lambda_g=_wavelength(k_g),
        k_c=k_c, k_0=k_0, k_g=k_g,
        E_total=m * c * c, p=m * v,
        v_ph=math.inf if v == 0 else c * c / v,
        v_g=v,
    )


def omega_of_k(m0: float, k: float, pc: PhysicalConstants = CODATA2018) -> float:
    """omega = c sqrt(k^2 + k_c^2), the guided-mode dispersion of the particle."""
    return pc.c * math.hypot(k, m0 * pc.c / pc.hbar)


def from_wavenumber(m0: float, k: float, pc: PhysicalConstants = CODATA2018) -> ParticleState:
    c, hbar = pc.c, pc.hbar
    if m0 < 0:
        raise DomainError("rest mass must be non-negative")
    if not k > 0:
        raise DomainError("wavenumber must be positive")
    k_c = m0 * c / hbar
    k_0 = math.hypot(k, k_c)
    omega = c * k_0
    v = c * (k / k_0)
    E = hbar * omega
    m = E / (c * c)
    return ParticleState(
        m0=m0, v=v,
        gamma_rel=math.inf if m0 == 0 else k_0 / k_c,
        m_rel=m,
        lambda_c=_wavelength(k_c), lambda_0=_wavelength(k_0), lambda_g=_wavelength(k),
        k_c=k_c, k_0=k_0, k_g=k,
        E_total=E, p=hbar * k,
        v_ph=c * (k_0 / k),
        v_g=v,
    )


def guide_analogy(m0: float, pc: PhysicalConstants = CODATA2018) -> GuideAnalogy:
    if not m0 > 0:
        raise DomainError("rest mass must be positive")
    return GuideAnalogy(lambda_c=pc.h / (m0 * pc.c), cutoff_omega=m0 * pc.c**2 / pc.hbar)
