"""Gaussian wave packet and its equivalent finite TE-TM mode.

A spectral Gaussian of parameter ``a`` has sidebands at k0 +/- 2 sqrt(a). The
sideband offset plays the role of the detuning k0 - kg of a guided mode,
which fixes an equivalent cutoff sqrt(2 k0 dk) and a transverse size
lambda0 sqrt(Q). Vacuum dispersion is assumed, so Q = w0/dw = k0/dk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .constants import C
from .errors import DomainError


@dataclass(frozen=True)
class GaussianPacket:
    amplitude_A: float
    k0: float
    a_var: float
    delta_k: float = field(init=False)
    q_factor: float = field(init=False)

    def __post_init__(self):
        if not self.a_var > 0:
            raise DomainError("Gaussian parameter a must be positive")
        dk = 2.0 * math.sqrt(self.a_var)
        object.__setattr__(self, "delta_k", dk)
        object.__setattr__(self, "q_factor", self.k0 / dk)
        if not self.k0 > dk:
            raise DomainError(f"packet is not narrowband: Q = {self.k0 / dk:g} <= 1")

    @classmethod
    def from_quality(cls, k0: float, q: float, amplitude: float = 1.0) -> "GaussianPacket":
        return cls(amplitude, k0, (k0 / q / 2.0) ** 2)

    @classmethod
    def from_offset(cls, k0: float, delta_k: float, amplitude: float = 1.0) -> "GaussianPacket":
        return cls(amplitude, k0, (delta_k / 2.0) ** 2)

    @property
    def lambda0(self) -> float:
        return 2 * math.pi / self.k0

    @property
    def omega0(self) -> float:
        return C * self.k0

    @property
    def delta_omega(self) -> float:
        return C * self.delta_k


@dataclass(frozen=True)
class EquivalentMode:
    kc_eq: float
    lambda_c_eq: float
    b_eq: float
    kg: float


def packet_amplitude(p: GaussianPacket, k):
    """Spectral amplitude A / sqrt(4 pi a) exp(-(k - k0)^2 / 4a); k may be an array."""
    val = p.amplitude_A / math.sqrt(4 * math.pi * p.a_var) * np.exp(-((k - p.k0) ** 2) / (4 * p.a_var))
    return float(val) if np.ndim(val) == 0 else val


def quality_factor(omega0: float, delta_omega: float) -> float:
    if not (omega0 > 0 and delta_omega > 0):
        raise DomainError("frequencies must be positive")
    if delta_omega >= omega0:
        raise DomainError(f"Q = {omega0 / delta_omega:g} <= 1 breaks the narrowband assumption")
    return omega0 / delta_omega


def equivalent_mode(p: GaussianPacket) -> EquivalentMode:
    kc2 = 2.0 * p.k0 * p.delta_k
    if kc2 >= p.k0**2:
        raise DomainError(f"equivalent mode would be evanescent (Q = {p.q_factor:g} too small)")
    kc = math.sqrt(kc2)
    return EquivalentMode(
        kc_eq=kc,
        lambda_c_eq=2 * math.pi / kc,
        b_eq=p.lambda0 * math.sqrt(p.q_factor),
        kg=math.sqrt((p.k0 - kc) * (p.k0 + kc)),
    )


def exact_cutoff(k0: float, delta_k: float) -> float:
    """sqrt((k0 + kg)(k0 - kg)) with kg = k0 - delta_k, before the narrowband step."""
    kg = k0 - delta_k
    return math.sqrt((k0 + kg) * (k0 - kg))


@dataclass(frozen=True)
class SourceView:
    omega0: float
    delta_omega: float
    q_factor: float


@dataclass(frozen=True)
class ModeView:
    lambda0: float
    b_eq: float
    lambda_c_eq: float
    kc_eq: float
    kg: float


@dataclass(frozen=True)
class PacketFields:
    """The packet fields that reconstruct a GaussianPacket."""

    amplitude_A: float
    k0: float
    a_var: float

    def packet(self) -> GaussianPacket:
        return GaussianPacket(self.amplitude_A, self.k0, self.a_var)


@dataclass(frozen=True)
class IndistinguishabilityReport:
    """One perturbation, described as a finite-bandwidth source and as a finite mode."""

    packet: PacketFields
    source: SourceView
    mode: ModeView


def indistinguishability_report(p: GaussianPacket) -> IndistinguishabilityReport:
    eq = equivalent_mode(p)
    return IndistinguishabilityReport(
        packet=PacketFields(p.amplitude_A, p.k0, p.a_var),
        source=SourceView(p.omega0, p.delta_omega, p.q_factor),
        mode=ModeView(p.lambda0, eq.b_eq, eq.lambda_c_eq, eq.kc_eq, eq.kg),
    )
