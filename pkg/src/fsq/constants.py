"""CODATA-2018 constants used throughout the package."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class PhysicalConstants:
    c: float = 299792458.0
    hbar: float = 1.054571817e-34
    e_charge: float = 1.602176634e-19
    eps0: float = 8.8541878128e-12

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def mu0(self) -> float:
        # derived, so that c^2 mu0 eps0 = 1 holds to rounding
        return 1.0 / (self.eps0 * self.c**2)

    @property
    def z0(self) -> float:
        return math.sqrt(self.mu0 / self.eps0)


CODATA2018 = PhysicalConstants()

C = CODATA2018.c
HBAR = CODATA2018.hbar
Z0 = CODATA2018.z0

ELECTRON_MASS = 9.1093837015e-31
