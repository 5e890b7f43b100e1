"""Per-cell quantization bookkeeping for stationary TE-TM states.

Covers the angular-momentum/energy ratio of circular modes, the half-guide-
wavelength standing-wave cell with its +hbar/2, -hbar/2 magnetic half-cells,
the fine-structure constant written through modal impedances, and the
Abraham/Minkowski momentum pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import CODATA2018, PhysicalConstants
from .errors import DomainError, NotPropagating
from .numerics import ROOT_TOL
from .waveguide import Geometry, ModeIndex, Polarization, Regime, dispersion


@dataclass(frozen=True)
class StationaryCell:
    mode: ModeIndex
    omega: float
    lambda_g: float
    cell_length: float
    e_nodes: tuple[float, float]
    b_node: float
    energy: float
    half_quanta: tuple[float, float]
    net_angular_momentum: float


@dataclass(frozen=True)
class FieldSample:
    z: float
    e_amp: float
    b_amp: float


@dataclass(frozen=True)
class MomentumTriple:
    p_minkowski: float
    p_abraham: float
    p_free: float


def angular_momentum_energy_ratio(m: int, omega: float) -> float:
    if not omega > 0:
        raise DomainError("omega must be positive")
    return -m / omega


def angular_momentum_per_cell(m: int, pc: PhysicalConstants = CODATA2018) -> float:
    return -m * pc.hbar


def cell_from_guide_wavelength(mode: ModeIndex, omega: float, lambda_g: float,
                               pc: PhysicalConstants = CODATA2018) -> StationaryCell:
    half = 0.5 * pc.hbar
    up, down = +half, -half
    return StationaryCell(
        mode=mode,
        omega=omega,
        lambda_g=lambda_g,
        cell_length=lambda_g / 2,
        e_nodes=(0.0, lambda_g / 2),
        b_node=lambda_g / 4,
        energy=pc.hbar * omega,
        half_quanta=(up, down),
        net_angular_momentum=up + down,
    )


def build_cell(mode: ModeIndex, geom: Geometry, omega: float,
               pc: PhysicalConstants = CODATA2018, tol_abs: float = ROOT_TOL) -> StationaryCell:
    point = dispersion(geom, mode, omega, tol_abs)
    if point.regime is not Regime.PROPAGATING:
        raise NotPropagating(f"{mode.label} is {point.regime.value.lower()} at omega={omega:g} rad/s")
    return cell_from_guide_wavelength(mode, omega, point.lambda_g, pc)


def cell_field_profile(cell: StationaryCell, samples: int) -> list[FieldSample]:
    if samples < 3:
        raise DomainError("need at least 3 samples")
    z = np.linspace(0.0, cell.cell_length, samples)
    phase = np.pi * z / cell.cell_length
    e = np.sin(phase)
    b = np.cos(phase)
    # sin(pi) and cos(pi/2) are ~1e-16, not 0; the nodes are exact by construction
    e[0] = e[-1] = 0.0
    if samples % 2 == 1:
        b[samples // 2] = 0.0
    return [FieldSample(float(zi), float(ei), float(bi)) for zi, ei, bi in zip(z, e, b)]


def fine_structure_constant(pc: PhysicalConstants = CODATA2018) -> float:
    return pc.e_charge**2 / (4 * math.pi * pc.eps0 * pc.c * pc.hbar)


def modal_fine_structure(pc: PhysicalConstants, kg_over_k0: float, pol: Polarization) -> float:
    """e^2 Z_n / (4 pi hbar) with Z_n the TE or TM modal impedance."""
    if not 0.0 < kg_over_k0 <= 1.0:
        raise DomainError("kg/k0 must lie in (0, 1]")
    if Polarization(pol) is Polarization.TM:
        z = kg_over_k0 * pc.z0
    else:
        z = pc.z0 / kg_over_k0
    return z * pc.e_charge**2 / (4 * math.pi * pc.hbar)


def photon_momentum(pc: PhysicalConstants, omega: float, n_phase: float,
                    n_group: float) -> MomentumTriple:
    if not omega > 0:
        raise DomainError("omega must be positive")
    if n_phase < 1 or n_group < 1:
        raise DomainError("phase and group indices must be >= 1")
    p_free = pc.hbar * omega / pc.c
    return MomentumTriple(p_free * n_phase, p_free / n_group, p_free)
