"""LP-mode eigenvalue problem of a circular fiber with radial index profile n(r).

With F_hat = sqrt(r) F the radial equation becomes the 1-D Schrodinger form

    F_hat'' + [E - V(r)] F_hat = 0,
    E = n_max^2 k0^2 - beta^2,
    V(r) = (n_max^2 - n(r)^2) k0^2 + (l^2 - 1/4) / r^2,

so guided modes are the bound states 0 < E < V_inf = (n_max^2 - n_clad^2) k0^2.
Step profiles are solved from the Bessel characteristic equation; arbitrary
profiles by shooting on the transformed equation.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import special

from . import numerics as nm
from .errors import InvalidProfile, DomainError, MaxIterations, NoSignChange
from .waveguide import bessel_root_table

log = logging.getLogger(__name__)

STEP_SCAN_POINTS = 2000
SHOOT_SCAN_POINTS = 300
SHOOT_R_MIN = 1e-6          # in units of the core radius
SHOOT_CORE_STEPS = 2000     # RK4 steps over [0.1, 1] core radii
SHOOT_NEAR_SEGMENTS = 100   # over [r_min, 0.1]
SHOOT_SEGMENT_STEPS = 4
SHOOT_MATCH = 1.5           # matching radius, in core radii
SHOOT_CLAD_STEPS = 500
_EDGE = 1e-10               # fraction of the b-window kept off each end


class Classification(str, Enum):
    GUIDED = "Guided"
    LEAKY_TUNNEL = "LeakyTunnel"
    LEAKY_REFRACT = "LeakyRefract"


@dataclass(frozen=True)
class StepProfile:
    n1: float
    n2: float
    core_radius: float

    def __post_init__(self):
        if not self.n1 > self.n2 >= 1.0:
            raise InvalidProfile(f"step profile needs n1 > n2 >= 1, got n1={self.n1}, n2={self.n2}")
        if not self.core_radius > 0:
            raise InvalidProfile("core radius must be positive")

    kind = "step"

    @property
    def n_max(self) -> float:
        return self.n1

    @property
    def n_clad(self) -> float:
        return self.n2

    @property
    def r_tail(self) -> float:
        return self.core_radius

    def index(self, r):
        return np.where(np.asarray(r) <= self.core_radius, self.n1, self.n2)


@dataclass(frozen=True)
class TabulatedProfile:
    """n(r) by linear interpolation; constant n_values[-1] beyond r_grid[-1]."""

    r_grid: tuple[float, ...]
    n_values: tuple[float, ...]

    def __post_init__(self):
        r = np.asarray(self.r_grid, dtype=float)
        n = np.asarray(self.n_values, dtype=float)
        if r.ndim != 1 or r.shape != n.shape or r.size < 2:
            raise InvalidProfile("need matching 1-D r and n columns with at least two rows")
        if r[0] < 0 or np.any(np.diff(r) <= 0):
            raise InvalidProfile("r must start at >= 0 and increase strictly")
        if np.any(n < 1.0):
            raise InvalidProfile("refractive index below 1")
        if not n.max() > n[-1]:
            raise InvalidProfile("profile has no index excess over the cladding; nothing is guided")
        object.__setattr__(self, "r_grid", tuple(float(v) for v in r))
        object.__setattr__(self, "n_values", tuple(float(v) for v in n))

    kind = "tabulated"

    @property
    def n_max(self) -> float:
        return max(self.n_values)

    @property
    def n_clad(self) -> float:
        return self.n_values[-1]

    @property
    def r_tail(self) -> float:
        return self.r_grid[-1]

    @cached_property
    def _arrays(self):
        return np.asarray(self.r_grid), np.asarray(self.n_values)

    def index(self, r):
        return np.interp(r, *self._arrays)

    @classmethod
    def from_csv(cls, path: str | Path) -> "TabulatedProfile":
        """Two columns, r in meters and n; a non-numeric first row is taken as a header."""
        rows = []
        with open(path, newline="") as fh:
            for i, row in enumerate(csv.reader(fh)):
                if not row or not "".join(row).strip():
                    continue
                try:
                    rows.append((float(row[0]), float(row[1])))
                except (ValueError, IndexError):
                    if i == 0:
                        continue
                    raise InvalidProfile(f"{path}: bad row {i + 1}: {row!r}")
        if not rows:
            raise InvalidProfile(f"{path}: no data rows")
        r, n = zip(*rows)
        return cls(tuple(r), tuple(n))


RadialProfile = StepProfile | TabulatedProfile


@dataclass(frozen=True)
class PotentialView:
    E_val: float
    V_of_r: Callable
    V_inf: float
    azimuthal_v: int
    r_scale: float


@dataclass(frozen=True)
class LPMode:
    l: int
    radial_order: int
    beta: float
    E_val: float
    classification: Classification
    u: float
    w: float

    @property
    def label(self) -> str:
        return f"LP{self.l}{self.radial_order}"


def v_number(profile: RadialProfile, k0: float) -> float:
    return k0 * profile.r_tail * math.sqrt(profile.n_max**2 - profile.n_clad**2)


def okoshi_transform(profile: RadialProfile, v: int, k0: float, beta: float) -> PotentialView:
    if not k0 > 0:
        raise DomainError("k0 must be positive")
    nmax2 = profile.n_max**2
    centrifugal = v * v - 0.25

    def V(r):
        r = np.asarray(r, dtype=float)
        out = (nmax2 - profile.index(r) ** 2) * k0 * k0 + centrifugal / (r * r)
        return float(out) if out.ndim == 0 else out

    return PotentialView(
        E_val=nmax2 * k0 * k0 - beta * beta,
        V_of_r=V,
        V_inf=(nmax2 - profile.n_clad**2) * k0 * k0,
        azimuthal_v=v,
        r_scale=profile.r_tail,
    )


def classify_solution(view: PotentialView, E_val: float) -> Classification:
    """Guided if 0 < E < V_inf; above V_inf, tunnelling leak if a barrier separates
    an inner allowed region from infinity, refraction leak otherwise."""
    if E_val <= 0:
        raise DomainError("E <= 0 (beta above n_max k0) admits no field solution")
    if E_val < view.V_inf:
        return Classification.GUIDED
    a = view.r_scale
    r = np.concatenate([np.geomspace(1e-6 * a, a, 4000), a * (1 + np.geomspace(1e-9, 1.0, 200))])
    allowed = view.V_of_r(r) < E_val
    first = np.argmax(allowed)
    if allowed[first] and not np.all(allowed[first:]):
        return Classification.LEAKY_TUNNEL
    return Classification.LEAKY_REFRACT


def asymptotic_fields(l: int, k: float, r_grid) -> list[float]:
    """Far-field form sin(kr - l pi/2)/r of the regular radial solution."""
    if not k > 0:
        raise DomainError("k must be positive")
    r = np.asarray(r_grid, dtype=float)
    if np.any(r <= 0):
        raise DomainError("radii must be positive")
    return list(np.sin(k * r - 0.5 * l * np.pi) / r)


# -- step-index closed form ------------------------------------------------------

def _lp_characteristic(l: int, V: float, b):
    """u J_{l-1}(u) + w J_l(u) K_{l-1}(w)/K_l(w); zero at LP_l modes, free of poles."""
    b = np.asarray(b, dtype=float)
    u = V * np.sqrt(1.0 - b)
    w = V * np.sqrt(b)
    kratio = special.kve(l - 1, w) / special.kve(l, w)
    return u * special.jv(l - 1, u) + w * special.jv(l, u) * kratio


def expected_mode_count(l: int, V: float) -> int:
    """Number of LP_l modes above cutoff: zeros of J_{l-1} below V (LP_0m: 0 and zeros of J_1)."""
    order = abs(l - 1)
    count = 4
    while True:
        zeros = bessel_root_table(order, False, count)
        if zeros[-1] > V:
            n = sum(1 for z in zeros if z < V)
            return n + (1 if l == 0 else 0)
        count *= 2


def lp_solve_step(profile: StepProfile, l: int, k0: float,
                  scan_points: int = STEP_SCAN_POINTS,
                  tol_abs: float = nm.ROOT_TOL) -> list[LPMode]:
    if not isinstance(profile, StepProfile):
        raise InvalidProfile("lp_solve_step needs a step profile")
    if l < 0:
        raise DomainError("azimuthal order must be >= 0")
    if not k0 > 0:
        raise DomainError("k0 must be positive")
    V = v_number(profile, k0)
    f = lambda b: _lp_characteristic(l, V, b)
    expected = expected_mode_count(l, V)

    n = scan_points
    for _ in range(6):
        brackets = nm.bracket_scan(f, _EDGE, 1.0 - _EDGE, n, vectorized=True)
        if len(brackets) >= expected:
            break
        n *= 2  # root-separation guard: a cell may hold two roots
    roots_b = sorted((nm.find_root(lambda x: float(f(x)), br, tol_abs) for br in brackets), reverse=True)

    a = profile.core_radius
    lo2, hi2 = (profile.n2 * k0) ** 2, (profile.n1 * k0) ** 2
    modes = []
    for order, b in enumerate(roots_b, start=1):
        beta = math.sqrt(lo2 + b * (hi2 - lo2))
        modes.append(LPMode(
            l=l, radial_order=order, beta=beta,
            E_val=hi2 - beta * beta,
            classification=Classification.GUIDED,
            u=V * math.sqrt(1.0 - b), w=V * math.sqrt(b),
        ))
    return modes


def lp_solve_all_step(profile: StepProfile, k0: float, **kw) -> list[LPMode]:
    """Every guided LP mode, grouped by l then radial order."""
    out = []
    l = 0
    while True:
        modes = lp_solve_step(profile, l, k0, **kw)
        if not modes:
            return out
        out.extend(modes)
        l += 1


# -- shooting on the transformed equation ------------------------------------------

def _schedule(profile: RadialProfile, extra=()) -> list[tuple[float, float, float]]:
    """RK4 segments (lo, hi, step) in units of r_tail, from r_min to the matching radius.

    Geometric segments near the origin keep h/r small where the centrifugal term
    is singular; tabulation nodes are segment ends so kinks fall on steps.
    """
    stops = np.geomspace(SHOOT_R_MIN, 0.1, SHOOT_NEAR_SEGMENTS + 1)
    nodes = [1.0, SHOOT_MATCH]
    if isinstance(profile, TabulatedProfile):
        nodes += [r / profile.r_tail for r in profile.r_grid if 0.1 < r / profile.r_tail < 1.0]
    stops = np.unique(np.concatenate([stops, nodes, np.asarray(extra, dtype=float)]))
    h_core = 0.9 / SHOOT_CORE_STEPS
    h_clad = (SHOOT_MATCH - 1.0) / SHOOT_CLAD_STEPS
    out = []
    for lo, hi in zip(stops[:-1], stops[1:]):
        if hi <= 0.1 + 1e-15:
            h = (hi - lo) / SHOOT_SEGMENT_STEPS
        else:
            h = min(h_core if hi <= 1.0 else h_clad, hi - lo)
        out.append((float(lo), float(hi), float(h)))
    return out


def _shoot(profile: RadialProfile, l: int, k0: float, beta):
    """Integrate F_hat out to the matching radius; returns the normalized Wronskian
    against the decaying cladding solution sqrt(r) K_l(w r). Zero at eigenvalues."""
    a = profile.r_tail
    beta = np.asarray(beta, dtype=float)
    B = (a * beta) ** 2
    ak2 = (a * k0) ** 2
    cent = l * l - 0.25

    if isinstance(profile, StepProfile):
        p_core, p_clad = ak2 * profile.n1**2, ak2 * profile.n2**2
        rhs_core = lambda r, y, yp: (cent / (r * r) + B - p_core) * y
        rhs_clad = lambda r, y, yp: (cent / (r * r) + B - p_clad) * y
    else:
        rhs_core = lambda r, y, yp: (cent / (r * r) + B - ak2 * profile.index(r * a) ** 2) * y
        rhs_clad = rhs_core

    # regular start r^(l + 1/2), scaled to unit value at r_min
    state = nm.OdeState(SHOOT_R_MIN, np.ones_like(B), np.full_like(B, (l + 0.5) / SHOOT_R_MIN))
    for lo, hi, h in _schedule(profile):
        rhs = rhs_core if hi <= 1.0 else rhs_clad
        state = nm.integrate_radial(rhs, state, hi, h)
        if hi <= 0.1:
            scale = np.maximum(np.abs(state.y), np.abs(state.yp) * hi)
            state = nm.OdeState(state.r, state.y / scale, state.yp / scale)

    rho = SHOOT_MATCH
    w = np.sqrt(np.maximum(B - ak2 * profile.n_clad**2, 1e-300))
    z = w * rho
    kl = special.kve(l, z)
    dk = -0.5 * (special.kve(l - 1, z) + special.kve(l + 1, z))
    logd = 0.5 / rho + w * dk / kl  # (sqrt(r) K_l(w r))' / (sqrt(r) K_l(w r))
    y, yp = state.y, state.yp
    return (yp - logd * y) / (np.hypot(y, yp) * np.hypot(1.0, logd))


def lp_solve_shooting(profile: RadialProfile, l: int, k0: float,
                      beta_lo: float | None = None, beta_hi: float | None = None,
                      scan_points: int = SHOOT_SCAN_POINTS,
                      tol_abs: float = nm.ROOT_TOL) -> list[LPMode]:
    """Guided LP_l modes with beta in [beta_lo, beta_hi] (default: whole guided window).

    Radial orders count down from n_max k0, whatever the requested window.
    """
    if l < 0:
        raise DomainError("azimuthal order must be >= 0")
    if not k0 > 0:
        raise DomainError("k0 must be positive")
    b_min, b_max = profile.n_clad * k0, profile.n_max * k0
    lo = b_min if beta_lo is None else max(beta_lo, b_min)
    hi = b_max if beta_hi is None else min(beta_hi, b_max)
    if not lo < hi:
        raise DomainError("need beta_lo < beta_hi inside the guided window")

    # scan uniform in beta^2 over the whole window so that radial orders are absolute
    lo2, hi2 = b_min**2, b_max**2
    t = np.linspace(_EDGE, 1.0 - _EDGE, scan_points)
    betas = np.sqrt(lo2 + t * (hi2 - lo2))
    m = _shoot(profile, l, k0, betas)
    sign_change = ((m[:-1] < 0) & (m[1:] >= 0)) | ((m[:-1] > 0) & (m[1:] <= 0))

    scalar = lambda b: float(_shoot(profile, l, k0, b))
    found = []
    for i in np.flatnonzero(sign_change):
        br = nm.Bracket(float(betas[i]), float(betas[i + 1]), float(m[i]), float(m[i + 1]))
        try:
            found.append(nm.find_root(scalar, br, tol_abs))
        except (MaxIterations, NoSignChange) as exc:
            log.warning("LP%d candidate in [%g, %g] skipped: %s", l, br.lo, br.hi, exc)
    found.sort(reverse=True)

    a = profile.r_tail
    view = okoshi_transform(profile, l, k0, 0.0)
    modes = []
    for order, beta in enumerate(found, start=1):
        if not lo <= beta <= hi:
            continue
        E = profile.n_max**2 * k0 * k0 - beta * beta
        modes.append(LPMode(
            l=l, radial_order=order, beta=beta, E_val=E,
            classification=classify_solution(view, E),
            u=a * math.sqrt(max(E, 0.0)),
            w=a * math.sqrt(max((beta - b_min) * (beta + b_min), 0.0)),
        ))
    return modes


def lp_solve_all_shooting(profile: RadialProfile, k0: float, **kw) -> list[LPMode]:
    out = []
    l = 0
    while True:
        modes = lp_solve_shooting(profile, l, k0, **kw)
        if not modes:
            return out
        out.extend(modes)
        l += 1


def radial_field(profile: RadialProfile, l: int, k0: float, beta: float, r) -> np.ndarray:
    """Samples of F_hat = sqrt(r) F at increasing radii r (meters), scaled to max |F_hat| = 1.

    Uses the same RK4 march as the shooting solver; r must lie in (r_min, r_match].
    Near-origin rescaling is skipped, so very large l may overflow.
    """
    a = profile.r_tail
    rho = np.asarray(r, dtype=float) / a
    if np.any(np.diff(rho) <= 0) or rho[0] <= SHOOT_R_MIN or rho[-1] > SHOOT_MATCH:
        raise DomainError("radii must increase and exceed the shooting start")
    B = (a * beta) ** 2
    ak2 = (a * k0) ** 2
    cent = l * l - 0.25
    rhs = lambda x, y, yp: (cent / (x * x) + B - ak2 * float(profile.index(x * a)) ** 2) * y
    if isinstance(profile, StepProfile):
        p_core, p_clad = ak2 * profile.n1**2, ak2 * profile.n2**2
        rhs = lambda x, y, yp: (cent / (x * x) + B - (p_core if x <= 1.0 else p_clad)) * y

    state = nm.OdeState(SHOOT_R_MIN, 1.0, (l + 0.5) / SHOOT_R_MIN)
    out = np.empty_like(rho)
    j = 0
    for lo, hi, h in _schedule(profile, rho):
        if hi > rho[-1]:
            break
        state = nm.integrate_radial(rhs, state, hi, h)
        while j < rho.size and rho[j] == hi:
            out[j] = state.y
            j += 1
    return out / np.max(np.abs(out))
