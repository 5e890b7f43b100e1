"""TE morphology-dependent resonances of a homogeneous dielectric sphere.

The radial TE partial wave u(r) obeys

    u'' + [k^2 eps(r) - nu(nu+1)/r^2] u = 0,

a Schrodinger equation with energy x^2 (x = k a) and effective potential
nu(nu+1)/rho^2 - x^2 (eps - 1), rho = r/a. Inside the sphere u is the Riccati
function psi_nu(n x rho); outside it is a standing wave a psi_nu(x rho) + b chi_nu(x rho).
A resonance is a quasi-bound level of the well behind the centrifugal barrier,
seen on the real x axis as a sharp peak of the interior intensity.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.signal import find_peaks

from . import numerics as nm
from .errors import DomainError, NonConverged

log = logging.getLogger(__name__)

DEFAULT_SAMPLES = 20000
PROMINENCE_FACTOR = 3.0
SHOOT_STEPS = 2000
SHOOT_SCAN_POINTS = 400


@dataclass(frozen=True)
class SphereSystem:
    n_sphere: float
    radius: float
    nu: int

    def __post_init__(self):
        if not self.n_sphere > 1.0:
            raise DomainError("sphere index must exceed 1")
        if not self.radius > 0:
            raise DomainError("radius must be positive")
        if self.nu < 1:
            raise DomainError("angular number must be >= 1")

    @property
    def centrifugal(self) -> float:
        return float(self.nu * (self.nu + 1))


@dataclass(frozen=True)
class ResonanceRecord:
    nu: int
    order: int
    x_res: float
    width: float
    q_factor: float
    enhancement: float


def effective_potential(sys: SphereSystem, x: float, r_over_a):
    """V_eff in units of 1/radius^2; the eigen-"energy" is x^2."""
    rho = np.asarray(r_over_a, dtype=float)
    if np.any(rho <= 0):
        raise DomainError("r/a must be positive")
    eps = np.where(rho <= 1.0, sys.n_sphere**2, 1.0)
    out = sys.centrifugal / rho**2 - x * x * (eps - 1.0)
    return float(out) if np.ndim(out) == 0 else out


def barrier_window(sys: SphereSystem) -> tuple[float, float]:
    """Size parameters for which x^2 lies between the well floor and the barrier top at r = a."""
    top = math.sqrt(sys.centrifugal)
    return top / sys.n_sphere, top


def _exterior_coefficients(nu: int, x, u, du_dx):
    """Split (u, du/dz) at the surface into a psi_nu(x) + b chi_nu(x)."""
    p, dp = nm.riccati_psi(nu, x)
    c, dc = nm.riccati_chi(nu, x)
    # psi' chi - psi chi' = 1
    a = du_dx * c - u * dc
    b = u * dp - du_dx * p
    return a, b


def interior_intensity(n_sphere: float, nu: int, x):
    """|c_int|^2 for index n_sphere >= 1; n_sphere = 1 (no sphere) gives 1 identically."""
    if n_sphere < 1.0:
        raise DomainError("index must be >= 1")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("size parameter must be positive")
    ps, dps = nm.riccati_psi(nu, n_sphere * x)
    a, b = _exterior_coefficients(nu, x, ps, n_sphere * dps)
    out = 1.0 / (a * a + b * b)
    return float(out) if np.ndim(out) == 0 else out


def te_response(sys: SphereSystem, x):
    """Interior intensity of the TE_nu partial wave per unit standing-wave drive."""
    return interior_intensity(sys.n_sphere, sys.nu, x)


def mode_order(nu: int, z_max: float) -> int:
    """1 + number of zeros of psi_nu on (0, z_max): radial maxima of the interior field."""
    if z_max <= nu:  # the first zero of j_nu lies above nu
        return 1
    z = np.arange(float(nu), z_max, 0.02)
    psi, _ = nm.riccati_psi(nu, np.append(z, z_max))
    s = np.sign(psi)
    return 1 + int(np.count_nonzero(s[:-1] * s[1:] < 0))


def _refine_max(f, lo: float, mid: float, hi: float) -> float:
    res = minimize_scalar(lambda t: -f(t), bracket=(lo, mid, hi), method="golden")
    return float(res.x)


def _crossing(f, level: float, x_grid, resp, start: int, stop: int, x_peak: float, step: int,
              tol_abs: float):
    """Walk the grid from the peak towards `stop`; bisect the first crossing below `level`."""
    j = start
    while j != stop:
        j += step
        if resp[j] < level:
            near = x_grid[j - step]
            if step < 0:
                near = min(near, x_peak)
                br = nm.Bracket.of(lambda t: f(t) - level, float(x_grid[j]), float(near))
            else:
                near = max(near, x_peak)
                br = nm.Bracket.of(lambda t: f(t) - level, float(near), float(x_grid[j]))
            return nm.find_root(lambda t: f(t) - level, br, tol_abs)
    return None


def find_resonances(sys: SphereSystem, x_lo: float, x_hi: float,
                    samples: int = DEFAULT_SAMPLES,
                    prominence_factor: float = PROMINENCE_FACTOR,
                    trace: list | None = None,
                    tol_abs: float = nm.ROOT_TOL) -> list[ResonanceRecord]:
    """Peaks of te_response on [x_lo, x_hi] clearing prominence_factor x median background.

    If `trace` is a list, the (x, response) scan is appended to it.
    """
    if not 0 < x_lo < x_hi:
        raise DomainError("need 0 < x_lo < x_hi")
    if samples < 100:
        raise DomainError("need at least 100 samples")
    f = lambda t: float(te_response(sys, t))
    xs = np.linspace(x_lo, x_hi, samples)
    resp = te_response(sys, xs)
    if trace is not None:
        trace.extend(zip(xs.tolist(), resp.tolist()))
    peaks, props = find_peaks(resp, prominence=prominence_factor * float(np.median(resp)))

    out = []
    for i, prom, lb, rb in zip(peaks, props["prominences"], props["left_bases"], props["right_bases"]):
        x_res = _refine_max(f, xs[i - 1], xs[i], xs[i + 1])
        peak = f(x_res)
        # half height when the peak falls that far inside its bases, else half prominence
        for level in (0.5 * peak, peak - 0.5 * prom):
            left = _crossing(f, level, xs, resp, i, lb, x_res, -1, tol_abs)
            right = _crossing(f, level, xs, resp, i, rb, x_res, +1, tol_abs)
            if left is not None and right is not None:
                break
        if left is None or right is None:
            log.warning("no width for peak near x=%g; skipped", x_res)
            continue
        width = right - left
        out.append(ResonanceRecord(
            nu=sys.nu,
            order=mode_order(sys.nu, sys.n_sphere * x_res),
            x_res=x_res, width=width, q_factor=x_res / width, enhancement=peak,
        ))
    return out


# -- quantum shape-resonance analogue --------------------------------------------

def _psi_series(nu: int, z):
    """psi_nu(z) and its derivative from the ascending series (small z only)."""
    z = np.asarray(z, dtype=float)
    lead = np.exp((nu + 1) * np.log(z) - np.sum(np.log(np.arange(1.0, 2 * nu + 2, 2.0))))
    term = np.ones_like(z)
    s, ds = np.zeros_like(z), np.zeros_like(z)
    for k in range(60):
        s = s + term
        ds = ds + term * (nu + 1 + 2 * k)
        term = term * (-0.5 * z * z) / ((k + 1) * (2 * nu + 2 * k + 3))
        if np.all(np.abs(term) <= 1e-18 * np.abs(s)):
            break
    return lead * s, lead * ds / z


def _shoot_response(n: float, nu: int, x, rho_start: float):
    """Interior intensity from RK4 on the radial equation through the sphere."""
    x = np.asarray(x, dtype=float)
    nx = n * x
    y0, dy0 = _psi_series(nu, nx * rho_start)
    cent = float(nu * (nu + 1))
    k2 = nx * nx
    rhs = lambda r, y, yp: (cent / (r * r) - k2) * y
    state = nm.integrate_radial(rhs, nm.OdeState(rho_start, y0, dy0 * nx), 1.0,
                                (1.0 - rho_start) / SHOOT_STEPS)
    a, b = _exterior_coefficients(nu, x, state.y, state.yp / x)
    return 1.0 / (a * a + b * b), a


@lru_cache(maxsize=64)
def _shape_levels(n: float, nu: int, max_order: int) -> tuple[tuple[int, float], ...]:
    lo_w, top = barrier_window(SphereSystem(n, 1.0, nu))
    x_lo, x_hi = lo_w, top + 3.0 * max_order
    rho_start = 0.2 * top / (n * x_hi)  # psi series converges fast for n x rho <= 0.2 top
    f = lambda t: float(_shoot_response(n, nu, t, rho_start)[0])

    xs = np.linspace(x_lo, x_hi, SHOOT_SCAN_POINTS)
    resp, a = _shoot_response(n, nu, xs, rho_start)
    # sampled maxima catch broad levels; sign changes of the psi-coefficient catch narrow ones
    cand = set(np.flatnonzero((resp[1:-1] > resp[:-2]) & (resp[1:-1] > resp[2:])) + 1)
    cand |= set(np.flatnonzero(np.sign(a[:-1]) * np.sign(a[1:]) < 0))
    levels: dict[int, float] = {}
    for i in sorted(cand):
        lo, hi = xs[max(i - 1, 0)], xs[min(i + 2, len(xs) - 1)]
        res = minimize_scalar(lambda t: -f(t), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * hi})
        x_pk = float(res.x)
        span = hi - lo
        if min(x_pk - lo, hi - x_pk) < 1e-6 * span:
            continue  # maximum sits on the window edge: not a peak here
        order = mode_order(nu, n * x_pk)
        if order not in levels or f(x_pk) > f(levels[order]):
            levels[order] = x_pk
    return tuple(sorted(levels.items()))


def shape_resonance_estimate(sys: SphereSystem, order: int) -> float:
    """Size parameter of the order-th quasi-bound level, by shooting through the well.

    The interior equation is integrated with RK4 from the regular series start
    and matched to the exterior standing wave at r = a; the level is where the
    interior amplitude is largest for fixed exterior drive.
    """
    if order < 1:
        raise DomainError("order must be >= 1")
    levels = dict(_shape_levels(sys.n_sphere, sys.nu, max(order, 3)))
    if order not in levels:
        raise NonConverged(f"no level of order {order} found for nu={sys.nu}")
    return levels[order]
