"""Shared numerical kernel: bracketing, root finding, RK4, special functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize, special

from .errors import DomainError, MaxIterations, NoSignChange, NonFinite

ROOT_TOL = 1e-12
EIGEN_TOL = 1e-10
MAX_ITER = 200
RK4_DEFAULT_STEPS = 20000


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")

    @classmethod
    def of(cls, f: Callable[[float], float], lo: float, hi: float) -> "Bracket":
        return cls(lo, hi, float(f(lo)), float(f(hi)))

    @property
    def encloses_sign_change(self) -> bool:
        return self.f_lo * self.f_hi <= 0.0


@dataclass(frozen=True)
class OdeState:
    """Point of a second-order radial integration.

    ``y`` and ``yp`` may be numpy arrays, in which case a whole family of
    equations (one per array element) is advanced in lock step.
    """

    r: float
    y: float | np.ndarray
    yp: float | np.ndarray


def find_root(f: Callable[[float], float], bracket: Bracket,
              tol_abs: float = ROOT_TOL, max_iter: int = MAX_ITER) -> float:
    """Brent root of ``f`` inside ``bracket``."""
    if tol_abs <= 0:
        raise ValueError("tol_abs must be positive")
    if not bracket.encloses_sign_change or math.isnan(bracket.f_lo * bracket.f_hi):
        raise NoSignChange(
            f"f({bracket.lo})={bracket.f_lo} and f({bracket.hi})={bracket.f_hi} have the same sign")
    if bracket.f_lo == 0.0:
        return bracket.lo
    if bracket.f_hi == 0.0:
        return bracket.hi
    try:
        root, info = optimize.brentq(f, bracket.lo, bracket.hi, xtol=tol_abs,
                                     maxiter=max_iter, full_output=True, disp=False)
    except ValueError as exc:
        # brentq re-evaluates the end points; a noisy f can flip a sign
        raise NoSignChange(str(exc)) from exc
    if not info.converged:
        raise MaxIterations(f"no convergence after {info.iterations} iterations")
    return float(root)


def bracket_scan(f: Callable, lo: float, hi: float, n: int,
                 vectorized: bool = False) -> list[Bracket]:
    """Every cell of the uniform ``n``-point grid on [lo, hi] where f changes sign.

    A grid value that is exactly zero is attributed to the cell on its left,
    so a root sitting on a node yields a single bracket.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    if n < 2:
        raise ValueError("need n >= 2")
    xs = np.linspace(lo, hi, n)
    if vectorized:
        fs = np.asarray(f(xs), dtype=float)
    else:
        fs = np.array([f(x) for x in xs], dtype=float)
    left, right = fs[:-1], fs[1:]
    hit = ((left < 0) & (right >= 0)) | ((left > 0) & (right <= 0))
    return [Bracket(float(xs[i]), float(xs[i + 1]), float(fs[i]), float(fs[i + 1]))
            for i in np.flatnonzero(hit)]


def integrate_radial(rhs: Callable, start: OdeState, r_end: float,
                     step: float | None = None) -> OdeState:
    """Advance y'' = rhs(r, y, y') from ``start`` to ``r_end`` with classical RK4.

    The step is fixed; the last one is shortened to land exactly on r_end.
    Raises NonFinite when the solution overflows.
    """
    r0 = float(start.r)
    if not r0 < r_end:
        raise ValueError("integration needs start.r < r_end")
    if step is None:
        step = (r_end - r0) / RK4_DEFAULT_STEPS
    if step <= 0:
        raise ValueError("step must be positive")

    span = r_end - r0
    n_full = int(math.floor(span / step))
    rem = span - n_full * step
    if rem <= 1e-12 * span:
        rem = 0.0
    n_steps = n_full + (1 if rem > 0.0 else 0)

    y, yp = start.y, start.yp
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps):
            r = r0 + i * step
            h = r_end - r if i == n_steps - 1 else step
            k1y, k1p = yp, rhs(r, y, yp)
            hh = 0.5 * h
            k2y = yp + hh * k1p
            k2p = rhs(r + hh, y + hh * k1y, k2y)
            k3y = yp + hh * k2p
            k3p = rhs(r + hh, y + hh * k2y, k3y)
            k4y = yp + h * k3p
            k4p = rhs(r + h, y + h * k3y, k4y)
            y = y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            yp = yp + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
            if i % 512 == 0 and not _all_finite(y, yp):
                raise NonFinite(f"solution overflowed near r={r}")
    if not _all_finite(y, yp):
        raise NonFinite(f"solution overflowed before r={r_end}")
    return OdeState(float(r_end), y, yp)


def _all_finite(*values) -> bool:
    return all(bool(np.all(np.isfinite(v))) for v in values)


def central_derivative(f: Callable[[float], float], x: float, h: float) -> float:
    if h <= 0:
        raise ValueError("h must be positive")
    return (f(x + h) - f(x - h)) / (2.0 * h)


# -- special functions -------------------------------------------------------
# Thin wrappers over scipy.special. Scalars in, floats out; arrays pass through.

def _out(v):
    return float(v) if np.ndim(v) == 0 else v


def bessel_j(n: int, x):
    return _out(special.jv(n, x))


def bessel_j_prime(n: int, x):
    return _out(special.jvp(n, x))


def bessel_k_mod(n: int, x):
    if np.any(np.asarray(x) <= 0):
        raise DomainError("modified Bessel K needs x > 0")
    return _out(special.kv(n, x))


def bessel_k_mod_scaled(n: int, x):
    """exp(x) * K_n(x); avoids underflow for large arguments."""
    if np.any(np.asarray(x) <= 0):
        raise DomainError("modified Bessel K needs x > 0")
    return _out(special.kve(n, x))


def _psi_pos(nu: int, x):
    return np.sqrt(0.5 * np.pi * x) * special.jv(nu + 0.5, x)


def _chi_pos(nu: int, x):
    return -np.sqrt(0.5 * np.pi * x) * special.yv(nu + 0.5, x)


def riccati_psi(nu: int, x):
    """psi_nu(x) = x j_nu(x) and its derivative, for any real x."""
    if nu < 0:
        raise DomainError("riccati_psi needs nu >= 0")
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    safe = np.where(ax == 0.0, 1.0, ax)
    val = _psi_pos(nu, safe)
    der = _psi_pos(nu - 1, safe) - nu / safe * val
    # psi_nu(-x) = (-1)^(nu+1) psi_nu(x); the derivative is even/odd the other way
    sign = np.where(x < 0, (-1.0) ** (nu + 1), 1.0)
    val = sign * val
    der = np.where(x < 0, -sign * der, der)
    val = np.where(ax == 0.0, 0.0, val)
    der = np.where(ax == 0.0, 1.0 if nu == 0 else 0.0, der)
    return _out(val), _out(der)


def riccati_chi(nu: int, x):
    """chi_nu(x) = -x y_nu(x) and its derivative, for x > 0."""
    if nu < 0:
        raise DomainError("riccati_chi needs nu >= 0")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("riccati_chi needs x > 0")
    val = _chi_pos(nu, x)
    der = _chi_pos(nu - 1, x) - nu / x * val
    return _out(val), _out(der)
