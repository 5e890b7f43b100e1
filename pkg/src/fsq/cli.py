"""Command-line front end: every solver as a subcommand with JSON or CSV output.

Exit status is 0 on success, 1 when a solver rejects its input (the error
class name goes to standard error) and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass
from functools import lru_cache

from . import debroglie, fiber, mdr, quanta, waveguide, wavepacket
from .constants import C, ELECTRON_MASS
from .errors import FSQError, IoError
from .numerics import ROOT_TOL
from .output import OutputSpec, emit

TOL_ENV = "FSQ_TOL"


@dataclass(frozen=True)
class AlphaRecord:
    alpha: float
    inverse_alpha: float


@dataclass(frozen=True)
class ModalAlphaRecord:
    polarization: waveguide.Polarization
    kg_over_k0: float
    alpha_modal: float


@dataclass(frozen=True)
class TracePoint:
    x: float
    response: float


# -- argument types ----------------------------------------------------------------

def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return v


def _nonneg(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return v


def _precision(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 6 <= v <= 17:
        raise argparse.ArgumentTypeError("precision must lie in [6, 17]")
    return v


def _mode(text: str) -> waveguide.ModeIndex:
    try:
        return waveguide.ModeIndex.parse(text)
    except FSQError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return lo, hi


# -- parser ------------------------------------------------------------------------

def _add_geometry(p: argparse.ArgumentParser) -> None:
    p.add_argument("--geometry", choices=("rectangular", "circular"), required=True)
    p.add_argument("--a", type=_positive, help="rectangular broad side [m]")
    p.add_argument("--b", type=_positive, help="rectangular narrow side [m]")
    p.add_argument("--radius", type=_positive, help="circular radius [m]")


def _add_frequency(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--freq", type=_positive, help="frequency [Hz]")
    g.add_argument("--omega", type=_positive, help="angular frequency [rad/s]")


@lru_cache(maxsize=1)
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fsq", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", help="write to this file instead of standard output")
    parser.add_argument("--precision", type=_precision, default=12, help="significant digits (6-17)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dispersion", help="dispersion point (or sweep) of a hollow-guide mode")
    _add_geometry(p)
    p.add_argument("--mode", type=_mode, required=True, help="e.g. TE11, TM01, TE1,12")
    _add_frequency(p)
    p.add_argument("--sweep-to", type=_positive, help="sweep up to this frequency [Hz]")
    p.add_argument("--samples", type=int, default=101)

    p = sub.add_parser("modes", help="lowest-cutoff mode table")
    _add_geometry(p)
    p.add_argument("--count", type=int, default=10)

    q = sub.add_parser("quanta", help="per-cell quantization")
    qs = q.add_subparsers(dest="action", required=True)
    p = qs.add_parser("cell", help="stationary TE/TM cell")
    _add_geometry(p)
    p.add_argument("--mode", type=_mode, required=True)
    _add_frequency(p)
    p.add_argument("--field-samples", type=int, help="emit the E/B profile along the cell instead")
    p = qs.add_parser("alpha", help="fine-structure constant, optionally through a modal impedance")
    p.add_argument("--kg-over-k0", type=_positive)
    p.add_argument("--polarization", choices=("TE", "TM"), default="TM")
    p = qs.add_parser("momentum", help="Minkowski/Abraham photon momenta")
    _add_frequency(p)
    p.add_argument("--n-phase", type=float, default=1.0)
    p.add_argument("--n-group", type=float, default=1.0)

    k = sub.add_parser("packet", help="Gaussian packets")
    ks = k.add_subparsers(dest="action", required=True)
    p = ks.add_parser("equiv", help="equivalent guided mode of a narrowband packet")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--k0", type=_positive, help="central wavenumber [rad/m]")
    g.add_argument("--wavelength", type=_positive, help="central wavelength [m]")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--q", type=_positive, help="quality factor k0/delta_k")
    g.add_argument("--delta-k", type=_positive, help="wavenumber half-spread [rad/m]")
    p.add_argument("--amplitude", type=float, default=1.0)

    p = sub.add_parser("debroglie", help="particle state as a cutoff-mode wave")
    p.add_argument("--mass", type=_nonneg, default=ELECTRON_MASS, help="rest mass [kg] (default electron)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--velocity", type=_nonneg, nargs="+", help="speed(s) [m/s]")
    g.add_argument("--beta", type=_nonneg, nargs="+", help="speed(s) as a fraction of c")
    g.add_argument("--k", type=_positive, nargs="+", help="guide wavenumber(s) [rad/m]")
    g.add_argument("--analogy", action="store_true", help="Compton cutoff only")

    f = sub.add_parser("fiber", help="LP modes of a circular fiber")
    fs = f.add_subparsers(dest="action", required=True)
    p = fs.add_parser("solve")
    p.add_argument("--profile", choices=("step", "tabulated"), required=True)
    p.add_argument("--n1", type=_positive)
    p.add_argument("--n2", type=_positive)
    p.add_argument("--core-radius", type=_positive)
    p.add_argument("--profile-csv", help="two columns: r [m], n")
    p.add_argument("--wavelength", type=_positive, required=True)
    p.add_argument("--l", type=int, help="azimuthal order (default: all guided)")
    p.add_argument("--method", choices=("analytic", "shooting"))

    m = sub.add_parser("mdr", help="dielectric-sphere resonances")
    ms = m.add_subparsers(dest="action", required=True)
    p = ms.add_parser("scan")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--index", type=float, required=True)
    p.add_argument("--x-range", type=_range, required=True, metavar="LO:HI")
    p.add_argument("--samples", type=int, default=mdr.DEFAULT_SAMPLES)
    p.add_argument("--prominence", type=_positive, default=mdr.PROMINENCE_FACTOR,
                   help="threshold as a multiple of the median response")
    p.add_argument("--trace", help="also write the (x, response) scan to this CSV file")
    return parser


# -- commands ----------------------------------------------------------------------

def _geometry(parser, args) -> waveguide.Geometry:
    if args.geometry == "rectangular":
        if args.a is None or args.b is None:
            parser.error("rectangular geometry needs --a and --b")
        return waveguide.Rectangular(args.a, args.b)
    if args.radius is None:
        parser.error("circular geometry needs --radius")
    return waveguide.Circular(args.radius)


def _omega(args) -> float:
    return args.omega if args.omega is not None else 2 * math.pi * args.freq


def _cmd_dispersion(parser, args, tol):
    geom = _geometry(parser, args)
    omega = _omega(args)
    if args.sweep_to is None:
        return waveguide.dispersion(geom, args.mode, omega, tol), None
    pts = waveguide.dispersion_sweep(geom, args.mode, omega, 2 * math.pi * args.sweep_to, args.samples, tol)
    return pts, waveguide.DispersionPoint


def _cmd_modes(parser, args, tol):
    return waveguide.cutoff_table(_geometry(parser, args), args.count, tol_abs=tol), waveguide.CutoffEntry


def _cmd_quanta(parser, args, tol):
    if args.action == "cell":
        cell = quanta.build_cell(args.mode, _geometry(parser, args), _omega(args), tol_abs=tol)
        if args.field_samples is None:
            return cell, None
        return quanta.cell_field_profile(cell, args.field_samples), quanta.FieldSample
    if args.action == "alpha":
        if args.kg_over_k0 is None:
            a = quanta.fine_structure_constant()
            return AlphaRecord(a, 1.0 / a), None
        pol = waveguide.Polarization(args.polarization)
        a = quanta.modal_fine_structure(quanta.CODATA2018, args.kg_over_k0, pol)
        return ModalAlphaRecord(pol, args.kg_over_k0, a), None
    return quanta.photon_momentum(quanta.CODATA2018, _omega(args), args.n_phase, args.n_group), None


def _cmd_packet(parser, args, tol):
    k0 = args.k0 if args.k0 is not None else 2 * math.pi / args.wavelength
    if args.q is not None:
        p = wavepacket.GaussianPacket.from_quality(k0, args.q, args.amplitude)
    else:
        p = wavepacket.GaussianPacket.from_offset(k0, args.delta_k, args.amplitude)
    return wavepacket.indistinguishability_report(p), None


def _cmd_debroglie(parser, args, tol):
    if args.analogy:
        return debroglie.guide_analogy(args.mass), None
    if args.k is not None:
        rows = [debroglie.from_wavenumber(args.mass, k) for k in args.k]
    else:
        speeds = args.velocity if args.velocity is not None else [b * C for b in args.beta]
        rows = [debroglie.from_velocity(args.mass, v) for v in speeds]
    return (rows[0], None) if len(rows) == 1 else (rows, debroglie.ParticleState)


def _cmd_fiber(parser, args, tol):
    if args.profile == "step":
        if None in (args.n1, args.n2, args.core_radius):
            parser.error("step profile needs --n1, --n2 and --core-radius")
        profile = fiber.StepProfile(args.n1, args.n2, args.core_radius)
    else:
        if args.profile_csv is None:
            parser.error("tabulated profile needs --profile-csv")
        try:
            profile = fiber.TabulatedProfile.from_csv(args.profile_csv)
        except OSError as exc:
            raise IoError(f"cannot read {args.profile_csv}: {exc}") from exc
    method = args.method or ("analytic" if args.profile == "step" else "shooting")
    if method == "analytic" and args.profile != "step":
        parser.error("the analytic method needs a step profile")
    k0 = 2 * math.pi / args.wavelength
    solve = fiber.lp_solve_step if method == "analytic" else fiber.lp_solve_shooting
    if args.l is not None:
        modes = solve(profile, args.l, k0, tol_abs=tol)
    else:
        modes, l = [], 0
        while batch := solve(profile, l, k0, tol_abs=tol):
            modes.extend(batch)
            l += 1
    return modes, fiber.LPMode


def _cmd_mdr(parser, args, tol):
    sys_ = mdr.SphereSystem(args.index, 1.0, args.nu)
    lo, hi = args.x_range
    trace = [] if args.trace else None
    recs = mdr.find_resonances(sys_, lo, hi, args.samples, args.prominence, trace, tol)
    if trace is not None:
        points = [TracePoint(x, r) for x, r in trace]
        emit(points, OutputSpec("csv", args.trace, args.precision), TracePoint)
    return recs, mdr.ResonanceRecord


COMMANDS = {
    "dispersion": _cmd_dispersion,
    "modes": _cmd_modes,
    "quanta": _cmd_quanta,
    "packet": _cmd_packet,
    "debroglie": _cmd_debroglie,
    "fiber": _cmd_fiber,
    "mdr": _cmd_mdr,
}


def _tolerance(parser) -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return ROOT_TOL
    try:
        tol = float(raw)
    except ValueError:
        tol = -1.0
    if not (tol > 0 and math.isfinite(tol)):
        parser.error(f"{TOL_ENV} must be a positive number, got {raw!r}")
    return tol


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        tol = _tolerance(parser)
        records, record_type = COMMANDS[args.command](parser, args, tol)
        emit(records, OutputSpec(args.format, args.output, args.precision), record_type)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except FSQError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


def main(argv: list[str] | None = None) -> int:
    return run(argv)
