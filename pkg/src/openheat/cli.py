"""Command-line front end: ``openheat {curve,dos,threshold,converge}``.

Curves and densities are written as CSV, reports as JSON, to stdout or
``--output``.  Floats carry 12 significant digits so repeated runs are
byte-identical.  Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys

import numpy as np

from . import bathdisc, dos, drude, minimal
from .errors import NumericalError

MODELS = ("minimal-free", "minimal-osc", "drude-free", "drude-osc", "bathdisc")

# Flag values reproducing each figure.  Temperatures are in units of the
# frequency set to 1: omega for the toy models, omega_d for the Drude free
# particle, Omega for the Drude oscillator.
MODEL_DEFAULTS = {
    "minimal-free": dict(mass_ratio=10.0, omega=1.0, omega0=0.0, tmin=1e-2, tmax=10.0),
    "minimal-osc": dict(mass_ratio=10.0, omega=1.0, omega0=1.0, tmin=1e-2, tmax=10.0),
    "drude-free": dict(gamma=5.0, omega_d=1.0, omega0=0.0, tmin=1e-3, tmax=10.0),
    "drude-osc": dict(gamma=5.0, omega_d=0.1, omega0=1.0, tmin=1e-3, tmax=10.0),
    "bathdisc": dict(gamma=5.0, omega_d=0.1, omega0=1.0, n_modes=256, tmin=1e-2, tmax=10.0),
}
CURVE_FIGURES = {"1": "drude-free", "3": "minimal-free", "4": "minimal-osc", "cho": "drude-osc"}
DOS_FIGURES = {"5": "drude-osc"}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if x is None:
        return ""
    return f"{float(x):.12g}"


def _resolve(args, figures):
    model = args.model
    if args.figure is not None:
        fig_model = figures[args.figure]
        if model is not None and model != fig_model:
            raise UsageError(f"--figure {args.figure} uses model {fig_model}, not {model}")
        model = fig_model
    if model is None:
        raise UsageError("either --model or --figure is required")
    for key, value in MODEL_DEFAULTS[model].items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    return model


def _drude_params(args) -> drude.DrudeParams:
    try:
        return drude.DrudeParams(args.gamma, args.omega_d, args.omega0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _minimal_params(args) -> minimal.MinimalModelParams:
    try:
        return minimal.MinimalModelParams(args.mass_ratio, args.omega, args.omega0)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _theta_grid(args) -> np.ndarray:
    if not 0 < args.tmin < args.tmax or args.points < 2:
        raise UsageError("need 0 < --tmin < --tmax and --points >= 2")
    if args.scale == "log":
        return minimal.log_theta_grid(args.tmin, args.tmax, args.points)
    return np.linspace(args.tmin, args.tmax, args.points)


def compute_curve(model: str, args) -> minimal.HeatCurve:
    thetas = _theta_grid(args)
    if model == "minimal-free":
        params = _minimal_params(args)
        if params.system_freq != 0:
            raise UsageError("minimal-free needs --omega0 0")
        return minimal.free_minimal_curve(params, thetas)
    if model == "minimal-osc":
        params = _minimal_params(args)
        if params.system_freq == 0:
            raise UsageError("minimal-osc needs --omega0 > 0")
        return minimal.osc_minimal_curve(params, thetas)
    params = _drude_params(args)
    if model == "drude-free" and not params.is_free:
        raise UsageError("drude-free needs --omega0 0")
    if model == "drude-osc" and params.is_free:
        raise UsageError("drude-osc needs --omega0 > 0")
    if model == "bathdisc":
        spec = bathdisc.discretize_drude(params, args.n_modes, args.omega_max)
        return bathdisc.difference_curve(bathdisc.normal_modes(spec), thetas)
    return drude.drude_curve(params, thetas)


def cmd_curve(args, out) -> None:
    model = _resolve(args, CURVE_FIGURES)
    curve = compute_curve(model, args)
    out.write("theta,c_total,c_coupled,c_bath\n")
    for p in curve.points():
        out.write(",".join(fmt(v) for v in (p.theta, p.c_total, p.c_coupled, p.c_bath)) + "\n")


def cmd_dos(args, out) -> None:
    model = _resolve(args, DOS_FIGURES)
    if model == "minimal-osc":
        comb = dos.delta_comb_osc_minimal(_minimal_params(args), args.emax if args.emax is not None else 20.0)
        out.write(f"# E0 = {fmt(comb.energies[0])}\n")
        out.write("energy,weight\n")
        for e, w in zip(comb.energies, comb.weights):
            out.write(f"{fmt(e)},{int(w)}\n")
        return
    if model == "minimal-free":
        params = _minimal_params(args)
        if params.system_freq != 0:
            raise UsageError("minimal-free needs --omega0 0")
        de = args.de if args.de is not None else 0.01
        emin = args.emin if args.emin is not None else de
        emax = args.emax if args.emax is not None else 10.0
        grid = emin + de * np.arange(int(round((emax - emin) / de)) + 1)
        curve = dos.dos_free_minimal(params, grid)
    elif model == "drude-osc":
        params = _drude_params(args)
        if params.is_free:
            raise UsageError("the continuous density of states needs --omega0 > 0")
        de = args.de if args.de is not None else 0.0025
        e0 = dos.ground_state_energy(params)
        emin = args.emin if args.emin is not None else e0 - 0.5
        emax = args.emax if args.emax is not None else e0 + 5.0
        grid = emin + de * np.arange(int(round((emax - emin) / de)) + 1)
        try:
            cfg = dos.BromwichConfig(args.sigma, args.samples, None, args.window)
            curve = dos.bromwich_dos(params, grid, cfg)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    else:
        raise UsageError(f"dos does not support model {model}")
    out.write(f"# E0 = {fmt(curve.ground_energy)}\n")
    out.write("energy,rho\n")
    for e, v in zip(curve.energies, curve.values):
        out.write(f"{fmt(e)},{fmt(v)}\n")


def cmd_threshold(args, out) -> None:
    r_star = minimal.free_threshold_mass_ratio()
    theta_min, _ = minimal.min_free_specific_heat(r_star)
    report = {
        "r_star": r_star,
        "theta_at_min": theta_min,
        "c_min_at_4": minimal.min_free_specific_heat(4.0)[1],
        "c_min_at_10": minimal.min_free_specific_heat(10.0)[1],
    }
    out.write(json.dumps(report, indent=2) + "\n")


def cmd_converge(args, out) -> None:
    params = _drude_params(args)
    if not 0 < args.tmin < args.tmax:
        raise UsageError("need 0 < --tmin < --tmax")
    thetas = minimal.log_theta_grid(args.tmin, args.tmax, args.points)
    rows = bathdisc.convergence_study(params, args.n_list, thetas, args.omega_max)
    report = [{"n_modes": n, "max_norm_distance": d} for n, d in rows]
    out.write(json.dumps(report, indent=2) + "\n")


def _add_params(p, *, drude_flags=True, minimal_flags=True):
    if minimal_flags:
        p.add_argument("--mass-ratio", type=float, help="bath/system mass ratio m/M")
        p.add_argument("--omega", type=float, help="bare bath frequency")
    if drude_flags:
        p.add_argument("--gamma", type=float, help="Drude damping strength")
        p.add_argument("--omega-d", type=float, help="Drude cutoff frequency")
    p.add_argument("--omega0", type=float, help="system frequency (0: free particle)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="openheat", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("curve", parents=[common], help="specific heat versus temperature (CSV)")
    c.add_argument("--model", choices=MODELS)
    c.add_argument("--figure", choices=sorted(CURVE_FIGURES))
    _add_params(c)
    c.add_argument("--n-modes", type=int, help="bath modes for --model bathdisc")
    c.add_argument("--omega-max", type=float, help="highest bath frequency for bathdisc")
    c.add_argument("--tmin", type=float)
    c.add_argument("--tmax", type=float)
    c.add_argument("--points", type=int, default=200)
    c.add_argument("--scale", choices=("log", "linear"), default="log")
    c.set_defaults(func=cmd_curve)

    d = sub.add_parser("dos", parents=[common], help="effective density of states (CSV)")
    d.add_argument("--model", choices=("minimal-free", "minimal-osc", "drude-osc"))
    d.add_argument("--figure", choices=sorted(DOS_FIGURES))
    _add_params(d)
    d.add_argument("--emin", type=float)
    d.add_argument("--emax", type=float)
    d.add_argument("--de", type=float, help="energy spacing")
    d.add_argument("--sigma", type=float, default=0.5, help="Bromwich abscissa")
    d.add_argument("--samples", type=int, default=16384)
    d.add_argument("--window", choices=("gauss", "cosine"), default="gauss")
    d.set_defaults(func=cmd_dos)

    t = sub.add_parser("threshold", parents=[common], help="free toy-model mass-ratio threshold (JSON)")
    t.set_defaults(func=cmd_threshold)

    v = sub.add_parser("converge", parents=[common], help="discretized-bath convergence study (JSON)")
    _add_params(v, minimal_flags=False)
    v.add_argument("--n-list", type=int, nargs="+", default=[16, 32, 64, 128, 256])
    v.add_argument("--omega-max", type=float)
    v.add_argument("--tmin", type=float, default=0.1)
    v.add_argument("--tmax", type=float, default=100.0)
    v.add_argument("--points", type=int, default=121)
    v.set_defaults(func=cmd_converge, gamma=5.0, omega_d=0.1, omega0=1.0)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("curve", "dos") and args.model is None and args.figure is None:
        parser.error("either --model or --figure is required")
    try:
        with contextlib.ExitStack() as stack:
            if args.output:
                out = stack.enter_context(open(args.output, "w", newline="\n"))
            else:
                out = sys.stdout
            args.func(args, out)
    except UsageError as exc:
        parser.error(str(exc))
    except NumericalError as exc:
        print(f"openheat: numerical failure: {exc}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        # Reader went away (e.g. piped into head); not an error.
        sys.stderr.close()
    return 0


if __name__ == "__main__":
    sys.exit(main())
