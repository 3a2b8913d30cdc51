"""Command-line front end: sweeps, field profiles, mode dumps and inversion.

Every command writes CSV preceded by a ``#`` comment block that records the
resolved parameters, so the same invocation reproduces the same bytes.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .conductivity import NonlocalityWarning
from .dispersion import find_eta0
from .errors import NoResonanceError, PlasmaFilmError
from .fieldmode import field_profile, g1, g2, g_quadrature, g_series, relative_error
from .medium import FilmProblem, load_material, reduce
from .numerics import Tolerance
from .optics import G_METHODS, VARIANTS, coefficients
from .resonance import KINDS, invert

DEFAULTS = {
    "material": "sodium",
    "d_nm": 10.0,
    "theta_deg": 0.0,
    "eps": 1e-3,
    "p": 1.0,
    "omega": 1.0,
    "omega_range": (0.9, 1.1),
    "theta_range": (0.0, 89.0),
    "d_range": (1.0, 100.0),
    "steps": 201,
    "variant": "reduced",
    "g_method": "auto",
    "points": 101,
    "column": "R",
    "first_order": None,
    "rel_tol": 1e-10,
    "jobs": 1,
}

SWEEP_COLUMNS = ["T", "R", "A", "G_re", "G_im", "eta0_re", "eta0_im", "sigma_ratio_abs", "error"]
_SWEEP_AXES = {"spectrum": "Omega", "angle-sweep": "theta_deg", "thickness-sweep": "d_nm"}
_RANGE_KEYS = {"spectrum": "omega_range", "angle-sweep": "theta_range", "thickness-sweep": "d_range"}


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "nan" if math.isnan(x) else format(x, ".12g")
    return str(x)


def read_config(path: str) -> dict:
    """Flat ``key = value`` file; ``#`` starts a comment, dashes in keys become underscores."""
    out = {}
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in DEFAULTS and key not in ("command", "out", "input"):
            raise ValueError(f"{path}: unknown key {key!r}")
        out[key] = value
    return out


def _coerce(key: str, value):
    if value is None:
        return None
    if key in ("omega_range", "theta_range", "d_range"):
        parts = value.replace(",", " ").split() if isinstance(value, str) else value
        if len(parts) != 2:
            raise ValueError(f"{key} needs two numbers")
        return (float(parts[0]), float(parts[1]))
    if key in ("steps", "points", "jobs"):
        return int(value)
    if key == "first_order":
        return None if value in ("", "none", "None") else int(value)
    if key in ("d_nm", "theta_deg", "eps", "p", "omega", "rel_tol"):
        return float(value)
    return value


def resolve(args: argparse.Namespace) -> dict:
    """Merge built-in defaults, config-file values and command-line flags (in that order)."""
    cfg = read_config(args.config) if getattr(args, "config", None) else {}
    params = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        if flag is not None:
            params[key] = _coerce(key, flag)
        elif key in cfg:
            params[key] = _coerce(key, cfg[key])
        else:
            params[key] = default
    for key in ("out", "input"):
        params[key] = getattr(args, key, None) or cfg.get(key)
    if params["steps"] < 2:
        raise ValueError("steps must be at least 2")
    if params["variant"] not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if params["g_method"] not in G_METHODS:
        raise ValueError(f"g-method must be one of {G_METHODS}")
    return params


def _problem(params: dict, **override) -> FilmProblem:
    vals = {**params, **override}
    return FilmProblem(
        material=load_material(vals["material"]),
        d=vals["d_nm"],
        theta=math.radians(vals["theta_deg"]),
        eps=vals["eps"],
        p=vals["p"],
    )


_PROBLEM_KEYS = ("material", "d_nm", "theta_deg", "eps", "p", "rel_tol")
_SWEEP_KEYS = ("variant", "g_method", "steps")
_HEADER_KEYS = {
    "spectrum": _PROBLEM_KEYS + _SWEEP_KEYS + ("omega_range",),
    "angle-sweep": _PROBLEM_KEYS + _SWEEP_KEYS + ("omega", "theta_range"),
    "thickness-sweep": _PROBLEM_KEYS + _SWEEP_KEYS + ("omega", "d_range"),
    "field": _PROBLEM_KEYS + ("omega", "points"),
    "modes": _PROBLEM_KEYS + ("omega",),
    "invert": ("material", "eps", "rel_tol", "input", "column", "first_order"),
}


def _header(command: str, params: dict) -> list[str]:
    lines = [f"# plasmafilm {__version__} {command}"]
    for key in _HEADER_KEYS[command]:
        val = params[key]
        if isinstance(val, tuple):
            val = " ".join(_fmt(v) for v in val)
        lines.append(f"# {key} = {_fmt(val)}")
    return lines


def _sweep_point(task):
    """One row of a sweep; failures become an error column."""
    command, params, x = task
    axis = _SWEEP_AXES[command]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NonlocalityWarning)
        try:
            if axis == "Omega":
                prob, omega = _problem(params), x
            elif axis == "theta_deg":
                prob, omega = _problem(params, theta_deg=x), params["omega"]
            else:
                prob, omega = _problem(params, d_nm=x), params["omega"]
            c = coefficients(prob, omega, params["variant"], params["g_method"],
                             Tolerance(rel=params["rel_tol"]))
        except (PlasmaFilmError, ValueError) as exc:
            return [x] + [math.nan] * 8 + [f"{type(exc).__name__}: {exc}".replace("\n", " ")]
    eta0 = c.eta0 if c.eta0 is not None else complex(math.nan, math.nan)
    return [x, c.T, c.R, c.A, c.G.real, c.G.imag, eta0.real, eta0.imag, abs(c.sigma_ratio), ""]


def run_sweep(command: str, params: dict, stream) -> int:
    """Write one CSV row per grid point in grid order."""
    # bad material or angle is a setup error, not a per-point one
    _problem(params)
    lo, hi = params[_RANGE_KEYS[command]]
    grid = np.linspace(lo, hi, params["steps"])
    axis = _SWEEP_AXES[command]
    writer = csv.writer(stream, lineterminator="\n")
    for line in _header(command, params):
        stream.write(line + "\n")
    writer.writerow([axis] + SWEEP_COLUMNS)
    tasks = [(command, params, float(x)) for x in grid]
    if params["jobs"] > 1:
        with ProcessPoolExecutor(params["jobs"]) as pool:
            rows = pool.map(_sweep_point, tasks, chunksize=max(1, len(tasks) // (8 * params["jobs"])))
            for row in rows:
                writer.writerow([_fmt(v) for v in row])
                stream.flush()
    else:
        for task in tasks:
            writer.writerow([_fmt(v) for v in _sweep_point(task)])
            stream.flush()
    return 0


def run_field(params: dict, stream) -> int:
    """Field profile e(x) on ``points`` equally spaced depths."""
    prob = _problem(params)
    tol = Tolerance(rel=params["rel_tol"])
    ctx = find_eta0(reduce(prob, params["omega"]), tol)
    n = params["points"]
    if n < 1:
        raise ValueError("points must be positive")
    x = np.linspace(0.0, 1.0, n) if n > 1 else np.array([0.5])
    e = np.atleast_1d(field_profile(x, ctx, tol))
    for line in _header("field", params):
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["x_over_d", "e_re", "e_im", "e_abs"])
    for xi, ei in zip(x, e):
        writer.writerow([_fmt(float(xi)), _fmt(ei.real), _fmt(ei.imag), _fmt(abs(ei))])
    G = g_series(ctx, tol).value
    if n > 2:
        # trapezoid mean of the samples, to compare with G
        mean = np.trapezoid(e, x) if hasattr(np, "trapezoid") else np.trapz(e, x)
        stream.write(f"# sample_mean = {_fmt(mean.real)} {_fmt(mean.imag)}\n")
    stream.write(f"# G = {_fmt(G.real)} {_fmt(G.imag)}\n")
    return 0


def run_modes(params: dict, stream) -> int:
    """eta0, the four G values and the O1/O2 errors at one point."""
    prob = _problem(params)
    tol = Tolerance(rel=params["rel_tol"])
    ctx = find_eta0(reduce(prob, params["omega"]), tol)
    ref = g_series(ctx, tol)
    rows = [
        ("eta0", ctx.eta0),
        ("G_series", ref.value),
        ("G_quadrature", g_quadrature(ctx, tol).value),
        ("G1", g1(ctx).value),
        ("G2", g2(ctx).value),
    ]
    for line in _header("modes", params):
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["quantity", "re", "im"])
    for name, val in rows:
        writer.writerow([name, _fmt(val.real), _fmt(val.imag)])
    writer.writerow(["O1_percent", _fmt(relative_error(ref, g1(ctx))), "0"])
    writer.writerow(["O2_percent", _fmt(relative_error(ref, g2(ctx))), "0"])
    return 0


def read_spectrum(path: str, column: str):
    """Omega and one coefficient column from a CSV written by ``spectrum``."""
    text = Path(path).read_text()
    body = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not body:
        raise ValueError(f"{path} contains no data")
    reader = csv.DictReader(io.StringIO("\n".join(body)))
    if reader.fieldnames is None or "Omega" not in reader.fieldnames or column not in reader.fieldnames:
        raise ValueError(f"{path} needs columns 'Omega' and {column!r}, has {reader.fieldnames}")
    om, val = [], []
    for row in reader:
        if row.get("error"):
            continue
        om.append(float(row["Omega"]))
        val.append(float(row[column]))
    if len(om) < 3:
        raise ValueError(f"{path} has fewer than 3 usable rows")
    return np.array(om), np.array(val)


def run_invert(params: dict, stream) -> int:
    """Per-resonance and fitted thickness from a stored spectrum."""
    if not params["input"]:
        raise ValueError("invert needs --input")
    column = params["column"]
    if column not in KINDS:
        raise ValueError(f"column must be one of {sorted(KINDS)}")
    om, val = read_spectrum(params["input"], column)
    material = load_material(params["material"])
    inv = invert(om, val, material, params["eps"], column, params["first_order"],
                 Tolerance(rel=params["rel_tol"]))
    for line in _header("invert", params):
        stream.write(line + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["n", "Omega_n", "d_nm"])
    for e, d in zip(inv.resonances.entries, inv.per_resonance):
        writer.writerow([e.n, _fmt(e.omega), _fmt(float(d))])
    stream.write(f"# d_mean_nm = {_fmt(inv.mean)} +- {_fmt(inv.spread)}\n")
    stream.write(f"# d_fit_nm = {_fmt(inv.lsq)}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plasmafilm",
        description="p-wave transmission, reflection and absorption of thin metal films.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--material", help="preset name, file, or name under $PLASMAFILM_MATERIALS")
    common.add_argument("--d-nm", dest="d_nm", type=float, help="thickness, nm")
    common.add_argument("--theta-deg", dest="theta_deg", type=float, help="incidence angle, degrees")
    common.add_argument("--eps", type=float, help="collision rate nu/omega_p")
    common.add_argument("--p", type=float, help="specularity in [0, 1]")
    common.add_argument("--rel-tol", dest="rel_tol", type=float, help="relative tolerance")
    common.add_argument("--out", help="output path (default stdout)")

    optical = argparse.ArgumentParser(add_help=False)
    optical.add_argument("--variant", choices=VARIANTS)
    optical.add_argument("--g-method", dest="g_method", choices=G_METHODS)
    optical.add_argument("--steps", type=int)
    optical.add_argument("--jobs", type=int, help="worker processes")

    p = sub.add_parser("spectrum", parents=[common, optical], help="sweep the reduced frequency")
    p.add_argument("--omega-range", dest="omega_range", nargs=2, type=float, metavar=("START", "STOP"))

    p = sub.add_parser("angle-sweep", parents=[common, optical], help="sweep the incidence angle")
    p.add_argument("--omega", type=float)
    p.add_argument("--theta-range", dest="theta_range", nargs=2, type=float, metavar=("START", "STOP"))

    p = sub.add_parser("thickness-sweep", parents=[common, optical], help="sweep the thickness")
    p.add_argument("--omega", type=float)
    p.add_argument("--d-range", dest="d_range", nargs=2, type=float, metavar=("START", "STOP"))

    p = sub.add_parser("field", parents=[common], help="field profile across the film")
    p.add_argument("--omega", type=float)
    p.add_argument("--points", type=int)

    p = sub.add_parser("modes", parents=[common], help="eta0, G variants and their errors")
    p.add_argument("--omega", type=float)

    p = sub.add_parser("invert", parents=[common], help="thickness from a spectrum CSV")
    p.add_argument("--input", help="CSV written by 'spectrum'")
    p.add_argument("--column", choices=sorted(KINDS))
    p.add_argument("--first-order", dest="first_order", type=int,
                   help="order of the first detected resonance (default: least-squares fit)")

    p = sub.add_parser("recipe", help="run a config file that names its command")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int)
    return parser


_RUNNERS = {
    "field": run_field,
    "modes": run_modes,
    "invert": run_invert,
}


def dispatch(command: str, params: dict, stream) -> int:
    if command in _SWEEP_AXES:
        return run_sweep(command, params, stream)
    if command in _RUNNERS:
        return _RUNNERS[command](params, stream)
    raise ValueError(f"unknown command {command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        command = args.command
        if command == "recipe":
            command = read_config(args.config).get("command")
            if not command:
                raise ValueError(f"{args.config} does not name a command")
        params = resolve(args)
        out = params.pop("out")
        if out:
            with open(out, "w", newline="") as fh:
                return dispatch(command, params, fh)
        return dispatch(command, params, sys.stdout)
    except NoResonanceError as exc:
        print(f"plasmafilm: no resonances found: {exc}", file=sys.stderr)
        return 2
    except (PlasmaFilmError, ValueError, OSError) as exc:
        print(f"plasmafilm: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 130


if __name__ == "__main__":
    sys.exit(main())
