"""Command-line front end: evaluation, sampling, presets, transforms,
and verification as reproducible batch commands.

Output is CSV (RFC-4180-style quoting) or a JSON array of objects.  CSV
reals are printed with 17 significant digits so files diff cleanly
across runs; JSON uses the native shortest round-trip repr.  Exit codes:
0 success, 1 runtime failure (failed verification checks, broken output
pipe), 2 usage error.

The only environment variable consulted is BARENBLATT_OUTDIR: when set,
relative --output paths (and verify report directories) resolve inside
it.  Everything else comes from flags.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import family as fam_mod
from . import presets as preset_mod
from . import sampling as samp_mod
from . import transforms as trans_mod
from . import verify as verify_mod
from .family import FamilyParams, new_family

__all__ = ["main"]

_OUTDIR_ENV = "BARENBLATT_OUTDIR"


def _fmt(x) -> str:
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _resolve_path(path: str | None) -> str | None:
    if path is None:
        return None
    outdir = os.environ.get(_OUTDIR_ENV)
    if outdir and not os.path.isabs(path):
        return os.path.join(outdir, path)
    return path


def _emit(rows, header, args) -> None:
    """Write rows (list of dicts keyed by header) as CSV or JSON."""
    path = _resolve_path(args.output)
    if args.format == "json":
        text = json.dumps([{k: r[k] for k in header} for r in rows], indent=2) + "\n"
    else:
        import io

        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(header)
        for r in rows:
            w.writerow([_fmt(r[k]) for k in header])
        text = buf.getvalue()
    if path is None:
        sys.stdout.write(text)
    else:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _parse_grid(spec: str, parser: argparse.ArgumentParser, flag: str = "--grid"):
    parts = spec.split(":")
    if len(parts) != 3:
        parser.error(f"{flag} must be min:max:count, got {spec!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        parser.error(f"{flag} must be min:max:count with numeric fields, got {spec!r}")
    if count < 1:
        parser.error(f"{flag} needs count >= 1, got {count}")
    return np.linspace(lo, hi, count)


_PRESET_NEEDS = {
    "wigner": (),
    "ple": ("p", "d"),
    "npme": ("m", "nu", "d"),
    "epd": ("nu", "c", "d"),
    "zkb": ("m", "d"),
}


def _resolve_family(args, parser) -> FamilyParams:
    explicit = [
        f
        for f in ("alpha", "beta", "gamma", "c", "d")
        if getattr(args, f, None) is not None
    ]
    if args.preset is None:
        missing = [f for f in ("alpha", "beta", "gamma", "c", "d") if f not in explicit]
        if missing:
            parser.error(
                "give either --preset or all of --alpha --beta --gamma --c --d "
                f"(missing --{missing[0]})"
            )
        return new_family(args.alpha, args.beta, args.gamma, args.c, args.d)
    clash = [f for f in ("alpha", "beta", "gamma") if f in explicit]
    if clash:
        parser.error(f"--{clash[0]} conflicts with --preset")
    needs = _PRESET_NEEDS[args.preset]
    for f in needs:
        if getattr(args, f, None) is None:
            parser.error(f"--preset {args.preset} requires --{f}")
    if args.preset == "wigner":
        return preset_mod.wigner_preset()
    if args.preset == "ple":
        return preset_mod.ple_preset(args.p, args.d)[1]
    if args.preset == "npme":
        return preset_mod.npme_preset(args.m, args.nu, args.d)[1]
    if args.preset == "epd":
        return preset_mod.epd_preset(args.nu, args.c, args.d)[1]
    return preset_mod.zkb_source_preset(args.m, args.d)


def _add_family_flags(sub):
    sub.add_argument("--preset", choices=sorted(_PRESET_NEEDS), default=None)
    sub.add_argument("--alpha", type=float, default=None)
    sub.add_argument("--beta", type=float, default=None)
    sub.add_argument("--gamma", type=float, default=None)
    sub.add_argument("--c", type=float, default=None)
    sub.add_argument("--d", type=int, default=None)
    sub.add_argument("--p", type=float, default=None, help="ple homogeneity exponent")
    sub.add_argument("--m", type=float, default=None, help="porous-medium exponent")
    sub.add_argument("--nu", type=float, default=None, help="npme/epd order parameter")


def _add_io_flags(sub):
    sub.add_argument("--format", choices=("csv", "json"), default="csv")
    sub.add_argument("--output", default=None, help="file path (default: stdout)")


def _cmd_eval(args, parser) -> int:
    fam = _resolve_family(args, parser)
    if args.t <= 0.0:
        parser.error(f"--t must be > 0, got {args.t}")
    xs = _parse_grid(args.grid, parser)
    header = ["x", "t", "pdf"] + (["cdf"] if fam.d == 1 else [])
    if fam.d == 1:
        pdf_vals = np.atleast_1d(fam_mod.pdf(fam, xs, args.t))
        cdf_vals = np.atleast_1d(fam_mod.cdf_1d(fam, xs, args.t))
    else:
        pts = np.zeros((xs.size, fam.d))
        pts[:, 0] = xs
        pdf_vals = np.atleast_1d(fam_mod.pdf(fam, pts, args.t))
        cdf_vals = None
    rows = []
    for i, x in enumerate(xs):
        row = {"x": float(x), "t": args.t, "pdf": float(pdf_vals[i])}
        if cdf_vals is not None:
            row["cdf"] = float(cdf_vals[i])
        rows.append(row)
    _emit(rows, header, args)
    return 0


def _cmd_sample(args, parser) -> int:
    fam = _resolve_family(args, parser)
    if args.t <= 0.0:
        parser.error(f"--t must be > 0, got {args.t}")
    if args.n < 1:
        parser.error(f"--n must be >= 1, got {args.n}")
    rng = samp_mod.RngStream(args.seed, args.stream)
    pts = samp_mod.sample_position(rng, fam, args.t, args.n)
    pts = np.atleast_2d(np.asarray(pts, dtype=float).reshape(args.n, -1))
    header = [f"x{i + 1}" for i in range(fam.d)]
    rows = [{header[j]: float(p[j]) for j in range(fam.d)} for p in pts]
    _emit(rows, header, args)
    return 0


def _cmd_presets(args, parser) -> int:
    # fixed exemplar table; the verify suites cover the parameter grids
    rows = []
    wig = preset_mod.wigner_preset()
    rows.append(("wigner", "", wig))
    raw, fam = preset_mod.ple_preset(3.0, 1)
    rows.append(("ple", "p=3, d=1", fam))
    raw, fam = preset_mod.npme_preset(2.0, 2.0, 1)
    rows.append(("npme", "m=2, nu=2, d=1", fam))
    raw, fam = preset_mod.epd_preset(2.0, 1.0, 3)
    rows.append(("epd", "nu=2, c=1, d=3", fam))
    zkb = preset_mod.zkb_source_preset(2.0, 1)
    rows.append(("zkb", "m=2, d=1", zkb))
    header = ["preset", "raw_params", "alpha", "beta", "gamma", "c", "C"]
    table = [
        {
            "preset": name,
            "raw_params": rp,
            "alpha": f.alpha,
            "beta": f.beta_exp,
            "gamma": f.gamma_exp,
            "c": f.c,
            "C": f.norm_c,
        }
        for name, rp, f in rows
    ]
    fp = preset_mod.fractional_preset(0.2)
    half = math.sqrt(fp.C1 / fp.C2)
    table.append(
        {
            "preset": "fractional",
            "raw_params": "nu=0.2",
            "alpha": fp.nu,
            "beta": 2.0,
            "gamma": 1.0,
            "c": half,
            "C": fp.C1,
        }
    )
    _emit(table, header, args)
    return 0


def _cmd_ft(args, parser) -> int:
    fam = _resolve_family(args, parser)
    if args.t <= 0.0:
        parser.error(f"--t must be > 0, got {args.t}")
    xis = _parse_grid(args.grid, parser)
    if args.kind == "projection" and fam.d == 1:
        parser.error("--kind projection needs d >= 2 (d = 1 is already scalar)")
    if fam.d == 1:
        fn = trans_mod.char_fn_1d
    elif args.kind == "projection":
        fn = trans_mod.char_fn_projection
    else:
        fn = trans_mod.char_fn_radial
    rows = [
        {"xi": float(xi), "t": args.t, "cf": float(fn(fam, float(xi), args.t))}
        for xi in xis
    ]
    _emit(rows, ["xi", "t", "cf"], args)
    return 0


def _cmd_msd(args, parser) -> int:
    fam = _resolve_family(args, parser)
    ts = _parse_grid(args.grid, parser)
    if np.any(ts <= 0.0):
        parser.error("--grid for msd must have min > 0 (times)")
    rows = []
    for t in ts:
        msd = fam_mod.radial_moment(fam, 2, float(t))
        rows.append(
            {
                "t": float(t),
                "msd": msd,
                "msd_over_t2alpha": msd / float(t) ** (2.0 * fam.alpha),
            }
        )
    _emit(rows, ["t", "msd", "msd_over_t2alpha"], args)
    return 0


def _cmd_verify(args, parser) -> int:
    out_dir = _resolve_path(args.out)
    report = verify_mod.run_suite(
        args.suite,
        seed=args.seed,
        out_dir=out_dir,
        threads=args.threads,
        h_levels=args.h_levels,
    )
    header = ["name", "passed", "value", "tolerance", "detail"]
    rows = [
        {
            "name": c.name,
            "passed": c.passed,
            "value": c.value,
            "tolerance": c.tolerance,
            "detail": c.detail,
        }
        for c in report.checks
    ]
    _emit(rows, header, args)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="barenblatt",
        description="compactly supported self-similar densities: evaluate, "
        "sample, transform, verify",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p_eval = subs.add_parser("eval", help="tabulate pdf (and cdf when d = 1)")
    _add_family_flags(p_eval)
    _add_io_flags(p_eval)
    p_eval.add_argument("--t", type=float, default=1.0)
    p_eval.add_argument(
        "--grid",
        required=True,
        help="min:max:count; for d >= 2 the x axis is the radius along the "
        "first coordinate",
    )

    p_sample = subs.add_parser("sample", help="draw positions")
    _add_family_flags(p_sample)
    _add_io_flags(p_sample)
    p_sample.add_argument("--t", type=float, default=1.0)
    p_sample.add_argument("--n", type=int, required=True)
    p_sample.add_argument("--seed", type=int, required=True)
    p_sample.add_argument("--stream", type=int, default=0)

    p_presets = subs.add_parser("presets", help="exemplar parameter table")
    _add_io_flags(p_presets)

    p_ft = subs.add_parser("ft", help="characteristic function on a xi grid")
    _add_family_flags(p_ft)
    _add_io_flags(p_ft)
    p_ft.add_argument("--t", type=float, default=1.0)
    p_ft.add_argument("--grid", required=True, help="min:max:count over xi")
    p_ft.add_argument(
        "--kind",
        choices=("auto", "projection"),
        default="auto",
        help="auto: scalar route for d = 1, radial route for d >= 2; "
        "projection: the double-quadrature route",
    )

    p_msd = subs.add_parser("msd", help="mean squared displacement over t")
    _add_family_flags(p_msd)
    _add_io_flags(p_msd)
    p_msd.add_argument("--grid", required=True, help="min:max:count over t")

    p_verify = subs.add_parser("verify", help="run a named verification suite")
    _add_io_flags(p_verify)
    p_verify.add_argument("suite", choices=verify_mod.SUITE_NAMES)
    p_verify.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)
    p_verify.add_argument("--out", default=None, help="report directory")
    p_verify.add_argument("--threads", type=int, default=1)
    p_verify.add_argument("--h-levels", type=int, default=3)

    if argv is None:
        argv = sys.argv[1:]
    # join "--grid -2:2:5" into one token: a leading minus in the grid spec
    # would otherwise be taken for an option string
    argv = list(argv)
    for i, tok in enumerate(argv[:-1]):
        if tok == "--grid":
            argv[i : i + 2] = [f"--grid={argv[i + 1]}"]
            break
    args = parser.parse_args(argv)
    handler = {
        "eval": _cmd_eval,
        "sample": _cmd_sample,
        "presets": _cmd_presets,
        "ft": _cmd_ft,
        "msd": _cmd_msd,
        "verify": _cmd_verify,
    }[args.subcommand]
    try:
        return handler(args, parser)
    except BrokenPipeError:
        # downstream closed the pipe (e.g. `... | head`); point stdout at
        # devnull so the interpreter's exit flush does not raise again
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 1
