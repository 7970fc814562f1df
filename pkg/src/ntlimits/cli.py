"""Command-line entry point ``ntlimits``."""

import argparse
import os
import sys
from dataclasses import replace

import numpy as np

from .errors import NTLimitsError
from .experiments import ExperimentConfig, default_output_dir, emit_plot_data, run_experiment
from .geometry import ReflectedStolz, StolzRegion, lens_harmonic_measure
from .io import dumps_report, serialize_measure
from .lens import LensRegion


def parse_complex(text):
    """``"re,im"`` or ``"re"``."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise argparse.ArgumentTypeError(f"expected RE,IM, got {text!r}")


def _out_path(args, default_name):
    if getattr(args, "out", None):
        return args.out
    d = default_output_dir()
    return os.path.join(d, default_name) if d else None


def _emit(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _run(cfg, args, default_name):
    report = run_experiment(cfg)
    path = _out_path(args, default_name)
    _emit(dumps_report(report), path)
    csv_dir = getattr(args, "csv_dir", None)
    if csv_dir:
        emit_plot_data(report, csv_dir)
    return 0 if report["pass"] else 1


def _cmd_cauchy_eval(args):
    params = {"z": args.z, "eps": args.eps, "timing": args.timing}
    return _run(ExperimentConfig("cauchy-eval", args.measure, params, args.out, args.seed), args, "cauchy_eval.json")


def _cmd_cauchy_scan(args):
    params = {"zeta": args.zeta, "r": args.r, "deltas": args.deltas, "tol": args.tol, "timing": args.timing}
    return _run(ExperimentConfig("plemelj-scan", args.measure, params, args.out, args.seed), args,
                "plemelj_scan.json")


def _cmd_bpe_map(args):
    params = {"grid": args.grid, "nmax": args.nmax, "timing": args.timing}
    if args.n_list:
        params["n_list"] = args.n_list
    cfg = ExperimentConfig("bpe-map", args.measure, params, args.json, args.seed)
    report = run_experiment(cfg)
    if args.json:
        _emit(dumps_report(report), args.json)
    out = args.out or _out_path(args, "bpe_map.csv")
    if out:
        paths = emit_plot_data(report, os.path.dirname(os.path.abspath(out)))
        os.replace(paths[0], out)
    else:
        sys.stdout.write(dumps_report(report))
    return 0 if report["pass"] else 1


def _cmd_wandering(args):
    params = {"a": args.a, "n": args.n, "svtol": args.svtol, "timing": args.timing}
    return _run(ExperimentConfig("p2-wandering", args.measure, params, args.out, args.seed), args,
                "p2_wandering.json")


def _cmd_hz_verify(args):
    params = {"a": args.a, "alpha": args.alpha, "c": args.c, "n": args.n, "timing": args.timing}
    return _run(ExperimentConfig("hz-verify", None, params, args.out, args.seed), args, "hz_verify.json")


def _cmd_covering(args):
    params = {"instances": args.instances, "disks": args.disks, "boundary_points": args.boundary_points,
              "timing": args.timing}
    return _run(ExperimentConfig("covering-test", None, params, args.out, args.seed), args, "covering.json")


def _cmd_lens_export(args):
    mu = lens_harmonic_measure(args.lens_c)
    region = LensRegion(args.lens_c)
    samples = []
    for idx, piece in enumerate(region.pieces):
        u = np.linspace(piece.lo, piece.hi, args.samples + 2)[1:-1]
        zeta = piece.point(u)
        dens = region.density_at_params(u, idx == 0)
        samples.extend((float(z.real), float(z.imag), float(d)) for z, d in zip(zeta, dens))
    mu = type(mu)((replace(mu.components[0], samples=tuple(samples)),), mu.max_degree)
    _emit(serialize_measure(mu) + "\n", _out_path(args, "lens_harmonic.json"))
    return 0


def _cmd_stolz(args):
    zeta = complex(np.exp(1j * args.zeta))
    cls = ReflectedStolz if args.reflected else StolzRegion
    S = cls(zeta, args.r, args.delta)
    rows = {"zeta": zeta, "r": args.r, "delta": args.delta, "reflected": args.reflected,
            "points": [{"lam": p, "inside": bool(S.contains(p))} for p in args.point]}
    _emit(dumps_report(rows), _out_path(args, "stolz.json"))
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="ntlimits", description=__doc__)
    sub = ap.add_subparsers(dest="group", required=True)

    def common(p, measure=True):
        if measure:
            p.add_argument("--measure", required=True, help="measure spec JSON file")
        p.add_argument("--out", help="output path (default: $NTLIMITS_OUTPUT_DIR/<name> or stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--timing", action="store_true", help="record wall time in the report")

    cauchy = sub.add_parser("cauchy", help="Cauchy transforms").add_subparsers(dest="cmd", required=True)
    p = cauchy.add_parser("eval", help="principal-value or truncated transform at a point")
    common(p)
    p.add_argument("--z", type=parse_complex, required=True, help="RE,IM")
    p.add_argument("--eps", type=float)
    p.set_defaults(func=_cmd_cauchy_eval)
    p = cauchy.add_parser("scan", help="one-sided limits at a boundary point")
    common(p)
    p.add_argument("--zeta", type=float, default=0.0, help="boundary angle in radians")
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--deltas", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--tol", type=float)
    p.add_argument("--csv-dir", help="also write plot CSVs here")
    p.set_defaults(func=_cmd_cauchy_scan)

    p2 = sub.add_parser("p2", help="P^2(mu) diagnostics").add_subparsers(dest="cmd", required=True)
    p = p2.add_parser("bpe-map", help="k_n(lambda) on a grid, as CSV")
    common(p)
    p.add_argument("--grid", default="-0.9:0.9:7,-0.9:0.9:7", help="x0:x1:nx,y0:y1:ny")
    p.add_argument("--nmax", type=int, default=40)
    p.add_argument("--n-list", type=int, nargs="+")
    p.add_argument("--json", help="also write the JSON report here")
    p.set_defaults(func=_cmd_bpe_map)
    p = p2.add_parser("wandering", help="dimension of M_n ⊖ z M_{n-1}")
    common(p)
    p.add_argument("--a", type=parse_complex, default=0j)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--svtol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_wandering)

    hz = sub.add_parser("hz", help="weighted-Bergman counterexample").add_subparsers(dest="cmd", required=True)
    p = hz.add_parser("verify", help="run every residual family")
    common(p, measure=False)
    p.add_argument("--a", type=parse_complex, default=0.9 + 0j)
    p.add_argument("--alpha", type=int, default=5)
    p.add_argument("--c", type=float, default=0.3)
    p.add_argument("--n", type=int, default=20)
    p.set_defaults(func=_cmd_hz_verify)

    p = sub.add_parser("covering-test", help="randomized 3r-covering checks")
    common(p, measure=False)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--disks", type=int, default=200)
    p.add_argument("--boundary-points", type=int, default=1000)
    p.set_defaults(func=_cmd_covering)

    geo = sub.add_parser("geometry", help="lens and Stolz regions").add_subparsers(dest="cmd", required=True)
    p = geo.add_parser("lens-export", help="harmonic measure of the lens as a measure spec")
    common(p, measure=False)
    p.add_argument("--lens-c", type=float, default=0.3)
    p.add_argument("--samples", type=int, default=32, help="density samples per boundary piece")
    p.set_defaults(func=_cmd_lens_export)
    p = geo.add_parser("stolz", help="membership in S_r(zeta, delta) or its reflection")
    common(p, measure=False)
    p.add_argument("--zeta", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--delta", type=float)
    p.add_argument("--reflected", action="store_true")
    p.add_argument("--point", type=parse_complex, nargs="+", required=True)
    p.set_defaults(func=_cmd_stolz)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NTLimitsError as exc:
        print(f"ntlimits: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
