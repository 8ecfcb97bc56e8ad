"""Command-line front end.

One binary with subcommands; data goes to stdout (or --out), diagnostics to
stderr.  Exit codes: 0 success, 2 configuration error, 3 numerical-domain
or I/O error, 4 resource-cap error.  Numbers print with 17 significant
digits so doubles round-trip.  Stochastic subcommands refuse to run without
an explicit --seed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bohr, extension, radial, series, special, verify
from .errors import ConfigError, DomainError, PolytorusError, ResourceError


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(z: complex) -> str:
    return f"{_fmt(z.real)},{_fmt(z.imag)}"


def _write(data: str, out: str | None) -> None:
    if out:
        Path(out).write_text(data, encoding="utf-8")
    else:
        sys.stdout.write(data)


def _read_series(path: str) -> series.FourierSeries:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    return series.from_text(text)


def _parse_point(text: str) -> series.PolydiscPoint:
    """Polar pairs 'r1,t1;r2,t2;...' -> polydisc point."""
    coords = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        r_s, _, t_s = chunk.partition(",")
        coords.append(float(r_s) * np.exp(1j * float(t_s or 0.0)))
    return series.PolydiscPoint(coords)


def _parse_angles(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="polytorus", description=__doc__)
    sub = top.add_subparsers(dest="group", required=True)

    # bohr ------------------------------------------------------------------
    g = sub.add_parser("bohr", help="Bohr correspondence").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("lift", help="lift a Dirichlet term/series to Fourier data")
    p.add_argument("--n", type=int, help="single Dirichlet index")
    p.add_argument("--coeff", type=float, default=1.0)
    p.add_argument("--in", dest="infile", help="Dirichlet series file: lines 'n -> re,im'")
    p.add_argument("--out")
    p = g.add_parser("unlift", help="invert the lift (analytic spectrum only)")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")

    # series ----------------------------------------------------------------
    g = sub.add_parser("series", help="series operations").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("eval", help="evaluate at a polydisc point")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--point", required=True, help="polar pairs r1,t1;r2,t2;...")
    p.add_argument("--out")
    p = g.add_parser("norm", help="wiener / l2 / Monte Carlo lp norm")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--kind", choices=["wiener", "l2", "lp"], default="wiener")
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p = g.add_parser("abschnitt", help="truncate to the first m coordinates")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")

    # extend ----------------------------------------------------------------
    g = sub.add_parser("extend", help="twisted extensions").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("twist", help="apply the xi multiplier to the coefficients")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--xi-r", type=float, required=True)
    p.add_argument("--xi-t", type=float, default=0.0)
    p.add_argument("--scheme", default="diagonal")
    p.add_argument("--out")
    p = g.add_parser("kernel", help="product Poisson kernel value")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--theta", required=True, help="comma-separated angles")
    p.add_argument("--scheme", default="diagonal")
    p.add_argument("--out")
    p = g.add_parser("maximal", help="grid radial maximal function")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--kmax", type=int, default=40, help="dyadic grid size")
    p.add_argument("--scheme", default="diagonal")
    p.add_argument("--out")

    # radial ----------------------------------------------------------------
    g = sub.add_parser("radial", help="radius sequences and paths").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("mz-seq", help="reference sequence value 1 - k^(-1/3)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--upto", action="store_true", help="print all values up to k")
    p.add_argument("--out")
    p = g.add_parser("build-seq", help="step-condition sequence for a scheme")
    p.add_argument("--scheme", default="power:3")
    p.add_argument("--rstar", type=float, required=True)
    p.add_argument("--out")
    p = g.add_parser("ratio", help="product-kernel ratio between two radii")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--rk", type=float, required=True)
    p.add_argument("--theta", required=True)
    p.add_argument("--scheme", default="diagonal")
    p.add_argument("--out")
    p = g.add_parser("block-path", help="enumeration path over coordinate blocks")
    p.add_argument("--blocks", required=True, help="comma-separated boundaries")
    p.add_argument("--out")

    # special ---------------------------------------------------------------
    g = sub.add_parser("special", help="explicit functions and measures").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("f", help="bump product value at a point")
    p.add_argument("--point", required=True)
    p.add_argument("--factors", type=int, default=None)
    p.add_argument("--out")
    p = g.add_parser("g", help="lacunary sum value at a point")
    p.add_argument("--point", required=True)
    p.add_argument("--out")
    p = g.add_parser("u", help="bounded non-analytic product value at a point")
    p.add_argument("--point", required=True)
    p.add_argument("--out")
    p = g.add_parser("riesz", help="Riesz product coefficient or radial value")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--k", type=int, help="coefficient at frequency k")
    p.add_argument("--r", type=float, help="radial value at (r, theta)")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--out")

    # experiment ------------------------------------------------------------
    g = sub.add_parser("experiment", help="run a configured experiment").add_subparsers(dest="cmd", required=True)
    p = g.add_parser("run", help="run a JSON config document")
    p.add_argument("config")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", help="output prefix; writes <out>.csv and <out>.json")
    return top


def emit(result: verify.ExperimentResult, fmt: str, out: str | None) -> None:
    """Write CSV + JSON under a prefix, or one stream to stdout."""
    if out:
        Path(out + ".csv").write_text(result.to_csv_text(), encoding="utf-8")
        Path(out + ".json").write_text(result.to_json_text(), encoding="utf-8")
    elif fmt == "csv":
        sys.stdout.write(result.to_csv_text())
    else:
        sys.stdout.write(result.to_json_text())


def _dirichlet_from_file(path: str) -> bohr.DirichletSeries:
    text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    terms = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        head, _, tail = line.partition("->")
        re_s, _, im_s = tail.strip().partition(",")
        terms[int(head.strip())] = complex(float(re_s), float(im_s or 0))
    return bohr.DirichletSeries(terms)


def _cmd(args) -> int:
    if args.group == "bohr":
        if args.cmd == "lift":
            if args.n is not None:
                d = bohr.DirichletSeries({args.n: args.coeff})
            elif args.infile:
                d = _dirichlet_from_file(args.infile)
            else:
                raise ConfigError("bohr lift needs --n or --in")
            _write(series.to_text(bohr.lift_dirichlet(d)), args.out)
        else:  # unlift
            f = _read_series(args.infile)
            d = bohr.unlift(f)
            lines = [f"{n} -> {_fmt_complex(a)}" for n, a in sorted(d.terms.items())]
            _write("\n".join(lines) + ("\n" if lines else ""), args.out)
        return 0

    if args.group == "series":
        f = _read_series(args.infile)
        if args.cmd == "eval":
            val = series.evaluate(f, _parse_point(args.point))
            _write(_fmt_complex(val) + "\n", args.out)
        elif args.cmd == "norm":
            if args.kind == "wiener":
                _write(_fmt(series.wiener_norm(f)) + "\n", args.out)
            elif args.kind == "l2":
                _write(_fmt(series.l2_norm(f)) + "\n", args.out)
            else:
                if args.seed is None:
                    raise ConfigError("--seed is required for the Monte Carlo norm")
                est, se = series.lp_norm_mc(f, args.p, args.samples, verify.substream(args.seed, 0))
                _write(f"{_fmt(est)},{_fmt(se)}\n", args.out)
        else:
            _write(series.to_text(series.abschnitt(f, args.m)), args.out)
        return 0

    if args.group == "extend":
        scheme = radial.RadialScheme.parse(args.scheme)
        if args.cmd == "twist":
            f = _read_series(args.infile)
            xi = args.xi_r * np.exp(1j * args.xi_t)
            _write(series.to_text(extension.twist(f, xi, scheme)), args.out)
        elif args.cmd == "kernel":
            val = extension.product_poisson_kernel(args.r, _parse_angles(args.theta), scheme)
            _write(_fmt(val) + "\n", args.out)
        else:
            f = _read_series(args.infile)
            grid = extension.dyadic_radius_grid(args.kmax)
            val = extension.radial_maximal(f, _parse_angles(args.theta), grid, scheme)
            _write(_fmt(val) + "\n", args.out)
        return 0

    if args.group == "radial":
        if args.cmd == "mz-seq":
            seq = radial.mz_default_sequence(args.k)
            vals = seq if args.upto else seq[-1:]
            _write("\n".join(_fmt(v) for v in vals) + "\n", args.out)
        elif args.cmd == "build-seq":
            scheme = radial.RadialScheme.parse(args.scheme)
            seq = radial.build_mz_sequence(scheme, args.rstar)
            _write("\n".join(_fmt(v) for v in seq) + "\n", args.out)
        elif args.cmd == "ratio":
            scheme = radial.RadialScheme.parse(args.scheme)
            val = radial.kernel_ratio(args.r, args.rk, _parse_angles(args.theta), scheme)
            _write(_fmt(val) + "\n", args.out)
        else:
            bounds = [int(b) for b in args.blocks.split(",")]
            path = radial.block_path(bounds)
            _write(radial.path_to_text(path), args.out)
        return 0

    if args.group == "special":
        if args.cmd == "riesz":
            meas = special.RieszProductMeasure(args.q, args.depth)
            if args.k is not None:
                _write(_fmt(special.riesz_coeff(meas, args.k)) + "\n", args.out)
            elif args.r is not None:
                _write(_fmt(special.measure_radial_value(meas, args.r, args.theta)) + "\n", args.out)
            else:
                raise ConfigError("special riesz needs --k or --r")
            return 0
        point = _parse_point(args.point)
        if args.cmd == "f":
            params = special.CounterexampleParams(args.factors or len(point.coords) or 1)
            val = special.counterexample_f(point.coords, params)
        elif args.cmd == "g":
            val = special.example_g(point.coords)
        else:
            val = special.example_u(point.coords)
        _write(_fmt_complex(val) + "\n", args.out)
        return 0

    if args.group == "experiment":
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
        if args.seed is None and "seed" not in cfg:
            raise ConfigError("an explicit --seed (or config seed) is required")
        result = verify.run_config(cfg, seed=args.seed, workers=args.workers)
        emit(result, args.format, args.out)
        return 0

    raise ConfigError(f"unknown command group {args.group!r}")


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _cmd(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return 4
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except PolytorusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
