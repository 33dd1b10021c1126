"""``kappa-weyl`` command-line interface.

Exit codes: 0 success, 1 failed property or numerical guard, 2 configuration
or input error, 3 symbol not integrable at the origin.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import functionals as fn
from . import quantization as qz
from . import symbol_algebra as sa
from . import uncertainty as un
from . import verify as vf
from .errors import DivergentAtOrigin, KappaWeylError
from .grid import DEFAULT_GRID, GridSpec
from .quantization import _atomic_write
from .symbols import DEFAULT_LATTICE, GaussianMixture, SampledSymbol, symbol_from_dict

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_ORIGIN = 0, 1, 2, 3


class ConfigError(Exception):
    """Bad flags, unreadable or malformed input files."""


# -- configuration -------------------------------------------------------------


def _grid(args, default: GridSpec = DEFAULT_GRID) -> GridSpec:
    n = args.grid_n if args.grid_n is not None else default.n_points
    lo = args.s_min if args.s_min is not None else default.s_min
    hi = args.s_max if args.s_max is not None else default.s_max
    try:
        return GridSpec(int(n), float(lo), float(hi))
    except (ValueError, KappaWeylError) as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc


def _tol(args, default: float) -> float:
    tol = default if args.tol is None else args.tol
    if not tol > 0:
        raise ConfigError("--tol must be positive")
    return tol


def load_symbol_file(path):
    """Read a symbol JSON file; returns ``(symbol, domain)``.

    ``domain`` is ``"position"`` (a symbol ``f(t, r)``, the default for
    Gaussian mixtures) or ``"momentum"`` (``f_hat``; always the case for
    sampled symbols).
    """
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror}") from exc
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    try:
        sym = symbol_from_dict(spec)
    except (KeyError, TypeError, ValueError, KappaWeylError) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        raise ConfigError(f"{path}: {msg}") from exc
    domain = spec.get("domain", "momentum" if isinstance(sym, SampledSymbol) else "position")
    if domain not in ("position", "momentum"):
        raise ConfigError(f"{path}: field 'domain' must be 'position' or 'momentum'")
    if isinstance(sym, SampledSymbol) and domain != "momentum":
        raise ConfigError(f"{path}: sampled symbols hold momentum values")
    if isinstance(sym, GaussianMixture) and sym.ndim != 2:
        raise ConfigError(f"{path}: expected a two-variable symbol")
    return sym, domain


def position_symbol(sym, domain):
    """Object accepted by the kernel and trace routines for ``f(T, R)``."""
    if domain == "position" or isinstance(sym, SampledSymbol):
        return sym
    return sym.inverse_fourier()


def momentum_symbol(sym, domain):
    if domain == "momentum":
        return sym
    return sym.fourier()


def _emit(text: str, out):
    data = text if text.endswith("\n") else text + "\n"
    if out:
        _atomic_write(out, data.encode())
    else:
        sys.stdout.write(data)


def _csv(rows, header) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for row in rows:
        wr.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _complex_json(z):
    return {"re": float(np.real(z)), "im": float(np.imag(z))}


# -- commands ------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        cfg = vf.RunConfig(_grid(args), DEFAULT_LATTICE, _tol(args, 1.0), args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    start = time.perf_counter()
    results = vf.run(args.suite, cfg)
    elapsed = time.perf_counter() - start
    text = vf.report_json(results) if args.format == "json" else vf.format_table(results)
    _emit(text, args.out)
    print(f"elapsed {elapsed:.1f} s", file=sys.stderr)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_quantize(args) -> int:
    sym, domain = load_symbol_file(args.symbol)
    f = position_symbol(sym, domain)
    grid = _grid(args)
    K = qz.kernel_kappa(f, grid)
    fmt = args.format or "csv"
    if fmt == "json":
        raise ConfigError("quantize writes csv or bin")
    if args.out:
        (qz.write_kernel_bin if fmt == "bin" else qz.write_kernel_csv)(K, args.out)
    rep = fn.trace_symbol(f, grid, _tol(args, 1e-8))
    summary = {"n_points": grid.n_points, "hs_norm": K.hs_norm(),
               "trace_symbol": _complex_json(rep.symbol_side),
               "trace_matrix": _complex_json(rep.operator_side),
               "relative_error": rep.relative_error}
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_star(args) -> int:
    s1, d1 = load_symbol_file(args.file1)
    s2, d2 = load_symbol_file(args.file2)
    phi, psi = momentum_symbol(s1, d1), momentum_symbol(s2, d2)
    prod = sa.star_momentum(phi, psi, box_tol=_tol(args, sa.BOX_TOL))
    if d1 == "position" and d2 == "position":
        # the transform of f star g is (f_hat * g_hat) / 2 pi
        prod = prod * (1 / (2 * np.pi))
    spec = prod.to_dict()
    spec["domain"] = "momentum"
    _emit(json.dumps(spec), args.out)
    if args.out:
        print(json.dumps({"out": args.out, "l1_norm": sa.l1_norm(prod)}))
    return EXIT_OK


def cmd_trace(args) -> int:
    sym, domain = load_symbol_file(args.symbol)
    rep = fn.trace_symbol(position_symbol(sym, domain), _grid(args), _tol(args, 1e-8))
    if args.format == "csv":
        text = _csv([[float(np.real(rep.symbol_side)), float(np.imag(rep.symbol_side)),
                      float(np.real(rep.operator_side)), float(np.imag(rep.operator_side)),
                      float(rep.relative_error)]],
                    ["symbol_re", "symbol_im", "operator_re", "operator_im", "relative_error"])
    else:
        text = json.dumps({"symbol_side": _complex_json(rep.symbol_side),
                           "operator_side": _complex_json(rep.operator_side),
                           "relative_error": rep.relative_error}, indent=2)
    _emit(text, args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    sym, domain = load_symbol_file(args.symbol)
    grid = _grid(args)
    if not 0 < args.top <= grid.n_points:
        raise ConfigError("--top must lie between 1 and the number of grid points")
    sv = fn.singular_decay(qz.kernel_kappa(position_symbol(sym, domain), grid), args.top)
    if args.format == "json":
        text = json.dumps({"singular_values": sv})
    else:
        text = _csv([[i + 1, v] for i, v in enumerate(sv)], ["index", "sigma"])
    _emit(text, args.out)
    return EXIT_OK


def cmd_uncertainty(args) -> int:
    if not args.eps > 0 or args.lambda_max < 0 or args.steps < 1:
        raise ConfigError("need --eps > 0, --lambda-max >= 0 and --steps >= 1")
    given = any(v is not None for v in (args.grid_n, args.s_min, args.s_max))
    grid = _grid(args, un.BUMP_GRID) if given else un.BUMP_GRID
    rows = []
    for lam in np.linspace(0.0, args.lambda_max, args.steps + 1):
        rep = un.moments(un.make_bump_state(args.eps, float(lam), grid))
        rows.append([float(lam), rep.delta_T, rep.delta_R, rep.product, rep.bound])
    header = ["lambda", "delta_T", "delta_R", "product", "bound"]
    if args.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2)
    else:
        text = _csv(rows, header)
    _emit(text, args.out)
    return EXIT_OK


def cmd_estimate(args) -> int:
    scales = un.PhysicalScales(args.kappa_inv_m, args.c)
    names = [n for n in un.SCENARIOS if getattr(args, n)]
    rows = []
    for n in names:
        sc = un.run_scenario(n, scales)
        rows.append([sc.name, sc.quantity, sc.value, sc.unit])
    if args.dT_s is not None or args.dR_m is not None:
        if args.dT_s is None or args.dR_m is None:
            raise ConfigError("custom estimate needs both --dT-s and --dR-m")
        rows.append(["custom", "L_max", un.estimate_L(args.dT_s, args.dR_m, scales), "m"])
    if not rows:
        rows = [[sc.name, sc.quantity, sc.value, sc.unit]
                for sc in (un.run_scenario(n, scales) for n in un.SCENARIOS)]
    header = ["scenario", "quantity", "value", "unit"]
    if args.format == "json":
        text = json.dumps([dict(zip(header, r)) for r in rows], indent=2)
    else:
        text = _csv(rows, header)
    _emit(text, args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _common(p, formats=("csv", "json")):
    p.add_argument("--grid-n", type=int, default=None, help="grid points (power of two)")
    p.add_argument("--s-min", type=float, default=None)
    p.add_argument("--s-max", type=float, default=None)
    p.add_argument("--tol", type=float, default=None,
                   help="tolerance (verify: threshold scale; trace/quantize: origin guard; "
                        "star: box guard)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=formats, default=None)
    p.add_argument("--out", default=None, help="output path (written atomically)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kappa-weyl",
                                     description="Weyl quantisation on kappa-Minkowski space")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run property suites")
    p.add_argument("suite", choices=vf.SUITES + ("all",))
    _common(p, ("text", "json"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("quantize", help="kernel matrix of a symbol")
    p.add_argument("symbol")
    _common(p, ("csv", "bin", "json"))
    p.set_defaults(func=cmd_quantize)

    p = sub.add_parser("star", help="star product of two symbols")
    p.add_argument("file1")
    p.add_argument("file2")
    _common(p, ("json",))
    p.set_defaults(func=cmd_star)

    p = sub.add_parser("trace", help="trace report of a symbol")
    p.add_argument("symbol")
    _common(p)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("spectrum", help="top singular values of the kernel")
    p.add_argument("symbol")
    p.add_argument("--top", type=int, default=64)
    _common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("uncertainty", help="bump-state uncertainties over a lambda scan")
    p.add_argument("--eps", type=float, default=0.05)
    p.add_argument("--lambda-max", type=float, default=8.0)
    p.add_argument("--steps", type=int, default=8)
    _common(p)
    p.set_defaults(func=cmd_uncertainty)

    p = sub.add_parser("estimate", help="physical-scale estimates")
    for name in un.SCENARIOS:
        p.add_argument(f"--{name}", action="store_true")
    p.add_argument("--dT-s", dest="dT_s", type=float, default=None, help="time uncertainty (s)")
    p.add_argument("--dR-m", dest="dR_m", type=float, default=None, help="radial uncertainty (m)")
    p.add_argument("--kappa-inv-m", type=float, default=1e-35, help="1/kappa in metres")
    p.add_argument("--c", type=float, default=299792458.0, help="speed of light (m/s)")
    _common(p)
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergentAtOrigin as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ORIGIN
    except (KappaWeylError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
