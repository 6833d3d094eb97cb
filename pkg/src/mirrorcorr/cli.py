"""Command-line surface: sweeps, fits, plots, and the oracle residual suite.

Exit codes: 0 success, 1 usage/config error, 2 numerical convergence
failure, 3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

from . import __version__
from .continuum import (
    QuadratureSpec,
    ScaledDistances,
    correlation_C_general,
    correlation_C_of_d,
    reduced_integral_I,
)
from .csvio import format_float, read_rows, write_rows
from .errors import ConfigError, ConvergenceError, DomainError, FitError, MirrorCorrError
from .fitting import fit_power_law
from .model import CouplingModel, ModeSet, PhysicalParams, load_config
from .oracle import TruncationSpec, build_hamiltonian, ground_state, measure_correlation
from .perturb import PerturbativeState, phi_squared_shift, squared_field_correlation_discrete
from .specfun import aux_f, aux_g, cos_integral, sin_integral
from .svgplot import render_plot
from .validate import run_lambda_ladder

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_CONVERGENCE = 2
EXIT_IO = 3

_SWEEP_QUANTITIES = ("C_discrete", "C_continuum", "I_of_d", "phi2_shift")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mirrorcorr",
        description="Cross-cavity squared-field correlations of a quantum-fluctuating mirror.",
    )
    p.add_argument("--version", action="version", version=f"mirrorcorr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add_physics(sp):
        sp.add_argument("--config", help="JSON configuration file")
        sp.add_argument("--n-modes", type=int, default=None, help="discrete mode count")
        sp.add_argument("--uv-cutoff", type=float, default=None, help="regulator frequency")
        sp.add_argument("--lambda", dest="lam", type=float, default=None,
                        help="coupling multiplier")

    def add_quad(sp):
        sp.add_argument("--tol-rel", type=float, default=1e-9)
        sp.add_argument("--tol-abs", type=float, default=1e-12)

    sp = sub.add_parser("specfun", help="evaluate Si, Ci, or the auxiliary functions f, g")
    sp.add_argument("--fn", required=True, choices=("Si", "Ci", "f", "g"))
    sp.add_argument("--x", required=True, type=float)

    sp = sub.add_parser("correlate", help="connected <phi^2 phi^2> at one point pair")
    add_physics(sp)
    add_quad(sp)
    sp.add_argument("--method", required=True, choices=("discrete", "continuum", "oracle"))
    sp.add_argument("--d", type=float, help="equal scaled wall distance d1 = d2")
    sp.add_argument("--d1", type=float)
    sp.add_argument("--d2", type=float)

    sp = sub.add_parser("sweep", help="evaluate a quantity over a distance grid, emit CSV")
    add_physics(sp)
    add_quad(sp)
    sp.add_argument("--quantity", required=True, choices=_SWEEP_QUANTITIES)
    sp.add_argument("--min", required=True, type=float)
    sp.add_argument("--max", required=True, type=float)
    sp.add_argument("--n-points", required=True, type=int)
    sp.add_argument("--spacing", choices=("linear", "log"), default="linear")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out", required=True)

    sp = sub.add_parser("fit", help="power-law fit of a sweep CSV")
    sp.add_argument("--input", required=True)
    sp.add_argument("--d-min", required=True, type=float)
    sp.add_argument("--d-max", required=True, type=float)
    sp.add_argument("--exponent", type=float, default=None, help="force the exponent")
    sp.add_argument("--threshold", type=float, default=0.05, help="max rms log-residual")

    sp = sub.add_parser("plot", help="render a sweep CSV to SVG")
    sp.add_argument("--input", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--axes", choices=("linear", "loglog"), default="linear")

    sp = sub.add_parser("oracle-validate", help="run the lambda-ladder residual suite")
    add_physics(sp)

    return p


def _load_physics(args) -> tuple[PhysicalParams, ModeSet, CouplingModel]:
    if args.config:
        params, modes, model = load_config(args.config)
    else:
        params = PhysicalParams(m=1.0, omega0=1.0, L0=math.pi)
        modes = ModeSet.dirichlet(64, params.L0)
        model = CouplingModel(params=params)
    if args.n_modes is not None or args.uv_cutoff is not None:
        modes = ModeSet(
            n_modes=args.n_modes if args.n_modes is not None else modes.n_modes,
            spacing=modes.spacing,
            uv_cutoff=args.uv_cutoff if args.uv_cutoff is not None else modes.uv_cutoff,
        )
    if args.lam is not None:
        model = CouplingModel(params=params, scale=args.lam)
    return params, modes, model


def _positions_from_d(d1: float, d2: float, params: PhysicalParams) -> tuple[float, float]:
    """Map scaled distances back to cavity positions; validity checked downstream."""
    x1 = params.L0 - d1 / params.k0
    x2 = params.L0 + d2 / params.k0
    return x1, x2


def _cmd_specfun(args) -> int:
    fn = {"Si": sin_integral, "Ci": cos_integral, "f": aux_f, "g": aux_g}[args.fn]
    print(f"{fn(args.x):.15g}")
    return EXIT_OK


def _cmd_correlate(args) -> int:
    params, modes, model = _load_physics(args)
    if args.d is not None:
        d1 = d2 = args.d
    elif args.d1 is not None and args.d2 is not None:
        d1, d2 = args.d1, args.d2
    else:
        raise ConfigError("correlate needs --d or both --d1 and --d2")
    spec = QuadratureSpec(rel_tol=args.tol_rel, abs_tol=args.tol_abs)
    if args.method == "continuum":
        if d1 == d2:
            res = correlation_C_of_d(d1, params, spec)
        else:
            res = correlation_C_general(ScaledDistances(d1, d2), params, spec)
    elif args.method == "discrete":
        x1, x2 = _positions_from_d(d1, d2, params)
        state = PerturbativeState(modes=modes, model=model)
        res = squared_field_correlation_discrete(x1, x2, state)
    else:
        x1, x2 = _positions_from_d(d1, d2, params)
        n = min(modes.n_modes, 2)
        small = ModeSet(n_modes=n, spacing=modes.spacing, uv_cutoff=modes.uv_cutoff)
        trunc = TruncationSpec(m1=n, m2=n, n_wall_max=5, n_mode_max=5, q_max=5)
        h = build_hamiltonian(trunc, small, model)
        _, vec = ground_state(h)
        res = measure_correlation(vec, x1, x2, trunc, small, params)
    print(f"value = {format_float(res.value)}")
    print(f"est_abs_err = {format_float(res.est_abs_err)}")
    print(f"method = {res.method}")
    return EXIT_OK


def _grid(lo: float, hi: float, n: int, spacing: str) -> list[float]:
    if not (hi > lo):
        raise ConfigError("sweep grid needs max > min")
    if n < 2:
        raise ConfigError("sweep grid needs n_points >= 2")
    if spacing == "log":
        if lo <= 0:
            raise ConfigError("log spacing requires min > 0")
        r = (hi / lo) ** (1.0 / (n - 1))
        return [lo * r**i for i in range(n)]
    step = (hi - lo) / (n - 1)
    return [lo + step * i for i in range(n)]


def _cmd_sweep(args) -> int:
    params, modes, model = _load_physics(args)
    spec = QuadratureSpec(rel_tol=args.tol_rel, abs_tol=args.tol_abs)
    grid = _grid(args.min, args.max, args.n_points, args.spacing)
    state = PerturbativeState(modes=modes, model=model)

    def eval_point(d: float):
        try:
            if args.quantity == "C_continuum":
                res = correlation_C_of_d(d, params, spec)
                return (d, res.value, res.est_abs_err, "ok")
            if args.quantity == "I_of_d":
                val, err = reduced_integral_I(d, spec)
                return (d, val * d**3, err * d**3, "ok")
            x1, x2 = _positions_from_d(d, d, params)
            if args.quantity == "C_discrete":
                res = squared_field_correlation_discrete(x1, x2, state)
                return (d, res.value, res.est_abs_err, "ok")
            return (d, phi_squared_shift(x1, 1, state), 0.0, "ok")
        except ConvergenceError as exc:
            return (d, exc.best_estimate, exc.est_abs_err, "convergence_failure")
        except DomainError:
            return (d, None, None, "domain_error")

    jobs = max(1, args.jobs)
    if jobs == 1:
        rows = [eval_point(d) for d in grid]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(eval_point, grid))  # grid order preserved

    metadata = {
        "tool": f"mirrorcorr {__version__}",
        "quantity": args.quantity,
        "grid": f"{format_float(args.min)}..{format_float(args.max)} "
                f"n={args.n_points} spacing={args.spacing}",
        "units": params.units,
        "m": format_float(params.m),
        "omega0": format_float(params.omega0),
        "L0": format_float(params.L0),
        "n_modes": modes.n_modes,
        "uv_cutoff": format_float(modes.uv_cutoff) if modes.uv_cutoff else "none",
        "lambda": format_float(model.scale),
        "tol_rel": format_float(args.tol_rel),
        "tol_abs": format_float(args.tol_abs),
    }
    try:
        write_rows(args.out, rows, metadata)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    n_bad = sum(1 for r in rows if r[3] != "ok")
    print(f"wrote {args.out}: {len(rows)} rows, {n_bad} failed points")
    return EXIT_OK


def _cmd_fit(args) -> int:
    try:
        _, rows = read_rows(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    data = [
        (x, v)
        for x, v, _, status in rows
        if status == "ok" and v is not None and args.d_min <= x <= args.d_max
    ]
    if len(data) < 4:
        raise ConfigError(
            f"need >= 4 usable rows in [{args.d_min}, {args.d_max}], found {len(data)}"
        )
    xs = [x for x, _ in data]
    ys = [abs(v) for _, v in data]
    coeff, exponent, resid = fit_power_law(
        xs, ys, forced_exponent=args.exponent, residual_threshold=None
    )
    print(f"coefficient = {coeff:.10g}")
    print(f"exponent = {exponent:.10g}")
    print(f"rms_log_residual = {resid:.3e}")
    if resid > args.threshold:
        print(f"FAIL: residual above threshold {args.threshold:g}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


def _cmd_plot(args) -> int:
    try:
        metadata, rows = read_rows(args.input)
    except OSError as exc:
        print(f"error: cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_IO
    pts = [(x, v) for x, v, _, status in rows if status == "ok" and v is not None]
    if not pts:
        raise MirrorCorrError("no plottable rows in input (all failed or empty)")
    title = metadata.get("quantity", "")
    try:
        render_plot(pts, args.out, axes=args.axes, title=title)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_oracle_validate(args) -> int:
    report = run_lambda_ladder()
    print(report.format_table())
    if not report.passed:
        print("FAIL: lambda-ladder residuals do not shrink at the required rate",
              file=sys.stderr)
        return EXIT_CONVERGENCE
    print("PASS: all residual ratios meet the lambda^3 gate")
    return EXIT_OK


_COMMANDS = {
    "specfun": _cmd_specfun,
    "correlate": _cmd_correlate,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
    "plot": _cmd_plot,
    "oracle-validate": _cmd_oracle_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, FitError) as exc:
        print(f"convergence error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except MirrorCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
