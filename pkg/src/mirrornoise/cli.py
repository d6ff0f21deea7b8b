"""Command-line interface: budget, optimize, sweep, band, simulate, verify."""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import band as band_mod
from . import langevin, oracle
from .budget import budget_terms
from .errors import InvalidParam, MirrorNoiseError
from .optimize import SWEEP_COLUMNS, numeric_minimize, optimal_power, sweep
from .params import TWO_PI_CUBED, SystemParams, load_config, params_from_mapping, validate_params, zeta_of

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_VERIFY_FAILED = 2
EXIT_USAGE = 64

DEFAULT_OMEGA_RATIO = 1e-2
DEFAULT_POWER_RATIO = 1e-4
DEFAULT_ZETA = 1.0
DEFAULT_RANGES = {"sqrtP_t": (1e-2, 1e3), "zeta": (-1.9, 1.9)}

BUDGET_COLUMNS = ("t", "sn", "rp", "mf", "cor_lin", "cor_quad", "total")
OPTIMUM_COLUMNS = (
    "method", "zeta", "t", "P_opt", "min_dz2", "P_opt_scaled", "min_scaled",
    "branch_sign", "admissible", "consistent",
)
TRAJECTORY_COLUMNS = ("t", "q", "v")
STATS_COLUMNS = ("t", "mean_q", "var_q", "se_mean", "se_var")


@dataclass
class Table:
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)


def format_value(value) -> str:
    """Locale-independent text form; floats keep 17 significant digits."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float) or hasattr(value, "dtype"):
        return format(float(value), ".17g")
    return str(value)


def _render_csv(table: Table, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(row[c]) for c in table.columns])


def write_csv(table: Table, path) -> None:
    """Write ``table`` as CSV with a header row and LF line endings.

    ``path`` may be a filesystem path or an open text stream.
    """
    if hasattr(path, "write"):
        _render_csv(table, path)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            _render_csv(table, fh)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc


def render_table(table: Table) -> str:
    cells = [list(table.columns)] + [
        [format_value(r[c]) for c in table.columns] for r in table.rows
    ]
    widths = [max(len(row[i]) for row in cells) for i in range(len(table.columns))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def emit(table: Table, out: str | None, fmt: str) -> None:
    if fmt == "table":
        text = render_table(table)
        if out is None:
            sys.stdout.write(text)
        else:
            try:
                Path(out).write_text(text, encoding="utf-8")
            except OSError as exc:
                raise OSError(f"cannot write {out}: {exc.strerror or exc}") from exc
    elif out is None:
        buf = io.StringIO()
        _render_csv(table, buf)
        sys.stdout.write(buf.getvalue())
    else:
        write_csv(table, out)


# -- argument parsing ------------------------------------------------------------


class Parser(argparse.ArgumentParser):
    """Reports malformed input with the relevant help text and exit code 64."""

    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output and execution")
    g.add_argument("--config", metavar="PATH", help="key = value parameter file (flags win)")
    g.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    g.add_argument("--format", choices=("csv", "table"), default="csv")
    g.add_argument("--threads", type=_positive_int, default=1)
    g.add_argument("--seed", type=int, default=0)
    d = p.add_argument_group("dimensionless parameters (units of m)")
    d.add_argument("--omega-ratio", type=float, help=f"omega_bar/m (default {DEFAULT_OMEGA_RATIO:g})")
    d.add_argument("--power-ratio", type=float, help=f"P/m^2 (default {DEFAULT_POWER_RATIO:g})")
    d.add_argument("--zeta", type=float, help=f"tan(omega_bar (L - z0)) (default {DEFAULT_ZETA:g})")
    q = p.add_argument_group("physical parameters (override the above)")
    q.add_argument("--m", type=float, help="mirror mass (default 1)")
    q.add_argument("--omega-bar", type=float)
    q.add_argument("--L-minus-z0", dest="L_minus_z0", type=float)
    q.add_argument("--area", type=float)
    q.add_argument("--alpha-sq", type=float)
    q.add_argument("--phase", type=float)
    q.add_argument("--sigma0", type=float, help="band half-width")
    return p


def build_parser() -> Parser:
    common = _common()
    parser = Parser(
        prog="mirrornoise",
        description="Noise budget, optimization and simulation of a mirror driven by a coherent field.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    b = sub.add_parser("budget", parents=[common], help="noise budget at given times")
    b.add_argument("--t", type=float, nargs="+", default=[100.0], help="observation times")

    o = sub.add_parser("optimize", parents=[common], help="optimal power at fixed zeta")
    o.add_argument("--t", type=float, default=None, help="observation time (default 1/m)")
    o.add_argument("--method", choices=("closed", "numeric", "both"), default="closed")

    s = sub.add_parser("sweep", parents=[common], help="budget table along one axis")
    s.add_argument("--axis", choices=("sqrtP_t", "zeta"), default="sqrtP_t")
    s.add_argument("--range", type=float, nargs=2, metavar=("LO", "HI"))
    s.add_argument("--steps", type=int, default=200)
    s.add_argument("--spacing", choices=("log", "linear"))
    s.add_argument("--t", type=float, default=None, help="time for the zeta axis (default 1/m)")

    bd = sub.add_parser("band", parents=[common], help="band-averaged budget")
    bd.add_argument("--t", type=float, nargs="+", default=None, help="times (default: 100/omega_bar)")
    bd.add_argument("--shape", choices=band_mod.SHAPES, default="tophat")
    bd.add_argument("--points", type=int, default=2001, help="minimum quadrature points (odd)")
    bd.add_argument("--method", choices=("closed", "numeric", "both"), default="both")
    bd.add_argument("--at-optimum", action="store_true", help="use the band-optimal power at each t")

    sm = sub.add_parser("simulate", parents=[common], help="Langevin trajectories and ensembles")
    sm.add_argument("--t-end", type=float, required=True)
    sm.add_argument("--dt", type=float, default=None, help="step (default: carrier period / 40)")
    sm.add_argument("--paths", type=_positive_int, default=1,
                    help="1 writes the trajectory (t,q,v); more write ensemble statistics")
    sm.add_argument("--backreaction", choices=("on", "off"), default="on")
    sm.add_argument("--noise", choices=langevin.NOISE_MODES, default="white")
    sm.add_argument("--regulator", type=float, default=None,
                    help="dense-mode point-splitting regulator (default 2 dt)")

    v = sub.add_parser("verify", parents=[common], help="run the oracle suite")
    v.add_argument("--paranoid", action="store_true", help="also run direct nested quadrature")
    parser.commands = sub.choices
    return parser


def resolve_params(args) -> SystemParams:
    """Config file, then dimensionless knobs, then physical flags."""
    base = load_config(args.config) if args.config else None
    dimensionless = (args.omega_ratio, args.power_ratio, args.zeta)
    if base is None or any(v is not None for v in dimensionless):
        mass = args.m if args.m is not None else (base.mass if base else 1.0)
        if base is not None:
            w_ratio = base.omega_bar / base.mass
            p_ratio = base.power / base.mass**2
            zeta = zeta_of(base)
        else:
            w_ratio, p_ratio, zeta = DEFAULT_OMEGA_RATIO, DEFAULT_POWER_RATIO, DEFAULT_ZETA
        extra = {"phase": base.phase, "sigma0": base.sigma0, "gap": base.gap,
                 "thresholds": base.thresholds} if base else {}
        base = SystemParams.from_dimensionless(
            args.omega_ratio if args.omega_ratio is not None else w_ratio,
            args.power_ratio if args.power_ratio is not None else p_ratio,
            args.zeta if args.zeta is not None else zeta,
            mass=mass,
            **extra,
        )
    overrides = {
        "m": args.m,
        "omega_bar": args.omega_bar,
        "L_minus_z0": args.L_minus_z0,
        "area": args.area,
        "alpha_sq": args.alpha_sq,
        "phase": args.phase,
        "sigma0": args.sigma0,
    }
    return validate_params(params_from_mapping(overrides, base))


# -- subcommands -----------------------------------------------------------------


def effective_zeta(args, params: SystemParams) -> float:
    """``--zeta`` as given unless a physical flag moved the geometry."""
    if args.zeta is not None and args.L_minus_z0 is None and args.omega_bar is None:
        return args.zeta
    return zeta_of(params)


def cmd_budget(args, params: SystemParams) -> tuple[Table, int]:
    zeta = effective_zeta(args, params)
    table = Table(BUDGET_COLUMNS)
    for t in args.t:
        if not t > 0:
            raise InvalidParam("t", "must be positive")
        row = budget_terms(zeta, params.power, params.omega_bar, params.mass, t).as_row()
        table.rows.append({"t": t, **row})
    return table, EXIT_OK


def cmd_optimize(args, params: SystemParams) -> tuple[Table, int]:
    zeta = effective_zeta(args, params)
    m, w = params.mass, params.omega_bar
    t = args.t if args.t is not None else 1.0 / m
    methods = ("closed", "numeric") if args.method == "both" else (args.method,)
    table = Table(OPTIMUM_COLUMNS)
    for method in methods:
        rep = optimal_power(zeta, m, w, t) if method == "closed" else numeric_minimize(zeta, m, w, t)
        table.rows.append({
            "method": method,
            "zeta": zeta,
            "t": t,
            "P_opt": rep.P_opt,
            "min_dz2": rep.min_dz2,
            "P_opt_scaled": rep.P_opt * w * t * t / m,
            "min_scaled": rep.sql_ratio,
            "branch_sign": rep.branch_sign,
            "admissible": rep.admissible,
            "consistent": rep.consistent,
        })
    return table, EXIT_OK


def cmd_sweep(args, params: SystemParams) -> tuple[Table, int]:
    lo, hi = args.range if args.range else DEFAULT_RANGES[args.axis]
    result = sweep(params, args.axis, lo, hi, args.steps, t=args.t,
                   spacing=args.spacing, threads=args.threads)
    return Table(SWEEP_COLUMNS, result.records()), EXIT_OK


def cmd_band(args, params: SystemParams) -> tuple[Table, int]:
    times = args.t if args.t else [100.0 / params.omega_bar]
    methods = ("closed", "numeric") if args.method == "both" else (args.method,)
    table = Table(band_mod.BAND_COLUMNS)
    for t in times:
        p = params
        if args.at_optimum:
            power = band_mod.band_optimum(params, t)[0]
            p = params.replace(alpha_sq=power * TWO_PI_CUBED / (params.area * params.omega_bar))
        spec = band_mod.default_band(p, args.shape, args.points)
        for method in methods:
            if method == "closed":
                res = band_mod.band_budget_closed_form(p, t)
            else:
                res = band_mod.numeric_band_budget(p, t, spec)
            table.rows.append({"method": method, "t": t, **res.as_row()})
    return table, EXIT_OK


def cmd_simulate(args, params: SystemParams) -> tuple[Table, int]:
    dt = args.dt if args.dt is not None else langevin.max_step(params)
    n = max(1, round(args.t_end / dt))
    t_end = n * dt
    back = args.backreaction == "on"
    if args.paths == 1:
        tr = langevin.integrate_trajectory(params, t_end, dt, args.seed, back, args.noise,
                                           args.regulator)
        rows = [{"t": a, "q": b, "v": c} for a, b, c in zip(tr.t, tr.q, tr.v)]
        return Table(TRAJECTORY_COLUMNS, rows), EXIT_OK
    st = langevin.run_ensemble(params, t_end, dt, args.paths, args.seed, back, args.noise,
                               threads=args.threads, regulator=args.regulator)
    rows = [
        {"t": a, "mean_q": b, "var_q": c, "se_mean": d, "se_var": e}
        for a, b, c, d, e in zip(st.t, st.mean_q, st.var_q, st.se_mean, st.se_var)
    ]
    return Table(STATS_COLUMNS, rows), EXIT_OK


def cmd_verify(args, params: SystemParams) -> tuple[Table, int]:
    rows = oracle.run_verification(paranoid=args.paranoid)
    table = Table(oracle.VERIFY_COLUMNS, [r.as_row() for r in rows])
    ok = all(r.passed for r in rows)
    return table, EXIT_OK if ok else EXIT_VERIFY_FAILED


COMMANDS = {
    "budget": cmd_budget,
    "optimize": cmd_optimize,
    "sweep": cmd_sweep,
    "band": cmd_band,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


def run(argv=None) -> int:
    """Parse ``argv``, dispatch, write output; returns the exit code."""
    parser = build_parser()
    try:
        args, extra = parser.parse_known_args(argv)
        if extra:
            parser.commands[args.command].error(f"unrecognized arguments: {' '.join(extra)}")
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        params = resolve_params(args)
        table, code = COMMANDS[args.command](args, params)
        emit(table, args.out, args.format)
    except (MirrorNoiseError, OSError) as exc:
        print(f"mirrornoise {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
