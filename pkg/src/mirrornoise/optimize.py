"""Power optimization of the total uncertainty and sweep tables."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .budget import NoiseBudget, RegimeWarning, budget_terms
from .errors import BracketFailure, DiscriminantNonpositive, InvalidParam, ZetaZero
from .params import SystemParams, is_zeta_admissible, zeta_of

P_BRACKET = (1e-6, 1e2)


@dataclass(frozen=True)
class OptimumReport:
    """Optimal power and the minimal total uncertainty at fixed zeta.

    ``P_opt`` is in energy squared, ``min_dz2`` in length squared;
    ``sql_ratio`` is ``min_dz2 / (t/m)``.  ``consistent`` records whether
    ``omega_bar * sqrt(min_dz2) < 1``.
    """

    zeta: float
    P_opt: float
    min_dz2: float
    branch_sign: int
    sql_ratio: float
    admissible: bool
    consistent: bool = True


def _check_zeta(zeta: float) -> None:
    if zeta == 0:
        raise ZetaZero("no finite optimum at zeta = 0: the shot-noise term is absent")
    if 22.0 - 6.0 * zeta * zeta <= 0:
        raise DiscriminantNonpositive(f"zeta**2 = {zeta * zeta:g} >= 11/3")


def _report(zeta, P_opt, min_dz2, m, omega_bar, t) -> OptimumReport:
    consistent = omega_bar * math.sqrt(max(min_dz2, 0.0)) < 1.0
    if not consistent:
        warnings.warn(
            "omega_bar*sqrt(min_dz2) >= 1: the small-displacement "
            "expansion is not self-consistent at this optimum",
            RegimeWarning,
            stacklevel=3,
        )
    return OptimumReport(
        zeta=zeta,
        P_opt=P_opt,
        min_dz2=min_dz2,
        branch_sign=1 if zeta > 0 else -1,
        sql_ratio=min_dz2 / (t / m),
        admissible=is_zeta_admissible(zeta),
        consistent=consistent,
    )


def optimal_power(zeta: float, m: float, omega_bar: float, t: float) -> OptimumReport:
    """Closed-form optimum of the total uncertainty over the input power.

    Raises
    ------
    ZetaZero, DiscriminantNonpositive
    """
    _check_zeta(zeta)
    if not t > 0:
        raise InvalidParam("t", "must be positive")
    z2 = zeta * zeta
    P_opt = abs(zeta) / math.sqrt(22.0 - 6.0 * z2) * m / (omega_bar * t * t)
    root = math.sqrt(5.5 - 1.5 * z2)
    min_dz2 = zeta * (2.0 + math.copysign(root, zeta)) * t / m
    return _report(zeta, P_opt, min_dz2, m, omega_bar, t)


def golden_section(
    f: Callable[[Decimal], Decimal],
    a: Decimal,
    b: Decimal,
    rtol: Decimal,
    maxiter: int = 500,
) -> Decimal:
    """Golden-section search for a minimum of a unimodal ``f`` on ``[a, b]``.

    Works on ``Decimal`` so the objective can be evaluated with more digits
    than a double; a minimum located from function values is otherwise only
    resolved to about the square root of the working precision.
    """
    invphi = (Decimal(5).sqrt() - 1) / 2
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxiter):
        if b - a <= rtol * abs(c + d) / 2:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    else:
        raise BracketFailure("golden-section search did not converge")
    return (a + b) / 2


def _check_unimodal(values: np.ndarray) -> int:
    """Index of the minimum of ``values`` if they fall then rise once."""
    diffs = np.sign(np.diff(values))
    diffs = diffs[diffs != 0]
    changes = np.count_nonzero(np.diff(diffs))
    if changes > 1:
        raise BracketFailure("total(P) is not unimodal on the search bracket")
    i = int(np.argmin(values))
    if i == 0 or i == len(values) - 1:
        direction = "increasing" if i == 0 else "decreasing"
        raise BracketFailure(
            f"total(P) is monotone ({direction}) on the search bracket; no interior minimum"
        )
    return i


def numeric_minimize(
    zeta: float, m: float, omega_bar: float, t: float, rtol: float = 1e-10
) -> OptimumReport:
    """Golden-section cross-check of ``optimal_power``.

    The search runs over ``P in [1e-6, 1e2] * m / (omega_bar t**2)``.

    Raises
    ------
    BracketFailure
        If total(P) is monotone or multimodal on the bracket, which for
        ``zeta = 0`` is the expected outcome.
    """
    if not t > 0:
        raise InvalidParam("t", "must be positive")
    scale = m / (omega_bar * t * t)
    grid = np.geomspace(*P_BRACKET, 65) * scale
    coarse = np.array([_total_float(zeta, P, omega_bar, m, t) for P in grid])
    i = _check_unimodal(coarse)
    if zeta == 0:
        raise BracketFailure("total(P) has no interior minimum at zeta = 0")
    _check_zeta(zeta)

    with localcontext() as ctx:
        ctx.prec = 40
        Z, W, M, T = (Decimal(float(v)) for v in (zeta, omega_bar, m, t))
        a_sn = Z * Z / (4 * W * T)
        c_cub = W * T**3 / (M * M) * (Decimal("5.5") - Decimal("1.5") * Z * Z)

        def objective(P: Decimal) -> Decimal:
            # The P-independent linear correlation term drops out of the argmin.
            return a_sn / P + c_cub * P

        lo, hi = Decimal(float(grid[i - 1])), Decimal(float(grid[i + 1]))
        P_star = float(golden_section(objective, lo, hi, Decimal(rtol) / 10))
    min_dz2 = budget_terms(zeta, P_star, omega_bar, m, t).total
    return _report(zeta, P_star, min_dz2, m, omega_bar, t)


def _total_float(zeta, P, omega_bar, m, t) -> float:
    return budget_terms(zeta, P, omega_bar, m, t).total


def worst_negative_zeta(m: float, omega_bar: float, t: float) -> tuple[float, float]:
    """Largest optimal uncertainty on the admissible negative branch.

    Returns
    -------
    (zeta_star, min_dz2_star)
    """
    lo = -1.0
    hi = -(math.sqrt(2.0) - 1.0)
    res = minimize_scalar(
        lambda z: -optimal_power(z, m, omega_bar, t).min_dz2 * m / t,
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    z = float(res.x)
    return z, optimal_power(z, m, omega_bar, t).min_dz2


# -- sweeps ------------------------------------------------------------------

AXES = ("zeta", "sqrtP_t")


@dataclass(frozen=True)
class SweepRow:
    value: float
    t: float
    power: float
    zeta: float
    budget: NoiseBudget
    sql: float


@dataclass(frozen=True)
class SweepTable:
    axis: str
    rows: tuple[SweepRow, ...]

    def records(self) -> list[dict[str, float | str]]:
        return [
            {"axis": self.axis, "value": r.value, **r.budget.as_row(), "sql": r.sql}
            for r in self.rows
        ]


SWEEP_COLUMNS = ("axis", "value", "sn", "rp", "mf", "cor_lin", "cor_quad", "total", "sql")


def sweep(
    params: SystemParams,
    axis: str,
    lo: float,
    hi: float,
    steps: int,
    t: float | None = None,
    spacing: str | None = None,
    threads: int = 1,
) -> SweepTable:
    """Tabulate the budget along one axis.

    ``axis="sqrtP_t"`` keeps the power of ``params`` and the geometry factor
    fixed and varies time through ``value = sqrt(P) * t`` (log spacing by
    default).  ``axis="zeta"`` evaluates each row at its own optimal power
    at time ``t`` (default ``1/m``, linear spacing by default), so
    ``total/sql`` is the normalized minimum.
    """
    if axis not in AXES:
        raise InvalidParam("axis", f"must be one of {AXES}")
    if steps < 2:
        raise InvalidParam("steps", "must be at least 2")
    if not lo < hi:
        raise InvalidParam("range", "lower end must be below upper end")
    spacing = spacing or ("log" if axis == "sqrtP_t" else "linear")
    if spacing == "log":
        if lo <= 0:
            raise InvalidParam("range", "log spacing needs a positive range")
        values = np.geomspace(lo, hi, steps)
    elif spacing == "linear":
        values = np.linspace(lo, hi, steps)
    else:
        raise InvalidParam("spacing", "must be log or linear")
    if np.any(np.diff(values) <= 0):
        raise InvalidParam("range", "too many steps for the range in double precision")

    m, w = params.mass, params.omega_bar
    if axis == "sqrtP_t":
        zeta = zeta_of(params)
        power = params.power
        root_p = math.sqrt(power)

        def row(v: float) -> SweepRow:
            tt = v / root_p
            return SweepRow(v, tt, power, zeta, budget_terms(zeta, power, w, m, tt), tt / m)

    else:
        tt = 1.0 / m if t is None else t

        def row(v: float) -> SweepRow:
            P = optimal_power(v, m, w, tt).P_opt
            return SweepRow(v, tt, P, v, budget_terms(v, P, w, m, tt), tt / m)

    vals = [float(v) for v in values]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, vals))
    else:
        rows = [row(v) for v in vals]
    return SweepTable(axis=axis, rows=tuple(rows))
