"""Finite-bandwidth averaging of the noise budget.

The incident field is spread over a narrow band around the carrier.  Each
noise contribution is a ratio ``numerator / normalization`` whose factors
oscillate with the fringe phase ``omega * (L - z0)``; numerators and the
normalization are averaged over the band separately and then divided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson

from .errors import BandRegimeInvalid, BandwidthInconsistent, InvalidParam, QuadratureNonConverged
from .params import SystemParams, validate_params

SHAPES = ("tophat", "gaussian")
GAUSS_SUPPORT = 6.0
POINTS_PER_FRINGE = 20
MAX_POINTS = 2**22 + 1

# Fast-phase averages of the fringe factors.
AVG_SIN4 = 3.0 / 8.0
AVG_SIN2COS2 = 1.0 / 8.0
AVG_SIN2_2X = 1.0 / 2.0


@dataclass(frozen=True)
class BandSpec:
    center: float
    half_width: float
    shape: str = "tophat"
    points: int = 2001

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise InvalidParam("shape", f"must be one of {SHAPES}")
        if self.points < 3 or self.points % 2 == 0:
            raise InvalidParam("points", "must be odd and at least 3")
        if not (self.half_width > 0 and self.center > 0):
            raise InvalidParam("half_width", "band center and width must be positive")

    def support(self) -> tuple[float, float]:
        reach = self.half_width if self.shape == "tophat" else GAUSS_SUPPORT * self.half_width
        return max(self.center - reach, 0.0), self.center + reach

    def weight(self, omega: np.ndarray) -> np.ndarray:
        """Unnormalized band profile on its (clipped) support."""
        if self.shape == "tophat":
            return np.ones_like(omega)
        return np.exp(-0.5 * ((omega - self.center) / self.half_width) ** 2)


@dataclass(frozen=True)
class BandBudget:
    """Band-averaged budget, lengths squared.

    ``mf_plus_cor_bar`` is the sum of the modified-field and both correlation
    contributions, which cancel on average.
    """

    sn_bar: float
    rp_bar: float
    mf_bar: float
    cor_linear_bar: float
    cor_quadratic_bar: float
    mf_plus_cor_bar: float
    total_bar: float
    P_opt_bar: float
    min_bar: float

    def as_row(self) -> dict[str, float]:
        return {
            "sn_bar": self.sn_bar,
            "rp_bar": self.rp_bar,
            "mf_bar": self.mf_bar,
            "cor_lin_bar": self.cor_linear_bar,
            "cor_quad_bar": self.cor_quadratic_bar,
            "total_bar": self.total_bar,
        }


BAND_COLUMNS = ("method", "t", "sn_bar", "rp_bar", "mf_bar", "cor_lin_bar", "cor_quad_bar", "total_bar")


def default_band(params: SystemParams, shape: str = "tophat", points: int = 2001) -> BandSpec:
    if params.sigma0 is None:
        raise BandRegimeInvalid("no bandwidth sigma0 given")
    return BandSpec(params.omega_bar, params.sigma0, shape, points)


def _check_regime(params: SystemParams) -> None:
    if params.sigma0 is None:
        raise BandRegimeInvalid("no bandwidth sigma0 given")
    try:
        validate_params(params)
    except BandwidthInconsistent as exc:
        raise BandRegimeInvalid(str(exc)) from None


def band_optimum(params: SystemParams, t: float) -> tuple[float, float]:
    """Optimal power and minimal band-averaged uncertainty.

    Returns
    -------
    (P_opt_bar, min_bar)
    """
    m, w = params.mass, params.omega_bar
    return math.sqrt(3.0) / 2.0 * m / (w * t * t), math.sqrt(3.0) * t / m


def band_budget_closed_form(params: SystemParams, t: float) -> BandBudget:
    """Budget with every fringe factor replaced by its fast-phase average."""
    _check_regime(params)
    if not t > 0:
        raise InvalidParam("t", "must be positive")
    P, w, m = params.power, params.omega_bar, params.mass
    if P == 0:
        raise BandRegimeInvalid("band average of the shot noise diverges at P = 0")
    norm = 16.0 * AVG_SIN2COS2
    sn = 4.0 * AVG_SIN4 / norm / (P * w * t)
    cubic = P * w * t**3 / m**2
    rp = 16.0 * AVG_SIN2COS2 / norm * cubic
    mf = 4.0 * AVG_SIN2_2X / norm * cubic
    cor_quad = 16.0 * (3.5 * AVG_SIN2COS2 - 1.5 * AVG_SIN4) / norm * cubic
    cor_lin = 0.0
    mf_plus_cor = mf + cor_lin + cor_quad
    P_opt, min_bar = band_optimum(params, t)
    return BandBudget(
        sn_bar=sn,
        rp_bar=rp,
        mf_bar=mf,
        cor_linear_bar=cor_lin,
        cor_quadratic_bar=cor_quad,
        mf_plus_cor_bar=mf_plus_cor,
        total_bar=sn + rp + mf_plus_cor,
        P_opt_bar=P_opt,
        min_bar=min_bar,
    )


def total_bar_closed(power: float, omega_bar: float, mass: float, t: float) -> float:
    return 0.75 / (power * omega_bar * t) + power * omega_bar * t**3 / mass**2


# -- numerical band averages ----------------------------------------------

TERMS = ("sn", "rp", "mf", "cor_lin", "cor_quad", "mf_plus_cor", "total")
MOMENTS = ("sin4", "sin2cos2", "sin2_2x", "norm")


def _numerators(params: SystemParams, t: float, omega: np.ndarray) -> dict[str, np.ndarray]:
    nbar = params.mean_density
    m = params.mass
    x = omega * params.separation
    s, c = np.sin(x), np.cos(x)
    s2, c2 = s * s, c * c
    slow = 16.0 * nbar**3 * omega**2 * t**5 / m**2
    out = {
        "norm": 16.0 * nbar**2 * s2 * c2 * t**2,
        "sn": 4.0 * nbar * s2 * s2 * t / omega**2,
        "rp": slow * s2 * c2,
        "mf": 4.0 * nbar**3 * omega**2 * t**5 * np.sin(2.0 * x) ** 2 / m**2,
        "cor_lin": 32.0 * nbar**2 * s2 * s * c * t**3 / m,
        "cor_quad": slow * (3.5 * s2 * c2 - 1.5 * s2 * s2),
    }
    out["mf_plus_cor"] = out["mf"] + out["cor_lin"] + out["cor_quad"]
    out["total"] = out["sn"] + out["rp"] + out["mf_plus_cor"]
    return out


def _moments(params: SystemParams, omega: np.ndarray) -> dict[str, np.ndarray]:
    x = omega * params.separation
    s2, c2 = np.sin(x) ** 2, np.cos(x) ** 2
    return {
        "sin4": s2 * s2,
        "sin2cos2": s2 * c2,
        "sin2_2x": np.sin(2.0 * x) ** 2,
        "norm": s2 * c2,
    }


def _starting_points(band: BandSpec, separation: float) -> int:
    lo, hi = band.support()
    # cos(4 omega D) is the fastest fringe factor in any numerator.
    fringes = (hi - lo) * 4.0 * separation / (2.0 * math.pi)
    n = max(band.points, int(math.ceil(POINTS_PER_FRINGE * fringes)) + 1)
    return n + 1 if n % 2 == 0 else n


def band_average(
    integrands,
    band: BandSpec,
    separation: float,
    names,
    rtol: float = 1e-6,
) -> tuple[dict[str, float], int]:
    """Weighted band averages of several integrands with a shared grid.

    ``integrands(omega)`` must return a mapping name -> values.  The grid is
    refined by doubling until the Richardson estimate of every requested
    average is below ``rtol`` relative to the integral of its magnitude.

    Returns
    -------
    (averages, points_used)
    """
    lo, hi = band.support()
    n = _starting_points(band, separation)
    while True:
        omega = np.linspace(lo, hi, n)
        w = band.weight(omega)
        vals = integrands(omega)
        wnorm = simpson(w, x=omega)
        result, ok = {}, True
        for name in names:
            f = w * vals[name]
            fine = simpson(f, x=omega)
            coarse = simpson(f[::2], x=omega[::2])
            scale = simpson(np.abs(f), x=omega)
            err = abs(fine - coarse) / 15.0
            if scale > 0 and err > rtol * scale:
                ok = False
            result[name] = fine / wnorm
        if ok:
            return result, n
        if 2 * n - 1 > MAX_POINTS:
            raise QuadratureNonConverged(
                f"band quadrature did not reach rtol={rtol:g} with {n} points"
            )
        n = 2 * n - 1


def numeric_band_average(
    params: SystemParams,
    t: float,
    band: BandSpec | None = None,
    which: str = "total",
    rtol: float = 1e-6,
) -> float:
    """Band-averaged budget term, or a raw fringe-factor moment.

    ``which`` is one of the budget terms ``sn``, ``rp``, ``mf``, ``cor_lin``,
    ``cor_quad``, ``mf_plus_cor``, ``total`` (returned as averaged numerator
    over averaged normalization), or one of the moments ``sin4``,
    ``sin2cos2``, ``sin2_2x``, ``norm`` (returned as a plain band average of
    the fringe factor).
    """
    _check_regime(params)
    band = band or default_band(params)
    if which in TERMS:
        avgs, _ = band_average(
            lambda om: _numerators(params, t, om), band, params.separation, (which, "norm"), rtol
        )
        return avgs[which] / avgs["norm"]
    if which in MOMENTS:
        avgs, _ = band_average(
            lambda om: _moments(params, om), band, params.separation, (which,), rtol
        )
        return avgs[which]
    raise InvalidParam("which", f"must be one of {TERMS + MOMENTS}")


def numeric_band_budget(
    params: SystemParams, t: float, band: BandSpec | None = None, rtol: float = 1e-6
) -> BandBudget:
    """All band-averaged terms from one shared quadrature grid."""
    _check_regime(params)
    band = band or default_band(params)
    names = ("norm", "sn", "rp", "mf", "cor_lin", "cor_quad")
    avgs, _ = band_average(
        lambda om: _numerators(params, t, om), band, params.separation, names, rtol
    )
    norm = avgs["norm"]
    sn, rp, mf, cl, cq = (avgs[k] / norm for k in names[1:])
    P_opt, min_bar = band_optimum(params, t)
    return BandBudget(
        sn_bar=sn,
        rp_bar=rp,
        mf_bar=mf,
        cor_linear_bar=cl,
        cor_quadratic_bar=cq,
        mf_plus_cor_bar=mf + cl + cq,
        total_bar=sn + rp + mf + cl + cq,
        P_opt_bar=P_opt,
        min_bar=min_bar,
    )
