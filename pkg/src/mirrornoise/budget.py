"""Closed-form late-time signal and noise budget of the effective distance."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

from .errors import InvalidParam, PowerZero
from .params import SystemParams, regime_report, zeta_of


class RegimeWarning(UserWarning):
    """A closed form is being used outside its regime of validity."""


@dataclass(frozen=True)
class NoiseBudget:
    """Contributions to the squared effective-distance uncertainty.

    All entries have units of length squared.  ``total`` is the sum of the
    five contributions.
    """

    sn: float
    rp: float
    mf: float
    cor_linear: float
    cor_quadratic: float
    total: float

    @property
    def cubic(self) -> float:
        """The ``t**3`` group ``rp + mf + cor_quadratic``."""
        return self.rp + self.mf + self.cor_quadratic

    def as_row(self) -> dict[str, float]:
        return {
            "sn": self.sn,
            "rp": self.rp,
            "mf": self.mf,
            "cor_lin": self.cor_linear,
            "cor_quad": self.cor_quadratic,
            "total": self.total,
        }


@dataclass(frozen=True)
class MeanObservables:
    mean_I: float
    mean_q: float
    d_mean_I_dL: float
    d2_mean_I_dL2: float


def budget_terms(zeta: float, power: float, omega_bar: float, mass: float, t: float) -> NoiseBudget:
    """Budget at explicit ``(zeta, P, t)``.

    Raises
    ------
    PowerZero
        If ``power`` is zero (the shot-noise term diverges).
    """
    if power == 0:
        raise PowerZero("shot noise diverges at P = 0")
    if not t > 0:
        raise InvalidParam("t", "must be positive")
    cubic = power * omega_bar * t**3 / mass**2
    sn = zeta * zeta / (4.0 * power * omega_bar * t)
    rp = cubic
    mf = cubic
    cor_lin = 2.0 * zeta * t / mass
    cor_quad = cubic * (3.5 - 1.5 * zeta * zeta)
    return NoiseBudget(
        sn=sn,
        rp=rp,
        mf=mf,
        cor_linear=cor_lin,
        cor_quadratic=cor_quad,
        total=sn + rp + mf + cor_lin + cor_quad,
    )


def total_closed(zeta: float, power: float, omega_bar: float, mass: float, t: float) -> float:
    """The grouped three-term expression of the total, evaluated directly."""
    return (
        zeta * zeta / (4.0 * power * omega_bar * t)
        + 2.0 * zeta * t / mass
        + power * omega_bar * t**3 / mass**2 * (5.5 - 1.5 * zeta * zeta)
    )


def noise_budget(params: SystemParams, t: float) -> NoiseBudget:
    return budget_terms(zeta_of(params), params.power, params.omega_bar, params.mass, t)


def shot_noise_alone(params: SystemParams, t: float) -> float:
    zeta = zeta_of(params)
    power = params.power
    if power == 0:
        raise PowerZero("shot noise diverges at P = 0")
    return 0.25 * zeta * zeta / (power * params.omega_bar * t)


def _warn_if_short(params: SystemParams, t: float) -> None:
    if not regime_report(params, t).long_time:
        warnings.warn(
            f"t={t:g} is outside the long-time regime (omega_bar*t="
            f"{params.omega_bar * t:g}, L-z0={params.separation:g})",
            RegimeWarning,
            stacklevel=3,
        )


def mean_signal(params: SystemParams, t: float) -> MeanObservables:
    """Expected read-out and mean displacement at late time.

    The read-out derivatives are with respect to the mirror position L.
    """
    _warn_if_short(params, t)
    nbar = params.mean_density
    w = params.omega_bar
    x = params.phase_advance
    s = math.sin(x)
    return MeanObservables(
        mean_I=nbar * (2.0 / w) * s * s * t,
        mean_q=params.power * t * t / params.mass,
        d_mean_I_dL=2.0 * nbar * math.sin(2.0 * x) * t,
        d2_mean_I_dL2=4.0 * nbar * w * math.cos(2.0 * x) * t,
    )


def particle_number_view(params: SystemParams, t: float) -> tuple[float, float]:
    """Mean particle number and the read-out rebuilt from it.

    Returns
    -------
    (mean_n, I_from_n)
    """
    _warn_if_short(params, t)
    mean_n = params.mean_density * t
    s = math.sin(params.phase_advance)
    I_from_n = (2.0 / params.omega_bar) * s * s * mean_n
    mean_I = params.mean_density * (2.0 / params.omega_bar) * s * s * t
    assert math.isclose(I_from_n, mean_I, rel_tol=1e-12, abs_tol=0.0), (I_from_n, mean_I)
    return mean_n, I_from_n


def mean_velocity(params: SystemParams, t: float) -> float:
    """Mean mirror velocity ``2 omega_bar <n(t)> / m``."""
    return 2.0 * params.omega_bar * params.mean_density * t / params.mass
