"""Physical parameters, derived scales and regime checks.

Natural units with hbar = c = 1 throughout.  Masses and frequencies are
energies, lengths and times are inverse energies.  The canonical
dimensionless knobs are ``omega_bar/m``, ``P/m**2`` and ``t*m``.
"""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .errors import BandwidthInconsistent, InvalidParam, ZetaSingular

TWO_PI_CUBED = (2.0 * math.pi) ** 3
ZETA_ADMISSIBLE_LOW = math.sqrt(2.0) - 1.0
ZETA_ADMISSIBLE_HIGH = 1.0


@dataclass(frozen=True)
class Thresholds:
    """Numerical stand-ins for the "much less/greater than" conditions."""

    slow_motion: float = 0.1
    displacement: float = 0.1
    long_time: float = 100.0
    bandwidth_factor: float = 10.0
    zeta_pole: float = 1e-9


@dataclass(frozen=True)
class SystemParams:
    """Mirror, field and detector configuration.

    Attributes
    ----------
    mass : float
        Mirror mass m.
    omega_bar : float
        Carrier frequency.
    L : float
        Mirror rest position.
    z0 : float
        Detector position, must satisfy ``z0 < L``.
    area : float
        Mirror cross-sectional area.
    alpha_sq : float
        Coherent amplitude squared (particle density in k-space).
    phase : float
        Coherent phase in radians.
    sigma0 : float or None
        Band half-width.  ``None`` means a monochromatic carrier.
    gap : float or None
        Detector energy gap.  Recorded only; the response function is taken
        on resonance.
    """

    mass: float
    omega_bar: float
    L: float
    z0: float = 0.0
    area: float = TWO_PI_CUBED
    alpha_sq: float = 1.0
    phase: float = 0.0
    sigma0: float | None = None
    gap: float | None = None
    thresholds: Thresholds = field(default_factory=Thresholds)

    @property
    def separation(self) -> float:
        """Mirror-detector distance ``L - z0``."""
        return self.L - self.z0

    @property
    def mean_density(self) -> float:
        """Mean particle number per unit time, ``A |alpha|^2 / (2 pi)^3``."""
        return self.area * self.alpha_sq / TWO_PI_CUBED

    @property
    def power(self) -> float:
        return self.mean_density * self.omega_bar

    @property
    def phase_advance(self) -> float:
        return self.omega_bar * self.separation

    def replace(self, **changes) -> "SystemParams":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_dimensionless(
        cls,
        omega_ratio: float,
        power_ratio: float,
        zeta: float,
        mass: float = 1.0,
        **extra,
    ) -> "SystemParams":
        """Build parameters from ``omega_bar/m``, ``P/m**2`` and ``zeta``.

        The separation is the smallest positive root of
        ``tan(omega_bar * D) = zeta``; the area is fixed to ``(2 pi)**3`` so
        that ``alpha_sq`` carries the power.
        """
        omega_bar = omega_ratio * mass
        power = power_ratio * mass**2
        phase_adv = math.atan(zeta) % math.pi
        if phase_adv == 0.0:
            phase_adv = math.pi
        return cls(
            mass=mass,
            omega_bar=omega_bar,
            L=phase_adv / omega_bar,
            z0=0.0,
            area=TWO_PI_CUBED,
            alpha_sq=power / omega_bar,
            **extra,
        )


@dataclass(frozen=True)
class DerivedScales:
    power: float
    zeta: float
    theta_sm: float
    phase_advance: float
    gap: float | None
    t: float


@dataclass(frozen=True)
class RegimeReport:
    theta_sm: float
    slow_motion: bool
    displacement_small: bool
    zeta_admissible: bool
    long_time: bool
    zeta: float


def validate_params(raw: SystemParams) -> SystemParams:
    """Return ``raw`` unchanged if every invariant holds.

    Raises
    ------
    InvalidParam
        For the first violated basic invariant.
    BandwidthInconsistent
        If a band is present but not narrow, or not wide compared with the
        fringe spacing.
    """
    p = raw
    checks = [
        ("mass", p.mass > 0, "must be positive"),
        ("omega_bar", p.omega_bar > 0, "must be positive"),
        ("z0", p.z0 < p.L, "detector must sit left of mirror"),
        ("area", p.area > 0, "must be positive"),
        ("alpha_sq", p.alpha_sq >= 0, "must be non-negative"),
    ]
    for name, ok, reason in checks:
        if not (ok and _finite(getattr(p, name))):
            raise InvalidParam(name, reason if not ok else "must be finite")
    for name in ("L", "phase"):
        if not _finite(getattr(p, name)):
            raise InvalidParam(name, "must be finite")
    if p.sigma0 is not None:
        factor = p.thresholds.bandwidth_factor
        if not p.sigma0 > 0:
            raise BandwidthInconsistent("sigma0 must be positive")
        if p.sigma0 * factor > p.omega_bar:
            raise BandwidthInconsistent(
                f"sigma0={p.sigma0:g} is not << omega_bar={p.omega_bar:g} "
                f"(factor {factor:g})"
            )
        if p.sigma0 * p.separation < factor:
            raise BandwidthInconsistent(
                f"sigma0*(L-z0)={p.sigma0 * p.separation:g} is not >> 1 "
                f"(factor {factor:g})"
            )
    return p


def _finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)


def near_tan_pole(phase_adv: float, tol: float) -> bool:
    r = (phase_adv - 0.5 * math.pi) % math.pi
    return min(r, math.pi - r) < tol


def zeta_of(params: SystemParams) -> float:
    """Geometry factor ``tan(omega_bar (L - z0))``.

    Raises ``ZetaSingular`` near a pole of tan.
    """
    x = params.phase_advance
    if near_tan_pole(x, params.thresholds.zeta_pole):
        raise ZetaSingular(
            f"omega_bar*(L-z0)={x!r} is within "
            f"{params.thresholds.zeta_pole:g} rad of a tan pole"
        )
    return math.tan(x)


def derive_scales(params: SystemParams, t: float) -> DerivedScales:
    if not t >= 0:
        raise InvalidParam("t", "must be non-negative")
    power = params.power
    return DerivedScales(
        power=power,
        zeta=zeta_of(params),
        theta_sm=power * params.omega_bar * t * t / params.mass,
        phase_advance=params.phase_advance,
        gap=params.gap,
        t=t,
    )


def is_zeta_admissible(zeta: float) -> bool:
    return ZETA_ADMISSIBLE_LOW < abs(zeta) < ZETA_ADMISSIBLE_HIGH


def regime_report(params: SystemParams, t: float) -> RegimeReport:
    """Evaluate the validity flags at time ``t``; never raises on regime."""
    th = params.thresholds
    power = params.power
    theta = power * params.omega_bar * t * t / params.mass
    mean_q = power * t * t / params.mass
    if near_tan_pole(params.phase_advance, th.zeta_pole):
        zeta = math.inf
    else:
        zeta = math.tan(params.phase_advance)
    return RegimeReport(
        theta_sm=theta,
        slow_motion=theta < th.slow_motion,
        displacement_small=params.omega_bar * mean_q < th.displacement,
        zeta_admissible=is_zeta_admissible(zeta),
        long_time=params.omega_bar * t > th.long_time and t > params.separation,
        zeta=zeta,
    )


# -- config files -----------------------------------------------------------

_CONFIG_KEYS = {
    "m": "mass",
    "mass": "mass",
    "omega_bar": "omega_bar",
    "l": "L",
    "z0": "z0",
    "area": "area",
    "alpha_sq": "alpha_sq",
    "phase": "phase",
    "sigma0": "sigma0",
    "gap": "gap",
}
_THRESHOLD_FIELDS = {f.name for f in dataclasses.fields(Thresholds)}


def read_config(path: str | Path) -> dict[str, str]:
    """Read a flat ``key = value`` file into a dict of raw strings.

    Blank lines and lines starting with ``#`` or ``;`` are ignored.  Keys are
    case-insensitive.
    """
    text = Path(path).read_text(encoding="utf-8")
    cp = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#", ";"), delimiters=("=",)
    )
    try:
        cp.read_string("[top]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise InvalidParam("config", f"{path}: {exc}") from None
    return dict(cp["top"])


def params_from_mapping(
    values: Mapping[str, object], base: SystemParams | None = None
) -> SystemParams:
    """Build (or override) parameters from a flat key/value mapping.

    Recognized keys: ``m``, ``omega_bar``, ``L_minus_z0``, ``L``, ``z0``,
    ``area``, ``alpha_sq``, ``phase``, ``sigma0``, ``gap`` and
    ``thresholds.<name>``.  ``L_minus_z0`` places the detector at ``z0=0``
    unless ``z0`` is also given.
    """
    kw: dict[str, object] = {}
    thr: dict[str, float] = {}
    sep = None
    for key, raw in values.items():
        k = key.strip().lower()
        if raw is None:
            continue
        if k.startswith("thresholds."):
            name = k.split(".", 1)[1]
            if name not in _THRESHOLD_FIELDS:
                raise InvalidParam(key, "unknown threshold")
            thr[name] = _to_float(key, raw)
        elif k == "l_minus_z0":
            sep = _to_float(key, raw)
        elif k in _CONFIG_KEYS:
            if k in ("sigma0", "gap") and str(raw).strip().lower() in ("", "none"):
                kw[_CONFIG_KEYS[k]] = None
            else:
                kw[_CONFIG_KEYS[k]] = _to_float(key, raw)
        else:
            raise InvalidParam(key, "unknown configuration key")
    if sep is not None:
        z0 = kw.get("z0", base.z0 if base is not None else 0.0)
        kw["z0"] = z0
        kw["L"] = z0 + sep  # type: ignore[operator]
    if base is None:
        missing = [n for n in ("mass", "omega_bar", "L") if n not in kw]
        if missing:
            raise InvalidParam(missing[0], "required but not given")
        if thr:
            kw["thresholds"] = Thresholds(**thr)
        return SystemParams(**kw)  # type: ignore[arg-type]
    if thr:
        kw["thresholds"] = dataclasses.replace(base.thresholds, **thr)
    return dataclasses.replace(base, **kw)


def load_config(path: str | Path, base: SystemParams | None = None) -> SystemParams:
    return params_from_mapping(read_config(path), base)


def _to_float(key: str, raw) -> float:
    try:
        return float(raw)
    except (TypeError, ValueError):
        raise InvalidParam(key, f"not a number: {raw!r}") from None
