"""Brute-force quadrature checks of the late-time asymptotics.

Time integrals are reduced analytically to sinc-type kernels and the
remaining frequency integral is done with composite Gauss-Legendre panels
about half a kernel oscillation wide.  A slow "paranoid" variant performs
the time integrals numerically as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, quad, simpson

from .errors import CutoffTooLow, FdrViolation, InvalidParam
from .params import SystemParams, TWO_PI_CUBED
from .quadrature import (
    cos_over_x2_tail,
    gauss_legendre,
    power_exp_tail,
    sin_over_x_tail,
    uniform_edges,
)

DEFAULT_CUTOFF_FACTOR = 100.0
CUTOFF_SHIFT_TOL = 5e-3
SERIES_SWITCH = 1e-2


@dataclass(frozen=True)
class OracleResult:
    """Outcome of one brute-force check.

    ``deviation`` is ``|numeric - asymptotic| / |asymptotic|``, or the
    absolute difference when the asymptote is zero.
    """

    name: str
    numeric: float
    asymptotic: float
    deviation: float
    tolerance: float = math.nan
    metadata: dict = field(default_factory=dict)
    converged: bool = True

    @property
    def passed(self) -> bool:
        return bool(self.converged and self.deviation <= self.tolerance)

    def as_row(self) -> dict[str, object]:
        return {
            "check": self.name,
            "numeric": self.numeric,
            "asymptotic": self.asymptotic,
            "deviation": self.deviation,
            "tolerance": self.tolerance,
            "pass": "true" if self.passed else "false",
        }


VERIFY_COLUMNS = ("check", "numeric", "asymptotic", "deviation", "tolerance", "pass")


def relative_deviation(numeric: float, asymptotic: float) -> float:
    if asymptotic == 0:
        return abs(numeric)
    return abs(numeric - asymptotic) / abs(asymptotic)


def _cutoff(params_or_w, cutoff):
    w = params_or_w.omega_bar if isinstance(params_or_w, SystemParams) else params_or_w
    return DEFAULT_CUTOFF_FACTOR * w if cutoff is None else cutoff


def _check_shift(name: str, low: float, high: float, cutoff: float) -> float:
    shift = abs(high - low) / abs(high) if high != 0 else abs(high - low)
    if shift > CUTOFF_SHIFT_TOL:
        raise CutoffTooLow(
            f"{name}: result moved by {shift:.3g} (> {CUTOFF_SHIFT_TOL:g}) when the "
            f"cutoff doubled from {cutoff:g}"
        )
    return shift


# -- shot noise ---------------------------------------------------------------


def _sinc_sq(delta, t):
    return (t * np.sinc(delta * t / (2.0 * math.pi))) ** 2


def shot_noise_oracle(
    params: SystemParams,
    t: float,
    cutoff: float | None = None,
    order: int = 16,
    tolerance: float = 0.02,
    check_cutoff: bool = True,
) -> OracleResult:
    """Variance of the accumulated read-out against its late-time form.

    The double time integral of the two-point function collapses to
    ``t**2 sinc**2``; the frequency integral over ``[0, cutoff]`` is done by
    panel quadrature.  The asymptote is ``4 nbar sin**4(omega_bar D) t /
    omega_bar**2``.

    Raises
    ------
    CutoffTooLow
        If doubling the cutoff moves the frequency integral by more than
        0.5%.
    """
    w, D, nbar = params.omega_bar, params.separation, params.mean_density
    if w * t < 10:
        raise InvalidParam("t", "shot-noise oracle needs omega_bar*t >= 10")
    lam = _cutoff(params, cutoff)

    def freq_integral(upper):
        def f(om):
            return np.sin(om * D) ** 2 / (2.0 * om) * _sinc_sq(om - w, t)

        edges = uniform_edges(0.0, upper, math.pi / t, anchors=(w,))
        val, err, _ = gauss_legendre(f, edges, order=order)
        return val / (2.0 * math.pi), err / (2.0 * math.pi), len(edges) - 1

    integral, err, panels = freq_integral(lam)
    shift = math.nan
    if check_cutoff:
        shift = _check_shift("shot_noise", integral, freq_integral(2.0 * lam)[0], lam)
    s2 = math.sin(w * D) ** 2
    numeric = nbar * (8.0 / w) * s2 * integral
    asym = 4.0 * nbar * s2 * s2 * t / w**2
    return OracleResult(
        name="shot_noise",
        numeric=numeric,
        asymptotic=asym,
        deviation=relative_deviation(numeric, asym),
        tolerance=tolerance,
        metadata={"cutoff": lam, "panels": panels, "order": order,
                  "quad_error": err, "cutoff_shift": shift, "omega_t": w * t},
    )


# -- nascent delta kernel ---------------------------------------------------


def delta_kernel_check(
    t: float,
    omega_bar: float,
    g: str = "one",
    separation: float | None = None,
    cutoff: float | None = None,
    order: int = 16,
    tolerance: float | None = None,
) -> OracleResult:
    """Check ``int_0^inf g(omega) sin((omega-omega_bar) t/2)/(omega-omega_bar)``
    against ``pi g(omega_bar)``.

    ``g`` is ``"one"`` or ``"fringe"`` (``sin**2(omega D)``).  The part of
    the integral above the cutoff is added in closed form through the sine
    and cosine integrals, so the only deviation left is the genuine
    finite-time one.
    """
    w = omega_bar
    if w * t < 100:
        raise InvalidParam("t", "delta-kernel check needs omega_bar*t >= 100")
    lam = _cutoff(w, cutoff)
    k = 0.5 * t
    if g == "one":
        gfun = np.ones_like
        target = math.pi
        tol = 0.01 if tolerance is None else tolerance
    elif g == "fringe":
        if separation is None:
            raise InvalidParam("separation", "required for the fringe test function")
        D = separation

        def gfun(om):
            return np.sin(om * D) ** 2

        target = math.pi * math.sin(w * D) ** 2
        tol = 0.02 if tolerance is None else tolerance
    else:
        raise InvalidParam("g", "must be 'one' or 'fringe'")

    def f(om):
        return gfun(om) * k * np.sinc(k * (om - w) / math.pi)

    edges = uniform_edges(0.0, lam, math.pi / t, anchors=(w,))
    body, err, _ = gauss_legendre(f, edges, order=order)
    a = lam - w
    if g == "one":
        tail = sin_over_x_tail(k, 0.0, a)
    else:
        c = 2.0 * w * D
        tail = 0.5 * sin_over_x_tail(k, 0.0, a) - 0.25 * (
            sin_over_x_tail(k + 2.0 * D, c, a) + sin_over_x_tail(k - 2.0 * D, -c, a)
        )
    numeric = float(body + tail)
    return OracleResult(
        name=f"delta_kernel_{g}",
        numeric=numeric,
        asymptotic=target,
        deviation=relative_deviation(numeric, target),
        tolerance=tol,
        metadata={"cutoff": lam, "panels": len(edges) - 1, "tail": tail,
                  "quad_error": err, "omega_t": w * t},
    )


# -- radiation-pressure variance -------------------------------------------


def response_g(delta: np.ndarray, t: float) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of ``int_0^t (t-s) exp(-i delta s) ds``."""
    delta = np.asarray(delta, dtype=float)
    x = delta * t
    small = np.abs(x) < SERIES_SWITCH
    d = np.where(small, 1.0, delta)
    xs = np.where(small, 1.0, x)
    re = np.where(small, t * t / 2.0 - delta**2 * t**4 / 24.0, 2.0 * np.sin(xs / 2.0) ** 2 / d**2)
    im = np.where(
        small,
        -(delta * t**3 / 6.0 - delta**3 * t**5 / 120.0),
        -(xs - np.sin(xs)) / d**2,
    )
    return re, im


def _response_sq(delta, t):
    re, im = response_g(delta, t)
    return re * re + im * im


def _rp_integral(w, t, lower_shift, upper, order):
    """``int_0^upper omega |G(omega - lower_shift)|^2 domega``."""

    def f(om):
        return om * _response_sq(om - lower_shift, t)

    anchors = (lower_shift,) if lower_shift > 0 else ()
    edges = uniform_edges(0.0, upper, math.pi / t, anchors=anchors)
    val, err, _ = gauss_legendre(f, edges, order=order)
    return float(val), err, len(edges) - 1


def rp_variance_value(params: SystemParams, t: float, cutoff: float | None = None, order: int = 16):
    w, m, nbar = params.omega_bar, params.mass, params.mean_density
    lam = _cutoff(params, cutoff)
    integral, err, panels = _rp_integral(w, t, w, lam, order)
    pref = 4.0 * w * nbar / m**2 / (2.0 * math.pi)
    return pref * integral, pref * err, panels


def rp_variance_oracle(
    params: SystemParams,
    t: float,
    cutoff: float | None = None,
    order: int = 16,
    tolerance: float = 0.05,
    check_cutoff: bool = True,
) -> OracleResult:
    """Dominant radiation-pressure variance against ``P omega_bar t**3/m**2``.

    Evaluates ``(4 omega_bar nbar/m**2) int_0^cutoff domega/(2 pi) omega
    |G(omega - omega_bar)|**2`` with ``G`` the doubly integrated phase
    factor.  By Parseval ``int |G|**2 ddelta = 2 pi t**3 / 3``, so the exact
    late-time value is ``(4/3) P omega_bar t**3 / m**2``; that figure and the
    deviation from it are reported in the metadata.
    """
    w = params.omega_bar
    if w * t < 100:
        raise InvalidParam("t", "rp-variance oracle needs omega_bar*t >= 100")
    lam = _cutoff(params, cutoff)
    numeric, err, panels = rp_variance_value(params, t, lam, order)
    shift = math.nan
    if check_cutoff:
        shift = _check_shift("rp_variance", numeric, rp_variance_value(params, t, 2 * lam, order)[0], lam)
    asym = params.power * w * t**3 / params.mass**2
    exact = 4.0 / 3.0 * asym
    return OracleResult(
        name="rp_variance",
        numeric=numeric,
        asymptotic=asym,
        deviation=relative_deviation(numeric, asym),
        tolerance=tolerance,
        metadata={"cutoff": lam, "panels": panels, "quad_error": err, "cutoff_shift": shift,
                  "exact_asymptote": exact,
                  "exact_deviation": relative_deviation(numeric, exact),
                  "omega_t": w * t},
    )


def rp_subdominant_value(params: SystemParams, t: float, cutoff: float, order: int = 16):
    w, m, nbar = params.omega_bar, params.mass, params.mean_density
    integral, err, panels = _rp_integral(w, t, -w, cutoff, order)
    pref = 2.0 * nbar * w / (math.pi * m**2)
    return pref * integral, pref * err, panels


def rp_subdominant_asymptote(params: SystemParams, t: float, cutoff: float) -> float:
    w, m, nbar = params.omega_bar, params.mass, params.mean_density
    bracket = math.log((cutoff + w) / w) - 1.0 / (1.0 + w / cutoff) + 1.0 / (3.0 * w * w * t * t)
    return 2.0 * nbar * w * t * t / (math.pi * m**2) * bracket


def rp_subdominant_oracle(
    params: SystemParams,
    t: float,
    cutoff: float | None = None,
    order: int = 16,
    tolerance: float = 0.05,
) -> OracleResult:
    """Cutoff-regularized cross term against its logarithmic asymptote.

    The metadata carries the ratio to the dominant term at the same ``t``
    and cutoff and the bound ``1e-2 ln(cutoff/omega_bar)`` it should obey.

    Raises
    ------
    CutoffTooLow
        If the cutoff is below ``10 omega_bar``.
    """
    w = params.omega_bar
    lam = _cutoff(params, cutoff)
    if lam < 10.0 * w:
        raise CutoffTooLow(f"cutoff {lam:g} is below 10 omega_bar")
    if w * t < 100:
        raise InvalidParam("t", "subdominant oracle needs omega_bar*t >= 100")
    numeric, err, panels = rp_subdominant_value(params, t, lam, order)
    asym = rp_subdominant_asymptote(params, t, lam)
    dominant = rp_variance_value(params, t, lam, order)[0]
    return OracleResult(
        name="rp_subdominant",
        numeric=numeric,
        asymptotic=asym,
        deviation=relative_deviation(numeric, asym),
        tolerance=tolerance,
        metadata={"cutoff": lam, "panels": panels, "quad_error": err,
                  "ratio_to_dominant": numeric / dominant,
                  "ratio_bound": 1e-2 * math.log(lam / w), "omega_t": w * t},
    )


# -- regulated radial integrals -------------------------------------------


def _k_terms(n: int, eps: float, w: float) -> list[tuple[int, float, float]]:
    """(power, sin coefficient, cos coefficient) of the K_n integrand."""
    e2 = eps * eps
    terms = [
        (n - 2, w * w * e2 - (n - 1), 0.0),
        (n - 4, (n - 1) * (3 - n) * e2, 0.0),
        (n - 1, 0.0, w),
        (n - 3, 0.0, (2 * n - 3) * w * e2),
    ]
    return [tm for tm in terms if tm[1] != 0.0 or tm[2] != 0.0]


def k_integral_raw(
    n: int,
    eps: float,
    theta: float,
    omega_bar: float,
    periods: int | None = None,
    order: int = 16,
    rtol: float = 1e-10,
) -> tuple[float, dict]:
    """``K_n`` at finite point splitting ``eps``.

    Gauss-Legendre on geometric panels from ``eps`` to ``1/omega_bar``, then
    quarter-period panels over whole carrier periods, then the Abel
    regularized closed-form remainder of every ``R**p`` oscillatory term.
    The remainder is exact for non-negative powers, so a single period is
    used unless a negative power needs room for its asymptotic series.
    Growing powers cancel against each other, which limits the absolute
    accuracy for large ``n``.
    """
    if n < 0:
        raise InvalidParam("n", "must be non-negative")
    w = omega_bar
    if not 0 < eps * w <= 1e-2:
        raise InvalidParam("eps", "need 0 < eps*omega_bar <= 1e-2")
    terms = _k_terms(n, eps, w)
    if periods is None:
        periods = 64 if any(p < 0 for p, _, _ in terms) else 1
    r1 = 1.0 / w
    rmax = r1 + periods * 2.0 * math.pi / w

    def f(R):
        ph = theta - w * R
        s, c = np.sin(ph), np.cos(ph)
        out = np.zeros_like(R)
        for p, a, b in terms:
            rp = R**p
            out += rp * (a * s + b * c)
        return out

    decades = math.log10(r1 / eps)
    near = np.geomspace(eps, r1, max(2, int(math.ceil(16 * decades)) + 1))
    far = uniform_edges(r1, rmax, 0.5 * math.pi / w)
    edges = np.concatenate([near[:-1], far])
    body, err, mag = gauss_legendre(f, edges, order=order, rtol=rtol)
    tail = 0.0
    phase = complex(math.cos(theta), math.sin(theta))
    for p, a, b in terms:
        j = phase * power_exp_tail(p, rmax, w)
        tail += a * j.imag + b * j.real
    return float(body + tail), {"rmax": rmax, "panels": len(edges) - 1, "quad_error": err,
                                "magnitude": mag, "tail": tail}


def k_closed_form(n: int, eps: float, theta: float, omega_bar: float) -> float:
    ph = theta - omega_bar * eps
    if n == 0:
        return -omega_bar * math.cos(ph)
    return eps ** (n - 1) * (n * math.sin(ph) - omega_bar * eps * math.cos(ph))


def k_limit(n: int, theta: float, omega_bar: float) -> float:
    if n == 0:
        return -omega_bar * math.cos(theta)
    if n == 1:
        return math.sin(theta)
    return 0.0


def k_integral(
    n: int,
    eps: float | None,
    theta: float,
    omega_bar: float,
    periods: int | None = None,
    tolerance: float = 1e-3,
) -> OracleResult:
    """``K_n`` extrapolated to zero splitting by two-point Richardson.

    ``2 K(eps/2) - K(eps)`` removes the linear term.  The result is flagged
    non-converged if repeating the extrapolation from ``eps/2`` moves it by
    more than ``tolerance``.
    """
    w = omega_bar
    eps = 1e-3 / w if eps is None else eps
    k1, meta = k_integral_raw(n, eps, theta, w, periods)
    k2, _ = k_integral_raw(n, eps / 2, theta, w, periods)
    k4, _ = k_integral_raw(n, eps / 4, theta, w, periods)
    ext = 2.0 * k2 - k1
    ext_half = 2.0 * k4 - k2
    limit = k_limit(n, theta, w)
    scale = w if n == 0 else 1.0
    stable = abs(ext - ext_half) <= tolerance * scale
    return OracleResult(
        name=f"k{n}_limit",
        numeric=ext,
        asymptotic=limit,
        deviation=abs(ext - limit) / scale,
        tolerance=tolerance,
        metadata={"eps": eps, "raw": k1, "raw_half": k2, "rmax": meta["rmax"],
                  "richardson_shift": abs(ext - ext_half)},
        converged=bool(stable),
    )


# -- fluctuation-dissipation ------------------------------------------------


@dataclass(frozen=True)
class KernelPair:
    """Frequency-domain response and noise kernels at the mirror surface."""

    omega: np.ndarray
    chi: np.ndarray
    sigma: np.ndarray
    position: float


def _h(a, delta):
    return (delta * delta - a * a) / (delta * delta + a * a) ** 2


def _s(a, delta):
    return 2.0 * a * delta / (delta * delta + a * a) ** 2


def noise_kernel_time(tau, amplitude, eps, delta):
    """Regulated symmetrized correlator of the normal derivative at the surface."""
    return amplitude / (2.0 * math.pi) * (_h(tau + eps, delta) + _h(tau - eps, delta))


def response_kernel_time(tau, amplitude, eps, delta):
    """Regulated retarded response kernel (zero for ``tau < 0``)."""
    tau = np.asarray(tau, dtype=float)
    val = amplitude / math.pi * (_s(tau + eps, delta) + _s(tau - eps, delta))
    return np.where(tau >= 0, val, 0.0)


def _fourier(fun, omega, kind, cuts):
    """``int_0^inf fun(tau) cos|sin(omega tau) dtau`` split at ``cuts``."""
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        val, _ = quad(fun, a, b, weight=kind, wvar=omega, limit=400, epsabs=0.0, epsrel=1e-11)
        total += val
    if omega != 0:
        val, _ = quad(fun, cuts[-1], np.inf, weight=kind, wvar=abs(omega), limlst=200, epsabs=1e-13)
        total += val if (kind == "cos" or omega > 0) else -val
    return total


def fdr_kernels(
    omega_bar: float,
    grid: np.ndarray | None = None,
    amplitude: float = 1.0,
    eps: float | None = None,
    delta: float | None = None,
    position: float = 0.0,
) -> KernelPair:
    """Fourier transform the time-domain kernels numerically.

    The noise kernel falls off as ``-(amplitude/pi)/tau**2``; that part of
    its far tail is integrated in closed form.
    """
    w = omega_bar
    eps = 1e-2 / w if eps is None else eps
    delta = 2e-3 / w if delta is None else delta
    if grid is None:
        pos = np.geomspace(0.1 * w, 10.0 * w, 41)
        grid = np.concatenate([-pos[::-1], pos])
    grid = np.asarray(grid, dtype=float)
    far = 20.0 / w
    cuts = sorted({0.0, *(c for c in (eps - 20 * delta, eps - 2 * delta, eps + 2 * delta,
                                      eps + 20 * delta) if c > 0), far})

    def sig(tau):
        return noise_kernel_time(tau, amplitude, eps, delta)

    def sig_remainder(tau):
        return sig(tau) + amplitude / math.pi / tau**2

    def chi_t(tau):
        return response_kernel_time(tau, amplitude, eps, delta)

    sigma = np.empty(grid.shape)
    chi = np.empty(grid.shape, dtype=complex)
    for i, om in enumerate(grid):
        body = 0.0
        for a, b in zip(cuts[:-1], cuts[1:]):
            body += quad(sig, a, b, weight="cos", wvar=om, limit=400, epsabs=0.0, epsrel=1e-11)[0]
        rem = quad(sig_remainder, far, np.inf, weight="cos", wvar=abs(om), limlst=200)[0]
        body += rem - amplitude / math.pi * cos_over_x2_tail(om, far)
        sigma[i] = 2.0 * body
        re = _fourier(chi_t, om, "cos", cuts)
        im = _fourier(chi_t, om, "sin", cuts)
        chi[i] = complex(re, im)
    return KernelPair(omega=grid, chi=chi, sigma=sigma, position=position)


@dataclass(frozen=True)
class FdrResult:
    kernels: KernelPair
    result: OracleResult


def fdr_check(
    omega_bar: float,
    grid: np.ndarray | None = None,
    rtol: float = 0.01,
    raise_on_fail: bool = True,
    **kernel_kw,
) -> FdrResult:
    """Check ``sigma(omega) = Im chi(omega) sign(omega)`` pointwise.

    Raises
    ------
    FdrViolation
        With the worst-offending frequency, if ``raise_on_fail``.
    """
    kp = fdr_kernels(omega_bar, grid, **kernel_kw)
    rhs = kp.chi.imag * np.sign(kp.omega)
    band = (np.abs(kp.omega) >= 0.1 * omega_bar * (1 - 1e-12)) & (
        np.abs(kp.omega) <= 10.0 * omega_bar * (1 + 1e-12)
    )
    dev = np.abs(kp.sigma - rhs) / np.maximum(np.abs(rhs), np.finfo(float).tiny)
    dev = np.where(band, dev, 0.0)
    i = int(np.argmax(dev))
    worst = float(dev[i])
    res = OracleResult(
        name="fdr",
        numeric=worst,
        asymptotic=0.0,
        deviation=worst,
        tolerance=rtol,
        metadata={"worst_omega": float(kp.omega[i]), "points": int(band.sum())},
    )
    if raise_on_fail and worst > rtol:
        raise FdrViolation(float(kp.omega[i]), worst)
    return FdrResult(kp, res)


# -- paranoid mode ---------------------------------------------------------


def _time_grid(t: float, cutoff: float, per_radian: float = 8.0) -> np.ndarray:
    """Uniform grid with at least ``per_radian`` points per radian of phase at the cutoff."""
    n = max(int(math.ceil(t * cutoff * per_radian)) + 1, 1001)
    return np.linspace(0.0, t, n + (n + 1) % 2)


def _paranoid_freq(params, t, cutoff, order, kernel):
    w = params.omega_bar
    edges = uniform_edges(0.0, cutoff, math.pi / t, anchors=(w,))
    s = _time_grid(t, cutoff)

    def f(om):
        flat = om.ravel()
        out = np.empty_like(flat)
        for start in range(0, flat.size, 128):
            block = flat[start : start + 128]
            out[start : start + 128] = kernel(block, s)
        return out.reshape(om.shape)

    val, err, _ = gauss_legendre(f, edges, order=order, rtol=1e-6)
    return float(val), len(s)


def shot_noise_paranoid(params: SystemParams, t: float, cutoff: float, order: int = 16) -> float:
    """Shot-noise variance with both time integrals done numerically."""
    w, D, nbar = params.omega_bar, params.separation, params.mean_density

    def kernel(om, s):
        phase = np.exp(-1j * np.outer(om - w, s))
        inner = simpson(phase, x=s, axis=1)
        return np.sin(om * D) ** 2 / (2 * om) * np.abs(inner) ** 2

    val, _ = _paranoid_freq(params, t, cutoff, order, kernel)
    return nbar * (8.0 / w) * math.sin(w * D) ** 2 * val / (2 * math.pi)


def rp_variance_paranoid(params: SystemParams, t: float, cutoff: float, order: int = 16) -> float:
    """Dominant radiation-pressure variance with nested numerical time integrals."""
    w, m, nbar = params.omega_bar, params.mass, params.mean_density

    def kernel(om, s):
        phase = np.exp(-1j * np.outer(om - w, s))
        # cumulative_simpson does not accept complex input
        inner = cumulative_simpson(phase.real, x=s, axis=1, initial=0.0) + 1j * cumulative_simpson(
            phase.imag, x=s, axis=1, initial=0.0
        )
        G = simpson(inner, x=s, axis=1)
        return om * np.abs(G) ** 2

    val, _ = _paranoid_freq(params, t, cutoff, order, kernel)
    return 4.0 * w * nbar / m**2 * val / (2 * math.pi)


# -- verification suite ----------------------------------------------------


def reference_params() -> SystemParams:
    """Unit mass and carrier, geometry factor 1, unit power."""
    return SystemParams(mass=1.0, omega_bar=1.0, L=math.pi / 4, z0=0.0,
                        area=TWO_PI_CUBED, alpha_sq=1.0)


def run_verification(paranoid: bool = False) -> list[OracleResult]:
    """The full oracle suite with default regulators."""
    p = reference_params()
    w = p.omega_bar
    t3 = 1e3 / w
    rows: list[OracleResult] = []
    rows.append(shot_noise_oracle(p, t3))
    t_delta = 8 * math.pi * 400 / w
    rows.append(delta_kernel_check(t_delta, w, "one"))
    rows.append(delta_kernel_check(t_delta, w, "fringe", separation=p.separation))
    rp = rp_variance_oracle(p, t3)
    rows.append(rp)
    rows.append(OracleResult(
        name="rp_variance_vs_exact",
        numeric=rp.numeric,
        asymptotic=rp.metadata["exact_asymptote"],
        deviation=rp.metadata["exact_deviation"],
        tolerance=0.05,
        metadata=rp.metadata,
    ))
    rp2 = rp_variance_value(p, 2 * t3)[0]
    ratio = rp2 / rp.numeric
    rows.append(OracleResult("rp_variance_t3_ratio", ratio, 8.0, relative_deviation(ratio, 8.0), 0.10))
    sub = rp_subdominant_oracle(p, t3)
    bound = sub.metadata["ratio_bound"]
    r = sub.metadata["ratio_to_dominant"]
    rows.append(OracleResult("rp_subdominant_ratio", r, bound, r / bound, 1.0, sub.metadata))
    rows.append(sub)
    lam = sub.metadata["cutoff"]
    diff = rp_subdominant_value(p, t3, 2 * lam)[0] - sub.numeric
    log2 = 2.0 * p.mean_density * w * t3**2 / (math.pi * p.mass**2) * math.log(2.0)
    rows.append(OracleResult("rp_subdominant_log_cutoff", diff, log2, relative_deviation(diff, log2), 0.05))
    theta = math.pi / 3
    rows.append(k_integral(0, None, theta, w))
    rows.append(k_integral(1, None, math.pi / 2, w))
    k2 = [k_integral_raw(2, e / w, math.pi / 2, w)[0] / (e / w) for e in (1e-2, 1e-3, 1e-4)]
    rows.append(OracleResult("k2_over_eps", k2[-1], 2.0, relative_deviation(k2[-1], 2.0), 1e-3,
                             {"values": k2}))
    rows.append(fdr_check(w, raise_on_fail=False).result)
    if paranoid:
        rows.extend(paranoid_rows())
    return rows


def paranoid_params() -> tuple[SystemParams, float, float]:
    p = reference_params()
    return p, 50.0 / p.omega_bar, 20.0 * p.omega_bar


def paranoid_rows(tolerance: float = 1e-4) -> list[OracleResult]:
    """Direct time quadrature against the sinc-reduced default on a small case."""
    p, t, lam = paranoid_params()
    fast_sn = shot_noise_oracle(p, t, cutoff=lam, check_cutoff=False).numeric
    slow_sn = shot_noise_paranoid(p, t, lam)
    fast_rp = rp_variance_value(p, t, lam)[0]
    slow_rp = rp_variance_paranoid(p, t, lam)
    return [
        OracleResult("paranoid_shot_noise", slow_sn, fast_sn, relative_deviation(slow_sn, fast_sn), tolerance),
        OracleResult("paranoid_rp_variance", slow_rp, fast_rp, relative_deviation(slow_rp, fast_rp), tolerance),
    ]
