"""Stochastic mirror dynamics under radiation pressure.

Integrates

    m q'' = F(t) + [dF/dq(t) - c_q(t)] q - c_v(t) q' + xi(t)

from rest, with the coherent-state mean force and backreaction
coefficients, for single paths and for ensembles.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid
from scipy.linalg import eigh

from .errors import CovarianceNotPSD, InvalidParam, RelativisticVelocity, StepTooCoarse
from .params import SystemParams

STEPS_PER_PERIOD = 40
VELOCITY_LIMIT = 0.1
NOISE_MODES = ("white", "dense", "off")
MAX_DENSE_POINTS = 4096
PSD_TOL = 1e-8


@dataclass(frozen=True)
class BackreactionCoefficients:
    mean_force: np.ndarray | float
    c_q: np.ndarray | float
    c_v: np.ndarray | float
    dF_dq: np.ndarray | float

    @property
    def stiffness(self):
        """Net coefficient of ``q`` in the equation of motion."""
        return self.dF_dq - self.c_q


def carrier_phase(params: SystemParams, t):
    return params.omega_bar * (np.asarray(t, dtype=float) - params.L) - params.phase


def backreaction_coefficients(params: SystemParams, t) -> BackreactionCoefficients:
    """Mean force and first-order backreaction coefficients at time ``t``."""
    th = carrier_phase(params, t)
    P, w = params.power, params.omega_bar
    s, c = np.sin(th), np.cos(th)
    return BackreactionCoefficients(
        mean_force=2.0 * P * (1.0 - np.cos(2.0 * th)),
        c_q=4.0 * P * w * s * c,
        c_v=4.0 * P * s * s,
        dF_dq=-4.0 * P * w * np.sin(2.0 * th),
    )


def white_noise_intensity(params: SystemParams) -> float:
    """Two-sided force spectral density ``3 P omega_bar``.

    A doubly integrated white force of this strength gives
    ``var q = P omega_bar t**3 / m**2``.
    """
    return 3.0 * params.power * params.omega_bar


def dense_noise_intensity(params: SystemParams, regulator: float = 0.0) -> float:
    """Low-frequency intensity of the regulated dense kernel.

    The slow part of the kernel is the vacuum spectrum at the carrier,
    ``|omega| exp(-regulator |omega|)``, so the intensity is
    ``4 P omega_bar exp(-omega_bar * regulator)``; it tends to
    ``4 P omega_bar`` as the regulator is removed.
    """
    return 4.0 * params.power * params.omega_bar * math.exp(-params.omega_bar * regulator)


def max_step(params: SystemParams) -> float:
    return 2.0 * math.pi / params.omega_bar / STEPS_PER_PERIOD


def _check_step(params: SystemParams, dt: float) -> None:
    if not dt > 0:
        raise InvalidParam("dt", "must be positive")
    if dt > max_step(params) * (1 + 1e-12):
        raise StepTooCoarse(
            f"dt={dt:g} exceeds one {STEPS_PER_PERIOD}th of the carrier period "
            f"({max_step(params):g})"
        )


def time_grid(t_end: float, dt: float) -> np.ndarray:
    n = int(round(t_end / dt))
    if n < 1 or not math.isclose(n * dt, t_end, rel_tol=1e-9):
        raise InvalidParam("dt", "t_end must be a whole number of steps")
    return np.arange(n + 1) * dt


def _check_grid(grid: np.ndarray) -> float:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 2:
        raise InvalidParam("grid", "need at least two points")
    steps = np.diff(grid)
    dt = float(steps.mean())
    if np.max(np.abs(steps - dt)) > 1e-9 * max(dt, abs(grid[-1])):
        raise InvalidParam("grid", "must be uniform")
    return dt


def dense_covariance(params: SystemParams, times: np.ndarray, regulator: float) -> np.ndarray:
    """Force covariance from the coherent factor times the regulated vacuum kernel.

    ``K(t, t') = (|alpha|^2 omega_bar / pi^3) sin(theta) sin(theta')
    (A/pi) h(t - t')`` with ``h(tau) = (d^2 - tau^2)/(d^2 + tau^2)^2`` and
    ``d`` the regulator.
    """
    s = np.sin(carrier_phase(params, times))
    tau = times[:, None] - times[None, :]
    d2 = regulator * regulator
    h = (d2 - tau * tau) / (d2 + tau * tau) ** 2
    coherent = params.alpha_sq * params.omega_bar / math.pi**3
    return coherent * params.area / math.pi * (s[:, None] * s[None, :]) * h


def dense_factor(cov: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    """Square-root factor ``F`` with ``F F^T = cov`` after clipping round-off.

    Raises
    ------
    CovarianceNotPSD
        If an eigenvalue is more negative than ``tol`` times the largest.
    """
    lam, vec = eigh(cov)
    top = max(lam.max(), 0.0)
    if top == 0.0:
        return np.zeros_like(cov)
    if lam.min() < -tol * top:
        raise CovarianceNotPSD(
            f"most negative eigenvalue {lam.min():.3g} exceeds the repair tolerance "
            f"{tol:g} x {top:.3g}"
        )
    return vec * np.sqrt(np.clip(lam, 0.0, None))


def path_rng(seed: int, path: int) -> np.random.Generator:
    """Independent generator keyed by (seed, path index)."""
    return np.random.default_rng([int(seed), int(path)])


def synthesize_force_noise(
    params: SystemParams,
    grid: np.ndarray,
    seed: int,
    mode: str = "white",
    path: int = 0,
    regulator: float | None = None,
) -> np.ndarray:
    """Force samples, one per step of ``grid`` (at step midpoints).

    ``mode="white"`` draws independent Gaussians of variance
    ``3 P omega_bar / dt``.  ``mode="dense"`` draws from the regulated
    nonstationary kernel with point-splitting regulator ``regulator``
    (default ``2 dt``); its grid is limited to ``MAX_DENSE_POINTS`` steps.
    See ``dense_noise_intensity`` for how the regulator sets its strength.
    """
    dt = _check_grid(grid)
    _check_step(params, dt)
    return _noise_block(params, grid, seed, mode, [path], dt, regulator)[0]


def _noise_block(params, grid, seed, mode, paths, dt, regulator=None) -> np.ndarray:
    n = len(grid) - 1
    if mode == "off" or params.power == 0:
        return np.zeros((len(paths), n))
    z = np.stack([path_rng(seed, i).standard_normal(n) for i in paths])
    if mode == "white":
        return math.sqrt(white_noise_intensity(params) / dt) * z
    if mode == "dense":
        if n > MAX_DENSE_POINTS:
            raise InvalidParam("noise", f"dense mode supports at most {MAX_DENSE_POINTS} steps")
        mid = 0.5 * (grid[1:] + grid[:-1])
        reg = 2.0 * dt if regulator is None else regulator
        if not reg > 0:
            raise InvalidParam("regulator", "must be positive")
        factor = dense_factor(dense_covariance(params, mid, reg))
        return z @ factor.T
    raise InvalidParam("noise", f"must be one of {NOISE_MODES}")


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    q: np.ndarray
    v: np.ndarray
    seed: int
    dt: float


def _integrate_block(params, grid, dt, xi, include_backreaction, observer=None):
    """Advance a block of paths; ``xi`` has shape (paths, steps).

    Position-Verlet splitting with the damping term taken at the implicit
    midpoint, so the scheme is second order and unconditionally stable for
    the damping part.
    """
    m = params.mass
    npath, nstep = xi.shape
    q = np.zeros(npath)
    v = np.zeros(npath)
    mid = grid[:-1] + 0.5 * dt
    co = backreaction_coefficients(params, mid)
    force = np.asarray(co.mean_force, dtype=float)
    if include_backreaction:
        stiff = np.asarray(co.stiffness, dtype=float)
        damp = np.asarray(co.c_v, dtype=float) * (0.5 * dt / m)
    else:
        stiff = np.zeros(nstep)
        damp = np.zeros(nstep)
    if observer is not None:
        observer(0, q, v)
    for n in range(nstep):
        qh = q + 0.5 * dt * v
        acc = (force[n] + stiff[n] * qh + xi[:, n]) * (dt / m)
        v = (v * (1.0 - damp[n]) + acc) / (1.0 + damp[n])
        q = qh + 0.5 * dt * v
        vmax = np.max(np.abs(v))
        if vmax >= VELOCITY_LIMIT:
            raise RelativisticVelocity(
                f"|v|={vmax:.3g} reached the slow-motion limit {VELOCITY_LIMIT} at t={grid[n + 1]:g}"
            )
        if observer is not None:
            observer(n + 1, q, v)
    return q, v


def integrate_trajectory(
    params: SystemParams,
    t_end: float,
    dt: float,
    seed: int = 0,
    include_backreaction: bool = True,
    noise: str = "white",
    regulator: float | None = None,
) -> Trajectory:
    """Single sample path from rest at the mirror position.

    Path index 0 of an ensemble with the same seed is this trajectory.
    """
    _check_step(params, dt)
    grid = time_grid(t_end, dt)
    xi = _noise_block(params, grid, seed, noise, [0], dt, regulator)
    qs = np.empty(len(grid))
    vs = np.empty(len(grid))

    def record(i, q, v):
        qs[i] = q[0]
        vs[i] = v[0]

    _integrate_block(params, grid, dt, xi, include_backreaction, record)
    return Trajectory(t=grid, q=qs, v=vs, seed=seed, dt=dt)


# -- ensembles ----------------------------------------------------------------


@dataclass(frozen=True)
class EnsembleStats:
    n_paths: int
    t: np.ndarray
    mean_q: np.ndarray
    var_q: np.ndarray
    se_mean: np.ndarray
    se_var: np.ndarray


def merge_moments(a, b):
    """Pairwise merge of ``(count, mean, M2)`` triples."""
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    d = mb - ma
    return n, ma + d * (nb / n), sa + sb + d * d * (na * nb / n)


def _chunk_moments(params, grid, dt, seed, paths, include_backreaction, noise, regulator):
    xi = _noise_block(params, grid, seed, noise, paths, dt, regulator)
    mean = np.empty(len(grid))
    m2 = np.empty(len(grid))

    def record(i, q, v):
        mu = q.mean()
        mean[i] = mu
        dq = q - mu
        m2[i] = dq @ dq

    _integrate_block(params, grid, dt, xi, include_backreaction, record)
    return len(paths), mean, m2


def run_ensemble(
    params: SystemParams,
    t_end: float,
    dt: float,
    n_paths: int,
    seed: int = 0,
    include_backreaction: bool = True,
    noise: str = "white",
    threads: int = 1,
    chunk: int = 1000,
    regulator: float | None = None,
) -> EnsembleStats:
    """Mean and variance of ``q`` over independent paths.

    Paths are processed in fixed chunks and the per-chunk moments are merged
    in chunk order, so the result does not depend on ``threads``.
    """
    if n_paths < 2:
        raise InvalidParam("paths", "need at least two paths")
    _check_step(params, dt)
    grid = time_grid(t_end, dt)
    blocks = [list(range(i, min(i + chunk, n_paths))) for i in range(0, n_paths, chunk)]

    def job(paths):
        return _chunk_moments(
            params, grid, dt, seed, paths, include_backreaction, noise, regulator
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, blocks))
    else:
        parts = [job(b) for b in blocks]
    acc = parts[0]
    for part in parts[1:]:
        acc = merge_moments(acc, part)
    n, mean, m2 = acc
    var = m2 / (n - 1)
    return EnsembleStats(
        n_paths=n,
        t=grid,
        mean_q=mean,
        var_q=var,
        se_mean=np.sqrt(var / n),
        se_var=var * math.sqrt(2.0 / (n - 1)),
    )


def period_average(t: np.ndarray, y: np.ndarray, t_end: float, period: float) -> float:
    """Average of ``y`` over the last full ``period`` ending at ``t_end``."""
    sel = (t >= t_end - period * (1 + 1e-12)) & (t <= t_end * (1 + 1e-12))
    return float(trapezoid(y[sel], t[sel]) / (t[sel][-1] - t[sel][0]))


def backreaction_ratio(params: SystemParams, t: float, samples: int = 512) -> float:
    """Size of the backreaction terms relative to the mean force.

    The coefficients are averaged over one carrier period; the displacement
    and velocity are those of the mean trajectory ``q = P t**2/m`` at ``t``.
    """
    period = 2.0 * math.pi / params.omega_bar
    tau = t + period * (np.arange(samples) / samples - 0.5)
    co = backreaction_coefficients(params, tau)
    q = params.power * t * t / params.mass
    v = 2.0 * params.power * t / params.mass
    mean_force = float(np.mean(co.mean_force))
    if mean_force == 0:
        return 0.0
    back = q * np.mean(np.abs(co.stiffness)) + v * np.mean(np.abs(co.c_v))
    return float(back / mean_force)
