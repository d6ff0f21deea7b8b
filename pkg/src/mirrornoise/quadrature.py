"""Quadrature building blocks for oscillatory one-dimensional integrals."""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy.special import sici

from .errors import QuadratureNonConverged, TailNonConverged


@lru_cache(maxsize=None)
def _gl(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


def uniform_edges(lo: float, hi: float, width: float, anchors=()) -> np.ndarray:
    """Panel edges of roughly ``width`` covering ``[lo, hi]``.

    Every anchor strictly inside the interval becomes an edge, so features
    centered there are never split awkwardly by a panel.
    """
    cuts = sorted({lo, hi, *(a for a in anchors if lo < a < hi)})
    parts = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        n = max(1, int(math.ceil((b - a) / width)))
        parts.append(np.linspace(a, b, n + 1)[:-1])
    parts.append(np.array([hi]))
    return np.concatenate(parts)


def gauss_legendre(
    f,
    edges: np.ndarray,
    order: int = 16,
    rtol: float = 1e-8,
    chunk: int = 32768,
    check: bool = True,
):
    """Composite Gauss-Legendre rule over the given panel edges.

    ``f`` is evaluated on arrays of nodes of shape ``(panels, order)``.  The
    error estimate compares against a rule of half the order on the same
    panels.

    Returns
    -------
    (value, error_estimate, integral_of_magnitude)

    Raises
    ------
    QuadratureNonConverged
        If ``check`` and the error estimate exceeds ``rtol`` times the
        integral of ``|f|``.
    """
    x_hi, w_hi = _gl(order)
    x_lo, w_lo = _gl(max(order // 2, 2))
    total = 0.0
    coarse = 0.0
    mag = 0.0
    for start in range(0, len(edges) - 1, chunk):
        a = edges[start : start + chunk + 1][:-1]
        b = edges[start + 1 : start + chunk + 1]
        half = 0.5 * (b - a)[:, None]
        mid = 0.5 * (b + a)[:, None]
        vals = f(mid + half * x_hi)
        total = total + np.sum(half * w_hi * vals)
        mag += float(np.sum(half * w_hi * np.abs(vals)))
        coarse = coarse + np.sum(half * w_lo * f(mid + half * x_lo))
    err = float(abs(total - coarse))
    if check and err > rtol * max(mag, np.finfo(float).tiny):
        raise QuadratureNonConverged(
            f"panel quadrature error estimate {err:.3g} exceeds {rtol:g} x {mag:.3g}"
        )
    return total, err, mag


def sin_over_x_tail(kappa: float, c: float, a: float) -> float:
    """``integral_a^inf sin(kappa x + c) / x dx`` for ``a > 0``, ``kappa != 0``."""
    if kappa == 0:
        raise ValueError("non-oscillatory tail diverges")
    if kappa < 0:
        return -sin_over_x_tail(-kappa, -c, a)
    si, ci = sici(kappa * a)
    return math.cos(c) * (0.5 * math.pi - si) - math.sin(c) * ci


def cos_over_x2_tail(omega: float, a: float) -> float:
    """``integral_a^inf cos(omega x) / x**2 dx`` for ``a > 0``."""
    if omega == 0:
        return 1.0 / a
    w = abs(omega)
    si, _ = sici(w * a)
    return math.cos(w * a) / a - w * (0.5 * math.pi - si)


def power_exp_tail(p: int, a: float, omega: float, tol: float = 1e-13, max_terms: int = 200) -> complex:
    """Abel-regularized ``integral_a^inf R**p exp(-i omega R) dR``.

    Repeated integration by parts gives
    ``exp(-i omega a) * sum_j p(p-1)...(p-j+1) a**(p-j) / (i omega)**(j+1)``,
    which terminates for ``p >= 0`` and is asymptotic for ``p < 0``; in the
    latter case ``omega * a`` must be large enough for the terms to fall
    below ``tol`` relative to the leading term.

    Raises
    ------
    TailNonConverged
    """
    iw = 1j * omega
    term = a**p / iw
    acc = term
    lead = prev = abs(term)
    falling = 1.0
    for j in range(1, max_terms):
        falling *= p - j + 1
        if falling == 0:
            return complex(np.exp(-iw * a) * acc)
        term = falling * a ** (p - j) / iw ** (j + 1)
        if p < 0 and abs(term) > prev:
            break  # the asymptotic series started to diverge
        acc += term
        if abs(term) <= tol * lead:
            return complex(np.exp(-iw * a) * acc)
        prev = abs(term)
    raise TailNonConverged(
        f"asymptotic tail series for R**{p} did not reach tol={tol:g} at omega*a={omega * a:g}"
    )
