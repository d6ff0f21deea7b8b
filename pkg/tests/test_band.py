from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirrornoise.band import (
    BAND_COLUMNS,
    BandSpec,
    band_average,
    band_budget_closed_form,
    band_optimum,
    numeric_band_average,
    numeric_band_budget,
    total_bar_closed,
)
from mirrornoise.errors import BandRegimeInvalid, InvalidParam, QuadratureNonConverged
from mirrornoise.optimize import golden_section
from mirrornoise.params import TWO_PI_CUBED, SystemParams


def with_power(params: SystemParams, power: float) -> SystemParams:
    return params.replace(alpha_sq=power * TWO_PI_CUBED / (params.area * params.omega_bar))


def test_closed_form_at_optimum(band_params):
    t = 1e7
    P_opt, min_bar = band_optimum(band_params, t)
    assert P_opt == pytest.approx(math.sqrt(3) / 2 * band_params.mass / (band_params.omega_bar * t * t), rel=1e-14)
    b = band_budget_closed_form(with_power(band_params, P_opt), t)
    assert b.total_bar == pytest.approx(math.sqrt(3) * t / band_params.mass, rel=1e-12)
    assert b.min_bar / (t / band_params.mass) == pytest.approx(math.sqrt(3), rel=1e-15)
    assert b.min_bar > t / band_params.mass


def test_closed_form_terms(band_params):
    t = 3e6
    b = band_budget_closed_form(band_params, t)
    P, w, m = band_params.power, band_params.omega_bar, band_params.mass
    assert b.sn_bar * P * w * t == pytest.approx(0.75, rel=1e-14)
    assert b.rp_bar == pytest.approx(P * w * t**3 / m**2, rel=1e-14)
    assert b.mf_plus_cor_bar == 0.0
    assert b.cor_linear_bar == 0.0
    assert b.total_bar == pytest.approx(b.sn_bar + b.rp_bar + b.mf_plus_cor_bar, rel=1e-15)
    assert b.total_bar == pytest.approx(total_bar_closed(P, w, m, t), rel=1e-14)
    assert tuple(["method", "t", *b.as_row()]) == BAND_COLUMNS


@given(st.floats(1e5, 1e8), st.floats(0.0, 3.0))
def test_closed_form_independent_of_separation(sep, shift):
    p = SystemParams(mass=1.0, omega_bar=0.01, L=sep, sigma0=1e-3)
    q = p.replace(L=sep * (1 + shift) + 0.7)
    assert band_budget_closed_form(p, 1e6) == band_budget_closed_form(q, 1e6)


def test_band_golden_section_matches_optimum(band_params):
    from decimal import Decimal, localcontext

    t, m, w = 1e7, band_params.mass, band_params.omega_bar
    with localcontext() as ctx:
        ctx.prec = 40
        W, T, M = Decimal(w), Decimal(t), Decimal(m)
        f = lambda P: Decimal("0.75") / (P * W * T) + P * W * T**3 / (M * M)
        scale = m / (w * t * t)
        P = float(golden_section(f, Decimal(1e-6 * scale), Decimal(1e2 * scale), Decimal("1e-12")))
    P_opt, min_bar = band_optimum(band_params, t)
    assert P == pytest.approx(P_opt, rel=1e-8)
    assert total_bar_closed(P, w, m, t) == pytest.approx(min_bar, rel=1e-8)


def test_regime_errors():
    with pytest.raises(BandRegimeInvalid):
        band_budget_closed_form(SystemParams(mass=1.0, omega_bar=0.01, L=1e6), 1.0)
    with pytest.raises(BandRegimeInvalid):
        band_budget_closed_form(SystemParams(mass=1.0, omega_bar=0.01, L=1e3, sigma0=1e-4), 1.0)
    with pytest.raises(BandRegimeInvalid):
        band_budget_closed_form(SystemParams(mass=1.0, omega_bar=0.01, L=1e6, sigma0=1e-4, alpha_sq=0.0), 1.0)


def test_band_spec_validation():
    with pytest.raises(InvalidParam):
        BandSpec(1.0, 0.1, points=2000)
    with pytest.raises(InvalidParam):
        BandSpec(1.0, 0.1, shape="lorentz")
    with pytest.raises(InvalidParam):
        BandSpec(1.0, -0.1)
    assert BandSpec(1.0, 0.4, shape="gaussian").support() == (0.0, pytest.approx(3.4))


@pytest.mark.parametrize("sigma_d", [50.0, 100.0])
def test_fringe_moments_tophat(sigma_d):
    p = SystemParams(mass=1.0, omega_bar=0.01, L=sigma_d / 1e-4, sigma0=1e-4)
    assert numeric_band_average(p, 1e7, which="sin4") == pytest.approx(0.375, abs=0.01)
    assert numeric_band_average(p, 1e7, which="sin2cos2") == pytest.approx(0.125, abs=0.005)
    assert numeric_band_average(p, 1e7, which="sin2_2x") == pytest.approx(0.5, abs=0.02)


def test_fringe_moments_gaussian(band_params):
    spec = BandSpec(band_params.omega_bar, band_params.sigma0, "gaussian")
    assert numeric_band_average(band_params, 1e7, spec, "sin4") == pytest.approx(0.375, rel=1e-6)
    assert numeric_band_average(band_params, 1e7, spec, "sin2cos2") == pytest.approx(0.125, rel=1e-6)


def test_numeric_total_close_to_closed_form(band_params):
    t = 1e7
    p = with_power(band_params, band_optimum(band_params, t)[0])
    closed = band_budget_closed_form(p, t)
    numeric = numeric_band_budget(p, t)
    assert numeric.total_bar == pytest.approx(closed.total_bar, rel=0.01)
    assert numeric.total_bar == pytest.approx(numeric_band_average(p, t, which="total"), rel=1e-9)
    assert numeric.mf_plus_cor_bar == pytest.approx(numeric_band_average(p, t, which="mf_plus_cor"), rel=1e-9)


def test_gaussian_band_cancels_correlations(band_params):
    t = 1e7
    spec = BandSpec(band_params.omega_bar, band_params.sigma0, "gaussian")
    b = numeric_band_budget(band_params, t, spec)
    assert abs(b.mf_plus_cor_bar) <= 1e-6 * b.rp_bar
    # slow factors vary across the band at order (sigma0/omega_bar)^2 = 1e-4
    assert b.sn_bar * band_params.power * band_params.omega_bar * t == pytest.approx(0.75, rel=1e-3)


def test_tophat_residual_shrinks_with_band_width():
    """The top-hat edge residual of mf + cor falls roughly as 1/(sigma0 (L - z0))."""
    res = []
    for sd in (100.0, 400.0, 1600.0):
        p = SystemParams(mass=1.0, omega_bar=0.01, L=sd / 1e-4, sigma0=1e-4)
        b = numeric_band_budget(p, 1e7)
        res.append(abs(b.mf_plus_cor_bar) / b.rp_bar)
    assert res[1] < res[0] and res[2] < res[1]
    assert res[2] < 0.01


@settings(max_examples=20)
@given(st.integers(1, 5))
def test_fringe_shift_invariance(n):
    band_params = SystemParams(mass=1.0, omega_bar=0.01, L=1e6, sigma0=1e-4)
    t = 1e7
    shifted = band_params.replace(L=band_params.L + n * math.pi / band_params.omega_bar)
    a = numeric_band_budget(band_params, t, BandSpec(0.01, 1e-4, "gaussian"))
    b = numeric_band_budget(shifted, t, BandSpec(0.01, 1e-4, "gaussian"))
    assert b.total_bar == pytest.approx(a.total_bar, rel=1e-6)


def test_unknown_term(band_params):
    with pytest.raises(InvalidParam):
        numeric_band_average(band_params, 1.0, which="nope")


def test_quadrature_refines_then_gives_up():
    spec = BandSpec(1.0, 0.5, points=3)
    avgs, n = band_average(lambda om: {"f": np.cos(om) ** 2}, spec, 0.0, ("f",), rtol=1e-10)
    exact = (0.5 * 1.0 + (np.sin(3.0) - np.sin(1.0)) / 4.0) / 1.0
    assert avgs["f"] == pytest.approx(exact, rel=1e-9)
    assert n > 3
    with pytest.raises(QuadratureNonConverged):
        band_average(lambda om: {"f": np.abs(om - 1.0) ** 0.5}, spec, 0.0, ("f",), rtol=1e-14)
