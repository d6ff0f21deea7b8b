from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mirrornoise.budget import RegimeWarning, budget_terms
from mirrornoise.errors import BracketFailure, DiscriminantNonpositive, InvalidParam, ZetaZero
from mirrornoise.optimize import (
    SWEEP_COLUMNS,
    golden_section,
    numeric_minimize,
    optimal_power,
    sweep,
    worst_negative_zeta,
)
from mirrornoise.params import SystemParams

ROOT2M1 = math.sqrt(2.0) - 1.0
admissible = st.one_of(st.floats(ROOT2M1 + 1e-6, 1 - 1e-6), st.floats(-1 + 1e-6, -ROOT2M1 - 1e-6))
branch = st.one_of(st.floats(1e-3, 1.9), st.floats(-1.9, -1e-3))


@pytest.mark.parametrize(
    "zeta,min_scaled,P_scaled,rel",
    [(1.0, 4.0, 0.25, 1e-12), (ROOT2M1, 1.7768442, 0.0904522, 1e-6), (-0.588, 0.136, 0.132, 5e-3)],
)
def test_quoted_optima(zeta, min_scaled, P_scaled, rel):
    m, w, t = 2.0, 0.3, 7.0
    rep = optimal_power(zeta, m, w, t)
    assert rep.sql_ratio == pytest.approx(min_scaled, rel=rel)
    assert rep.P_opt * w * t * t / m == pytest.approx(P_scaled, rel=max(rel, 1e-12))
    assert rep.branch_sign == (1 if zeta > 0 else -1)


def test_sql_ratios():
    assert optimal_power(1.0, 1.0, 1.0, 1.0).sql_ratio == pytest.approx(4.0, rel=1e-14)
    assert optimal_power(-0.588, 1.0, 1.0, 1.0).sql_ratio < 1.0


def test_admissibility_flag():
    assert optimal_power(0.5, 1, 1, 1).admissible
    assert not optimal_power(0.2, 1, 1, 1).admissible
    assert not optimal_power(1.5, 1, 1, 1).admissible


def test_errors():
    with pytest.raises(ZetaZero):
        optimal_power(0.0, 1, 1, 1)
    with pytest.raises(DiscriminantNonpositive):
        optimal_power(math.sqrt(11 / 3), 1, 1, 1)
    with pytest.raises(DiscriminantNonpositive):
        optimal_power(-2.0, 1, 1, 1)
    with pytest.raises(InvalidParam):
        optimal_power(1.0, 1, 1, 0.0)


def test_consistency_warning():
    with pytest.warns(RegimeWarning):
        rep = optimal_power(1.0, 1.0, 1.0, 10.0)
    assert not rep.consistent


def test_zero_zeta_has_no_interior_minimum():
    with pytest.raises(BracketFailure):
        numeric_minimize(0.0, 1.0, 1.0, 1.0)


def test_golden_section_on_parabola():
    from decimal import Decimal

    x = golden_section(lambda v: (v - Decimal(3)) ** 2, Decimal(0), Decimal(10), Decimal("1e-20"))
    assert abs(float(x) - 3.0) < 1e-15


@pytest.mark.parametrize("zeta", [1.0, -0.588, 0.5, -0.9])
def test_numeric_matches_closed(zeta):
    a = optimal_power(zeta, 3.0, 0.2, 11.0)
    b = numeric_minimize(zeta, 3.0, 0.2, 11.0)
    assert b.P_opt == pytest.approx(a.P_opt, rel=1e-8)
    assert b.min_dz2 == pytest.approx(a.min_dz2, rel=1e-8)


@given(admissible, st.floats(0.1, 10.0), st.floats(1e-3, 1e-1), st.floats(1.0, 1e3))
def test_min_equals_total_at_optimum(zeta, m, w, t):
    rep = optimal_power(zeta, m, w, t)
    total = budget_terms(zeta, rep.P_opt, w, m, t).total
    assert rep.min_dz2 == pytest.approx(total, rel=1e-9)
    assert rep.P_opt > 0


@given(branch, st.floats(0.1, 10.0), st.floats(1e-3, 1e-1), st.floats(1.0, 1e3))
def test_optimum_is_local_minimum(zeta, m, w, t):
    rep = optimal_power(zeta, m, w, t)
    at = budget_terms(zeta, rep.P_opt, w, m, t).total
    for f in (1 - 1e-3, 1 + 1e-3):
        assert budget_terms(zeta, rep.P_opt * f, w, m, t).total >= at * (1 - 1e-15)


def test_positive_branch_monotone_on_admissible_range():
    z = np.linspace(ROOT2M1, 1.0, 1000)
    vals = np.array([optimal_power(v, 1, 1e-3, 1).sql_ratio for v in z])
    assert np.all(np.diff(vals) > 0)
    assert vals[0] == pytest.approx(1.7768442, rel=1e-6)
    assert vals[-1] == pytest.approx(4.0, rel=1e-12)


def test_positive_branch_turns_beyond_admissible_range():
    # d/dzeta [zeta (2 + s)] = 0 with s = sqrt(11/2 - 3/2 zeta^2) at 2 s^2 + 2 s = 11/2
    s = (-2.0 + math.sqrt(48.0)) / 4.0
    z_turn = math.sqrt((5.5 - s * s) / 1.5)
    f = lambda z: optimal_power(z, 1, 1e-3, 1).sql_ratio
    assert f(z_turn) > f(z_turn - 1e-3) and f(z_turn) > f(z_turn + 1e-3)
    assert 1.0 < z_turn < math.sqrt(11 / 3)


def test_negative_branch_interior_maximum():
    z = np.linspace(-1.0, -ROOT2M1, 1001)
    vals = np.array([optimal_power(v, 1, 1, 1).sql_ratio for v in z])
    i = int(np.argmax(vals))
    assert 0 < i < len(z) - 1
    assert z[i] == pytest.approx(-0.588, abs=2e-3)


def test_worst_negative_zeta():
    z, v = worst_negative_zeta(1.0, 1.0, 1.0)
    assert z == pytest.approx(-0.588, abs=1e-3)
    assert v == pytest.approx(0.136, abs=1e-3)
    assert v < 1.0


def test_sweep_power_time_axis(fig_params):
    table = sweep(fig_params, "sqrtP_t", 1e-2, 1e3, 50)
    assert len(table.rows) == 50
    values = [r.value for r in table.rows]
    assert all(b > a for a, b in zip(values, values[1:]))
    for r in table.rows:
        assert r.sql == pytest.approx(r.t / fig_params.mass)
        assert r.budget.total == pytest.approx(budget_terms(1.0, fig_params.power, 1e-2, 1.0, r.t).total, rel=1e-12)
    assert list(table.records()[0]) == list(SWEEP_COLUMNS)


def test_sweep_zeta_axis_threads(fig_params):
    a = sweep(fig_params, "zeta", -1.0, -0.5, 21)
    b = sweep(fig_params, "zeta", -1.0, -0.5, 21, threads=4)
    assert a == b
    i = int(np.argmax([r.budget.total / r.sql for r in a.rows]))
    assert a.rows[i].value == pytest.approx(-0.588, abs=0.03)


@pytest.mark.parametrize(
    "kwargs",
    [dict(axis="power"), dict(steps=1), dict(lo=2.0, hi=1.0), dict(lo=-1.0, spacing="log"), dict(spacing="cubic")],
)
def test_sweep_validation(fig_params, kwargs):
    args = dict(axis="sqrtP_t", lo=1.0, hi=10.0, steps=5)
    args.update(kwargs)
    with pytest.raises(InvalidParam):
        sweep(fig_params, args.pop("axis"), args.pop("lo"), args.pop("hi"), args.pop("steps"), **args)
