from __future__ import annotations

import math

import pytest
from hypothesis import settings

from mirrornoise.params import TWO_PI_CUBED, SystemParams

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def unit_params() -> SystemParams:
    """m = omega_bar = P = 1 at geometry factor 1."""
    return SystemParams(mass=1.0, omega_bar=1.0, L=math.pi / 4, area=TWO_PI_CUBED, alpha_sq=1.0)


@pytest.fixture
def fig_params() -> SystemParams:
    """omega_bar/m = 1e-2, P/m^2 = 1e-4, zeta = 1."""
    return SystemParams.from_dimensionless(1e-2, 1e-4, 1.0)


@pytest.fixture
def band_params() -> SystemParams:
    """Narrow band with sigma0 (L - z0) = 100."""
    return SystemParams(mass=1.0, omega_bar=0.01, L=1e6, area=TWO_PI_CUBED, alpha_sq=1.0, sigma0=1e-4)
