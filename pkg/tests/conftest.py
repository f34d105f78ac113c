"""Shared fixtures: benchmark market, models, and reference tables."""

import pytest

from cospricer.models import CGMYParams, HestonParams, KouParams, MarketSpec


@pytest.fixture(scope="session")
def market():
    return MarketSpec(spot=100.0, rate=0.1, dividend=0.0, maturity=1.0)


@pytest.fixture(scope="session")
def models():
    return {
        "heston": HestonParams(kappa=0.85, theta=0.09, sigma=0.1, rho=-0.7, v0=0.0625),
        "kou": KouParams(sigma=0.16, p=0.4, eta1=10.0, eta2=5.0, lam=5.0),
        "cgmy1": CGMYParams(C=1.0, G=5.0, M=5.0, Y=1.5),
        "cgmy2": CGMYParams(C=1.0, G=5.0, M=5.0, Y=1.98),
    }
