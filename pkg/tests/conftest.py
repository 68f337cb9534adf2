import numpy as np
import pytest

from eqdrift.model import WaveConfig


@pytest.fixture
def cfg():
    """Reference configuration: 100 m wave, surface label -5 m, no current."""
    return WaveConfig(wavelength=100.0, r0=-5.0, c0=0.0)


@pytest.fixture
def cfg_adverse():
    """Eastward current at half the existence bound; the band is finite."""
    base = WaveConfig(wavelength=100.0, r0=-5.0, c0=0.0)
    c0 = 0.5 * base.c * np.exp(2.0 * base.k * base.r0)
    return WaveConfig(wavelength=100.0, r0=-5.0, c0=c0)


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)
